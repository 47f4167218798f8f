//! Exact factorial moments of the total displacement `d`.
//!
//! Three independent routes are provided:
//! - closed forms in terms of the `Q_r(m, n)` sums (mean and `E[C(d,2)]`),
//! - coefficient extraction from `e^{mt} (1 - t) f(w, t)^{m-n}` (any `j <= 3`),
//! - derivatives at `x = 1` of the exact polynomial `D_mn(x)`, which is the
//!   ground truth in tests.

use num_traits::{One, Signed, Zero};

use crate::graphs::{f_closed_form, CLOSED_FORM_MAX_ROW};
use crate::parking::{displacement_poly_with, ParkingError, ParkingTable};
use crate::polyalg::{binomial, factorial, format_rational, int_pow, Integer, Poly, Rational, Series};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MomentError {
    #[error("need 1 <= n < m, got m = {m}, n = {n}")]
    InvalidInstance { m: usize, n: usize },
    #[error("factorial moment order {0} needs f(w, t) rows beyond w^{CLOSED_FORM_MAX_ROW}")]
    OrderUnavailable(usize),
    #[error("Q-function generating function mismatch at t^{index}")]
    GeneratingMismatch { index: usize },
    #[error("Q-function identity {identity} fails at r = {r}, m = {m}, n = {n}")]
    IdentityMismatch {
        identity: &'static str,
        r: usize,
        m: usize,
        n: usize,
    },
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Parking(#[from] ParkingError),
}

/// `Q_r(m, n) = sum_k C(r+k, k) n(n-1)...(n-k+1) / m^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QValue {
    pub r: usize,
    pub m: usize,
    pub n: usize,
    pub value: Rational,
}

pub fn q_function(r: usize, m: usize, n: usize) -> QValue {
    assert!(m >= 1, "Q_r(m, n) needs m >= 1");
    let m_big = Integer::from(m);
    let mut value = Rational::zero();
    // term_k = n^{falling k} / m^k, built incrementally
    let mut term = Rational::one();
    for k in 0..=n {
        if k > 0 {
            term *= Rational::new(Integer::from(n - k + 1), m_big.clone());
        }
        value += &term * Rational::from_integer(binomial((r + k) as u64, k as u64));
    }
    QValue { r, m, n, value }
}

fn q(r: usize, m: usize, n: usize) -> Rational {
    q_function(r, m, n).value
}

/// Checks `sum_n Q_r(m, n) t^n / n! = e^t / (1 - t/m)^{r+1}` through `t^order`.
pub fn q_generating_check(r: usize, m: usize, order: usize) -> Result<(), MomentError> {
    let exp_t = Series::from_egf(vec![Rational::one(); order + 1], order);
    // (1 - t/m)^{-(r+1)} = sum_j C(r+j, j) t^j / m^j
    let pole = Series::new(
        (0..=order)
            .map(|j| Rational::new(binomial((r + j) as u64, j as u64), int_pow(m as i64, j as u64)))
            .collect(),
        order,
    );
    let product = exp_t.mul(&pole);
    for n in 0..=order {
        if product.egf_coeff(n) != q(r, m, n) {
            return Err(MomentError::GeneratingMismatch { index: n });
        }
    }
    Ok(())
}

/// Checks the three linear relations between neighbouring `Q` values:
///
/// - `r Q_r(m,n) = m Q_{r-2}(m,n) - (m-n-r) Q_{r-1}(m,n)` (for `r >= 2`),
/// - `r Q_r(m,n) = m Q_{r-1}(m,n+1) - m Q_{r-1}(m,n)` (for `r >= 1`),
/// - `n Q_r(m,n-1) = m Q_r(m,n) - m Q_{r-1}(m,n)` (for `r >= 1`, `n >= 1`).
///
/// Relations whose range condition fails are skipped. Returns the number of
/// relations actually checked.
pub fn q_identities_check(r: usize, m: usize, n: usize) -> Result<usize, MomentError> {
    let fail = |identity| MomentError::IdentityMismatch { identity, r, m, n };
    let r_q = |r: usize, n: usize| Rational::from_integer(r.into()) * q(r, m, n);
    let m_rat = Rational::from_integer(m.into());
    let mut checked = 0;

    if r >= 2 {
        let lin = Rational::from_integer(Integer::from(m) - Integer::from(n) - Integer::from(r));
        if r_q(r, n) != &m_rat * q(r - 2, m, n) - lin * q(r - 1, m, n) {
            return Err(fail("rQ_r = mQ_{r-2} - (m-n-r)Q_{r-1}"));
        }
        checked += 1;
    }
    if r >= 1 {
        if r_q(r, n) != &m_rat * q(r - 1, m, n + 1) - &m_rat * q(r - 1, m, n) {
            return Err(fail("rQ_r(n) = mQ_{r-1}(n+1) - mQ_{r-1}(n)"));
        }
        checked += 1;
        if n >= 1 {
            let lhs = Rational::from_integer(n.into()) * q(r, m, n - 1);
            if lhs != &m_rat * q(r, m, n) - &m_rat * q(r - 1, m, n) {
                return Err(fail("nQ_r(n-1) = mQ_r(n) - mQ_{r-1}(n)"));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

fn check_instance(m: usize, n: usize) -> Result<(), MomentError> {
    if n == 0 || n >= m {
        return Err(MomentError::InvalidInstance { m, n });
    }
    Ok(())
}

/// `E[d] = (n/2) (Q_0(m, n-1) - 1)`.
pub fn mean_displacement(m: usize, n: usize) -> Result<Rational, MomentError> {
    check_instance(m, n)?;
    Ok(Rational::new(n.into(), 2.into()) * (q(0, m, n - 1) - Rational::one()))
}

/// `E[C(d, 2)]` in closed form:
/// `n(n-1)(n-2)/(24 m^2) (15 Q_3 + (4+3m-3n) Q_2 + (5-3m+3n) Q_1)`, all at `(m, n-3)`.
pub fn second_factorial_moment(m: usize, n: usize) -> Result<Rational, MomentError> {
    check_instance(m, n)?;
    if n < 3 {
        // the prefactor vanishes; Q at negative n is never evaluated
        return Ok(Rational::zero());
    }
    let (mi, ni) = (m as i64, n as i64);
    let prefactor = Rational::new(
        Integer::from(ni * (ni - 1) * (ni - 2)),
        Integer::from(24) * Integer::from(m) * Integer::from(m),
    );
    let int = |v: i64| Rational::from_integer(v.into());
    let bracket = int(15) * q(3, m, n - 3)
        + int(4 + 3 * mi - 3 * ni) * q(2, m, n - 3)
        + int(5 - 3 * mi + 3 * ni) * q(1, m, n - 3);
    Ok(prefactor * bracket)
}

/// `f(w, t)` truncated at `w^degree`, as a series in `t` with polynomial-in-`w`
/// coefficients.
fn f_truncated(degree: usize, order: usize) -> Series<Poly<Rational>> {
    let rows: Vec<Series<Rational>> = (0..=degree)
        .map(|k| f_closed_form(k, order).expect("row within closed-form range").series)
        .collect();
    Series::new(
        (0..=order)
            .map(|i| Poly::new(rows.iter().map(|row| row.coeff(i).clone()).collect()))
            .collect(),
        order,
    )
}

/// Binary exponentiation that drops powers of `w` above `degree` after each product.
fn pow_truncated_in_w(base: &Series<Poly<Rational>>, mut e: u64, degree: usize) -> Series<Poly<Rational>> {
    let trim = |s: Series<Poly<Rational>>| s.map(|p| p.truncate(degree));
    let mut acc = Series::one(base.order());
    let mut base = base.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = trim(acc.mul(&base));
        }
        e >>= 1;
        if e > 0 {
            base = trim(base.mul(&base));
        }
    }
    acc
}

/// `E[C(d, j)]` by extracting `[w^j t^n] e^{mt} (1 - t) f(w, t)^{m-n}` and
/// normalizing by `(m-n) m^{n-1} / n!`.
pub fn factorial_moment_lagrange(j: usize, m: usize, n: usize) -> Result<Rational, MomentError> {
    check_instance(m, n)?;
    if j > CLOSED_FORM_MAX_ROW {
        return Err(MomentError::OrderUnavailable(j));
    }
    let powered = pow_truncated_in_w(&f_truncated(j, n), (m - n) as u64, j);
    let row_j = powered.map(|p| p.coeff(j));
    // e^{mt} (1 - t)
    let weight = Series::new(
        (0..=n)
            .map(|k| Rational::new(int_pow(m as i64, k as u64), factorial(k as u64)))
            .collect(),
        n,
    )
    .mul(&Series::new(vec![Rational::one(), -Rational::one()], n));
    let extracted = row_j.mul(&weight).coeff(n).clone();
    let normalization = Rational::new(
        Integer::from(m - n) * int_pow(m as i64, n as u64 - 1),
        factorial(n as u64),
    );
    Ok(extracted / normalization)
}

/// `E[C(d, j)] = D_mn^{(j)}(1) / (j! m^n)` from the exact distribution.
pub fn moments_from_poly(m: usize, n: usize, j: usize) -> Result<Rational, MomentError> {
    moments_from_poly_with(&mut ParkingTable::new(), m, n, j)
}

pub fn moments_from_poly_with(table: &mut ParkingTable, m: usize, n: usize, j: usize) -> Result<Rational, MomentError> {
    let dist = displacement_poly_with(table, m, n)?;
    Ok(Rational::new(dist.poly.binomial_moment(j as u64), dist.normalization))
}

/// Largest `n` for which [`moment_report`] also runs the extraction route.
pub const LAGRANGE_MAX_ITEMS: usize = 200;

/// Exact summary of the displacement distribution for `n` items in `m` cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentReport {
    pub m: usize,
    pub n: usize,
    /// `E[d]`
    pub mean_d: Rational,
    /// `E[C(d, 2)]`
    pub second_factorial: Rational,
    /// `E[C(d, 3)]`, present when `n <= LAGRANGE_MAX_ITEMS`
    pub third_factorial: Option<Rational>,
    /// `E[d^2] = 2 E[C(d,2)] + E[d]`
    pub mean_d_squared: Rational,
    pub variance_d: Rational,
    /// Average probes in a successful search, `1 + E[d]/n`.
    pub mean_probes: Rational,
}

impl MomentReport {
    /// `(name, value)` pairs in a fixed order.
    pub fn fields(&self) -> Vec<(&'static str, Option<&Rational>)> {
        vec![
            ("mean_d", Some(&self.mean_d)),
            ("second_factorial", Some(&self.second_factorial)),
            ("third_factorial", self.third_factorial.as_ref()),
            ("mean_d_squared", Some(&self.mean_d_squared)),
            ("variance_d", Some(&self.variance_d)),
            ("mean_probes", Some(&self.mean_probes)),
        ]
    }
}

/// Builds a [`MomentReport`] from the closed forms, cross-checking the
/// second factorial moment against the extraction route (when in range)
/// and the probe count against `(Q_0(m, n-1) + 1) / 2`.
pub fn moment_report(m: usize, n: usize) -> Result<MomentReport, MomentError> {
    let mean_d = mean_displacement(m, n)?;
    let second_factorial = second_factorial_moment(m, n)?;

    let third_factorial = if n <= LAGRANGE_MAX_ITEMS {
        let second_lagrange = factorial_moment_lagrange(2, m, n)?;
        if second_lagrange != second_factorial {
            return Err(MomentError::Inconsistent(format!(
                "E[C(d,2)] closed form {} != extraction route {}",
                format_rational(&second_factorial),
                format_rational(&second_lagrange)
            )));
        }
        Some(factorial_moment_lagrange(3, m, n)?)
    } else {
        None
    };

    let mean_probes = Rational::one() + &mean_d / Rational::from_integer(n.into());
    let known_probes = (q(0, m, n - 1) + Rational::one()) / Rational::from_integer(2.into());
    if mean_probes != known_probes {
        return Err(MomentError::Inconsistent(format!(
            "mean probes {} != (Q_0 + 1)/2 = {}",
            format_rational(&mean_probes),
            format_rational(&known_probes)
        )));
    }

    let mean_d_squared = Rational::from_integer(2.into()) * &second_factorial + &mean_d;
    let variance_d = &mean_d_squared - &mean_d * &mean_d;
    if variance_d.is_negative() {
        return Err(MomentError::Inconsistent("negative variance".into()));
    }
    Ok(MomentReport {
        m,
        n,
        mean_d,
        second_factorial,
        third_factorial,
        mean_d_squared,
        variance_d,
        mean_probes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::rational;

    #[test]
    fn q_values() {
        assert_eq!(q(3, 7, 0), rational(1, 1));
        assert_eq!(q(0, 3, 1), rational(4, 3));
        assert_eq!(q(1, 4, 2), rational(19, 8));
    }

    #[test]
    fn q_generating() {
        q_generating_check(0, 2, 8).unwrap();
        q_generating_check(2, 5, 10).unwrap();
        q_generating_check(0, 1, 4).unwrap();
    }

    #[test]
    fn q_identities() {
        // 2 Q_1(3,1) = 3 Q_1(3,2) - 3 Q_0(3,2) = 10/3
        assert_eq!(rational(2, 1) * q(1, 3, 1), rational(10, 3));
        assert_eq!(q_identities_check(1, 3, 2).unwrap(), 2);
        assert_eq!(q_identities_check(1, 4, 2).unwrap(), 2);
        assert_eq!(q_identities_check(2, 5, 3).unwrap(), 3);
        assert_eq!(q_identities_check(0, 5, 3).unwrap(), 0);
    }

    #[test]
    fn mean_values() {
        assert_eq!(mean_displacement(2, 1).unwrap(), rational(0, 1));
        assert_eq!(mean_displacement(3, 2).unwrap(), rational(1, 3));
        assert_eq!(mean_displacement(4, 3).unwrap(), moments_from_poly(4, 3, 1).unwrap());
        assert!(mean_displacement(3, 3).is_err());
        assert!(mean_displacement(3, 0).is_err());
    }

    #[test]
    fn second_moment_values() {
        for m in 3..8 {
            assert_eq!(second_factorial_moment(m, 2).unwrap(), rational(0, 1));
        }
        assert_eq!(
            second_factorial_moment(4, 3).unwrap(),
            moments_from_poly(4, 3, 2).unwrap()
        );
        assert_eq!(
            second_factorial_moment(6, 4).unwrap(),
            moments_from_poly(6, 4, 2).unwrap()
        );
    }

    #[test]
    fn extraction_route() {
        assert_eq!(factorial_moment_lagrange(0, 5, 3).unwrap(), rational(1, 1));
        assert_eq!(factorial_moment_lagrange(1, 3, 2).unwrap(), rational(1, 3));
        assert_eq!(
            factorial_moment_lagrange(2, 6, 4).unwrap(),
            second_factorial_moment(6, 4).unwrap()
        );
        assert_eq!(
            factorial_moment_lagrange(4, 6, 4),
            Err(MomentError::OrderUnavailable(4))
        );
    }

    #[test]
    fn derivative_oracle() {
        assert_eq!(moments_from_poly(3, 2, 1).unwrap(), rational(1, 3));
        assert_eq!(moments_from_poly(3, 2, 0).unwrap(), rational(1, 1));
        assert_eq!(moments_from_poly(3, 2, 5).unwrap(), rational(0, 1));
    }

    #[test]
    fn reports() {
        let r = moment_report(3, 2).unwrap();
        assert_eq!(r.mean_probes, rational(7, 6));
        assert_eq!(moment_report(2, 1).unwrap().mean_probes, rational(1, 1));
        let big = moment_report(10, 9).unwrap();
        assert_eq!(big.mean_d_squared, rational(2, 1) * &big.second_factorial + &big.mean_d);
        assert!(!big.variance_d.is_negative());
    }
}
