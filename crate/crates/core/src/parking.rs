//! Displacement polynomials for parking sequences and for confined and
//! unrestricted linear-probing hash sequences.
//!
//! `F_n(x)` counts parking sequences of `n` cars on `n + 1` spaces by total
//! displacement. It is produced by the convolution recurrence over the
//! position `k` of the empty space left before the last car arrives. The
//! exp/log identity and the `(x-1)^n` transform give two independent routes
//! to the same polynomials and are exposed for cross-checking.

use num_traits::{One, Zero};

use crate::polyalg::{binomial, int_pow, Integer, Poly, PolyError, Rational, Series};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParkingError {
    #[error("need 0 <= n < m, got m = {m}, n = {n}")]
    TableTooSmall { m: usize, n: usize },
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

impl From<PolyError> for ParkingError {
    fn from(err: PolyError) -> Self {
        ParkingError::Inconsistent(err.to_string())
    }
}

/// `F_n(x)`: coefficient of `x^d` is the number of parking sequences of `n`
/// cars with total displacement `d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParkingPolynomial {
    pub n: usize,
    pub poly: Poly<Integer>,
}

/// `F_mn(x)`: hash sequences of `n` items into `m` cells that leave cell 0 empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfinedDistribution {
    pub m: usize,
    pub n: usize,
    pub poly: Poly<Integer>,
}

/// `D_mn(x)`: all `m^n` hash sequences, by total displacement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisplacementDistribution {
    pub m: usize,
    pub n: usize,
    pub poly: Poly<Integer>,
    /// `m^n`, the number of hash sequences.
    pub normalization: Integer,
}

/// One row of the `(x-1)^n` transform: `a = A_n`, `b = B_n = (x^n - 1) A_{n-1}`,
/// `c = C_n = A_{n-1}`. For `n = 0` both `b` and `c` are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InversionTransformRow {
    pub n: usize,
    pub a: Poly<Integer>,
    pub b: Poly<Integer>,
    pub c: Poly<Integer>,
}

impl InversionTransformRow {
    /// Checks `a = (x-1)^n F_n` against an independently computed `F_n`,
    /// plus the defining relations for `b` and `c` given `A_{n-1}`.
    pub fn is_consistent(&self, parking: &Poly<Integer>, previous_a: Option<&Poly<Integer>>) -> bool {
        let x_minus_one = Poly::from_i64s(&[-1, 1]);
        if self.a != &x_minus_one.pow(self.n as u64) * parking {
            return false;
        }
        match previous_a {
            None => self.n == 0 && self.b.is_zero() && self.c.is_zero(),
            Some(prev) => {
                let xn_minus_one = &Poly::monomial(Integer::one(), self.n) - &Poly::one();
                self.c == *prev && self.b == &xn_minus_one * prev
            }
        }
    }
}

/// Memo of `F_0..F_k` for one computation. Pass it around explicitly to
/// share work between calls.
#[derive(Debug, Clone)]
pub struct ParkingTable {
    polys: Vec<Poly<Integer>>,
}

impl Default for ParkingTable {
    fn default() -> Self {
        Self::new()
    }
}

impl ParkingTable {
    pub fn new() -> Self {
        ParkingTable {
            polys: vec![Poly::one()],
        }
    }

    /// Extends the table through `F_n` and returns `F_0..=F_n`.
    pub fn up_to(&mut self, n: usize) -> &[Poly<Integer>] {
        while self.polys.len() <= n {
            let next = parking_step(&self.polys);
            self.polys.push(next);
        }
        &self.polys[..=n]
    }

    pub fn get(&mut self, n: usize) -> &Poly<Integer> {
        &self.up_to(n)[n]
    }

    /// `F(x, z) = sum F_n(x) z^n / n!` through `z^order`, stored plain.
    pub fn bivariate_series(&mut self, order: usize) -> Series<Poly<Rational>> {
        let egf = self.up_to(order).iter().map(Poly::to_rational).collect();
        Series::from_egf(egf, order)
    }
}

/// Computes `F_n` from `F_0..F_{n-1}`:
/// `F_n = sum_{k=1..n} C(n-1, k-1) (1 + x + ... + x^{k-1}) F_{k-1} F_{n-k}`.
fn parking_step(known: &[Poly<Integer>]) -> Poly<Integer> {
    let n = known.len();
    let mut acc = Poly::zero();
    // terms k and n + 1 - k share the product F_{k-1} F_{n-k}
    for k in 1..=n.div_ceil(2) {
        let mirror = n + 1 - k;
        let product = known[k - 1].mul_nonnegative(&known[n - k]);
        let mut spread = times_geometric(&product, k).scale_by(&binomial(n as u64 - 1, k as u64 - 1));
        if mirror != k {
            let other = times_geometric(&product, mirror).scale_by(&binomial(n as u64 - 1, mirror as u64 - 1));
            spread = &spread + &other;
        }
        acc = &acc + &spread;
    }
    acc
}

/// `p * (1 + x + ... + x^{k-1})` as a sliding window sum.
fn times_geometric(p: &Poly<Integer>, k: usize) -> Poly<Integer> {
    let src = p.coeffs();
    if src.is_empty() {
        return Poly::zero();
    }
    let len = src.len() + k - 1;
    let mut out = Vec::with_capacity(len);
    let mut window = Integer::zero();
    for i in 0..len {
        if i < src.len() {
            window += &src[i];
        }
        if i >= k {
            window -= &src[i - k];
        }
        out.push(window.clone());
    }
    Poly::new(out)
}

/// `F_n(x)` by the parking recurrence.
pub fn parking_poly(n: usize) -> ParkingPolynomial {
    let mut table = ParkingTable::new();
    ParkingPolynomial {
        n,
        poly: table.get(n).clone(),
    }
}

/// `sum_{k>=0} x^{k(k-1)/2} z^k / k!` through `z^order`: every labelled
/// graph on `k` vertices, weighted by `x^edges`.
pub fn all_graphs_series(order: usize) -> Series<Poly<Rational>> {
    let egf = (0..=order)
        .map(|k| Poly::monomial(Rational::one(), k * k.saturating_sub(1) / 2))
        .collect();
    Series::from_egf(egf, order)
}

/// `C_n(x) = n! [z^n] log(sum_k x^{k(k-1)/2} z^k / k!)` for `n = 0..=order`.
pub fn connected_polys_via_log(order: usize) -> Result<Vec<Poly<Integer>>, ParkingError> {
    let log = all_graphs_series(order).log()?;
    (0..=order)
        .map(|n| {
            log.egf_coeff(n)
                .to_integer()
                .ok_or_else(|| ParkingError::Inconsistent(format!("C_{n}(x) is not integral")))
        })
        .collect()
}

/// `F_n(x)` via the logarithm of the all-graphs series: `C_{n+1}(x)` divided
/// exactly by `(x-1)^n`.
pub fn parking_poly_via_log(n: usize) -> Result<ParkingPolynomial, ParkingError> {
    let connected = connected_polys_via_log(n + 1)?;
    let mut poly = connected[n + 1].clone();
    let one = Integer::one();
    for _ in 0..n {
        poly = poly
            .div_linear(&one)
            .map_err(|_| ParkingError::Inconsistent(format!("C_{}(x) not divisible by (x-1)^{n}", n + 1)))?;
    }
    Ok(ParkingPolynomial { n, poly })
}

/// Rows `0..=n_max` of the transform, with `A_n` from its own recurrence
/// `A_n = sum_{k=1..n} C(n-1, k-1) (x^k - 1) A_{k-1} A_{n-k}`.
pub fn inversion_rows(n_max: usize) -> Vec<InversionTransformRow> {
    let mut a_values: Vec<Poly<Integer>> = vec![Poly::one()];
    for n in 1..=n_max {
        let mut acc = Poly::zero();
        for k in 1..=n {
            let xk_minus_one = &Poly::monomial(Integer::one(), k) - &Poly::one();
            let term = &(&xk_minus_one * &a_values[k - 1]) * &a_values[n - k];
            acc = &acc + &term.scale_by(&binomial(n as u64 - 1, k as u64 - 1));
        }
        a_values.push(acc);
    }
    (0..=n_max)
        .map(|n| {
            let (b, c) = if n == 0 {
                (Poly::zero(), Poly::zero())
            } else {
                let prev = &a_values[n - 1];
                let xn_minus_one = &Poly::monomial(Integer::one(), n) - &Poly::one();
                (&xn_minus_one * prev, prev.clone())
            };
            InversionTransformRow {
                n,
                a: a_values[n].clone(),
                b,
                c,
            }
        })
        .collect()
}

fn check_table(m: usize, n: usize) -> Result<(), ParkingError> {
    if n >= m {
        return Err(ParkingError::TableTooSmall { m, n });
    }
    Ok(())
}

/// `F_mn(x) = n! [z^n] F(x, z)^{m-n}`.
pub fn confined_poly(m: usize, n: usize) -> Result<ConfinedDistribution, ParkingError> {
    confined_poly_with(&mut ParkingTable::new(), m, n)
}

pub fn confined_poly_with(table: &mut ParkingTable, m: usize, n: usize) -> Result<ConfinedDistribution, ParkingError> {
    check_table(m, n)?;
    let power = table.bivariate_series(n).pow((m - n) as u64);
    let poly = power
        .egf_coeff(n)
        .to_integer()
        .ok_or_else(|| ParkingError::Inconsistent(format!("F_({m},{n}) has a non-integer coefficient")))?;
    Ok(ConfinedDistribution { m, n, poly })
}

/// `D_mn(x) = m/(m-n) F_mn(x)`, with exact integer coefficients.
pub fn displacement_poly(m: usize, n: usize) -> Result<DisplacementDistribution, ParkingError> {
    displacement_poly_with(&mut ParkingTable::new(), m, n)
}

pub fn displacement_poly_with(
    table: &mut ParkingTable,
    m: usize,
    n: usize,
) -> Result<DisplacementDistribution, ParkingError> {
    let confined = confined_poly_with(table, m, n)?;
    let free = Integer::from(m - n);
    let cells = Integer::from(m);
    let coeffs = confined
        .poly
        .coeffs()
        .iter()
        .map(|c| {
            let scaled = c * &cells;
            if (&scaled % &free).is_zero() {
                Ok(scaled / &free)
            } else {
                Err(ParkingError::Inconsistent(format!(
                    "D_({m},{n}) has a non-integer coefficient"
                )))
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    let poly = Poly::new(coeffs);
    let normalization = int_pow(m as i64, n as u64);
    if poly.eval(&Integer::one()) != normalization {
        return Err(ParkingError::Inconsistent(format!("D_({m},{n})(1) != {m}^{n}")));
    }
    Ok(DisplacementDistribution {
        m,
        n,
        poly,
        normalization,
    })
}

/// `F_n(-1)`, the number of up-down permutations of `n` elements.
pub fn updown_value(n: usize) -> Integer {
    parking_poly(n).poly.eval(&Integer::from(-1))
}

/// `(n+1)^(n-1)`, the number of parking sequences; 1 for `n = 0`.
pub fn parking_count(n: usize) -> Integer {
    if n == 0 {
        Integer::one()
    } else {
        int_pow(n as i64 + 1, n as u64 - 1)
    }
}

/// `(m-n) m^(n-1)`, the number of confined hash sequences; 1 for `n = 0`.
pub fn confined_count(m: usize, n: usize) -> Integer {
    if n == 0 {
        Integer::one()
    } else {
        Integer::from(m - n) * int_pow(m as i64, n as u64 - 1)
    }
}

/// `F_mn(x)` by the multinomial composition over block sizes
/// `n_1 + ... + n_r = n`, `r = m - n`, as a binomial (EGF) convolution power.
pub fn confined_poly_multinomial(table: &mut ParkingTable, m: usize, n: usize) -> Result<Poly<Integer>, ParkingError> {
    check_table(m, n)?;
    let parking = table.up_to(n).to_vec();
    let mut acc: Vec<Poly<Integer>> = (0..=n)
        .map(|k| if k == 0 { Poly::one() } else { Poly::zero() })
        .collect();
    for _ in 0..m - n {
        acc = (0..=n)
            .map(|total| {
                (0..=total).fold(Poly::zero(), |sum, first| {
                    let term = (&parking[first] * &acc[total - first]).scale_by(&binomial(total as u64, first as u64));
                    &sum + &term
                })
            })
            .collect();
    }
    Ok(acc.swap_remove(n))
}
