use std::fmt;

use super::{factorial, Coefficient, Integer, PolyError, Rational, RationalAlgebra};

/// A power series in `z` known through `z^order`.
///
/// Coefficients are stored plain: for an exponential generating function
/// `sum a_n z^n / n!` the stored value at index `n` is `a_n / n!`. Use
/// [`Series::from_egf`] and [`Series::egf_coeff`] at the boundaries.
#[derive(Clone, PartialEq)]
pub struct Series<C> {
    coeffs: Vec<C>,
}

impl<C: Coefficient> Series<C> {
    /// Pads with zeros or truncates so that exactly `order + 1` coefficients are kept.
    pub fn new(mut coeffs: Vec<C>, order: usize) -> Self {
        coeffs.resize(order + 1, C::zero());
        Series { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self::new(Vec::new(), order)
    }

    pub fn one(order: usize) -> Self {
        Self::constant(C::one(), order)
    }

    pub fn constant(c: C, order: usize) -> Self {
        Self::new(vec![c], order)
    }

    /// The series `z` (zero when `order` is 0).
    pub fn variable(order: usize) -> Self {
        Self::new(vec![C::zero(), C::one()], order)
    }

    /// Builds a series from exponential-generating-function coefficients,
    /// dividing the `n`-th one by `n!`.
    pub fn from_egf(egf: Vec<C>, order: usize) -> Self
    where
        C: RationalAlgebra,
    {
        let coeffs = egf
            .into_iter()
            .take(order + 1)
            .enumerate()
            .map(|(n, c)| c.scale(&Rational::new(1.into(), factorial(n as u64))))
            .collect();
        Self::new(coeffs, order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    /// Coefficient of `z^n`; zero past the order is *not* implied, so this
    /// panics rather than inventing a value.
    pub fn coeff(&self, n: usize) -> &C {
        assert!(
            n <= self.order(),
            "coefficient z^{n} beyond series order {}",
            self.order()
        );
        &self.coeffs[n]
    }

    /// `n! * [z^n]`, the exponential-generating-function view.
    pub fn egf_coeff(&self, n: usize) -> C {
        self.coeff(n).scale_int(&factorial(n as u64))
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new(
            self.coeffs[..=order.min(self.order())].to_vec(),
            order.min(self.order()),
        )
    }

    pub fn map<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> Series<D> {
        Series {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let coeffs = (0..=order).map(|k| self.coeffs[k].plus(&other.coeffs[k])).collect();
        Series { coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let coeffs = (0..=order).map(|k| self.coeffs[k].minus(&other.coeffs[k])).collect();
        Series { coeffs }
    }

    pub fn scale_by(&self, c: &C) -> Self {
        self.map(|a| a.times(c))
    }

    /// Cauchy product truncated at the smaller of the two orders.
    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut coeffs = vec![C::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                if !b.is_zero() {
                    coeffs[i + j].add_in_place(&a.times(b));
                }
            }
        }
        Series { coeffs }
    }

    /// `self^e` by binary exponentiation, truncating after every product.
    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::one(self.order());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Multiplies by `z`, keeping the order.
    pub fn mul_z(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        coeffs.push(C::zero());
        coeffs.extend_from_slice(&self.coeffs[..self.order()]);
        Series { coeffs }
    }

    /// Formal derivative; the order drops by one (but never below zero).
    pub fn derivative(&self) -> Self {
        let order = self.order().saturating_sub(1);
        let coeffs = (1..=self.order())
            .map(|k| self.coeffs[k].scale_int(&Integer::from(k)))
            .collect();
        Self::new(coeffs, order)
    }

    /// Multiplicative inverse of a series whose constant term is one.
    pub fn reciprocal(&self) -> Result<Self, PolyError> {
        if !self.coeffs[0].is_one() {
            return Err(PolyError::NonUnitConstant);
        }
        let order = self.order();
        let mut out: Vec<C> = Vec::with_capacity(order + 1);
        out.push(C::one());
        for n in 1..=order {
            let mut acc = C::zero();
            for k in 1..=n {
                acc.add_in_place(&self.coeffs[k].times(&out[n - k]));
            }
            out.push(acc.negated());
        }
        Ok(Series { coeffs: out })
    }

    /// `self(inner(z))` for an inner series with zero constant term.
    pub fn compose(&self, inner: &Self) -> Result<Self, PolyError> {
        if !inner.coeffs[0].is_zero() {
            return Err(PolyError::NonZeroInnerConstant);
        }
        let order = self.order().min(inner.order());
        let inner = inner.truncate(order);
        let mut acc = Self::zero(order);
        for c in self.coeffs[..=order].iter().rev() {
            acc = acc.mul(&inner);
            acc.coeffs[0].add_in_place(c);
        }
        Ok(acc)
    }
}

impl<C: RationalAlgebra> Series<C> {
    /// `exp(self)` for a series with zero constant term, by the recurrence
    /// `n e_n = sum_{k=1..n} k a_k e_{n-k}`.
    pub fn exp(&self) -> Result<Self, PolyError> {
        if !self.coeffs[0].is_zero() {
            return Err(PolyError::NonZeroConstant);
        }
        let order = self.order();
        let mut out: Vec<C> = Vec::with_capacity(order + 1);
        out.push(C::one());
        for n in 1..=order {
            let mut acc = C::zero();
            for k in 1..=n {
                let a = &self.coeffs[k];
                if a.is_zero() {
                    continue;
                }
                acc.add_in_place(&a.times(&out[n - k]).scale_int(&Integer::from(k)));
            }
            out.push(acc.scale(&Rational::new(1.into(), Integer::from(n))));
        }
        Ok(Series { coeffs: out })
    }

    /// `log(self)` for a series with constant term one; the inverse of [`Series::exp`].
    ///
    /// From `a' = a b'`: `b_n = a_n - (1/n) sum_{k=1..n-1} k b_k a_{n-k}`.
    pub fn log(&self) -> Result<Self, PolyError> {
        if !self.coeffs[0].is_one() {
            return Err(PolyError::NonUnitConstant);
        }
        let order = self.order();
        let mut out: Vec<C> = Vec::with_capacity(order + 1);
        out.push(C::zero());
        for n in 1..=order {
            let mut acc = C::zero();
            for (k, prev) in out.iter().enumerate().skip(1) {
                let a = &self.coeffs[n - k];
                if a.is_zero() || prev.is_zero() {
                    continue;
                }
                acc.add_in_place(&prev.times(a).scale_int(&Integer::from(k)));
            }
            let correction = acc.scale(&Rational::new(1.into(), Integer::from(n)));
            out.push(self.coeffs[n].minus(&correction));
        }
        Ok(Series { coeffs: out })
    }
}

impl<C: Coefficient> fmt::Debug for Series<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series(order {}) ", self.order())?;
        f.debug_list().entries(self.coeffs.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::{rational, Poly};

    type S = Series<Rational>;

    fn s(values: &[(i64, i64)], order: usize) -> S {
        S::new(values.iter().map(|&(p, q)| rational(p, q)).collect(), order)
    }

    fn exp_z(order: usize) -> S {
        S::from_egf(vec![rational(1, 1); order + 1], order)
    }

    #[test]
    fn difference_of_squares() {
        let a = s(&[(1, 1), (1, 1)], 2);
        let b = s(&[(1, 1), (-1, 1)], 2);
        assert_eq!(a.mul(&b), s(&[(1, 1), (0, 1), (-1, 1)], 2));
    }

    #[test]
    fn exp_z_squared() {
        let e = exp_z(3);
        assert_eq!(e.mul(&e), s(&[(1, 1), (2, 1), (2, 1), (4, 3)], 3));
    }

    #[test]
    fn mixed_orders_truncate_to_min() {
        let a = exp_z(5);
        let b = exp_z(2);
        assert_eq!(a.mul(&b).order(), 2);
        assert_eq!(a.add(&b).order(), 2);
    }

    #[test]
    fn exp_basics() {
        assert_eq!(S::zero(4).exp().unwrap(), S::one(4));
        assert_eq!(S::variable(4).exp().unwrap(), exp_z(4));
        assert_eq!(S::one(3).exp(), Err(PolyError::NonZeroConstant));
    }

    #[test]
    fn log_basics() {
        assert_eq!(S::one(4).log().unwrap(), S::zero(4));
        let a = s(&[(0, 1), (1, 1), (1, 1)], 5);
        assert_eq!(a.exp().unwrap().log().unwrap(), a);
        assert_eq!(s(&[(2, 1), (1, 1)], 3).log(), Err(PolyError::NonUnitConstant));
    }

    #[test]
    fn pow_basics() {
        let a = s(&[(1, 1), (1, 1)], 3);
        assert_eq!(a.pow(0), S::one(3));
        assert_eq!(a.pow(3), s(&[(1, 1), (3, 1), (3, 1), (1, 1)], 3));
    }

    #[test]
    fn reciprocal_of_one_minus_z() {
        let a = s(&[(1, 1), (-1, 1)], 6);
        assert_eq!(a.reciprocal().unwrap(), S::new(vec![rational(1, 1); 7], 6));
    }

    #[test]
    fn compose_exp_with_log1p() {
        // exp(log(1 + z)) = 1 + z via composition of e^u - 1 with log(1+z)
        let order = 8;
        let log1p = S::new(
            (0..=order as i64)
                .map(|k| {
                    if k == 0 {
                        rational(0, 1)
                    } else {
                        rational(if k % 2 == 1 { 1 } else { -1 }, k)
                    }
                })
                .collect(),
            order,
        );
        let expm1 = exp_z(order).sub(&S::one(order));
        assert_eq!(expm1.compose(&log1p).unwrap(), S::variable(order));
    }

    #[test]
    fn derivative_and_mul_z() {
        let e = exp_z(5);
        assert_eq!(e.derivative(), exp_z(4));
        assert_eq!(S::one(3).mul_z(), S::variable(3));
    }

    #[test]
    fn polynomial_coefficients() {
        // (1 + x z)^2 = 1 + 2x z + x^2 z^2
        let x = Poly::<Rational>::from_i64s(&[0, 1]);
        let a = Series::new(vec![Poly::one(), x.clone()], 2);
        let sq = a.pow(2);
        assert_eq!(sq.coeff(1), &x.scale_by(&rational(2, 1)));
        assert_eq!(sq.coeff(2), &(&x * &x));
        assert_eq!(sq.egf_coeff(2), (&x * &x).scale_by(&rational(2, 1)));
    }
}
