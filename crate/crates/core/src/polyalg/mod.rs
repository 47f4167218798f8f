//! Exact arithmetic kernel: big integers, rationals, dense polynomials and
//! truncated power series over any exact coefficient domain.
//!
//! Bivariate objects are series whose coefficients are themselves
//! polynomials (or series); there is no dedicated bivariate type.

mod poly;
mod series;

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use poly::Poly;
pub use series::Series;

/// Arbitrary-precision signed integer.
pub type Integer = BigInt;
/// Arbitrary-precision rational, always kept in lowest terms.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("series exp needs a zero constant term")]
    NonZeroConstant,
    #[error("series needs constant term one")]
    NonUnitConstant,
    #[error("composition needs an inner series with zero constant term")]
    NonZeroInnerConstant,
    #[error("division is not exact")]
    InexactDivision,
}

/// An exact commutative ring usable as a polynomial or series coefficient.
///
/// Method names avoid the `std::ops` ones so that generic code never has
/// to juggle higher-ranked reference bounds.
pub trait Coefficient: Clone + PartialEq + Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_integer(v: &Integer) -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;

    fn from_i64(v: i64) -> Self {
        Self::from_integer(&Integer::from(v))
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn add_in_place(&mut self, other: &Self) {
        *self = self.plus(other);
    }

    fn scale_int(&self, k: &Integer) -> Self {
        self.times(&Self::from_integer(k))
    }
}

/// A coefficient domain that is an algebra over the rationals, which is what
/// series exp and log need for their `1/n` factors.
pub trait RationalAlgebra: Coefficient {
    fn scale(&self, q: &Rational) -> Self;
}

impl Coefficient for Integer {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_integer(v: &Integer) -> Self {
        v.clone()
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn add_in_place(&mut self, other: &Self) {
        *self += other;
    }
}

impl Coefficient for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_integer(v: &Integer) -> Self {
        Rational::from_integer(v.clone())
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn add_in_place(&mut self, other: &Self) {
        *self += other;
    }
}

impl RationalAlgebra for Rational {
    fn scale(&self, q: &Rational) -> Self {
        self * q
    }
}

/// `n!` as an exact integer.
pub fn factorial(n: u64) -> Integer {
    (1..=n).fold(<Integer as One>::one(), |acc, k| acc * k)
}

/// Binomial coefficient `C(n, k)`; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> Integer {
    if k > n {
        return <Integer as Zero>::zero();
    }
    let k = k.min(n - k);
    let mut acc = <Integer as One>::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `base^exp` for a small base.
pub fn int_pow(base: i64, exp: u64) -> Integer {
    num_traits::pow(Integer::from(base), exp as usize)
}

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(Integer::from(num), Integer::from(den))
}

/// Converts a rational known to be integral; `None` otherwise.
pub fn to_integer(q: &Rational) -> Option<Integer> {
    q.is_integer().then(|| q.to_integer())
}

/// Formats a rational as `p/q`, or just `p` when the denominator is one.
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Decimal rendering with `digits` places after the point, rounded half away
/// from zero. Exact: no floating point involved.
pub fn format_decimal(q: &Rational, digits: usize) -> String {
    let scale = num_traits::pow(Integer::from(10), digits);
    let scaled = (q.abs() * Rational::from_integer(scale.clone())).round();
    let scaled = scaled.to_integer();
    let int_part = &scaled / &scale;
    let frac_part = &scaled % &scale;
    let sign = if q.is_negative() && !Zero::is_zero(&scaled) {
        "-"
    } else {
        ""
    };
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{:0>width$}", frac_part.to_string(), width = digits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), Integer::from(10));
        assert_eq!(binomial(5, 0), Integer::from(1));
        assert_eq!(binomial(3, 4), Integer::from(0));
        assert_eq!(binomial(40, 20), "137846528820".parse::<Integer>().unwrap());
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), Integer::from(1));
        assert_eq!(factorial(10), Integer::from(3628800));
    }

    #[test]
    fn rationals_stay_reduced() {
        let q = rational(6, -4);
        assert_eq!(q.numer(), &Integer::from(-3));
        assert_eq!(q.denom(), &Integer::from(2));
        assert_eq!(format_rational(&q), "-3/2");
        assert_eq!(format_rational(&rational(8, 4)), "2");
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(format_decimal(&rational(1, 3), 4), "0.3333");
        assert_eq!(format_decimal(&rational(2, 3), 4), "0.6667");
        assert_eq!(format_decimal(&rational(-7, 6), 2), "-1.17");
        assert_eq!(format_decimal(&rational(5, 2), 0), "3");
        assert_eq!(format_decimal(&rational(-1, 1000), 2), "0.00");
        assert_eq!(format_decimal(&rational(1, 40), 3), "0.025");
    }

    #[test]
    fn huge_powers_do_not_overflow() {
        let big = int_pow(13, 2000);
        assert_eq!(big.to_string().len(), 2228);
    }
}
