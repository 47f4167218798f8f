use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigUint, Sign};

use super::{Coefficient, Integer, PolyError, Rational, RationalAlgebra};

/// Dense univariate polynomial. Trailing zero coefficients are always
/// trimmed, so the zero polynomial has an empty coefficient vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<C> {
    coeffs: Vec<C>,
}

impl<C: Coefficient> Poly<C> {
    pub fn new(mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::new(vec![c])
    }

    /// `c * x^k`
    pub fn monomial(c: C, k: usize) -> Self {
        let mut coeffs = vec![C::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// The polynomial `x - root`.
    pub fn linear_factor(root: C) -> Self {
        Self::new(vec![root.negated(), C::one()])
    }

    pub fn from_i64s(values: &[i64]) -> Self {
        Self::new(values.iter().map(|&v| C::from_i64(v)).collect())
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    /// Coefficient of `x^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> C {
        self.coeffs.get(k).cloned().unwrap_or_else(C::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&C> {
        self.coeffs.last()
    }

    /// Drops every term above `x^max_degree`.
    pub fn truncate(&self, max_degree: usize) -> Self {
        Self::new(self.coeffs.iter().take(max_degree + 1).cloned().collect())
    }

    pub fn eval(&self, x: &C) -> C {
        self.coeffs.iter().rev().fold(C::zero(), |acc, c| acc.times(x).plus(c))
    }

    pub fn scale_by(&self, c: &C) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.times(c)).collect())
    }

    pub fn map<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Re-expands `p(x)` around `x = 1`: returns `q` with `q(w) = p(1 + w)`.
    pub fn shift_x_to_1_plus_w(&self) -> Self {
        let one_plus_w = Self::from_i64s(&[1, 1]);
        self.coeffs.iter().rev().fold(Self::zero(), |acc, c| {
            &(&acc * &one_plus_w) + &Self::constant(c.clone())
        })
    }

    /// Exact division by `(x - root)`. Fails if the remainder is nonzero.
    pub fn div_linear(&self, root: &C) -> Result<Self, PolyError> {
        let Some(deg) = self.degree() else {
            return Ok(Self::zero());
        };
        // synthetic division, highest coefficient first
        let mut quotient = vec![C::zero(); deg];
        let mut carry = C::zero();
        for k in (0..=deg).rev() {
            let value = self.coeffs[k].plus(&carry.times(root));
            if k == 0 {
                if !value.is_zero() {
                    return Err(PolyError::InexactDivision);
                }
            } else {
                quotient[k - 1] = value.clone();
            }
            carry = value;
        }
        Ok(Self::new(quotient))
    }

    /// `sum_d C(d, j) * coeff(d)`, i.e. the `j`-th derivative at 1 divided by `j!`.
    pub fn binomial_moment(&self, j: u64) -> C {
        let mut acc = C::zero();
        for (d, c) in self.coeffs.iter().enumerate() {
            let b = super::binomial(d as u64, j);
            if !num_traits::Zero::is_zero(&b) {
                acc.add_in_place(&c.scale_int(&b));
            }
        }
        acc
    }
}

impl Poly<Integer> {
    pub fn to_rational(&self) -> Poly<Rational> {
        self.map(|c| Rational::from_integer(c.clone()))
    }

    /// Product of two polynomials with nonnegative coefficients by Kronecker
    /// substitution: both are packed into one big integer each, multiplied
    /// once, and unpacked. Falls back to the schoolbook product for small
    /// inputs or when a coefficient is negative.
    pub fn mul_nonnegative(&self, other: &Self) -> Self {
        const SCHOOLBOOK_BELOW: usize = 32 * 32;
        let negative = |p: &Self| p.coeffs.iter().any(|c| c.sign() == Sign::Minus);
        if self.is_zero()
            || other.is_zero()
            || self.coeffs.len() * other.coeffs.len() < SCHOOLBOOK_BELOW
            || negative(self)
            || negative(other)
        {
            return self * other;
        }
        // every product coefficient is at most p(1) q(1)
        let sum = |p: &Self| p.coeffs.iter().sum::<Integer>();
        let slot = (sum(self) * sum(other)).bits() as usize + 1;
        let packed = pack(&self.coeffs, slot) * pack(&other.coeffs, slot);
        let len = self.coeffs.len() + other.coeffs.len() - 1;
        Poly::new(unpack(&packed, slot, len))
    }
}

fn pack(coeffs: &[Integer], slot: usize) -> BigUint {
    let mut words = vec![0u32; (coeffs.len() * slot).div_ceil(32) + 1];
    for (i, c) in coeffs.iter().enumerate() {
        let base = i * slot;
        let (word, shift) = (base / 32, base % 32);
        for (k, digit) in c.magnitude().iter_u32_digits().enumerate() {
            let wide = (digit as u64) << shift;
            words[word + k] |= wide as u32;
            if shift != 0 {
                words[word + k + 1] |= (wide >> 32) as u32;
            }
        }
    }
    BigUint::new(words)
}

fn unpack(packed: &BigUint, slot: usize, len: usize) -> Vec<Integer> {
    let words = packed.to_u32_digits();
    let word_at = |i: usize| words.get(i).copied().unwrap_or(0) as u64;
    (0..len)
        .map(|i| {
            let base = i * slot;
            let (first, shift) = (base / 32, base % 32);
            let mut out: Vec<u32> = (0..slot.div_ceil(32))
                .map(|k| ((word_at(first + k) | word_at(first + k + 1) << 32) >> shift) as u32)
                .collect();
            if !slot.is_multiple_of(32) {
                if let Some(last) = out.last_mut() {
                    *last &= u32::MAX >> (32 - slot % 32);
                }
            }
            Integer::from_biguint(Sign::Plus, BigUint::new(out))
        })
        .collect()
}

impl Poly<Rational> {
    /// `Some` when every coefficient is an integer.
    pub fn to_integer(&self) -> Option<Poly<Integer>> {
        let coeffs = self.coeffs.iter().map(super::to_integer).collect::<Option<Vec<_>>>()?;
        Some(Poly::new(coeffs))
    }
}

fn add_slices<C: Coefficient>(a: &[C], b: &[C], subtract: bool) -> Vec<C> {
    let len = a.len().max(b.len());
    (0..len)
        .map(|k| {
            let x = a.get(k);
            let y = b.get(k);
            match (x, y, subtract) {
                (Some(x), Some(y), false) => x.plus(y),
                (Some(x), Some(y), true) => x.minus(y),
                (Some(x), None, _) => x.clone(),
                (None, Some(y), false) => y.clone(),
                (None, Some(y), true) => y.negated(),
                (None, None, _) => unreachable!(),
            }
        })
        .collect()
}

impl<C: Coefficient> Add for &Poly<C> {
    type Output = Poly<C>;
    fn add(self, rhs: Self) -> Poly<C> {
        Poly::new(add_slices(&self.coeffs, &rhs.coeffs, false))
    }
}

impl<C: Coefficient> Sub for &Poly<C> {
    type Output = Poly<C>;
    fn sub(self, rhs: Self) -> Poly<C> {
        Poly::new(add_slices(&self.coeffs, &rhs.coeffs, true))
    }
}

impl<C: Coefficient> Mul for &Poly<C> {
    type Output = Poly<C>;
    fn mul(self, rhs: Self) -> Poly<C> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![C::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j].add_in_place(&a.times(b));
                }
            }
        }
        Poly::new(out)
    }
}

impl<C: Coefficient> Neg for &Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        Poly::new(self.coeffs.iter().map(Coefficient::negated).collect())
    }
}

impl<C: Coefficient> Coefficient for Poly<C> {
    fn zero() -> Self {
        Poly::zero()
    }
    fn one() -> Self {
        Poly::one()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn from_integer(v: &Integer) -> Self {
        Poly::constant(C::from_integer(v))
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
    fn scale_int(&self, k: &Integer) -> Self {
        self.scale_by(&C::from_integer(k))
    }
}

impl<C: RationalAlgebra> RationalAlgebra for Poly<C> {
    fn scale(&self, q: &Rational) -> Self {
        Poly::new(self.coeffs.iter().map(|c| c.scale(q)).collect())
    }
}

impl<C: Coefficient + fmt::Display> fmt::Display for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*x")?,
                _ => write!(f, "({c})*x^{k}")?,
            }
        }
        Ok(())
    }
}

impl<C: Coefficient> fmt::Debug for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coeffs.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type P = Poly<Integer>;

    #[test]
    fn trailing_zeros_trimmed() {
        let p = P::from_i64s(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert!(P::from_i64s(&[0, 0]).is_zero());
        assert_eq!(P::zero().degree(), None);
    }

    #[test]
    fn shift_parking_polys() {
        // F_2 = 2 + x
        assert_eq!(P::from_i64s(&[2, 1]).shift_x_to_1_plus_w(), P::from_i64s(&[3, 1]));
        // F_3 = 6 + 6x + 3x^2 + x^3, constant term F_3(1) = 16
        assert_eq!(
            P::from_i64s(&[6, 6, 3, 1]).shift_x_to_1_plus_w(),
            P::from_i64s(&[16, 15, 6, 1])
        );
        assert_eq!(P::one().shift_x_to_1_plus_w(), P::one());
    }

    #[test]
    fn linear_division() {
        // (x-1)^2 (2+x) = x^3 - 3x + 2
        let a2 = P::from_i64s(&[2, -3, 0, 1]);
        let one = Integer::from(1);
        let q = a2.div_linear(&one).unwrap().div_linear(&one).unwrap();
        assert_eq!(q, P::from_i64s(&[2, 1]));
        assert_eq!(q.div_linear(&one), Err(PolyError::InexactDivision));
    }

    #[test]
    fn eval_and_pow() {
        let p = P::from_i64s(&[6, 6, 3, 1]);
        assert_eq!(p.eval(&Integer::from(1)), Integer::from(16));
        assert_eq!(p.eval(&Integer::from(-1)), Integer::from(2));
        assert_eq!(P::from_i64s(&[1, 1]).pow(3), P::from_i64s(&[1, 3, 3, 1]));
        assert_eq!(P::from_i64s(&[5, 7]).pow(0), P::one());
    }

    #[test]
    fn kronecker_matches_schoolbook() {
        let a = P::new((0..90).map(|i| Integer::from(i * i * 7919 + 3).pow(3)).collect());
        let b = P::new((0..70).map(|i| Integer::from(i + 1) << (i % 50)).collect());
        assert_eq!(a.mul_nonnegative(&b), &a * &b);
        let sparse = P::new((0..40).map(|i| Integer::from(i % 2)).collect());
        assert_eq!(sparse.mul_nonnegative(&sparse), &sparse * &sparse);
        let signed = P::from_i64s(&[1, -1]);
        assert_eq!(signed.mul_nonnegative(&a), &signed * &a);
    }

    #[test]
    fn binomial_moments() {
        // 6 + 3x: sum C(d,1) c_d = 3
        let p = P::from_i64s(&[6, 3]);
        assert_eq!(p.binomial_moment(0), Integer::from(9));
        assert_eq!(p.binomial_moment(1), Integer::from(3));
        assert_eq!(p.binomial_moment(5), Integer::from(0));
    }
}
