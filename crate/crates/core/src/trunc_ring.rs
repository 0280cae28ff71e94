//! Exact arithmetic in the bigraded truncated ring `Q[c, h] / (c^(n+1), h^k)`.
//!
//! This is the cohomology ring of a product `A x P^(k-1)` with `c` the class of
//! the polarization on the abelian variety and `h` the hyperplane class of the
//! projective factor. Elements are stored sparsely as exact rationals keyed by
//! the exponent pair `(i, j)` of `c^i h^j`; zero coefficients are never stored,
//! so structural equality is ring equality.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("exponent ({i}, {j}) is outside the ring shape c^{c_cap} h^{h_cap}")]
    ExponentOutOfRange {
        i: u32,
        j: u32,
        c_cap: u32,
        h_cap: u32,
    },
    #[error("shape mismatch: {left} vs {right}")]
    ShapeMismatch { left: RingShape, right: RingShape },
    #[error("element has zero constant term and is not a unit")]
    NotInvertible,
}

/// Truncation data: `c^(c_cap + 1) = 0` and `h^(h_cap + 1) = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RingShape {
    pub c_cap: u32,
    pub h_cap: u32,
}

impl RingShape {
    pub fn new(c_cap: u32, h_cap: u32) -> Self {
        RingShape { c_cap, h_cap }
    }

    /// Shape modelling `A x P^(k-1)` for an abelian `n`-fold and a group of
    /// order `k >= 1`.
    pub fn for_scroll(n: u32, k: u32) -> Self {
        assert!(k >= 1, "group order must be positive");
        RingShape::new(n, k - 1)
    }

    pub fn contains(&self, i: u32, j: u32) -> bool {
        i <= self.c_cap && j <= self.h_cap
    }

    fn check(&self, i: u32, j: u32) -> Result<(), RingError> {
        if self.contains(i, j) {
            Ok(())
        } else {
            Err(RingError::ExponentOutOfRange {
                i,
                j,
                c_cap: self.c_cap,
                h_cap: self.h_cap,
            })
        }
    }

    /// Largest total degree of a nonzero monomial.
    fn nilpotency_degree(&self) -> u32 {
        self.c_cap + self.h_cap
    }

    fn index(&self, i: u32, j: u32) -> usize {
        i as usize * (self.h_cap as usize + 1) + j as usize
    }

    fn dense_len(&self) -> usize {
        (self.c_cap as usize + 1) * (self.h_cap as usize + 1)
    }
}

impl fmt::Display for RingShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(c^{}, h^{})", self.c_cap + 1, self.h_cap + 1)
    }
}

/// An element of the truncated ring in canonical sparse form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncPoly {
    shape: RingShape,
    coeffs: BTreeMap<(u32, u32), BigRational>,
}

impl TruncPoly {
    /// Builds a polynomial from `(i, j, coefficient)` terms. Duplicate
    /// exponents are summed and cancelled terms dropped.
    pub fn from_terms<I>(shape: RingShape, terms: I) -> Result<Self, RingError>
    where
        I: IntoIterator<Item = (u32, u32, BigRational)>,
    {
        let mut coeffs: BTreeMap<(u32, u32), BigRational> = BTreeMap::new();
        for (i, j, a) in terms {
            shape.check(i, j)?;
            let slot = coeffs.entry((i, j)).or_insert_with(BigRational::zero);
            *slot += a;
        }
        coeffs.retain(|_, a| !a.is_zero());
        Ok(TruncPoly { shape, coeffs })
    }

    /// Convenience constructor for integer coefficients.
    pub fn from_int_terms<I>(shape: RingShape, terms: I) -> Result<Self, RingError>
    where
        I: IntoIterator<Item = (u32, u32, i64)>,
    {
        Self::from_terms(
            shape,
            terms
                .into_iter()
                .map(|(i, j, a)| (i, j, BigRational::from_integer(BigInt::from(a)))),
        )
    }

    pub fn zero(shape: RingShape) -> Self {
        TruncPoly {
            shape,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(shape: RingShape) -> Self {
        Self::constant(shape, BigRational::one())
    }

    pub fn constant(shape: RingShape, a: BigRational) -> Self {
        let mut coeffs = BTreeMap::new();
        if !a.is_zero() {
            coeffs.insert((0, 0), a);
        }
        TruncPoly { shape, coeffs }
    }

    /// The monomial `c^i h^j`, or zero if it is truncated away.
    pub fn monomial(shape: RingShape, i: u32, j: u32) -> Self {
        let mut coeffs = BTreeMap::new();
        if shape.contains(i, j) {
            coeffs.insert((i, j), BigRational::one());
        }
        TruncPoly { shape, coeffs }
    }

    /// The polarization class `c`.
    pub fn c(shape: RingShape) -> Self {
        Self::monomial(shape, 1, 0)
    }

    /// The hyperplane class `h`.
    pub fn h(shape: RingShape) -> Self {
        Self::monomial(shape, 0, 1)
    }

    pub fn shape(&self) -> RingShape {
        self.shape
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, &BigRational)> {
        self.coeffs.iter().map(|(&(i, j), a)| (i, j, a))
    }

    pub fn constant_term(&self) -> BigRational {
        self.coeffs
            .get(&(0, 0))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn coefficient(&self, i: u32, j: u32) -> Result<BigRational, RingError> {
        self.shape.check(i, j)?;
        Ok(self
            .coeffs
            .get(&(i, j))
            .cloned()
            .unwrap_or_else(BigRational::zero))
    }

    /// Re-reads this element in another shape, discarding monomials that do
    /// not fit. Embedding into a larger shape is lossless.
    pub fn truncate_to(&self, shape: RingShape) -> Self {
        TruncPoly {
            shape,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(&(i, j), _)| shape.contains(i, j))
                .map(|(&k, a)| (k, a.clone()))
                .collect(),
        }
    }

    fn same_shape(&self, other: &Self) -> Result<(), RingError> {
        if self.shape == other.shape {
            Ok(())
        } else {
            Err(RingError::ShapeMismatch {
                left: self.shape,
                right: other.shape,
            })
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, RingError> {
        self.same_shape(other)?;
        let mut coeffs = self.coeffs.clone();
        for (k, a) in &other.coeffs {
            let slot = coeffs.entry(*k).or_insert_with(BigRational::zero);
            *slot += a;
            if slot.is_zero() {
                coeffs.remove(k);
            }
        }
        Ok(TruncPoly {
            shape: self.shape,
            coeffs,
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, RingError> {
        self.checked_add(&other.neg_ref())
    }

    fn neg_ref(&self) -> Self {
        TruncPoly {
            shape: self.shape,
            coeffs: self.coeffs.iter().map(|(k, a)| (*k, -a)).collect(),
        }
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        if s.is_zero() {
            return Self::zero(self.shape);
        }
        TruncPoly {
            shape: self.shape,
            coeffs: self.coeffs.iter().map(|(k, a)| (*k, a * s)).collect(),
        }
    }

    /// Truncated product.
    ///
    /// Coefficients are brought to a common denominator per factor so the
    /// convolution itself runs over big integers; the result is reduced once
    /// per monomial.
    pub fn checked_mul(&self, other: &Self) -> Result<Self, RingError> {
        self.same_shape(other)?;
        let shape = self.shape;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(shape));
        }
        let (da, na) = integral_form(self);
        let (db, nb) = integral_form(other);
        Ok(from_integral(shape, &(da * db), convolve(shape, &na, &nb)))
    }

    /// Multiplicative inverse of a unit.
    ///
    /// Writes `p = a0 (1 + u)` with `u` nilpotent and sums the finite
    /// geometric series `sum (-u)^t`; `u^t` vanishes once `t` exceeds
    /// `c_cap + h_cap`.
    pub fn inverse(&self) -> Result<Self, RingError> {
        let a0 = self.constant_term();
        if a0.is_zero() {
            return Err(RingError::NotInvertible);
        }
        let shape = self.shape;
        let inv_a0 = a0.recip();
        let mut minus_u = self.scale(&inv_a0);
        minus_u.coeffs.remove(&(0, 0));
        let minus_u = minus_u.neg_ref();

        let mut sum = Self::one(shape);
        let mut term = Self::one(shape);
        for _ in 0..shape.nilpotency_degree() {
            term = term.checked_mul(&minus_u)?;
            if term.is_zero() {
                break;
            }
            sum = sum.checked_add(&term)?;
        }
        Ok(sum.scale(&inv_a0))
    }

    /// `self^e` for any signed exponent; negative exponents require a unit.
    pub fn power_signed(&self, e: i64) -> Result<Self, RingError> {
        if e < 0 {
            return Ok(self.inverse()?.power(e.unsigned_abs()));
        }
        Ok(self.power(e as u64))
    }

    /// Nonnegative power.
    ///
    /// Short factors are raised by repeated multiplication, whose cost is
    /// linear in the factor's term count; dense factors use binary
    /// exponentiation.
    pub fn power(&self, e: u64) -> Self {
        let shape = self.shape;
        if e == 0 {
            return Self::one(shape);
        }
        // Everything stays over the integers with denominator d^e; the
        // result is reduced once.
        let (d, base) = integral_form(self);
        let sparse_cost = e.saturating_mul(base.len() as u64);
        let squaring_cost = (64 - e.leading_zeros() as u64) * 2 * shape.dense_len() as u64;
        let numer = if sparse_cost <= squaring_cost {
            let mut acc = base.clone();
            for _ in 1..e {
                acc = convolve(shape, &acc, &base);
                if acc.is_empty() {
                    break;
                }
            }
            acc
        } else {
            let mut result = vec![((0, 0), BigInt::one())];
            let mut base = base;
            let mut e = e;
            while e > 0 {
                if e & 1 == 1 {
                    result = convolve(shape, &result, &base);
                }
                e >>= 1;
                if e > 0 {
                    base = convolve(shape, &base, &base);
                }
            }
            result
        };
        let denom = Pow::pow(d, e);
        from_integral(shape, &denom, numer)
    }
}

type IntTerms = Vec<((u32, u32), BigInt)>;

/// Truncated product of two integer coefficient lists, sorted by exponent.
fn convolve(shape: RingShape, a: &[((u32, u32), BigInt)], b: &[((u32, u32), BigInt)]) -> IntTerms {
    let mut acc: Vec<Option<BigInt>> = vec![None; shape.dense_len()];
    for ((i1, j1), x) in a {
        for ((i2, j2), y) in b {
            let (i, j) = (i1 + i2, j1 + j2);
            if !shape.contains(i, j) {
                continue;
            }
            let prod = x * y;
            match &mut acc[shape.index(i, j)] {
                Some(s) => *s += prod,
                slot @ None => *slot = Some(prod),
            }
        }
    }
    let width = shape.h_cap as usize + 1;
    acc.into_iter()
        .enumerate()
        .filter_map(|(idx, v)| {
            v.filter(|v| !v.is_zero())
                .map(|v| (((idx / width) as u32, (idx % width) as u32), v))
        })
        .collect()
}

fn from_integral(shape: RingShape, denom: &BigInt, terms: IntTerms) -> TruncPoly {
    let coeffs = terms
        .into_iter()
        .map(|(k, n)| (k, BigRational::new(n, denom.clone())))
        .collect();
    TruncPoly { shape, coeffs }
}

fn integral_form(p: &TruncPoly) -> (BigInt, IntTerms) {
    let mut d = BigInt::one();
    for a in p.coeffs.values() {
        if !a.denom().is_one() {
            d = d.lcm(a.denom());
        }
    }
    let terms = p
        .coeffs
        .iter()
        .map(|(k, a)| {
            let n = if d.is_one() {
                a.numer().clone()
            } else {
                a.numer() * (&d / a.denom())
            };
            (*k, n)
        })
        .collect();
    (d, terms)
}

impl Add for &TruncPoly {
    type Output = TruncPoly;

    /// Panics if shapes differ; use [`TruncPoly::checked_add`] otherwise.
    fn add(self, rhs: &TruncPoly) -> TruncPoly {
        self.checked_add(rhs).expect("ring shapes must match")
    }
}

impl Sub for &TruncPoly {
    type Output = TruncPoly;

    fn sub(self, rhs: &TruncPoly) -> TruncPoly {
        self.checked_sub(rhs).expect("ring shapes must match")
    }
}

impl Mul for &TruncPoly {
    type Output = TruncPoly;

    /// Panics if shapes differ; use [`TruncPoly::checked_mul`] otherwise.
    fn mul(self, rhs: &TruncPoly) -> TruncPoly {
        self.checked_mul(rhs).expect("ring shapes must match")
    }
}

impl Neg for &TruncPoly {
    type Output = TruncPoly;

    fn neg(self) -> TruncPoly {
        self.neg_ref()
    }
}

impl fmt::Display for TruncPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(i, j), a) in &self.coeffs {
            if first {
                if a.is_negative() {
                    write!(f, "-")?;
                }
            } else if a.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let abs = a.abs();
            let monomial = match (i, j) {
                (0, 0) => String::new(),
                (i, 0) => pow_str("c", i),
                (0, j) => pow_str("h", j),
                (i, j) => format!("{}*{}", pow_str("c", i), pow_str("h", j)),
            };
            match (abs.is_one(), monomial.is_empty()) {
                (true, false) => write!(f, "{monomial}")?,
                (_, true) => write!(f, "{abs}")?,
                (false, false) => write!(f, "{abs}*{monomial}")?,
            }
        }
        Ok(())
    }
}

fn pow_str(var: &str, e: u32) -> String {
    if e == 1 {
        var.to_string()
    } else {
        format!("{var}^{e}")
    }
}

/// Exact binomial coefficient `C(a, b)`; zero when `b < 0` or `b > a`.
pub fn binomial(a: u64, b: i64) -> BigUint {
    if b < 0 || b as u64 > a {
        return BigUint::zero();
    }
    let b = (b as u64).min(a - b as u64);
    let mut acc = BigUint::one();
    for i in 0..b {
        // acc = C(a, i) here, and C(a, i) * (a - i) is divisible by i + 1.
        acc *= a - i;
        acc /= i + 1;
    }
    acc
}

/// Generalized binomial coefficient `C(e, j) = e (e-1) ... (e-j+1) / j!` for a
/// signed upper index, i.e. the coefficient of `x^j` in `(1 + x)^e`.
pub fn binomial_signed(e: i64, j: u64) -> BigInt {
    if e >= 0 {
        BigInt::from(binomial(e as u64, j as i64))
    } else {
        // (1 + x)^(-m) = sum (-1)^j C(m + j - 1, j) x^j
        let m = e.unsigned_abs();
        let v = BigInt::from(binomial(m + j - 1, j as i64));
        if j.is_multiple_of(2) {
            v
        } else {
            -v
        }
    }
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn poly(c_cap: u32, h_cap: u32, terms: &[(u32, u32, i64)]) -> TruncPoly {
        TruncPoly::from_int_terms(RingShape::new(c_cap, h_cap), terms.iter().copied()).unwrap()
    }

    #[test]
    fn construction_sums_duplicates_and_drops_zeros() {
        let p = poly(1, 1, &[(1, 0, 1), (0, 1, 1)]);
        assert_eq!(p.num_terms(), 2);
        assert_eq!(p.to_string(), "h + c");

        let z = poly(2, 0, &[(0, 0, 1), (0, 0, -1)]);
        assert!(z.is_zero());
        assert_eq!(z, TruncPoly::zero(RingShape::new(2, 0)));
    }

    #[test]
    fn construction_rejects_out_of_range_exponent() {
        let err = TruncPoly::from_int_terms(RingShape::new(1, 1), [(2, 0, 1)]).unwrap_err();
        assert_eq!(
            err,
            RingError::ExponentOutOfRange {
                i: 2,
                j: 0,
                c_cap: 1,
                h_cap: 1
            }
        );
    }

    #[test]
    fn squares_truncate() {
        let p = poly(1, 1, &[(1, 0, 1), (0, 1, 1)]);
        assert_eq!(&p * &p, poly(1, 1, &[(1, 1, 2)]));
    }

    #[test]
    fn one_is_identity() {
        let p = poly(2, 3, &[(0, 0, 3), (1, 2, -7), (2, 3, 5)]);
        assert_eq!(&TruncPoly::one(p.shape()) * &p, p);
    }

    #[test]
    fn geometric_series_times_base_is_one() {
        let a = poly(0, 2, &[(0, 0, 1), (0, 1, 1)]);
        let b = poly(0, 2, &[(0, 0, 1), (0, 1, -1), (0, 2, 1)]);
        assert_eq!(&a * &b, TruncPoly::one(a.shape()));
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let a = poly(1, 1, &[(0, 0, 1)]);
        let b = poly(1, 2, &[(0, 0, 1)]);
        assert!(matches!(
            a.checked_mul(&b),
            Err(RingError::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn negative_power_is_formal_inverse() {
        let p = poly(0, 2, &[(0, 0, 1), (0, 1, 1)]);
        assert_eq!(
            p.power_signed(-1).unwrap(),
            poly(0, 2, &[(0, 0, 1), (0, 1, -1), (0, 2, 1)])
        );
    }

    #[test]
    fn multinomial_coefficient_of_fifth_power() {
        let p = poly(1, 1, &[(0, 0, 1), (1, 0, 1), (0, 1, 1)]);
        let p5 = p.power_signed(5).unwrap();
        assert_eq!(p5.coefficient(1, 1).unwrap(), q(20));
    }

    #[test]
    fn zeroth_power_is_one() {
        let p = poly(3, 2, &[(0, 0, -2), (1, 1, 4), (3, 0, 1)]);
        assert_eq!(p.power_signed(0).unwrap(), TruncPoly::one(p.shape()));
    }

    #[test]
    fn non_unit_has_no_negative_power() {
        let p = poly(1, 1, &[(1, 0, 1)]);
        assert_eq!(p.power_signed(-2), Err(RingError::NotInvertible));
    }

    #[test]
    fn inverse_of_rational_unit() {
        let shape = RingShape::new(2, 2);
        let p = TruncPoly::from_terms(
            shape,
            [
                (0, 0, BigRational::new(3.into(), 2.into())),
                (1, 1, BigRational::new((-5).into(), 7.into())),
                (0, 1, q(2)),
            ],
        )
        .unwrap();
        assert_eq!(&p * &p.inverse().unwrap(), TruncPoly::one(shape));
    }

    #[test]
    fn coefficient_lookup() {
        let p = poly(1, 1, &[(1, 0, 1), (0, 1, 1)]);
        assert_eq!(p.coefficient(1, 0).unwrap(), q(1));
        assert_eq!(TruncPoly::zero(p.shape()).coefficient(1, 1).unwrap(), q(0));
        assert!(p.coefficient(0, 2).is_err());
    }

    #[test]
    fn hyperplane_power_for_surface_and_involution() {
        let shape = RingShape::for_scroll(2, 2);
        let ch = &TruncPoly::c(shape) + &TruncPoly::h(shape);
        assert_eq!(ch.power(3).coefficient(2, 1).unwrap(), q(3));
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(7, 2), BigUint::from(21u32));
        assert_eq!(binomial(5, 0), BigUint::from(1u32));
        assert_eq!(binomial(9, 3), BigUint::from(84u32));
        assert_eq!(binomial(4, 5), BigUint::zero());
        assert_eq!(binomial(4, -1), BigUint::zero());
    }

    #[test]
    fn binomial_does_not_overflow() {
        // C(200, 100) has 59 decimal digits.
        let v = binomial(200, 100);
        assert_eq!(v.to_string().len(), 59);
        assert_eq!(v, binomial(200, 100 - 1) * 101u32 / 100u32);
    }

    #[test]
    fn signed_binomial_matches_series() {
        // (1 + x)^-3 = 1 - 3x + 6x^2 - 10x^3 + ...
        let got: Vec<BigInt> = (0..4).map(|j| binomial_signed(-3, j)).collect();
        let want: Vec<BigInt> = [1, -3, 6, -10].iter().map(|&v| BigInt::from(v)).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn display_mixed_terms() {
        let p = TruncPoly::from_terms(
            RingShape::new(2, 2),
            [
                (0, 0, q(1)),
                (2, 1, BigRational::new((-1).into(), 3.into())),
            ],
        )
        .unwrap();
        assert_eq!(p.to_string(), "1 - 1/3*c^2*h");
    }

    #[test]
    fn dense_powers_match_repeated_products() {
        // 16 terms and e = 40 take the squaring branch.
        let shape = RingShape::new(3, 3);
        let terms: Vec<_> = (0..=3)
            .flat_map(|i| {
                (0..=3).map(move |j| {
                    (
                        i,
                        j,
                        BigRational::new((i + 2 * j + 1).into(), (j + 1).into()),
                    )
                })
            })
            .collect();
        let p = TruncPoly::from_terms(shape, terms).unwrap();
        let mut slow = TruncPoly::one(shape);
        for _ in 0..40 {
            slow = &slow * &p;
        }
        assert_eq!(p.power(40), slow);
    }
}
