//! Enumerative invariants of an abelian scroll `Y` swept out by the spans of
//! `G`-orbits on an abelian `n`-fold `A` in `P^(l-1)`.
//!
//! All classes are computed on the product model `A x P^(k-1)`, which is a
//! `k : 1` cover of the abstract scroll `X`. The engine results are always
//! cross-checked against closed forms built from [`binomial`].

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Signed;
use thiserror::Error;

use crate::trunc_ring::{binomial, binomial_signed, factorial, RingError, RingShape, TruncPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("invalid scroll data: {0}")]
    InvalidData(String),
    #[error("ambient too small: l = {l} < n + k = {min}")]
    AmbientTooSmall { l: u32, min: u32 },
    #[error(
        "ring engine and closed form disagree for {what}: engine {engine}, closed form {closed}"
    )]
    Inconsistent {
        what: &'static str,
        engine: String,
        closed: String,
    },
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Discrete data of a candidate scroll.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScrollData {
    /// Dimension of the abelian variety, equal to the irregularity of `Y`.
    pub n: u32,
    /// Order of the subgroup `G`.
    pub k: u32,
    /// Number of sections; the ambient space is `P^(l-1)`.
    pub l: u32,
    /// Degree `c^n` of the polarization.
    pub cn: BigInt,
}

impl ScrollData {
    pub fn new(n: u32, k: u32, l: u32, cn: impl Into<BigInt>) -> Result<Self, InvariantError> {
        let data = ScrollData {
            n,
            k,
            l,
            cn: cn.into(),
        };
        data.validate()?;
        Ok(data)
    }

    /// Linearly normal data in the half-dimensional case `l = 2n + 2k - 1`.
    pub fn linearly_normal_half_dimensional(n: u32, k: u32) -> Result<Self, InvariantError> {
        let l = 2 * n + 2 * k - 1;
        Self::new(n, k, l, BigInt::from(rr_min_degree(n, l)))
    }

    pub fn validate(&self) -> Result<(), InvariantError> {
        if self.n == 0 {
            return Err(InvariantError::InvalidData("n must be at least 1".into()));
        }
        if self.k == 0 {
            return Err(InvariantError::InvalidData("k must be at least 1".into()));
        }
        if self.l < self.n + self.k {
            return Err(InvariantError::AmbientTooSmall {
                l: self.l,
                min: self.n + self.k,
            });
        }
        if !self.cn.is_positive() {
            return Err(InvariantError::InvalidData("c^n must be positive".into()));
        }
        Ok(())
    }

    /// `dim Y = n + k - 1`.
    pub fn scroll_dimension(&self) -> u32 {
        self.n + self.k - 1
    }

    pub fn linear_system(&self) -> LinearSystem {
        let min = BigInt::from(rr_min_degree(self.n, self.l));
        match self.cn.cmp(&min) {
            std::cmp::Ordering::Less => LinearSystem::Impossible,
            std::cmp::Ordering::Equal => LinearSystem::Complete,
            std::cmp::Ordering::Greater => LinearSystem::Incomplete,
        }
    }
}

/// Riemann-Roch classification of `c^n` against `n! * l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinearSystem {
    /// `c^n = n! l`: embedded by the complete linear system.
    Complete,
    /// `c^n > n! l`: a projection of a linearly normal embedding.
    Incomplete,
    /// `c^n < n! l`: no polarization of this degree has `l` sections.
    Impossible,
}

impl LinearSystem {
    pub fn as_str(&self) -> &'static str {
        match self {
            LinearSystem::Complete => "complete",
            LinearSystem::Incomplete => "incomplete",
            LinearSystem::Impossible => "impossible",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    DoublePointsForced,
    ConsistentWithSmooth,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::DoublePointsForced => "double-points-forced",
            Verdict::ConsistentWithSmooth => "consistent-with-smooth",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScrollReport {
    pub data: ScrollData,
    pub deg_y: BigRational,
    /// Coefficient of `c^n h^(k-1)` in the total Chern class of the normal bundle.
    pub top_chern_coefficient: BigInt,
    /// The top Chern class evaluated on `A x P^(k-1)`: coefficient times `c^n`.
    pub top_chern_normal: BigInt,
    pub double_point: BigRational,
    pub linear_system: LinearSystem,
    pub verdict: Verdict,
}

impl ScrollReport {
    pub fn degree_is_integral(&self) -> bool {
        self.deg_y.is_integer()
    }

    /// Whether the double point number is itself an integer; only `k^2`
    /// times it is guaranteed to be.
    pub fn double_point_is_integral(&self) -> bool {
        self.double_point.is_integer()
    }

    /// Human-readable flags for configurations that cannot be realized.
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if !self.degree_is_integral() {
            w.push(format!(
                "scroll degree {} is not an integer: configuration is not realizable",
                self.deg_y
            ));
        }
        if !self.double_point_is_integral() {
            w.push(format!(
                "double point number {} is not an integer",
                self.double_point
            ));
        }
        if self.linear_system == LinearSystem::Impossible {
            w.push(format!(
                "c^n = {} is below the Riemann-Roch minimum n! * l = {}",
                self.data.cn,
                rr_min_degree(self.data.n, self.data.l)
            ));
        }
        w
    }
}

fn rational_to_integer(what: &'static str, v: BigRational) -> Result<BigInt, InvariantError> {
    if v.is_integer() {
        Ok(v.to_integer())
    } else {
        Err(InvariantError::Inconsistent {
            what,
            engine: v.to_string(),
            closed: "an integer".into(),
        })
    }
}

fn check_scroll_indices(n: u32, k: u32) -> Result<(), InvariantError> {
    if n == 0 || k == 0 {
        return Err(InvariantError::InvalidData(format!(
            "n and k must be positive, got n = {n}, k = {k}"
        )));
    }
    Ok(())
}

/// Coefficient of `c^n h^(k-1)` in `(c + h)^(n+k-1)`, computed in the ring and
/// checked against `C(n+k-1, k-1)`.
pub fn hyperplane_power_coefficient(n: u32, k: u32) -> Result<BigUint, InvariantError> {
    check_scroll_indices(n, k)?;
    let shape = RingShape::for_scroll(n, k);
    let hyperplane = &TruncPoly::c(shape) + &TruncPoly::h(shape);
    let engine = hyperplane
        .power(u64::from(n + k - 1))
        .coefficient(n, k - 1)?;
    let engine = rational_to_integer("hyperplane power", engine)?;
    let closed = BigInt::from(binomial(u64::from(n + k - 1), i64::from(k - 1)));
    if engine != closed {
        return Err(InvariantError::Inconsistent {
            what: "hyperplane power",
            engine: engine.to_string(),
            closed: closed.to_string(),
        });
    }
    Ok(closed.magnitude().clone())
}

/// Total Chern class `(1 + c + h)^l (1 + h)^(-k)` of the normal bundle of
/// `A x P^(k-1) -> P^(l-1)`.
pub fn normal_chern_class(n: u32, k: u32, l: u32) -> Result<TruncPoly, InvariantError> {
    check_scroll_indices(n, k)?;
    let shape = RingShape::for_scroll(n, k);
    let one = TruncPoly::one(shape);
    let tangent_ambient = &(&one + &TruncPoly::c(shape)) + &TruncPoly::h(shape);
    let tangent_projective = &one + &TruncPoly::h(shape);
    Ok(tangent_ambient
        .power_signed(i64::from(l))?
        .checked_mul(&tangent_projective.power_signed(-i64::from(k))?)?)
}

/// Closed form `C(l, n) * [h^(k-1)] (1 + h)^(l-n-k)` of the top Chern
/// coefficient.
pub fn top_chern_closed_form(n: u32, k: u32, l: u32) -> BigInt {
    let e = i64::from(l) - i64::from(n) - i64::from(k);
    BigInt::from(binomial(u64::from(l), i64::from(n))) * binomial_signed(e, u64::from(k - 1))
}

/// The coefficient of `c^n h^(k-1)` in the normal Chern class.
///
/// Always checked against [`top_chern_closed_form`]; in the half-dimensional
/// case `l = 2n + 2k - 1` additionally against `C(n+k-1, n) C(2n+2k-1, n)`.
pub fn top_chern_normal(n: u32, k: u32, l: u32) -> Result<BigInt, InvariantError> {
    check_scroll_indices(n, k)?;
    if l < n + k {
        return Err(InvariantError::AmbientTooSmall { l, min: n + k });
    }
    let engine = normal_chern_class(n, k, l)?.coefficient(n, k - 1)?;
    let engine = rational_to_integer("top Chern class", engine)?;

    let closed = top_chern_closed_form(n, k, l);
    if engine != closed {
        return Err(InvariantError::Inconsistent {
            what: "top Chern class",
            engine: engine.to_string(),
            closed: closed.to_string(),
        });
    }
    if l == 2 * n + 2 * k - 1 {
        let half = half_dimensional_top_chern(n, k);
        if engine != half {
            return Err(InvariantError::Inconsistent {
                what: "half-dimensional top Chern class",
                engine: engine.to_string(),
                closed: half.to_string(),
            });
        }
    }
    Ok(engine)
}

/// `C(n+k-1, n) * C(2n+2k-1, n)`.
pub fn half_dimensional_top_chern(n: u32, k: u32) -> BigInt {
    let a = binomial(u64::from(n + k - 1), i64::from(n));
    let b = binomial(u64::from(2 * n + 2 * k - 1), i64::from(n));
    BigInt::from(a * b)
}

/// Expected degree `(1/k) C(n+k-1, k-1) c^n`; may be non-integral for
/// unrealizable data.
pub fn scroll_degree(data: &ScrollData) -> Result<BigRational, InvariantError> {
    data.validate()?;
    let h = BigInt::from(hyperplane_power_coefficient(data.n, data.k)?);
    Ok(BigRational::new(h * &data.cn, BigInt::from(data.k)))
}

/// Degree of the double point class:
/// `(1/k) c^n [ (1/k) C(n+k-1, k-1)^2 c^n - c_top ]`.
pub fn double_point_number(data: &ScrollData) -> Result<BigRational, InvariantError> {
    data.validate()?;
    let h = BigInt::from(hyperplane_power_coefficient(data.n, data.k)?);
    let top = top_chern_normal(data.n, data.k, data.l)?;
    Ok(double_point_from_parts(&h, &top, &data.cn, data.k))
}

fn double_point_from_parts(h: &BigInt, top: &BigInt, cn: &BigInt, k: u32) -> BigRational {
    let k = BigInt::from(k);
    let self_intersection = BigRational::new(h * h * cn, k.clone());
    let bracket = self_intersection - BigRational::from_integer(top.clone());
    BigRational::from_integer(cn.clone()) * bracket / BigRational::from_integer(k)
}

/// Riemann-Roch lower bound `n! * l` for `c^n`, attained exactly by complete
/// linear systems.
pub fn rr_min_degree(n: u32, l: u32) -> BigUint {
    factorial(u64::from(n)) * l
}

pub fn build_report(data: &ScrollData) -> Result<ScrollReport, InvariantError> {
    data.validate()?;
    let h = BigInt::from(hyperplane_power_coefficient(data.n, data.k)?);
    let top = top_chern_normal(data.n, data.k, data.l)?;
    let deg_y = BigRational::new(&h * &data.cn, BigInt::from(data.k));
    let double_point = double_point_from_parts(&h, &top, &data.cn, data.k);
    let verdict = if double_point.is_positive() {
        Verdict::DoublePointsForced
    } else {
        Verdict::ConsistentWithSmooth
    };
    Ok(ScrollReport {
        data: data.clone(),
        deg_y,
        top_chern_normal: &top * &data.cn,
        top_chern_coefficient: top,
        double_point,
        linear_system: data.linear_system(),
        verdict,
    })
}

/// `k^2` times the double point number; always an integer.
pub fn scaled_double_point(report: &ScrollReport) -> BigInt {
    let k2 = BigRational::from_integer(BigInt::from(report.data.k).pow(2));
    let v = &report.double_point * k2;
    debug_assert!(v.is_integer());
    v.to_integer()
}
