//! Numerical models of abelian scrolls built from theta-function embeddings.
//!
//! An elliptic curve `E = C / (Z + tau Z)` is embedded in `P^(m-1)` by the
//! level-`m` theta functions `theta[j/m, 0](m z, m tau)`, `j = 0..m`. An
//! abelian surface `C^2 / (Omega Z^2 + D Z^2)` with `D = diag(1, d)` is
//! embedded in `P^(d-1)` by `theta[(0, j/d), 0](z, Omega)`, `j = 0..d`.
//!
//! On top of the embedding, [`probe`] checks the rank conditions that make the
//! scroll over a torsion subgroup smooth: independence of each fibre, of
//! pairs of fibres, and of a fibre together with its tangent directions.
//! These are sampled numerical evidence, never certificates.

pub mod probe;
pub mod rank;
mod series;
pub mod torsion;

use num_complex::Complex64;
use thiserror::Error;

pub use probe::{
    fibre_independence_probe, scroll_smoothness_probe, scroll_smoothness_probe_with,
    very_ampleness_cluster_probe, ClusterProbe, ProbeSummary, VerdictCounts,
};
pub use rank::{span_rank, RankResult, RankThresholds, RankVerdict};
pub use torsion::{cyclic_subgroup, torsion_point, TorsionPoint};

/// Relative size of the discarded tail of every evaluated series is below
/// `exp(-TAIL_EXPONENT)`.
pub const TAIL_EXPONENT: f64 = 40.0;

/// Refuse lattice sums with more than this many terms per section and axis.
const MAX_RADIUS: u32 = 10_000;

/// Largest real exponent allowed in a single series term before the
/// evaluation point counts as too far from the fundamental domain.
const MAX_EXPONENT: f64 = 600.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ThetaError {
    #[error("invalid period: {0}")]
    InvalidPeriod(String),
    #[error("need at least 3 sections, got {0}")]
    TooFewSections(u32),
    #[error("imaginary part of the period is too small for a convergent truncation (radius {0})")]
    NonConvergent(f64),
    #[error("evaluation point is too far from the fundamental domain (exponent {0:.1})")]
    OutOfRange(f64),
    #[error("all sections vanish at the evaluation point")]
    ZeroEvaluation,
    #[error("point has genus {point}, embedding has genus {embedding}")]
    GenusMismatch { point: u8, embedding: u8 },
    #[error("torsion order must be positive")]
    ZeroOrder,
    #[error("vector list is empty")]
    EmptyVectors,
    #[error("vectors have different lengths")]
    RaggedVectors,
    #[error("vector {0} is zero")]
    ZeroVector(usize),
    #[error("cluster of length {len} cannot be probed with {sections} sections")]
    ClusterLength { len: usize, sections: u32 },
    #[error("the given torsion points are not closed under addition")]
    NotAGroup,
}

/// Period data of the torus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Period {
    /// `tau` with positive imaginary part.
    Elliptic(Complex64),
    /// Symmetric `Omega` with positive-definite imaginary part, row-major.
    Surface([[Complex64; 2]; 2]),
}

/// A representative in `C^g` of a point on the torus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TorusPoint {
    Elliptic(Complex64),
    Surface([Complex64; 2]),
}

impl TorusPoint {
    pub fn genus(&self) -> u8 {
        match self {
            TorusPoint::Elliptic(_) => 1,
            TorusPoint::Surface(_) => 2,
        }
    }

    pub fn add(&self, other: &TorusPoint) -> TorusPoint {
        match (self, other) {
            (TorusPoint::Elliptic(a), TorusPoint::Elliptic(b)) => TorusPoint::Elliptic(a + b),
            (TorusPoint::Surface(a), TorusPoint::Surface(b)) => {
                TorusPoint::Surface([a[0] + b[0], a[1] + b[1]])
            }
            _ => panic!("cannot add torus points of different genus"),
        }
    }
}

/// A normally embedded elliptic curve or `(1, d)`-polarized abelian surface.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaEmbedding {
    period: Period,
    degree: u32,
    truncation_radius: u32,
    /// Half-width of the summation window around the dominant term, in the
    /// metric of the imaginary part of the period.
    window: f64,
}

impl ThetaEmbedding {
    /// Elliptic normal curve of degree `m` in `P^(m-1)`.
    pub fn elliptic(tau: Complex64, m: u32) -> Result<Self, ThetaError> {
        if !tau.re.is_finite() || !tau.im.is_finite() || tau.im <= 0.0 {
            return Err(ThetaError::InvalidPeriod(format!(
                "Im(tau) must be positive, got {tau}"
            )));
        }
        if m < 3 {
            return Err(ThetaError::TooFewSections(m));
        }
        let t = f64::from(m) * tau.im;
        // Keep every term within exp(-TAIL_EXPONENT) of the largest retained
        // one; the latter is at most half a lattice step from the peak.
        let window = (TAIL_EXPONENT / (std::f64::consts::PI * t) + 0.25).sqrt();
        let radius = window.ceil();
        if radius > f64::from(MAX_RADIUS) {
            return Err(ThetaError::NonConvergent(radius));
        }
        Ok(ThetaEmbedding {
            period: Period::Elliptic(tau),
            degree: m,
            truncation_radius: radius as u32,
            window,
        })
    }

    /// Abelian surface with period matrix `omega` and polarization of type
    /// `(1, d)`, embedded by its `d` sections.
    pub fn surface(omega: [[Complex64; 2]; 2], d: u32) -> Result<Self, ThetaError> {
        let scale = omega.iter().flatten().map(|z| z.norm()).fold(1.0, f64::max);
        if (omega[0][1] - omega[1][0]).norm() > 1e-12 * scale {
            return Err(ThetaError::InvalidPeriod(
                "period matrix is not symmetric".into(),
            ));
        }
        if omega
            .iter()
            .flatten()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(ThetaError::InvalidPeriod(
                "period matrix is not finite".into(),
            ));
        }
        let (lo, hi) = sym_eigen_bounds(&imag_part(&omega));
        if lo.is_nan() || lo <= 0.0 {
            return Err(ThetaError::InvalidPeriod(
                "imaginary part of the period matrix is not positive definite".into(),
            ));
        }
        if d < 3 {
            return Err(ThetaError::TooFewSections(d));
        }
        // The nearest lattice point is within sqrt(2)/2 of the peak in the
        // Euclidean metric, i.e. at most hi/2 in the quadratic form.
        let bound = TAIL_EXPONENT / std::f64::consts::PI + hi / 2.0;
        let window = bound.sqrt();
        let radius = (bound / lo).sqrt().ceil();
        if radius > f64::from(MAX_RADIUS) {
            return Err(ThetaError::NonConvergent(radius));
        }
        Ok(ThetaEmbedding {
            period: Period::Surface(omega),
            degree: d,
            truncation_radius: radius as u32,
            window,
        })
    }

    pub fn genus(&self) -> u8 {
        match self.period {
            Period::Elliptic(_) => 1,
            Period::Surface(_) => 2,
        }
    }

    pub fn period(&self) -> Period {
        self.period
    }

    /// Embedding degree `m` (genus 1) or the `d` of type `(1, d)` (genus 2).
    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Number of sections, i.e. the ambient space is `P^(section_count - 1)`.
    pub fn section_count(&self) -> u32 {
        self.degree
    }

    /// Lattice-sum cutoff: the largest number of terms taken on each side of
    /// the dominant index.
    pub fn truncation_radius(&self) -> u32 {
        self.truncation_radius
    }

    fn check_genus(&self, z: &TorusPoint) -> Result<(), ThetaError> {
        if z.genus() != self.genus() {
            return Err(ThetaError::GenusMismatch {
                point: z.genus(),
                embedding: self.genus(),
            });
        }
        Ok(())
    }

    /// Unnormalized section values at `z` together with their derivatives.
    ///
    /// For surfaces the derivative is taken along `direction` (default
    /// `(1, 0)`); for curves it is `d/dz` and `direction` is ignored.
    pub fn evaluate_raw(
        &self,
        z: &TorusPoint,
        direction: Option<[Complex64; 2]>,
    ) -> Result<ThetaValues, ThetaError> {
        self.check_genus(z)?;
        match (self.period, z) {
            (Period::Elliptic(tau), TorusPoint::Elliptic(z)) => {
                series::elliptic(tau, self.degree, self.window, *z)
            }
            (Period::Surface(omega), TorusPoint::Surface(z)) => series::surface(
                &omega,
                self.degree,
                self.window,
                self.truncation_radius,
                z,
                direction.unwrap_or([Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]),
            ),
            _ => unreachable!("genus checked above"),
        }
    }

    /// The embedded point `phi(z)` with unit-norm coordinates.
    pub fn evaluate(&self, z: &TorusPoint) -> Result<EmbeddedPoint, ThetaError> {
        self.evaluate_along(z, None)
    }

    pub fn evaluate_along(
        &self,
        z: &TorusPoint,
        direction: Option<[Complex64; 2]>,
    ) -> Result<EmbeddedPoint, ThetaError> {
        let raw = self.evaluate_raw(z, direction)?;
        EmbeddedPoint {
            base: *z,
            coords: raw.values,
            derivative: Some(raw.derivatives),
        }
        .normalized()
    }
}

/// Section values and their derivatives, before normalization.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaValues {
    pub values: Vec<Complex64>,
    pub derivatives: Vec<Complex64>,
}

/// A point of the embedded torus in homogeneous coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddedPoint {
    pub base: TorusPoint,
    pub coords: Vec<Complex64>,
    /// Derivative of the same lift as `coords`, scaled by the same factor,
    /// so `span(coords, derivative)` is the embedded tangent line.
    pub derivative: Option<Vec<Complex64>>,
}

impl EmbeddedPoint {
    /// Scales coordinates (and the derivative, by the same factor) to unit
    /// norm. Points whose norm is already 1 up to rounding are returned
    /// unchanged, so normalization is idempotent bit for bit.
    pub fn normalized(mut self) -> Result<Self, ThetaError> {
        let norm = vec_norm(&self.coords);
        if !norm.is_finite() || norm <= 0.0 {
            return Err(ThetaError::ZeroEvaluation);
        }
        let slack = 4.0 * f64::EPSILON * self.coords.len() as f64;
        if (norm - 1.0).abs() <= slack {
            return Ok(self);
        }
        let inv = 1.0 / norm;
        self.coords.iter_mut().for_each(|c| *c *= inv);
        if let Some(d) = self.derivative.as_mut() {
            d.iter_mut().for_each(|c| *c *= inv);
        }
        Ok(self)
    }

    /// Unit tangent row: the derivative with its component along the point
    /// removed. Together with `coords` it spans the embedded tangent line.
    pub fn tangent_row(&self) -> Option<Vec<Complex64>> {
        let d = self.derivative.as_ref()?;
        let proj: Complex64 = self.coords.iter().zip(d).map(|(x, y)| x.conj() * y).sum();
        let coords_sq = vec_norm(&self.coords).powi(2);
        let mut t: Vec<Complex64> = d
            .iter()
            .zip(&self.coords)
            .map(|(y, x)| y - x * (proj / coords_sq))
            .collect();
        let n = vec_norm(&t);
        if n > 0.0 {
            t.iter_mut().for_each(|c| *c /= n);
        }
        Some(t)
    }
}

pub(crate) fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Chordal (Fubini-Study sine) distance between two projective points,
/// `|a ^ b| / (|a| |b|)`.
pub fn chordal_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    let mut wedge = 0.0;
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            wedge += (a[i] * b[j] - a[j] * b[i]).norm_sqr();
        }
    }
    wedge.sqrt() / (vec_norm(a) * vec_norm(b))
}

fn imag_part(omega: &[[Complex64; 2]; 2]) -> [[f64; 2]; 2] {
    [
        [omega[0][0].im, omega[0][1].im],
        [omega[1][0].im, omega[1][1].im],
    ]
}

/// Smallest and largest eigenvalue of a symmetric 2x2 matrix.
fn sym_eigen_bounds(y: &[[f64; 2]; 2]) -> (f64, f64) {
    let tr = y[0][0] + y[1][1];
    let det = y[0][0] * y[1][1] - y[0][1] * y[1][0];
    let disc = ((tr * tr) / 4.0 - det).max(0.0).sqrt();
    (tr / 2.0 - disc, tr / 2.0 + disc)
}
