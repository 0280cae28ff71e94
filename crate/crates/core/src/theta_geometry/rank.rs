//! Numerical rank of a set of coordinate vectors from singular values.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::ThetaError;

/// Relative singular-value thresholds.
///
/// A ratio `sigma_i / sigma_1` counts toward the rank when it is at least
/// `tol`. The decisive ratio of a probe falling in `[gray_lo, gray_hi]`
/// makes the probe inconclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankThresholds {
    pub tol: f64,
    pub gray_lo: f64,
    pub gray_hi: f64,
}

impl Default for RankThresholds {
    fn default() -> Self {
        RankThresholds {
            tol: 1e-8,
            gray_lo: 1e-10,
            gray_hi: 1e-6,
        }
    }
}

impl RankThresholds {
    pub fn with_tol(tol: f64) -> Self {
        RankThresholds {
            tol,
            ..Self::default()
        }
    }

    fn in_gray_zone(&self, ratio: f64) -> bool {
        (self.gray_lo..=self.gray_hi).contains(&ratio)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RankVerdict {
    Pass,
    Fail,
    Inconclusive,
}

impl RankVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            RankVerdict::Pass => "pass",
            RankVerdict::Fail => "fail",
            RankVerdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankResult {
    pub rank: usize,
    /// Smallest counted singular value over the largest.
    pub margin: f64,
    /// `sigma_i / sigma_1` in decreasing order.
    pub ratios: Vec<f64>,
}

impl RankResult {
    /// Compares against an expected rank, honouring the gray zone around the
    /// singular values that decide the outcome.
    pub fn verdict(&self, expected: usize, thresholds: &RankThresholds) -> RankVerdict {
        if expected == 0 || expected > self.ratios.len() {
            return RankVerdict::Fail;
        }
        let decisive = self.ratios[expected - 1];
        let next = self.ratios.get(expected).copied();
        if thresholds.in_gray_zone(decisive) || next.is_some_and(|r| thresholds.in_gray_zone(r)) {
            return RankVerdict::Inconclusive;
        }
        if self.rank == expected {
            RankVerdict::Pass
        } else {
            RankVerdict::Fail
        }
    }
}

/// Rank of the span of `vectors` with relative tolerance `tol`.
pub fn span_rank(vectors: &[Vec<Complex64>], tol: f64) -> Result<RankResult, ThetaError> {
    let first = vectors.first().ok_or(ThetaError::EmptyVectors)?;
    let cols = first.len();
    if cols == 0 {
        return Err(ThetaError::EmptyVectors);
    }
    if vectors.iter().any(|v| v.len() != cols) {
        return Err(ThetaError::RaggedVectors);
    }
    if let Some(i) = vectors
        .iter()
        .position(|v| v.iter().all(|c| c.re == 0.0 && c.im == 0.0))
    {
        return Err(ThetaError::ZeroVector(i));
    }

    let m = DMatrix::from_fn(vectors.len(), cols, |r, c| vectors[r][c]);
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    let top = sv[0];
    let ratios: Vec<f64> = sv.iter().map(|s| s / top).collect();
    let rank = ratios.iter().take_while(|&&r| r >= tol).count();
    let margin = ratios[rank.max(1) - 1];
    Ok(RankResult {
        rank,
        margin,
        ratios,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis(n: usize, i: usize) -> Vec<Complex64> {
        (0..n)
            .map(|j| Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0))
            .collect()
    }

    #[test]
    fn duplicate_vectors_have_rank_one() {
        let v = vec![Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)];
        let r = span_rank(&[v.clone(), v], 1e-8).unwrap();
        assert_eq!(r.rank, 1);
        assert_eq!(r.verdict(2, &RankThresholds::default()), RankVerdict::Fail);
    }

    #[test]
    fn standard_basis_is_full_rank() {
        let vs: Vec<_> = (0..5).map(|i| basis(5, i)).collect();
        let r = span_rank(&vs, 1e-8).unwrap();
        assert_eq!(r.rank, 5);
        assert!((r.margin - 1.0).abs() < 1e-15);
        assert_eq!(r.verdict(5, &RankThresholds::default()), RankVerdict::Pass);
    }

    #[test]
    fn gray_zone_is_inconclusive() {
        let mut v = basis(3, 1);
        v[0] = Complex64::new(1.0, 0.0);
        let w = vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0 + 1e-8, 0.0),
            Complex64::new(0.0, 0.0),
        ];
        let r = span_rank(&[v, w], 1e-8).unwrap();
        assert_eq!(
            r.verdict(2, &RankThresholds::default()),
            RankVerdict::Inconclusive
        );
    }

    #[test]
    fn bad_inputs_rejected() {
        assert_eq!(span_rank(&[], 1e-8), Err(ThetaError::EmptyVectors));
        assert_eq!(
            span_rank(&[basis(3, 0), basis(2, 0)], 1e-8),
            Err(ThetaError::RaggedVectors)
        );
        let zero = vec![Complex64::new(0.0, 0.0); 3];
        assert_eq!(
            span_rank(&[basis(3, 0), zero], 1e-8),
            Err(ThetaError::ZeroVector(1))
        );
    }
}
