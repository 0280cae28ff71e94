//! Exact checks of the binomial inequality that rules out smooth
//! half-dimensional abelian scrolls of irregularity at least 3.
//!
//! For `n, k >= 1` the inequality reads
//!
//! ```text
//! C(n+k-1, k-1) (2n+2k-1) n!  >=  k C(2n+2k-1, n)
//! ```
//!
//! with equality exactly when `n` is 1 or 2. For `n >= 3` it reduces to the
//! termwise bounds `(n+k-l+1) l >= 2n+2k-l`, `l = 2..=n`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::RangeInclusive;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::par::{self, Execution};
use crate::scroll_invariants::{build_report, InvariantError, ScrollData, ScrollReport};
use crate::trunc_ring::{binomial, factorial};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifierError {
    #[error("empty or invalid range: {0}")]
    InvalidRange(String),
    #[error("the very-ampleness bound needs n >= 3, got n = {0}")]
    DimensionTooSmall(u32),
    #[error("the very-ampleness bound needs l > 2n + 1, got n = {n}, l = {l}")]
    TooFewSections { n: u32, l: u32 },
    #[error("family needs k_max >= 2, got {0}")]
    FamilyTooSmall(u32),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Lt,
    Eq,
    Gt,
}

impl From<Ordering> for Relation {
    fn from(o: Ordering) -> Self {
        match o {
            Ordering::Less => Relation::Lt,
            Ordering::Equal => Relation::Eq,
            Ordering::Greater => Relation::Gt,
        }
    }
}

impl Relation {
    pub fn as_str(&self) -> &'static str {
        match self {
            Relation::Lt => "lt",
            Relation::Eq => "eq",
            Relation::Gt => "gt",
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InequalityRecord {
    pub n: u32,
    pub k: u32,
    pub lhs: BigUint,
    pub rhs: BigUint,
    pub relation: Relation,
}

pub fn inequality_check(n: u32, k: u32) -> InequalityRecord {
    assert!(n >= 1 && k >= 1, "n and k must be positive");
    let (n64, k64) = (u64::from(n), u64::from(k));
    let lhs = binomial(n64 + k64 - 1, (k64 - 1) as i64) * (2 * n64 + 2 * k64 - 1) * factorial(n64);
    let rhs = binomial(2 * n64 + 2 * k64 - 1, n64 as i64) * k64;
    let relation = lhs.cmp(&rhs).into();
    InequalityRecord {
        n,
        k,
        lhs,
        rhs,
        relation,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub l: u32,
    /// `(n + k - l + 1) * l`
    pub lhs: u64,
    /// `2n + 2k - l`
    pub rhs: u64,
    pub holds: bool,
    /// The equivalent condition `n + k >= l`.
    pub reduced_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermwiseRecord {
    pub n: u32,
    pub k: u32,
    pub terms: Vec<Term>,
}

impl TermwiseRecord {
    pub fn all_hold(&self) -> bool {
        self.terms.iter().all(|t| t.holds)
    }

    /// Each term's inequality agrees with its reduced form.
    pub fn equivalence_holds(&self) -> bool {
        self.terms.iter().all(|t| t.holds == t.reduced_holds)
    }
}

/// Termwise reduction for `n >= 3`; the term list is empty for smaller `n`.
pub fn termwise_check(n: u32, k: u32) -> TermwiseRecord {
    let terms = if n < 3 {
        Vec::new()
    } else {
        let (n, k) = (u64::from(n), u64::from(k));
        (2..=n)
            .map(|l| {
                let lhs = (n + k - l + 1) * l;
                let rhs = 2 * n + 2 * k - l;
                Term {
                    l: l as u32,
                    lhs,
                    rhs,
                    holds: lhs >= rhs,
                    reduced_holds: n + k >= l,
                }
            })
            .collect()
    };
    TermwiseRecord { n, k, terms }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sweep {
    /// Sorted by `(n, k)`.
    pub records: Vec<InequalityRecord>,
    pub equality_set: Vec<(u32, u32)>,
}

impl Sweep {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Grid points whose relation contradicts "equality iff n in {1, 2},
    /// strict inequality otherwise".
    pub fn classification_violations(&self) -> Vec<&InequalityRecord> {
        self.records
            .iter()
            .filter(|r| {
                let expected = if r.n <= 2 { Relation::Eq } else { Relation::Gt };
                r.relation != expected
            })
            .collect()
    }
}

fn check_range(name: &str, r: &RangeInclusive<u32>) -> Result<(), VerifierError> {
    if r.is_empty() || *r.start() == 0 {
        return Err(VerifierError::InvalidRange(format!(
            "{name} range {}..={} must be nonempty and start at 1 or above",
            r.start(),
            r.end()
        )));
    }
    Ok(())
}

pub fn sweep(
    n_range: RangeInclusive<u32>,
    k_range: RangeInclusive<u32>,
) -> Result<Sweep, VerifierError> {
    sweep_with(Execution::default(), n_range, k_range)
}

pub fn sweep_with(
    mode: Execution,
    n_range: RangeInclusive<u32>,
    k_range: RangeInclusive<u32>,
) -> Result<Sweep, VerifierError> {
    check_range("n", &n_range)?;
    check_range("k", &k_range)?;
    let grid: Vec<(u32, u32)> = n_range
        .flat_map(|n| k_range.clone().map(move |k| (n, k)))
        .collect();
    let records = par::map(mode, &grid, |&(n, k)| inequality_check(n, k));
    let equality_set = records
        .iter()
        .filter(|r| r.relation == Relation::Eq)
        .map(|r| (r.n, r.k))
        .collect();
    Ok(Sweep {
        records,
        equality_set,
    })
}

/// Termwise records for every grid point with `n >= 3`, sorted by `(n, k)`.
pub fn termwise_sweep_with(
    mode: Execution,
    n_range: RangeInclusive<u32>,
    k_range: RangeInclusive<u32>,
) -> Result<Vec<TermwiseRecord>, VerifierError> {
    check_range("n", &n_range)?;
    check_range("k", &k_range)?;
    let grid: Vec<(u32, u32)> = n_range
        .filter(|&n| n >= 3)
        .flat_map(|n| k_range.clone().map(move |k| (n, k)))
        .collect();
    Ok(par::map(mode, &grid, |&(n, k)| termwise_check(n, k)))
}

/// Largest odd `k` with `k < l - 2n`: no polarization of an abelian `n`-fold
/// with `l` sections, `n >= 3`, is `k`-very ample for a larger odd `k`.
pub fn very_ample_bound(n: u32, l: u32) -> Result<u32, VerifierError> {
    if n < 3 {
        return Err(VerifierError::DimensionTooSmall(n));
    }
    if l <= 2 * n + 1 {
        return Err(VerifierError::TooFewSections { n, l });
    }
    let gap = l - 2 * n;
    Ok(if gap.is_multiple_of(2) {
        gap - 1
    } else {
        gap - 2
    })
}

pub const FAMILY_DEGREE_NOTE: &str =
    "the open-problem family is stated for surfaces of degree 4n in P^(2n); \
a linearly normal (1, 2n+1) surface in P^(2n) has degree 4n+2, which is what these reports use";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyReport {
    pub reports: Vec<ScrollReport>,
    pub notes: Vec<String>,
    /// Reports whose double point number is nonzero or whose degree differs
    /// from `(k+1)(2k+3)`.
    pub violations: Vec<String>,
}

/// Invariants of the cyclic `P^(k-1)`-scrolls over linearly normal `(1, 2k+3)`
/// abelian surfaces in `P^(2k+2)`, for `k = 2..=k_max`.
pub fn conjecture_family_report(k_max: u32) -> Result<FamilyReport, VerifierError> {
    if k_max < 2 {
        return Err(VerifierError::FamilyTooSmall(k_max));
    }
    let mut reports = Vec::new();
    let mut violations = Vec::new();
    for k in 2..=k_max {
        let l = 2 * k + 3;
        let data = ScrollData::new(2, k, l, BigInt::from(2 * l))?;
        let report = build_report(&data)?;
        if !report.double_point.is_zero() {
            violations.push(format!(
                "k = {k}: double point number {} is not zero",
                report.double_point
            ));
        }
        let expected = BigRational::from_integer(BigInt::from((k + 1) * (2 * k + 3)));
        if report.deg_y != expected {
            violations.push(format!(
                "k = {k}: degree {} differs from (k+1)(2k+3) = {expected}",
                report.deg_y
            ));
        }
        reports.push(report);
    }
    Ok(FamilyReport {
        reports,
        notes: vec![FAMILY_DEGREE_NOTE.to_string()],
        violations,
    })
}
