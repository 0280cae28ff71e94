//! Rank probes for the smoothness of a scroll over a finite subgroup `G`.
//!
//! Three probes are run per sample point `P`:
//!
//! * fibre: the `k` points `P + G` are independent;
//! * cluster: the `2k` points `(P + G) u (Q + G)` are independent for a
//!   second point `Q` with `Q - P` away from `G`, so distinct fibres are
//!   disjoint;
//! * immersion: the `k` points `P + G` together with their tangent
//!   directions span a `P^(2k-1)`, i.e. the matrix of derivatives in the
//!   normal directions has rank `k`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::rank::{span_rank, RankThresholds, RankVerdict};
use super::torsion::{
    from_lattice_coordinates, is_subgroup, lattice_coordinates, reduce, torus_distance,
};
use super::{EmbeddedPoint, ThetaEmbedding, ThetaError, TorusPoint};
use crate::par::{self, Execution};

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterProbe {
    pub points: Vec<EmbeddedPoint>,
    pub with_derivatives: bool,
    pub expected_rank: usize,
    pub observed_rank: usize,
    pub margin: f64,
    pub verdict: RankVerdict,
}

fn evaluate_all(
    emb: &ThetaEmbedding,
    points: &[TorusPoint],
    direction: Option<[Complex64; 2]>,
) -> Result<Vec<EmbeddedPoint>, ThetaError> {
    points
        .iter()
        .map(|p| {
            let mut e = emb.evaluate_along(&reduce(emb, p), direction)?;
            e.base = *p;
            Ok(e)
        })
        .collect()
}

fn rank_probe(
    points: Vec<EmbeddedPoint>,
    with_derivatives: bool,
    thresholds: &RankThresholds,
) -> Result<ClusterProbe, ThetaError> {
    let mut rows: Vec<Vec<Complex64>> = points.iter().map(|p| p.coords.clone()).collect();
    if with_derivatives {
        rows.extend(points.iter().filter_map(EmbeddedPoint::tangent_row));
    }
    let expected_rank = rows.len();
    let rank = span_rank(&rows, thresholds.tol)?;
    Ok(ClusterProbe {
        points,
        with_derivatives,
        expected_rank,
        observed_rank: rank.rank,
        margin: rank.margin,
        verdict: rank.verdict(expected_rank, thresholds),
    })
}

/// Independence of the orbit `P + G`; expected rank `|G|`.
pub fn fibre_independence_probe(
    emb: &ThetaEmbedding,
    group: &[TorusPoint],
    p: &TorusPoint,
    thresholds: &RankThresholds,
) -> Result<ClusterProbe, ThetaError> {
    if !is_subgroup(emb, group) {
        return Err(ThetaError::NotAGroup);
    }
    let orbit: Vec<TorusPoint> = group.iter().map(|g| p.add(g)).collect();
    rank_probe(evaluate_all(emb, &orbit, None)?, false, thresholds)
}

/// Rank of the cluster supported on `points`; with derivatives every point
/// contributes its tangent direction as well, doubling the cluster length.
///
/// For surfaces the tangent is taken along `direction`.
pub fn very_ampleness_cluster_probe(
    emb: &ThetaEmbedding,
    points: &[TorusPoint],
    with_derivatives: bool,
    direction: Option<[Complex64; 2]>,
    thresholds: &RankThresholds,
) -> Result<ClusterProbe, ThetaError> {
    let len = points.len() * if with_derivatives { 2 } else { 1 };
    if len == 0 || len + 1 > emb.section_count() as usize {
        return Err(ThetaError::ClusterLength {
            len,
            sections: emb.section_count(),
        });
    }
    rank_probe(
        evaluate_all(emb, points, direction)?,
        with_derivatives,
        thresholds,
    )
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct VerdictCounts {
    pub pass: usize,
    pub fail: usize,
    pub inconclusive: usize,
}

impl VerdictCounts {
    fn record(&mut self, v: RankVerdict) {
        match v {
            RankVerdict::Pass => self.pass += 1,
            RankVerdict::Fail => self.fail += 1,
            RankVerdict::Inconclusive => self.inconclusive += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.pass + self.fail + self.inconclusive
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeSummary {
    pub samples: usize,
    pub group_order: usize,
    pub fibre: VerdictCounts,
    pub cluster: VerdictCounts,
    pub immersion: VerdictCounts,
    /// Probes that could not be evaluated; also counted as inconclusive.
    pub evaluation_errors: usize,
    /// Cluster probes are skipped when `2k` exceeds `section_count - 1`.
    pub cluster_probes_skipped: bool,
    /// Worst rank margin over every evaluated probe.
    pub min_margin: f64,
}

impl ProbeSummary {
    pub fn totals(&self) -> VerdictCounts {
        VerdictCounts {
            pass: self.fibre.pass + self.cluster.pass + self.immersion.pass,
            fail: self.fibre.fail + self.cluster.fail + self.immersion.fail,
            inconclusive: self.fibre.inconclusive
                + self.cluster.inconclusive
                + self.immersion.inconclusive,
        }
    }
}

/// Outcome of one probe at one sample.
type ProbeOutcome = Result<(RankVerdict, f64), ThetaError>;

struct SampleOutcome {
    fibre: ProbeOutcome,
    cluster: Option<ProbeOutcome>,
    immersion: Option<ProbeOutcome>,
}

/// Minimum torus distance of `Q - P` from every element of `G`, as a fraction
/// of the spacing `1 / |G|`.
const SEPARATION: f64 = 0.25;

pub fn scroll_smoothness_probe(
    emb: &ThetaEmbedding,
    group: &[TorusPoint],
    samples: usize,
    seed: u64,
    thresholds: &RankThresholds,
) -> Result<ProbeSummary, ThetaError> {
    scroll_smoothness_probe_with(Execution::default(), emb, group, samples, seed, thresholds)
}

/// Runs the fibre, cluster and immersion probes at `samples` points.
///
/// The first points lie on a coarse grid of the fundamental domain, the rest
/// are drawn from a ChaCha stream per sample index, so results do not depend
/// on the execution mode.
pub fn scroll_smoothness_probe_with(
    mode: Execution,
    emb: &ThetaEmbedding,
    group: &[TorusPoint],
    samples: usize,
    seed: u64,
    thresholds: &RankThresholds,
) -> Result<ProbeSummary, ThetaError> {
    if !is_subgroup(emb, group) {
        return Err(ThetaError::NotAGroup);
    }
    let k = group.len();
    let run_clusters = 2 * k < emb.section_count() as usize;
    let group_coords: Vec<Vec<f64>> = group.iter().map(|g| lattice_coordinates(emb, g)).collect();
    let grid_side = ((samples / 4) as f64).sqrt().floor() as usize;
    let dims = 2 * usize::from(emb.genus());

    let outcomes = par::map_range(mode, samples, |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        let mut base: Vec<f64> = (0..dims).map(|_| rng.gen::<f64>()).collect();
        if i < grid_side * grid_side {
            base[0] = ((i % grid_side) as f64 + 0.5) / grid_side as f64;
            base[dims / 2] = ((i / grid_side) as f64 + 0.5) / grid_side as f64;
        }
        let offset = loop {
            let cand: Vec<f64> = (0..dims).map(|_| rng.gen::<f64>()).collect();
            let sep = SEPARATION / k as f64;
            if group_coords.iter().all(|g| torus_distance(g, &cand) >= sep) {
                break cand;
            }
        };
        let direction = if emb.genus() == 2 {
            Some(random_direction(&mut rng))
        } else {
            None
        };

        let p = from_lattice_coordinates(emb, &base);
        let q = p.add(&from_lattice_coordinates(emb, &offset));
        let fibre_p: Vec<TorusPoint> = group.iter().map(|g| p.add(g)).collect();
        let summarize = |r: Result<ClusterProbe, ThetaError>| r.map(|c| (c.verdict, c.margin));

        let fibre = summarize(fibre_independence_probe(emb, group, &p, thresholds));
        let (cluster, immersion) = if run_clusters {
            let mut pair = fibre_p.clone();
            pair.extend(group.iter().map(|g| q.add(g)));
            (
                Some(summarize(very_ampleness_cluster_probe(
                    emb, &pair, false, direction, thresholds,
                ))),
                Some(summarize(very_ampleness_cluster_probe(
                    emb, &fibre_p, true, direction, thresholds,
                ))),
            )
        } else {
            (None, None)
        };
        SampleOutcome {
            fibre,
            cluster,
            immersion,
        }
    });

    let mut summary = ProbeSummary {
        samples,
        group_order: k,
        fibre: VerdictCounts::default(),
        cluster: VerdictCounts::default(),
        immersion: VerdictCounts::default(),
        evaluation_errors: 0,
        cluster_probes_skipped: !run_clusters,
        min_margin: f64::INFINITY,
    };
    for o in outcomes {
        let mut tally = |counts: &mut VerdictCounts, outcome: ProbeOutcome| match outcome {
            Ok((v, margin)) => {
                counts.record(v);
                summary.min_margin = summary.min_margin.min(margin);
            }
            Err(_) => {
                counts.record(RankVerdict::Inconclusive);
                summary.evaluation_errors += 1;
            }
        };
        tally(&mut summary.fibre, o.fibre);
        if let Some(c) = o.cluster {
            tally(&mut summary.cluster, c);
        }
        if let Some(c) = o.immersion {
            tally(&mut summary.immersion, c);
        }
    }
    Ok(summary)
}

fn random_direction(rng: &mut impl Rng) -> [Complex64; 2] {
    let v = [
        Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5),
        Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5),
    ];
    let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    if n < 1e-3 {
        [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]
    } else {
        [v[0] / n, v[1] / n]
    }
}
