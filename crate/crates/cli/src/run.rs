//! Executes a [`RunConfig`] and writes its report.

use std::io::Write;
use std::path::Path;

use abscroll_core::scroll_invariants::{
    build_report, half_dimensional_top_chern, top_chern_closed_form, ScrollData, ScrollReport,
    Verdict,
};
use abscroll_core::theorem_verifier::{
    conjecture_family_report, inequality_check, sweep_with, termwise_sweep_with, very_ample_bound,
    Relation,
};
use abscroll_core::theta_geometry::{
    cyclic_subgroup, scroll_smoothness_probe_with, torsion_point, RankThresholds, ThetaEmbedding,
    TorusPoint,
};
use abscroll_core::trunc_ring::{binomial, factorial};
use abscroll_core::Execution;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use crate::config::{Command, OutputTarget, RunConfig, TorsionSpec};
use crate::report::{
    BoundDto, CheckDto, FamilyDto, Payload, ProbeDto, RenderError, ReportEnvelope, ScrollReportDto,
    SweepDto, REPORT_VERSION,
};

pub const EXIT_OK: i32 = 0;
/// A verification failed, or double points are forced under `--expect-smooth`.
pub const EXIT_FAILURE: i32 = 1;
/// Some probe verdict fell in the gray zone.
pub const EXIT_INCONCLUSIVE: i32 = 2;
/// Bad flags or inadmissible parameters.
pub const EXIT_USAGE: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("invalid parameters: {0}")]
    Invalid(String),
    #[error(transparent)]
    Render(#[from] RenderError),
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Invalid(_) => EXIT_USAGE,
            RunError::Render(_) | RunError::Io { .. } => EXIT_FAILURE,
        }
    }
}

fn invalid(e: impl std::fmt::Display) -> RunError {
    RunError::Invalid(e.to_string())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub envelope: ReportEnvelope,
    pub exit_code: i32,
}

/// Computes the report without writing it.
pub fn execute(config: &RunConfig) -> Result<Outcome, RunError> {
    execute_with(Execution::default(), config)
}

pub fn execute_with(mode: Execution, config: &RunConfig) -> Result<Outcome, RunError> {
    let cmd = &config.command;
    let mut warnings = Vec::new();
    let (payload, exit_code) = match cmd {
        Command::Invariants {
            n,
            k,
            l,
            cn,
            paper_check,
            expect_smooth,
        } => {
            let data = ScrollData::new(*n, *k, *l, cn.clone()).map_err(invalid)?;
            let report = build_report(&data).map_err(invalid)?;
            warnings.extend(report.warnings());
            let mut dto = ScrollReportDto::from_report(&report);
            if *paper_check {
                dto.checks = Some(closed_form_checks(&report));
            }
            let smooth_violated = *expect_smooth && report.verdict == Verdict::DoublePointsForced;
            if smooth_violated {
                warnings.push(format!(
                    "smoothness was asserted but the double point number is {}",
                    report.double_point
                ));
            }
            let code = if smooth_violated || !dto.checks_pass() {
                EXIT_FAILURE
            } else {
                EXIT_OK
            };
            (Payload::ScrollReport(dto), code)
        }
        Command::Verify {
            n_min,
            n_max,
            k_min,
            k_max,
        } => {
            let sweep = sweep_with(mode, *n_min..=*n_max, *k_min..=*k_max).map_err(invalid)?;
            let termwise =
                termwise_sweep_with(mode, *n_min..=*n_max, *k_min..=*k_max).map_err(invalid)?;
            let dto = SweepDto::new(&sweep, &termwise);
            let code = if dto.violations.is_empty() {
                EXIT_OK
            } else {
                EXIT_FAILURE
            };
            (Payload::Sweep(dto), code)
        }
        Command::Family { k_max } => {
            let family = conjecture_family_report(*k_max).map_err(invalid)?;
            let code = if family.violations.is_empty() {
                EXIT_OK
            } else {
                EXIT_FAILURE
            };
            warnings.extend(family.notes.iter().cloned());
            (Payload::Family(FamilyDto::new(&family)), code)
        }
        Command::VeryAmpleBound { n, l } => {
            let max_odd_k = very_ample_bound(*n, *l).map_err(invalid)?;
            (
                Payload::Bound(BoundDto {
                    n: *n,
                    l: *l,
                    max_odd_k,
                }),
                EXIT_OK,
            )
        }
        Command::ProbeElliptic {
            m,
            tau,
            torsion,
            samples,
            seed,
            tol,
        } => {
            let emb = ThetaEmbedding::elliptic(*tau, *m).map_err(invalid)?;
            probe(mode, &emb, torsion, *samples, *seed, *tol, &mut warnings)?
        }
        Command::ProbeSurface {
            d,
            omega,
            torsion,
            samples,
            seed,
            tol,
        } => {
            let emb = ThetaEmbedding::surface(*omega, *d).map_err(invalid)?;
            probe(mode, &emb, torsion, *samples, *seed, *tol, &mut warnings)?
        }
    };
    Ok(Outcome {
        envelope: ReportEnvelope {
            version: REPORT_VERSION.to_string(),
            command: cmd.name().to_string(),
            params: cmd.params(),
            payload,
            warnings,
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        },
        exit_code,
    })
}

fn probe(
    mode: Execution,
    emb: &ThetaEmbedding,
    torsion: &TorsionSpec,
    samples: usize,
    seed: u64,
    tol: f64,
    warnings: &mut Vec<String>,
) -> Result<(Payload, i32), RunError> {
    let generator = torsion_point(emb, &torsion.a, &torsion.b, torsion.order).map_err(invalid)?;
    if !generator.has_exact_order() {
        return Err(RunError::Invalid(format!(
            "torsion generator has order {}, not the requested {}",
            generator.actual_order, torsion.order
        )));
    }
    let group = cyclic_subgroup(&generator);
    let summary = scroll_smoothness_probe_with(
        mode,
        emb,
        &group,
        samples,
        seed,
        &RankThresholds::with_tol(tol),
    )
    .map_err(invalid)?;
    if summary.cluster_probes_skipped {
        warnings.push(format!(
            "cluster and immersion probes skipped: 2k = {} needs more than {} sections",
            2 * group.len(),
            emb.section_count()
        ));
    }
    if summary.evaluation_errors > 0 {
        warnings.push(format!(
            "{} probes could not be evaluated and count as inconclusive",
            summary.evaluation_errors
        ));
    }
    let generator_coords = match generator.point {
        TorusPoint::Elliptic(z) => vec![[z.re, z.im]],
        TorusPoint::Surface(z) => z.iter().map(|c| [c.re, c.im]).collect(),
    };
    let dto = ProbeDto::new(
        emb.genus(),
        emb.section_count(),
        emb.truncation_radius(),
        generator_coords,
        &summary,
    );
    let code = if dto.totals.fail > 0 {
        EXIT_FAILURE
    } else if dto.totals.inconclusive > 0 {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_OK
    };
    Ok((Payload::Probe(dto), code))
}

fn check(name: &str, expected: impl ToString, actual: impl ToString) -> CheckDto {
    let (expected, actual) = (expected.to_string(), actual.to_string());
    CheckDto {
        name: name.to_string(),
        ok: expected == actual,
        expected,
        actual,
    }
}

/// Recomputes the report from binomial closed forms alone.
fn closed_form_checks(r: &ScrollReport) -> Vec<CheckDto> {
    let (n, k, l) = (r.data.n, r.data.k, r.data.l);
    let cn = &r.data.cn;
    let kk = BigInt::from(k);
    let c = BigInt::from(binomial(u64::from(n + k - 1), i64::from(k - 1)));
    let mut checks = vec![
        check("degree", BigRational::new(&c * cn, kk.clone()), &r.deg_y),
        check(
            "top_chern_coefficient",
            top_chern_closed_form(n, k, l),
            &r.top_chern_coefficient,
        ),
    ];
    if l == 2 * n + 2 * k - 1 {
        let top = half_dimensional_top_chern(n, k);
        let inner =
            BigRational::new(&c * &c * cn, kk.clone()) - BigRational::from_integer(top.clone());
        let d = BigRational::new(cn.clone(), kk) * inner;
        checks.push(check(
            "half_dimensional_top_chern",
            &top,
            &r.top_chern_coefficient,
        ));
        checks.push(check("half_dimensional_double_point", &d, &r.double_point));
        if *cn == BigInt::from(factorial(u64::from(n)) * l) {
            // For complete linear systems the sign of D is the relation
            // between the two sides of the binomial inequality.
            let rel = inequality_check(n, k).relation;
            let sign = if r.double_point.is_positive() {
                Relation::Gt
            } else if r.double_point.is_negative() {
                Relation::Lt
            } else {
                Relation::Eq
            };
            checks.push(check("double_point_sign_matches_inequality", rel, sign));
        }
    }
    checks
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory, so readers never see a partial report.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), RunError> {
    let io = |source| RunError::Io {
        path: path.display().to_string(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir).map_err(io)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

/// Computes, renders and writes the report; returns the process exit code.
pub fn run(config: &RunConfig) -> Result<i32, RunError> {
    let outcome = execute(config)?;
    let text = outcome.envelope.render(config.format)?;
    match &config.output {
        OutputTarget::Stdout => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| RunError::Io {
                    path: "<stdout>".into(),
                    source,
                })?;
        }
        OutputTarget::File(path) => write_atomic(path, &text)?,
    }
    Ok(outcome.exit_code)
}
