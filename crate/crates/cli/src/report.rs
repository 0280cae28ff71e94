//! Report envelope, payload records and their JSON, CSV and text renderings.
//!
//! Arbitrary-precision integers and rationals are carried as decimal strings
//! (`"45/2"` for rationals), complex numbers as `[re, im]` pairs.

use std::fmt::Write as _;

use abscroll_core::scroll_invariants::{scaled_double_point, ScrollReport};
use abscroll_core::theorem_verifier::{FamilyReport, Sweep, TermwiseRecord};
use abscroll_core::theta_geometry::{ProbeSummary, VerdictCounts};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::OutputFormat;

pub const REPORT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportEnvelope {
    pub version: String,
    pub command: String,
    pub params: Value,
    pub payload: Payload,
    pub warnings: Vec<String>,
    /// RFC 3339, UTC.
    pub timestamp: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    ScrollReport(ScrollReportDto),
    Sweep(SweepDto),
    Family(FamilyDto),
    Bound(BoundDto),
    Probe(ProbeDto),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckDto {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScrollReportDto {
    pub n: u32,
    pub k: u32,
    pub l: u32,
    pub cn: String,
    pub scroll_dimension: u32,
    pub deg_y: String,
    pub deg_y_integral: bool,
    /// Coefficient of `c^n h^(k-1)` in the top Chern class of the normal bundle.
    pub top_chern_coefficient: String,
    /// The coefficient times `c^n`.
    pub top_chern_normal: String,
    pub double_point: String,
    pub double_point_integral: bool,
    /// `k^2` times the double point number, always an integer.
    pub k2_double_point: String,
    pub linear_system: String,
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checks: Option<Vec<CheckDto>>,
}

impl ScrollReportDto {
    pub fn from_report(r: &ScrollReport) -> Self {
        ScrollReportDto {
            n: r.data.n,
            k: r.data.k,
            l: r.data.l,
            cn: r.data.cn.to_string(),
            scroll_dimension: r.data.scroll_dimension(),
            deg_y: r.deg_y.to_string(),
            deg_y_integral: r.degree_is_integral(),
            top_chern_coefficient: r.top_chern_coefficient.to_string(),
            top_chern_normal: r.top_chern_normal.to_string(),
            double_point: r.double_point.to_string(),
            double_point_integral: r.double_point_is_integral(),
            k2_double_point: scaled_double_point(r).to_string(),
            linear_system: r.linear_system.as_str().to_string(),
            verdict: r.verdict.as_str().to_string(),
            checks: None,
        }
    }

    pub fn checks_pass(&self) -> bool {
        self.checks.iter().flatten().all(|c| c.ok)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: u32,
    pub k: u32,
    pub lhs: String,
    pub rhs: String,
    pub relation: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermwiseDto {
    /// Grid points with `n >= 3` whose termwise product was checked.
    pub points: usize,
    pub terms: usize,
    pub all_hold: bool,
    /// Each term agrees with the reduced condition `n + k >= l`.
    pub equivalence_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepDto {
    pub records: Vec<SweepRow>,
    pub equality_set: Vec<[u32; 2]>,
    pub termwise: TermwiseDto,
    pub violations: Vec<String>,
}

impl SweepDto {
    pub fn new(sweep: &Sweep, termwise: &[TermwiseRecord]) -> Self {
        let mut violations: Vec<String> = sweep
            .classification_violations()
            .iter()
            .map(|r| format!("n = {}, k = {}: relation {}", r.n, r.k, r.relation))
            .collect();
        for t in termwise {
            if !t.all_hold() {
                violations.push(format!("n = {}, k = {}: a termwise factor fails", t.n, t.k));
            }
            if !t.equivalence_holds() {
                violations.push(format!(
                    "n = {}, k = {}: termwise factor disagrees with n + k >= l",
                    t.n, t.k
                ));
            }
        }
        SweepDto {
            records: sweep
                .records
                .iter()
                .map(|r| SweepRow {
                    n: r.n,
                    k: r.k,
                    lhs: r.lhs.to_string(),
                    rhs: r.rhs.to_string(),
                    relation: r.relation.as_str().to_string(),
                })
                .collect(),
            equality_set: sweep.equality_set.iter().map(|&(n, k)| [n, k]).collect(),
            termwise: TermwiseDto {
                points: termwise.len(),
                terms: termwise.iter().map(|t| t.terms.len()).sum(),
                all_hold: termwise.iter().all(TermwiseRecord::all_hold),
                equivalence_holds: termwise.iter().all(TermwiseRecord::equivalence_holds),
            },
            violations,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyDto {
    pub reports: Vec<ScrollReportDto>,
    pub notes: Vec<String>,
    pub violations: Vec<String>,
}

impl FamilyDto {
    pub fn new(f: &FamilyReport) -> Self {
        FamilyDto {
            reports: f.reports.iter().map(ScrollReportDto::from_report).collect(),
            notes: f.notes.clone(),
            violations: f.violations.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundDto {
    pub n: u32,
    pub l: u32,
    pub max_odd_k: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountsDto {
    pub pass: usize,
    pub fail: usize,
    pub inconclusive: usize,
}

impl From<VerdictCounts> for CountsDto {
    fn from(c: VerdictCounts) -> Self {
        CountsDto {
            pass: c.pass,
            fail: c.fail,
            inconclusive: c.inconclusive,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeDto {
    pub genus: u8,
    pub sections: u32,
    pub truncation_radius: u32,
    /// Generator of the subgroup, one `[re, im]` pair per coordinate.
    pub generator: Vec<[f64; 2]>,
    pub group_order: usize,
    pub samples: usize,
    pub fibre: CountsDto,
    pub cluster: CountsDto,
    pub immersion: CountsDto,
    pub totals: CountsDto,
    pub evaluation_errors: usize,
    pub cluster_probes_skipped: bool,
    /// Absent when no probe could be evaluated.
    pub min_margin: Option<f64>,
    pub result: String,
}

impl ProbeDto {
    pub fn new(
        genus: u8,
        sections: u32,
        truncation_radius: u32,
        generator: Vec<[f64; 2]>,
        s: &ProbeSummary,
    ) -> Self {
        let totals = s.totals();
        let result = if totals.fail > 0 {
            "fail"
        } else if totals.inconclusive > 0 {
            "inconclusive"
        } else {
            "pass"
        };
        ProbeDto {
            genus,
            sections,
            truncation_radius,
            generator,
            group_order: s.group_order,
            samples: s.samples,
            fibre: s.fibre.into(),
            cluster: s.cluster.into(),
            immersion: s.immersion.into(),
            totals: totals.into(),
            evaluation_errors: s.evaluation_errors,
            cluster_probes_skipped: s.cluster_probes_skipped,
            min_margin: s.min_margin.is_finite().then_some(s.min_margin),
            result: result.to_string(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RenderError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("csv buffer: {0}")]
    Buffer(String),
}

impl ReportEnvelope {
    pub fn render(&self, format: OutputFormat) -> Result<String, RenderError> {
        match format {
            OutputFormat::Json => {
                let mut s = serde_json::to_string_pretty(self)?;
                s.push('\n');
                Ok(s)
            }
            OutputFormat::Csv => render_csv(&self.payload),
            OutputFormat::Text => Ok(self.render_text()),
        }
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "abscroll {} ({})", self.command, self.version);
        match &self.payload {
            Payload::ScrollReport(r) => text_scroll(&mut out, r),
            Payload::Sweep(s) => {
                let _ = writeln!(out, "grid points: {}", s.records.len());
                let eq: Vec<String> = s
                    .equality_set
                    .iter()
                    .map(|[n, k]| format!("({n},{k})"))
                    .collect();
                let _ = writeln!(out, "equality at: {}", eq.join(" "));
                let _ = writeln!(
                    out,
                    "termwise: {} points, {} terms, all hold: {}, equivalent to n+k>=l: {}",
                    s.termwise.points,
                    s.termwise.terms,
                    s.termwise.all_hold,
                    s.termwise.equivalence_holds
                );
                let _ = writeln!(out, "violations: {}", s.violations.len());
                for v in &s.violations {
                    let _ = writeln!(out, "  {v}");
                }
            }
            Payload::Family(f) => {
                for r in &f.reports {
                    let _ = writeln!(
                        out,
                        "k={:<3} l={:<3} deg_Y={:<8} D={:<6} {}",
                        r.k, r.l, r.deg_y, r.double_point, r.verdict
                    );
                }
                for n in &f.notes {
                    let _ = writeln!(out, "note: {n}");
                }
                for v in &f.violations {
                    let _ = writeln!(out, "violation: {v}");
                }
            }
            Payload::Bound(b) => {
                let _ = writeln!(
                    out,
                    "n={} l={}: not k-very ample for odd k > {}",
                    b.n, b.l, b.max_odd_k
                );
            }
            Payload::Probe(p) => {
                let _ = writeln!(
                    out,
                    "genus {} sections {} group order {} samples {}",
                    p.genus, p.sections, p.group_order, p.samples
                );
                for (name, c) in [
                    ("fibre", p.fibre),
                    ("cluster", p.cluster),
                    ("immersion", p.immersion),
                    ("total", p.totals),
                ] {
                    let _ = writeln!(
                        out,
                        "{name:<10} pass {:<6} fail {:<6} inconclusive {}",
                        c.pass, c.fail, c.inconclusive
                    );
                }
                if p.cluster_probes_skipped {
                    let _ = writeln!(out, "cluster probes skipped: too few sections");
                }
                match p.min_margin {
                    Some(m) => {
                        let _ = writeln!(out, "min margin {m:.3e}");
                    }
                    None => {
                        let _ = writeln!(out, "min margin n/a");
                    }
                }
                let _ = writeln!(out, "result: {}", p.result);
            }
        }
        for w in &self.warnings {
            let _ = writeln!(out, "warning: {w}");
        }
        out
    }
}

fn text_scroll(out: &mut String, r: &ScrollReportDto) {
    let _ = writeln!(out, "n={} k={} l={} c^n={}", r.n, r.k, r.l, r.cn);
    let _ = writeln!(out, "dim Y            {}", r.scroll_dimension);
    let _ = writeln!(out, "deg Y            {}", r.deg_y);
    let _ = writeln!(out, "top Chern coeff  {}", r.top_chern_coefficient);
    let _ = writeln!(out, "top Chern N      {}", r.top_chern_normal);
    let _ = writeln!(out, "double points    {}", r.double_point);
    let _ = writeln!(out, "linear system    {}", r.linear_system);
    let _ = writeln!(out, "verdict          {}", r.verdict);
    for c in r.checks.iter().flatten() {
        let _ = writeln!(
            out,
            "check {:<28} {} (expected {}, got {})",
            c.name,
            if c.ok { "ok" } else { "FAILED" },
            c.expected,
            c.actual
        );
    }
}

const SCROLL_COLUMNS: [&str; 11] = [
    "n",
    "k",
    "l",
    "cn",
    "deg_y",
    "top_chern_coefficient",
    "top_chern_normal",
    "double_point",
    "k2_double_point",
    "linear_system",
    "verdict",
];

fn scroll_row(r: &ScrollReportDto) -> Vec<String> {
    vec![
        r.n.to_string(),
        r.k.to_string(),
        r.l.to_string(),
        r.cn.clone(),
        r.deg_y.clone(),
        r.top_chern_coefficient.clone(),
        r.top_chern_normal.clone(),
        r.double_point.clone(),
        r.k2_double_point.clone(),
        r.linear_system.clone(),
        r.verdict.clone(),
    ]
}

/// Fixed columns per payload kind; see the README for the list.
fn render_csv(payload: &Payload) -> Result<String, RenderError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    match payload {
        Payload::ScrollReport(r) => {
            w.write_record(SCROLL_COLUMNS)?;
            w.write_record(scroll_row(r))?;
        }
        Payload::Family(f) => {
            w.write_record(SCROLL_COLUMNS)?;
            for r in &f.reports {
                w.write_record(scroll_row(r))?;
            }
        }
        Payload::Sweep(s) => {
            w.write_record(["n", "k", "lhs", "rhs", "relation"])?;
            for r in &s.records {
                w.write_record([
                    r.n.to_string(),
                    r.k.to_string(),
                    r.lhs.clone(),
                    r.rhs.clone(),
                    r.relation.clone(),
                ])?;
            }
        }
        Payload::Bound(b) => {
            w.write_record(["n", "l", "max_odd_k"])?;
            w.write_record([b.n.to_string(), b.l.to_string(), b.max_odd_k.to_string()])?;
        }
        Payload::Probe(p) => {
            w.write_record(["probe", "pass", "fail", "inconclusive"])?;
            for (name, c) in [
                ("fibre", p.fibre),
                ("cluster", p.cluster),
                ("immersion", p.immersion),
                ("total", p.totals),
            ] {
                w.write_record([
                    name.to_string(),
                    c.pass.to_string(),
                    c.fail.to_string(),
                    c.inconclusive.to_string(),
                ])?;
            }
        }
    }
    let bytes = w
        .into_inner()
        .map_err(|e| RenderError::Buffer(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| RenderError::Buffer(e.to_string()))
}
