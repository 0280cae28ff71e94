//! Command-line surface and the resolved run configuration.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_complex::Complex64;
use serde_json::{json, Value};

/// Seed used by the probe commands when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 42;
/// Relative singular-value threshold used when `--tol` is not given.
pub const DEFAULT_TOL: f64 = 1e-8;
/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_ENV: &str = "ABSCROLL_OUTPUT_DIR";

#[derive(Debug, Parser)]
#[command(
    name = "abscroll",
    version,
    about = "Invariants, inequality sweeps and theta-function probes for abelian scrolls"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,

    /// Write the report to this file instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Directory for reports when --output is not given; the file is named
    /// after the command.
    #[arg(long, global = true, env = OUTPUT_DIR_ENV)]
    pub output_dir: Option<PathBuf>,

    /// Report format; defaults to csv for `verify` and json otherwise.
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

impl OutputFormat {
    pub fn extension(&self) -> &'static str {
        match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
            OutputFormat::Text => "txt",
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Degree, normal Chern class and double point number of a scroll.
    Invariants(InvariantsArgs),
    /// Exhaustive check of the binomial inequality and its termwise reduction.
    Verify(VerifyArgs),
    /// Invariants of the cyclic scrolls over (1, 2k+3) abelian surfaces.
    Family(FamilyArgs),
    /// Largest odd k for which a polarization can be k-very ample.
    VeryAmpleBound(BoundArgs),
    /// Rank probes of a scroll over an elliptic normal curve.
    ProbeElliptic(ProbeEllipticArgs),
    /// Rank probes of a scroll over a (1, d)-polarized abelian surface.
    ProbeSurface(ProbeSurfaceArgs),
}

#[derive(Debug, Args)]
pub struct InvariantsArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub k: u32,
    #[arg(long)]
    pub l: u32,
    /// Degree c^n of the polarization (arbitrary precision).
    #[arg(long, value_parser = parse_bigint)]
    pub cn: BigInt,
    /// Also assert the closed-form identities for the degree, the top Chern
    /// class and the double point class.
    #[arg(long)]
    pub paper_check: bool,
    /// Exit with status 1 if double points are forced.
    #[arg(long)]
    pub expect_smooth: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 1)]
    pub n_min: u32,
    #[arg(long, default_value_t = 60)]
    pub n_max: u32,
    #[arg(long, default_value_t = 1)]
    pub k_min: u32,
    #[arg(long, default_value_t = 60)]
    pub k_max: u32,
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    #[arg(long, default_value_t = 10)]
    pub k_max: u32,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub l: u32,
}

#[derive(Debug, Args)]
pub struct ProbeEllipticArgs {
    /// Embedding degree; the curve lies in P^(m-1).
    #[arg(long)]
    pub m: u32,
    /// Period as "re,im".
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "0,1")]
    pub tau: Complex64,
    /// Torsion generator "a,b,order" for the point (a + b tau) / order.
    #[arg(long, value_parser = parse_ints, allow_hyphen_values = true)]
    pub torsion: Option<IntList>,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct ProbeSurfaceArgs {
    /// The d of the polarization type (1, d).
    #[arg(long, default_value_t = 7)]
    pub d: u32,
    /// Period matrix entries "re11,im11,re12,im12,re22,im22".
    #[arg(
        long,
        value_parser = parse_floats,
        allow_hyphen_values = true,
        default_value = "0.2,1.1,0.3,0.15,-0.1,1.3"
    )]
    pub omega: FloatList,
    /// Torsion generator "a1,a2,b1,b2,order" for (D a + Omega b) / order.
    #[arg(long, value_parser = parse_ints, allow_hyphen_values = true, default_value = "0,1,0,0,2")]
    pub torsion: IntList,
    #[arg(long, default_value_t = 50)]
    pub samples: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
}

fn parse_bigint(s: &str) -> Result<BigInt, String> {
    s.trim()
        .parse()
        .map_err(|e| format!("not an integer: {s} ({e})"))
}

fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>, String> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<T>()
                .map_err(|_| format!("cannot parse {p:?} in {s:?}"))
        })
        .collect()
}

/// Comma-separated integers given as one flag value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntList(pub Vec<i64>);

/// Comma-separated finite floats given as one flag value.
#[derive(Debug, Clone, PartialEq)]
pub struct FloatList(pub Vec<f64>);

fn parse_ints(s: &str) -> Result<IntList, String> {
    parse_list(s).map(IntList)
}

fn parse_floats(s: &str) -> Result<FloatList, String> {
    let v: Vec<f64> = parse_list(s)?;
    if v.iter().any(|x| !x.is_finite()) {
        return Err(format!("non-finite value in {s:?}"));
    }
    Ok(FloatList(v))
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    match parse_floats(s)?.0.as_slice() {
        [re, im] => Ok(Complex64::new(*re, *im)),
        _ => Err(format!("expected \"re,im\", got {s:?}")),
    }
}

/// Torsion generator with one `a` and one `b` entry per complex dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorsionSpec {
    pub a: Vec<i64>,
    pub b: Vec<i64>,
    pub order: u32,
}

impl TorsionSpec {
    fn from_ints(genus: usize, v: &[i64]) -> Result<Self, String> {
        if v.len() != 2 * genus + 1 {
            return Err(format!(
                "torsion needs {} comma-separated integers, got {}",
                2 * genus + 1,
                v.len()
            ));
        }
        let order = v[2 * genus];
        if order <= 0 || order > i64::from(u32::MAX) {
            return Err(format!("torsion order must be positive, got {order}"));
        }
        Ok(TorsionSpec {
            a: v[..genus].to_vec(),
            b: v[genus..2 * genus].to_vec(),
            order: order as u32,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Invariants {
        n: u32,
        k: u32,
        l: u32,
        cn: BigInt,
        paper_check: bool,
        expect_smooth: bool,
    },
    Verify {
        n_min: u32,
        n_max: u32,
        k_min: u32,
        k_max: u32,
    },
    Family {
        k_max: u32,
    },
    VeryAmpleBound {
        n: u32,
        l: u32,
    },
    ProbeElliptic {
        m: u32,
        tau: Complex64,
        torsion: TorsionSpec,
        samples: usize,
        seed: u64,
        tol: f64,
    },
    ProbeSurface {
        d: u32,
        omega: [[Complex64; 2]; 2],
        torsion: TorsionSpec,
        samples: usize,
        seed: u64,
        tol: f64,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Invariants { .. } => "invariants",
            Command::Verify { .. } => "verify",
            Command::Family { .. } => "family",
            Command::VeryAmpleBound { .. } => "very-ample-bound",
            Command::ProbeElliptic { .. } => "probe-elliptic",
            Command::ProbeSurface { .. } => "probe-surface",
        }
    }

    /// Parameters echoed into the report envelope.
    pub fn params(&self) -> Value {
        let pair = |z: &Complex64| json!([z.re, z.im]);
        match self {
            Command::Invariants {
                n,
                k,
                l,
                cn,
                paper_check,
                expect_smooth,
            } => json!({
                "n": n, "k": k, "l": l, "cn": cn.to_string(),
                "paper_check": paper_check, "expect_smooth": expect_smooth,
            }),
            Command::Verify {
                n_min,
                n_max,
                k_min,
                k_max,
            } => json!({"n_min": n_min, "n_max": n_max, "k_min": k_min, "k_max": k_max}),
            Command::Family { k_max } => json!({ "k_max": k_max }),
            Command::VeryAmpleBound { n, l } => json!({"n": n, "l": l}),
            Command::ProbeElliptic {
                m,
                tau,
                torsion,
                samples,
                seed,
                tol,
            } => json!({
                "m": m, "tau": pair(tau),
                "torsion": {"a": torsion.a, "b": torsion.b, "order": torsion.order},
                "samples": samples, "seed": seed, "tol": tol,
            }),
            Command::ProbeSurface {
                d,
                omega,
                torsion,
                samples,
                seed,
                tol,
            } => json!({
                "d": d,
                "omega": [[pair(&omega[0][0]), pair(&omega[0][1])], [pair(&omega[1][0]), pair(&omega[1][1])]],
                "torsion": {"a": torsion.a, "b": torsion.b, "order": torsion.order},
                "samples": samples, "seed": seed, "tol": tol,
            }),
        }
    }
}

/// Where the report goes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OutputTarget {
    Stdout,
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub output: OutputTarget,
    pub format: OutputFormat,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            output: OutputTarget::Stdout,
            format: OutputFormat::Json,
        }
    }

    /// Validates parsed flags. Output precedence: `--output`, then
    /// `--output-dir` or its environment variable, then standard output.
    pub fn from_cli(cli: Cli) -> Result<Self, String> {
        let command = match cli.command {
            CliCommand::Invariants(a) => Command::Invariants {
                n: a.n,
                k: a.k,
                l: a.l,
                cn: a.cn,
                paper_check: a.paper_check,
                expect_smooth: a.expect_smooth,
            },
            CliCommand::Verify(a) => {
                if a.n_min > a.n_max || a.k_min > a.k_max {
                    return Err("range bounds must be ordered (min <= max)".into());
                }
                Command::Verify {
                    n_min: a.n_min,
                    n_max: a.n_max,
                    k_min: a.k_min,
                    k_max: a.k_max,
                }
            }
            CliCommand::Family(a) => Command::Family { k_max: a.k_max },
            CliCommand::VeryAmpleBound(a) => Command::VeryAmpleBound { n: a.n, l: a.l },
            CliCommand::ProbeElliptic(a) => {
                check_tol(a.tol)?;
                let torsion = match &a.torsion {
                    Some(list) => TorsionSpec::from_ints(1, &list.0)?,
                    // Cyclic subgroup of order n for the scroll in P^(2n).
                    None => TorsionSpec {
                        a: vec![1],
                        b: vec![0],
                        order: a.m.saturating_sub(1) / 2,
                    },
                };
                if torsion.order == 0 {
                    return Err("cannot derive a torsion order from m; pass --torsion".into());
                }
                Command::ProbeElliptic {
                    m: a.m,
                    tau: a.tau,
                    torsion,
                    samples: a.samples,
                    seed: a.seed,
                    tol: a.tol,
                }
            }
            CliCommand::ProbeSurface(a) => {
                check_tol(a.tol)?;
                let o = &a.omega.0;
                if o.len() != 6 {
                    return Err(format!("--omega needs 6 numbers, got {}", o.len()));
                }
                let (o11, o12, o22) = (
                    Complex64::new(o[0], o[1]),
                    Complex64::new(o[2], o[3]),
                    Complex64::new(o[4], o[5]),
                );
                Command::ProbeSurface {
                    d: a.d,
                    omega: [[o11, o12], [o12, o22]],
                    torsion: TorsionSpec::from_ints(2, &a.torsion.0)?,
                    samples: a.samples,
                    seed: a.seed,
                    tol: a.tol,
                }
            }
        };
        let format = cli.format.unwrap_or(match command {
            Command::Verify { .. } => OutputFormat::Csv,
            _ => OutputFormat::Json,
        });
        let output = match (cli.output, cli.output_dir) {
            (Some(path), _) => OutputTarget::File(path),
            (None, Some(dir)) => {
                OutputTarget::File(dir.join(format!("{}.{}", command.name(), format.extension())))
            }
            (None, None) => OutputTarget::Stdout,
        };
        Ok(RunConfig {
            command,
            output,
            format,
        })
    }
}

fn check_tol(tol: f64) -> Result<(), String> {
    if tol.is_finite() && tol > 0.0 && tol < 1.0 {
        Ok(())
    } else {
        Err(format!("--tol must lie in (0, 1), got {tol}"))
    }
}
