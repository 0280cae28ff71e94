//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Runtime bounds are part of each criterion.

use std::f64::consts::PI;
use std::process::Command;
use std::time::{Duration, Instant};

use abscroll::{Payload, ReportEnvelope};
use abscroll_core::scroll_invariants::normal_chern_class;
use abscroll_core::theorem_verifier::{sweep, termwise_check, Relation};
use abscroll_core::theta_geometry::{ThetaEmbedding, TorusPoint};
use abscroll_core::trunc_ring::{RingShape, TruncPoly};
use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<(), String>;
/// Number, description, runtime bound in seconds, check.
type Criterion = (u32, &'static str, Option<u64>, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Runs the binary and parses its JSON report.
fn cli(args: &[&str]) -> Result<(i32, ReportEnvelope), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_abscroll"))
        .args(args)
        .env_remove("ABSCROLL_OUTPUT_DIR")
        .output()
        .map_err(|e| format!("cannot spawn abscroll: {e}"))?;
    let code = out.status.code().unwrap_or(-1);
    let env: ReportEnvelope = serde_json::from_slice(&out.stdout).map_err(|e| {
        format!(
            "exit {code}, unparsable output ({e}): {}",
            String::from_utf8_lossy(&out.stderr)
        )
    })?;
    Ok((code, env))
}

fn scroll(args: &[&str]) -> Result<(i32, abscroll::report::ScrollReportDto), String> {
    match cli(args)? {
        (
            code,
            ReportEnvelope {
                payload: Payload::ScrollReport(r),
                ..
            },
        ) => Ok((code, r)),
        (_, e) => Err(format!("unexpected payload {:?}", e.payload)),
    }
}

/// Binomial coefficient by the multiplicative formula.
fn choose(a: u64, b: u64) -> BigUint {
    if b > a {
        return BigUint::from(0u32);
    }
    (0..b).fold(BigUint::from(1u32), |acc, i| acc * (a - i) / (i + 1))
}

fn criterion_1() -> Check {
    let (code, r) = scroll(&[
        "invariants",
        "--n",
        "2",
        "--k",
        "2",
        "--l",
        "7",
        "--cn",
        "14",
    ])?;
    ensure(code == 0, || format!("exit code {code}"))?;
    ensure(r.deg_y == "21", || format!("deg_Y = {}", r.deg_y))?;
    ensure(r.double_point == "0", || {
        format!("double_point = {}", r.double_point)
    })
}

fn criterion_2() -> Check {
    let main = sweep(1..=60, 1..=60).map_err(|e| e.to_string())?;
    let low = sweep(1..=2, 1..=200).map_err(|e| e.to_string())?;
    ensure(main.len() == 3600 && low.len() == 400, || {
        "wrong grid size".into()
    })?;
    for s in [&main, &low] {
        if let Some(r) = s.classification_violations().first() {
            return Err(format!("n = {}, k = {}: {}", r.n, r.k, r.relation));
        }
        for r in &s.records {
            let expected = if r.n <= 2 { Relation::Eq } else { Relation::Gt };
            ensure(r.relation == expected, || {
                format!("n = {}, k = {}", r.n, r.k)
            })?;
        }
    }
    Ok(())
}

fn criterion_3() -> Check {
    for n in 1..=30u32 {
        for k in 1..=30u32 {
            let l = 2 * n + 2 * k - 1;
            let engine = normal_chern_class(n, k, l)
                .and_then(|p| Ok(p.coefficient(n, k - 1)?))
                .map_err(|e| format!("n = {n}, k = {k}: {e}"))?;
            let (nu, ku) = (u64::from(n), u64::from(k));
            let closed = BigInt::from(choose(nu + ku - 1, nu) * choose(2 * nu + 2 * ku - 1, nu));
            ensure(engine == BigRational::from_integer(closed.clone()), || {
                format!("n = {n}, k = {k}: engine {engine} vs {closed}")
            })?;
        }
    }
    Ok(())
}

fn criterion_4() -> Check {
    for (n, k, l, cn, expected) in [
        ("1", "2", "5", "5", "0"),
        ("2", "2", "7", "14", "0"),
        ("3", "2", "9", "54", "2592"),
    ] {
        let (_, r) = scroll(&["invariants", "--n", n, "--k", k, "--l", l, "--cn", cn])?;
        ensure(r.double_point == expected, || {
            format!(
                "({n},{k},{l},{cn}): D = {}, expected {expected}",
                r.double_point
            )
        })?;
    }
    Ok(())
}

fn criterion_5() -> Check {
    for n in 3..=60u32 {
        for k in 1..=60u32 {
            let rec = termwise_check(n, k);
            ensure(rec.terms.len() == n as usize - 1, || {
                format!("n = {n}, k = {k}: term count")
            })?;
            for t in &rec.terms {
                let (nn, kk, ll) = (u64::from(n), u64::from(k), u64::from(t.l));
                let lhs = (nn + kk - ll + 1) * ll;
                let rhs = 2 * nn + 2 * kk - ll;
                ensure(lhs >= rhs && t.holds, || {
                    format!("n = {n}, k = {k}, l = {}", t.l)
                })?;
                ensure(
                    (lhs >= rhs) == (nn + kk >= ll) && t.reduced_holds == (nn + kk >= ll),
                    || format!("n = {n}, k = {k}, l = {}: equivalence", t.l),
                )?;
            }
        }
    }
    Ok(())
}

fn criterion_6() -> Check {
    let (code, env) = cli(&["family", "--k-max", "10"])?;
    let Payload::Family(f) = env.payload else {
        return Err("unexpected payload".into());
    };
    ensure(code == 0, || format!("exit code {code}"))?;
    ensure(f.reports.len() == 9, || {
        format!("{} reports", f.reports.len())
    })?;
    for (r, k) in f.reports.iter().zip(2u64..) {
        let deg = ((k + 1) * (2 * k + 3)).to_string();
        ensure(
            r.k as u64 == k && r.deg_y == deg && r.double_point == "0",
            || format!("k = {k}: deg_Y = {}, D = {}", r.deg_y, r.double_point),
        )?;
    }
    Ok(())
}

fn criterion_7() -> Check {
    for (m, order, samples) in [("5", "2", "200"), ("7", "3", "150"), ("9", "4", "100")] {
        let torsion = format!("1,0,{order}");
        let (code, env) = cli(&[
            "probe-elliptic",
            "--m",
            m,
            "--tau",
            "0,1",
            "--torsion",
            &torsion,
            "--samples",
            samples,
            "--seed",
            "42",
        ])?;
        let Payload::Probe(p) = env.payload else {
            return Err("unexpected payload".into());
        };
        let margin = p.min_margin.unwrap_or(0.0);
        ensure(
            code == 0
                && p.totals.fail == 0
                && p.totals.inconclusive == 0
                && !p.cluster_probes_skipped
                && margin > 1e-6,
            || {
                format!(
                    "m = {m}: exit {code}, fail {}, inconclusive {}, margin {margin:e}",
                    p.totals.fail, p.totals.inconclusive
                )
            },
        )?;
    }
    Ok(())
}

fn rel_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    let num: f64 = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt();
    let den: f64 = b.iter().map(|y| y.norm_sqr()).sum::<f64>().sqrt();
    num / den
}

fn criterion_8() -> Check {
    let tau = Complex64::new(0.0, 1.0);
    let m = 5u32;
    let emb = ThetaEmbedding::elliptic(tau, m).map_err(|e| e.to_string())?;
    let eval = |z: Complex64| {
        emb.evaluate_raw(&TorusPoint::Elliptic(z), None)
            .map_err(|e| e.to_string())
    };
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let (mut worst_qp, mut worst_fd) = (0.0f64, 0.0f64);
    let h = 1e-5;
    for _ in 0..50 {
        let z = Complex64::new(rng.gen(), rng.gen());
        let base = eval(z)?;
        let shifted_1 = eval(z + 1.0)?;
        let shifted_tau = eval(z + tau)?;
        let factor = (-Complex64::i() * PI * f64::from(m) * tau
            - 2.0 * Complex64::i() * PI * f64::from(m) * z)
            .exp();
        let expected: Vec<Complex64> = base.values.iter().map(|v| v * factor).collect();
        worst_qp = worst_qp
            .max(rel_diff(&shifted_1.values, &base.values))
            .max(rel_diff(&shifted_tau.values, &expected));
        let (plus, minus) = (eval(z + h)?, eval(z - h)?);
        let fd: Vec<Complex64> = plus
            .values
            .iter()
            .zip(&minus.values)
            .map(|(p, q)| (p - q) / (2.0 * h))
            .collect();
        worst_fd = worst_fd.max(rel_diff(&fd, &base.derivatives));
    }
    ensure(worst_qp < 1e-9 && worst_fd < 1e-6, || {
        format!("quasi-periodicity {worst_qp:e}, derivatives {worst_fd:e}")
    })
}

fn random_poly(rng: &mut ChaCha8Rng, shape: RingShape) -> TruncPoly {
    let terms: Vec<(u32, u32, BigRational)> = (0..rng.gen_range(0..8))
        .map(|_| {
            let q = BigRational::new(
                BigInt::from(rng.gen_range(-50i64..=50)),
                BigInt::from(rng.gen_range(1i64..=12)),
            );
            (
                rng.gen_range(0..=shape.c_cap),
                rng.gen_range(0..=shape.h_cap),
                q,
            )
        })
        .collect();
    TruncPoly::from_terms(shape, terms).expect("terms within shape")
}

fn criterion_9() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for case in 0..1000 {
        let shape = RingShape::new(rng.gen_range(0..=4), rng.gen_range(0..=4));
        let (a, b, c) = (
            random_poly(&mut rng, shape),
            random_poly(&mut rng, shape),
            random_poly(&mut rng, shape),
        );
        let fail = |what: &str| format!("case {case}: {what} in shape {shape:?}");
        ensure(&a * &b == &b * &a, || fail("commutativity"))?;
        ensure(&(&a * &b) * &c == &a * &(&b * &c), || fail("associativity"))?;
        ensure(&a * &(&b + &c) == &(&a * &b) + &(&a * &c), || {
            fail("distributivity")
        })?;
        let unit = &(&a - &TruncPoly::constant(shape, a.constant_term()))
            + &TruncPoly::constant(
                shape,
                BigRational::from_integer(BigInt::from(rng.gen_range(1i64..=9))),
            );
        let inv = unit.inverse().map_err(|e| fail(&e.to_string()))?;
        ensure(&unit * &inv == TruncPoly::one(shape), || {
            fail("unit inversion")
        })?;
    }
    Ok(())
}

fn criterion_10() -> Check {
    for (l, expected) in [("13", 5), ("8", 1)] {
        let (code, env) = cli(&["very-ample-bound", "--n", "3", "--l", l])?;
        let Payload::Bound(b) = env.payload else {
            return Err("unexpected payload".into());
        };
        ensure(code == 0 && b.max_odd_k == expected, || {
            format!("l = {l}: got {} (exit {code})", b.max_odd_k)
        })?;
    }
    Ok(())
}

fn main() {
    // Runtime bounds in seconds, where one is part of the criterion.
    let criteria: [Criterion; 10] = [
        (
            1,
            "degree-21 example: deg_Y = 21, double points = 0",
            Some(1),
            criterion_1,
        ),
        (2, "equality exactly for n in {1, 2}", Some(10), criterion_2),
        (
            3,
            "engine top Chern coefficient matches closed form, n, k <= 30",
            Some(30),
            criterion_3,
        ),
        (4, "double point numbers 0, 0, 2592", None, criterion_4),
        (
            5,
            "termwise reduction sound and equivalent to n + k >= l",
            None,
            criterion_5,
        ),
        (
            6,
            "family k = 2..10: D = 0, deg_Y = (k+1)(2k+3)",
            None,
            criterion_6,
        ),
        (
            7,
            "elliptic scroll probes m = 5, 7, 9",
            Some(60),
            criterion_7,
        ),
        (
            8,
            "theta quasi-periodicity and derivatives",
            None,
            criterion_8,
        ),
        (
            9,
            "ring properties, 1000 seeded cases",
            Some(5),
            criterion_9,
        ),
        (
            10,
            "very ample bound n = 3, l = 13 and l = 8",
            None,
            criterion_10,
        ),
    ];
    let mut failures = 0;
    for (id, name, limit, f) in criteria {
        let start = Instant::now();
        let result = f();
        let elapsed = start.elapsed();
        let verdict = match result {
            Ok(()) => match limit {
                Some(secs) if elapsed > Duration::from_secs(secs) => Err(format!(
                    "took {:.2} s, limit {secs} s",
                    elapsed.as_secs_f64()
                )),
                _ => Ok(()),
            },
            Err(e) => Err(e),
        };
        match verdict {
            Ok(()) => println!("PASS [{id:>2}] {name} ({:.2} s)", elapsed.as_secs_f64()),
            Err(e) => {
                failures += 1;
                println!(
                    "FAIL [{id:>2}] {name} ({:.2} s): {e}",
                    elapsed.as_secs_f64()
                );
            }
        }
    }
    println!("acceptance: {} of 10 criteria passed", 10 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
