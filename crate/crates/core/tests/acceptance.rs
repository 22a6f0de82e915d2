//! One line per acceptance criterion, at the stated tolerances.
//!
//! Criteria the computation does not reproduce are still run and reported
//! as FAIL; the process only exits nonzero when the set of failing criteria
//! differs from `KNOWN_FAILURES`.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use fanocert::arith::{QuadExt, Rat};
use fanocert::catalog::Suite;
use fanocert::chains::{chain_closed_form, chain_value, threshold_m};
use fanocert::lpsolve::{decide, decide_relaxed, scan_threshold, verify_certificate, FeasibilityResult};
use fanocert::optimize::{check_phi_identity, min_on_triangle, min_quadratic_on_hyperplane, Objective, PhiCase, TriangleRegion};
use fanocert::resgraph;
use fanocert::rfunc::ParamCoeff;
use fanocert::sysmodel::{instantiate, limit_system, LinearSystem};

/// case_2_1_quadric is feasible at M = 5 (witness d0 = 4, m0 = 40/3 among
/// others), so the range [5, 500] cannot be certified.
const KNOWN_FAILURES: &[u32] = &[2];

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn r(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

/// Infeasible with a certificate that verifies, for `inst`.
fn certified_infeasible(inst: &LinearSystem, relaxed: bool) -> bool {
    let res = if relaxed { decide_relaxed(inst) } else { decide(inst) };
    match res {
        Ok(FeasibilityResult::Infeasible(c)) => verify_certificate(inst, &c).unwrap_or(false),
        _ => false,
    }
}

/// `M` values in `lo..=hi` that are not certified infeasible.
fn uncertified(s: &LinearSystem, lo: i64, hi: i64, relaxed: bool) -> Vec<i64> {
    let mut bad: Vec<i64> = (lo..=hi)
        .into_par_iter()
        .filter(|&m| !instantiate(s, &BigInt::from(m)).is_ok_and(|inst| certified_infeasible(&inst, relaxed)))
        .collect();
    bad.sort();
    bad
}

fn criterion_1(suite: &Suite) -> Outcome {
    let t = Instant::now();
    let s = suite.system("case_1_1").unwrap();
    let bad = uncertified(&s, 14, 500, true);
    let limit = certified_infeasible(&limit_system(&s).unwrap(), true);
    let el = t.elapsed();
    let ok = bad.is_empty() && limit && el < Duration::from_secs(5);
    outcome(ok, format!("M in [14,500] uncertified: {bad:?}; limit certified: {limit}; {:.2}s (limit 5s)", el.as_secs_f64()))
}

fn criterion_2(suite: &Suite) -> Outcome {
    let ranges = [
        ("case_2_1_quadric", 5),
        ("case_2_1_hyperplane", 11),
        ("case_2_2_notQ", 13),
        ("case_2_2_notQ_refined", 13),
        ("case_2_3", 6),
        ("case_2_2_inQ", 14),
        ("case_2_2_theta", 14),
        ("case_2_2_final", 14),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, from) in ranges {
        let s = suite.system(name).unwrap();
        let bad = uncertified(&s, from, 500, false);
        if !bad.is_empty() {
            ok = false;
            parts.push(format!("{name} not certified at M={bad:?}"));
        }
    }
    // the regression thresholds for the systems without a stated one
    for name in ["case_2_2_inQ", "case_2_2_theta", "case_2_2_final"] {
        let s = suite.system(name).unwrap();
        let expect = suite.system_entry(name).and_then(|e| e.scan.as_ref()).map(|sc| sc.threshold);
        let got = scan_threshold(&s, 4, 60).minimal_infeasible_m;
        if got != expect {
            ok = false;
        }
        parts.push(format!("{name} minimal M {got:?} (recorded {expect:?})"));
    }
    outcome(ok, parts.join("; "))
}

fn witness_line(name: &str, obj: Objective, region: &str, value: QuadExt, arg: (QuadExt, QuadExt), decimal: f64) -> Outcome {
    let reg = TriangleRegion::parse(region).unwrap();
    let res = match min_on_triangle(obj, &reg) {
        Ok(res) => res,
        Err(e) => return outcome(false, format!("{name}: {e}")),
    };
    let w = res.witness.clone().unwrap();
    let exact = res.value == value && res.argmin == arg && res.verified;
    // the stated decimal is a truncation; the witness is compared with the
    // exact value and the exact value with the decimal at its precision
    let within = (w.lower - value.to_f64()).abs() <= 1e-9 && (w.upper - value.to_f64()).abs() <= 1e-9;
    let decimal_ok = (value.to_f64() - decimal).abs() < 1e-8;
    outcome(
        exact && within && decimal_ok,
        format!("{} at ({}, {}), verified {}; witness [{:.12}, {:.12}] vs {decimal}", res.value, res.argmin.0, res.argmin.1, res.verified, w.lower, w.upper),
    )
}

fn criterion_3() -> Outcome {
    witness_line("plain", Objective::PlainNF, "theta > 1; nu <= 3; 5*theta <= 2*nu", QuadExt::from_rat(r(81, 5)), (QuadExt::from_int(3), QuadExt::from_rat(r(6, 5))), 16.2)
}

fn criterion_4() -> Outcome {
    let value = QuadExt::new(r(10, 1), r(2, 1));
    let arg = (QuadExt::new(r(0, 1), r(2, 1)), QuadExt::sqrt2());
    witness_line("clamped", Objective::ClampedNF, "theta > 1; nu <= 3; 2*theta <= nu", value, arg, 12.82842712)
}

fn criterion_5() -> Outcome {
    let three = check_phi_identity(PhiCase::ThreeLevel);
    let four = check_phi_identity(PhiCase::FourLevel);
    let rem = four.remainder.as_ref().is_some_and(|p| p.has_nonneg_coeffs());
    outcome(three.holds && four.holds && rem, format!("three-level {}; four-level {}; remainder coefficients nonnegative {}", three.holds, four.holds, rem))
}

fn criterion_6(suite: &Suite) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    let mut closed = |name: &str, form: &str, lo: i64| {
        let c = suite.chain(name).unwrap();
        let want: ParamCoeff = form.parse().unwrap();
        let got = chain_closed_form(&c).unwrap();
        let all = (lo..=500).all(|m| chain_value(&c, m).ok() == want.eval_int(m).ok());
        ok &= got == want && all;
        parts.push(format!("{name} = {got}"));
        c
    };
    closed("prop3_1", "9/8", 6);
    closed("prop3_2", "3/2", 6);
    closed("prop3_3_j1", "9/8*(1 - 1/M)", 6);
    closed("prop3_3_j2", "9/8*(1 - 2/M)", 7);
    let sec = closed("sec1_5", "7*(M-2)/(6*M)", 7);
    let t = threshold_m(&sec).unwrap();
    ok &= t.ge == Some(14) && t.certified;
    parts.push(format!("sec1_5 threshold {:?}", t.ge));
    let cor = threshold_m(&suite.chain("cor1_1").unwrap()).unwrap();
    ok &= cor.ge == Some(13) && cor.certified;
    parts.push(format!("cor1_1 threshold {:?}", cor.ge));
    outcome(ok, parts.join("; "))
}

fn criterion_7() -> Outcome {
    let ex = resgraph::exhaustive_corpus(6);
    let rnd = resgraph::random_corpus(20131001, 1000, 12);
    let all = ex.clone().merge(&rnd);
    outcome(
        all.violations() == 0 && rnd.graphs == 1000,
        format!(
            "{} exhaustive + {} random graphs; dp {} / preserve {} / p1 increase {} / bound {} of {} checked",
            ex.graphs, rnd.graphs, all.dp_mismatches, all.preserve_violations, all.p1_increases, all.bound_violations, all.bound_checked
        ),
    )
}

/// Projected gradient on the hyperplane in the weighted metric.
fn qp_oracle(p: &[f64], c: f64, nu1: f64) -> f64 {
    let tail = &p[1..];
    let sp: f64 = tail.iter().sum();
    let mut x: Vec<f64> = (0..tail.len()).map(|i| if i == 0 { (c - p[0] * nu1) / tail[0] } else { 0.0 }).collect();
    for _ in 0..10_000 {
        let mean = tail.iter().zip(&x).map(|(p, x)| p * x).sum::<f64>() / sp;
        let mut moved = 0.0f64;
        for xi in x.iter_mut() {
            let d = -2.0 * (*xi - mean);
            *xi += 0.25 * d;
            moved = moved.max(d.abs());
        }
        if moved < 1e-15 {
            break;
        }
    }
    p[0] * nu1 * nu1 + tail.iter().zip(&x).map(|(p, x)| p * x * x).sum::<f64>()
}

fn criterion_8(suite: &Suite) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let k = rng.gen_range(2..10);
        let p: Vec<Rat> = (0..k).map(|_| r(rng.gen_range(1..30), rng.gen_range(1..5))).collect();
        let c = r(rng.gen_range(1..300), rng.gen_range(1..7));
        let nu1 = r(rng.gen_range(0..30), rng.gen_range(1..7));
        let (_, exact) = min_quadratic_on_hyperplane(&p, &c, &nu1).unwrap();
        let f = |x: &Rat| x.to_f64().unwrap();
        let pf: Vec<f64> = p.iter().map(f).collect();
        let e = f(&exact);
        worst = worst.max((qp_oracle(&pf, f(&c), f(&nu1)) - e).abs() / e.abs().max(1.0));
    }
    let t = Instant::now();
    let a = suite.verify_all();
    let el = t.elapsed();
    let b = suite.verify_all();
    let same = a.to_json() == b.to_json();
    let ok = worst <= 1e-9 && el < Duration::from_secs(60) && same && a.verdict == fanocert::catalog::Verdict::Pass;
    outcome(ok, format!("QP oracle worst relative gap {worst:.2e}; verify-all {} in {:.1}s, deterministic {same}", a.verdict.as_str(), el.as_secs_f64()))
}

fn main() {
    let suite = Suite::embedded();
    let criteria: Vec<(u32, &str, Box<dyn Fn() -> Outcome>)> = vec![
        (1, "plane-section LP infeasible for M in [14,500] and the limit", Box::new(|| criterion_1(&suite))),
        (2, "threshold suite over the stated ranges", Box::new(|| criterion_2(&suite))),
        (3, "plain objective minimum 81/5", Box::new(criterion_3)),
        (4, "clamped objective minimum 10+2*sqrt2", Box::new(criterion_4)),
        (5, "three- and four-level identities", Box::new(criterion_5)),
        (6, "hypertangent chain suite", Box::new(|| criterion_6(&suite))),
        (7, "resolution graph corpus", Box::new(criterion_7)),
        (8, "hyperplane QP oracle and full-suite determinism", Box::new(|| criterion_8(&suite))),
    ];
    let mut failed = Vec::new();
    for (n, name, run) in &criteria {
        let o = run();
        println!("criterion {n}: {} - {name}: {}", if o.ok { "PASS" } else { "FAIL" }, o.detail);
        if !o.ok {
            failed.push(*n);
        }
    }
    if failed != KNOWN_FAILURES {
        eprintln!("failing criteria {failed:?}, expected exactly {KNOWN_FAILURES:?}");
        std::process::exit(1);
    }
}
