//! Frozen values: thresholds found by scanning, witnesses, certificates.

use num_bigint::BigInt;

use fanocert::arith::{QuadExt, Rat};
use fanocert::catalog::Suite;
use fanocert::lpsolve::{decide, parse_certificate, scan_threshold, verify_certificate, write_certificate, FeasibilityResult};
use fanocert::sysmodel::{instantiate, limit_system};

/// (system, exact threshold, relaxed threshold) over M in [4, 60].
const THRESHOLDS: &[(&str, i64, i64)] = &[
    ("case_1_1", 12, 12),
    ("case_2_1_general", 4, 4),
    ("case_2_1_hyperplane", 10, 11),
    ("case_2_1_quadric", 6, 6),
    ("case_2_2_final", 9, 9),
    ("case_2_2_inQ", 9, 9),
    ("case_2_2_notQ", 12, 13),
    ("case_2_2_notQ_refined", 12, 13),
    ("case_2_2_theta", 12, 12),
    ("case_2_3", 6, 7),
];

#[test]
fn scanned_thresholds() {
    let suite = Suite::embedded();
    for &(name, exact, relaxed) in THRESHOLDS {
        let r = scan_threshold(&suite.system(name).unwrap(), 4, 60);
        assert_eq!(r.minimal_infeasible_m, Some(exact), "{name}");
        assert_eq!(r.minimal_relaxed_infeasible_m, Some(relaxed), "{name}");
        assert!(r.tail.unwrap().is_certified(), "{name}");
    }
}

#[test]
fn quadric_witness_at_five() {
    let suite = Suite::embedded();
    let s = instantiate(&suite.system("case_2_1_quadric").unwrap(), &BigInt::from(5)).unwrap();
    let FeasibilityResult::Feasible { point } = decide(&s).unwrap() else { panic!("expected a feasible point at M = 5") };
    let x: Vec<QuadExt> = point.iter().map(|(_, v)| v.clone()).collect();
    assert!(s.is_satisfied_by(&x).unwrap());
}

#[test]
fn certificates_survive_text_round_trip() {
    let suite = Suite::embedded();
    for name in suite.system_names() {
        let s = suite.system(&name).unwrap();
        for inst in [instantiate(&s, &BigInt::from(30)).unwrap(), limit_system(&s).unwrap()] {
            let FeasibilityResult::Infeasible(c) = decide(&inst).unwrap() else { panic!("{name} feasible") };
            let text = write_certificate(&inst, &c).unwrap();
            let back = parse_certificate(&text).unwrap();
            assert_eq!(back, c, "{name}");
            assert!(verify_certificate(&inst, &back).unwrap(), "{name}");
        }
    }
}

#[test]
fn sqrt2_decimal() {
    let v = QuadExt::new(Rat::from_integer(10.into()), Rat::from_integer(2.into()));
    assert_eq!(format!("{:.8}", v.to_f64()), "12.82842712");
}
