use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_fanocert"));
    c.env_remove("FANOCERT_DATA_DIR");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data")
}

fn copy_dir(from: &Path, to: &Path) {
    std::fs::create_dir_all(to).unwrap();
    for e in std::fs::read_dir(from).unwrap() {
        let p = e.unwrap().path();
        let dest = to.join(p.file_name().unwrap());
        if p.is_dir() {
            copy_dir(&p, &dest);
        } else {
            std::fs::copy(&p, &dest).unwrap();
        }
    }
}

fn validate(json: &str) {
    let schema_src = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas/report.schema.json")).unwrap();
    let schema: serde_json::Value = serde_json::from_str(&schema_src).unwrap();
    let v: serde_json::Value = serde_json::from_str(json).unwrap();
    let compiled = jsonschema::JSONSchema::compile(&schema).unwrap();
    if let Err(errs) = compiled.validate(&v) {
        let msgs: Vec<String> = errs.map(|e| format!("{e} at {}", e.instance_path)).collect();
        panic!("report does not match the schema: {msgs:?}");
    };
}

#[test]
fn check_exit_codes() {
    let o = run(&["check", "case_1_1", "--M", "15"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("infeasible"));
    assert_eq!(code(&run(&["check", "case_1_1", "--M", "limit"])), 0);
    assert_eq!(code(&run(&["check", "no_such_system", "--M", "10"])), 2);
    assert_eq!(code(&run(&["check", "case_1_1", "--M", "ten"])), 2);
    assert_eq!(code(&run(&["check", "case_1_1", "--M", "3"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
}

#[test]
fn check_json_matches_schema() {
    let o = run(&["--format", "json", "check", "case_2_1_quadric", "--M", "5"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    validate(&s);
    assert!(s.contains("\"observed\": \"feasible\""));
}

#[test]
fn certificate_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(code(&run(&["check", "case_2_3", "--M", "40", "--out", out])), 0);
    let cert = dir.path().join("certs/case_2_3_M40.cert");
    assert_eq!(code(&run(&["verify-cert", cert.to_str().unwrap()])), 0);
    // scale one multiplier: the combination no longer cancels
    let text = std::fs::read_to_string(&cert).unwrap();
    let target = text.lines().find(|l| l.starts_with("multiplier c")).unwrap().to_string();
    let (head, _) = target.split_once('=').unwrap();
    let bad = text.replace(&target, &format!("{head}= 1000"));
    std::fs::write(&cert, bad).unwrap();
    assert_eq!(code(&run(&["verify-cert", cert.to_str().unwrap()])), 1);
    assert_eq!(code(&run(&["verify-cert", "/nonexistent.cert"])), 2);
}

#[test]
fn scan_reports_threshold() {
    let o = run(&["scan", "case_2_2_notQ", "10", "60"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.contains("infeasible from M = 12; relaxed from M = 13"), "{s}");
    assert!(s.contains("certified infeasible for every M >= 12"));
    let o = run(&["scan", "case_1_1", "5", "13"]);
    assert!(stdout(&o).lines().any(|l| l.trim_start().starts_with("5 ") && l.contains("feasible")));
    assert_eq!(code(&run(&["scan", "case_1_1", "2", "13"])), 2);
}

#[test]
fn minimize_chain_graph() {
    let o = run(&["minimize", "PlainNF", "theta > 1; nu <= 3; 5*theta <= 2*nu"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("minimum   81/5"));
    let o = run(&["--format", "json", "minimize", "ClampedNF", "theta > 1; nu <= 3; 2*theta <= nu"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["value"], "10 + 2*sqrt2");
    assert_eq!(code(&run(&["minimize", "Other", "nu <= 3"])), 2);
    let o = run(&["chain", "sec1_5"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("first M with value >= 1: 14"));
    assert_eq!(code(&run(&["chain", "nope"])), 2);
    let g = "K=3; L=2; delta=1,1,1; arrows=(3>2),(3>1),(2>1)";
    assert!(stdout(&run(&["graph", "paths", g])).contains("p(3,1) = 2"));
    assert_eq!(stdout(&run(&["graph", "remove", g])).trim(), "K=3; L=2; delta=1,1,1; arrows=(3>2),(2>1)");
    assert!(stdout(&run(&["graph", "nf", "K=2; L=2; delta=1,2; arrows=(2>1)", "--nu", "3,3"])).contains("6 > 5"));
    assert_eq!(code(&run(&["graph", "paths", "K=2; L=2; delta=1,1; arrows="])), 2);
}

#[test]
fn verify_all_is_deterministic_and_valid() {
    let a = run(&["--format", "json", "verify-all"]);
    let b = run(&["--format", "json", "verify-all"]);
    assert_eq!(code(&a), 0, "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
    let s = stdout(&a);
    validate(&s);
    let v: serde_json::Value = serde_json::from_str(&s).unwrap();
    for r in v["records"].as_array().unwrap() {
        assert!(!r["anchor"].as_str().unwrap().is_empty());
    }
}

#[test]
fn perturbed_bound_fails_only_its_system() {
    let dir = tempfile::tempdir().unwrap();
    copy_dir(&data_dir(), dir.path());
    let sys = dir.path().join("systems/case_1_1.sys");
    let src = std::fs::read_to_string(&sys).unwrap();
    assert!(src.contains("4*M/(M-3)*d1"));
    std::fs::write(&sys, src.replace("4*M/(M-3)*d1", "5*M/(M-3)*d1")).unwrap();
    let o = bin().args(["--format", "json", "verify-all"]).env("FANOCERT_DATA_DIR", dir.path()).output().unwrap();
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"], "FAIL");
    let failed: Vec<&str> = v["records"].as_array().unwrap().iter().filter(|r| r["status"] == "FAIL").map(|r| r["id"].as_str().unwrap()).collect();
    assert!(!failed.is_empty());
    assert!(failed.iter().all(|id| id.contains("case_1_1")), "{failed:?}");
}
