//! The shipped catalog: every system, chain, minimization, identity,
//! pipeline and graph check, with the results a run must reproduce.
//!
//! Data is compiled into the library; setting `FANOCERT_DATA_DIR` to a
//! directory with the same layout (`catalog.toml`, `systems/*.sys`,
//! `chains/*.chain`, `pipelines/*.pipe`, `graphs/*.graph`) replaces it.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{QuadExt, Rat};
use crate::chains::{chain_closed_form, chain_value, parse_chain, threshold_m, ChainError, ChainSpec};
use crate::lpsolve::{decide, scan_threshold, write_certificate, FeasibilityResult, TailCertificate};
use crate::optimize::{check_phi_identity, check_phi_identity_at, min_on_triangle, min_quadratic_on_hyperplane, run_pipeline};
use crate::optimize::{Objective, OptError, PhiCase, TriangleRegion};
use crate::resgraph::{self, GraphError, Levels, NfKind, ResolutionGraph};
use crate::rfunc::ParamCoeff;
use crate::sysmodel::{instantiate, limit_system, parse_system, LinearSystem, MValue, SysError};

pub const DATA_DIR_ENV: &str = "FANOCERT_DATA_DIR";

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("catalog.toml: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("no {kind} named `{name}` in the catalog")]
    Missing { kind: &'static str, name: String },
    #[error("{file}: {msg}")]
    Data { file: String, msg: String },
    #[error(transparent)]
    System(#[from] SysError),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Opt(#[from] OptError),
}

macro_rules! embed {
    ($($path:literal),* $(,)?) => {
        &[$(($path, include_str!(concat!("../data/", $path)))),*]
    };
}

const EMBEDDED: &[(&str, &str)] = embed![
    "catalog.toml",
    "systems/case_1_1.sys",
    "systems/case_2_1_general.sys",
    "systems/case_2_1_hyperplane.sys",
    "systems/case_2_1_quadric.sys",
    "systems/case_2_2_final.sys",
    "systems/case_2_2_inQ.sys",
    "systems/case_2_2_notQ.sys",
    "systems/case_2_2_notQ_refined.sys",
    "systems/case_2_2_theta.sys",
    "systems/case_2_3.sys",
    "chains/cor1_1.chain",
    "chains/prop1_3.chain",
    "chains/prop3_1.chain",
    "chains/prop3_2.chain",
    "chains/prop3_3_j1.chain",
    "chains/prop3_3_j2.chain",
    "chains/sec1_5.chain",
    "pipelines/identity.pipe",
    "pipelines/prop1_3.pipe",
    "pipelines/sec1_5.pipe",
    "graphs/small.graph",
];

/// Raw data files keyed by their path relative to the data directory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DataSet {
    files: BTreeMap<String, String>,
}

impl DataSet {
    pub fn embedded() -> Self {
        DataSet { files: EMBEDDED.iter().map(|(p, s)| (p.to_string(), s.to_string())).collect() }
    }

    pub fn from_dir(dir: &Path) -> Result<Self, CatalogError> {
        let mut files = BTreeMap::new();
        files.insert("catalog.toml".to_string(), std::fs::read_to_string(dir.join("catalog.toml"))?);
        for (sub, ext) in [("systems", "sys"), ("chains", "chain"), ("pipelines", "pipe"), ("graphs", "graph")] {
            let d = dir.join(sub);
            if !d.is_dir() {
                continue;
            }
            for e in std::fs::read_dir(&d)? {
                let p = e?.path();
                if p.extension().and_then(|x| x.to_str()) == Some(ext) {
                    let name = p.file_name().and_then(|n| n.to_str()).unwrap_or_default();
                    files.insert(format!("{sub}/{name}"), std::fs::read_to_string(&p)?);
                }
            }
        }
        Ok(DataSet { files })
    }

    /// The directory named by `FANOCERT_DATA_DIR`, else the embedded data.
    pub fn from_env() -> Result<Self, CatalogError> {
        match std::env::var_os(DATA_DIR_ENV) {
            Some(d) if !d.is_empty() => Self::from_dir(Path::new(&d)),
            _ => Ok(Self::embedded()),
        }
    }

    pub fn get(&self, path: &str) -> Option<&str> {
        self.files.get(path).map(String::as_str)
    }

    pub fn files(&self) -> impl Iterator<Item = (&str, &str)> {
        self.files.iter().map(|(p, s)| (p.as_str(), s.as_str()))
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Catalog {
    #[serde(default)]
    pub system: Vec<SystemEntry>,
    #[serde(default)]
    pub minimize: Vec<MinimizeEntry>,
    #[serde(default)]
    pub hyperplane: Vec<HyperplaneEntry>,
    #[serde(default)]
    pub phi: Vec<PhiEntry>,
    #[serde(default)]
    pub chain: Vec<ChainEntry>,
    #[serde(default)]
    pub pipeline: Vec<PipelineEntry>,
    #[serde(default)]
    pub graph: Vec<GraphEntry>,
    #[serde(default)]
    pub corpus: Vec<CorpusEntry>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemEntry {
    pub name: String,
    pub anchor: String,
    #[serde(default)]
    pub checks: Vec<PointCheck>,
    pub scan: Option<ScanEntryExpect>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointCheck {
    /// An integer or `limit`.
    pub m: String,
    pub expect: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanEntryExpect {
    pub lo: i64,
    pub hi: i64,
    pub threshold: i64,
    pub relaxed_threshold: i64,
    pub claim_from: Option<i64>,
    pub claim: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MinimizeEntry {
    pub id: String,
    pub anchor: String,
    pub objective: String,
    pub region: String,
    pub value: String,
    pub argmin: [String; 2],
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HyperplaneEntry {
    pub id: String,
    pub anchor: String,
    pub weights: Vec<String>,
    pub c: String,
    pub nu1: String,
    pub theta: String,
    pub value: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhiEntry {
    pub id: String,
    pub anchor: String,
    pub case: String,
    pub m1: Option<String>,
    pub m2: Option<String>,
    pub expect: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainEntry {
    pub name: String,
    pub anchor: String,
    pub closed_form: String,
    pub range: [i64; 2],
    pub threshold_ge: Option<i64>,
    pub threshold_gt: Option<i64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineEntry {
    pub id: String,
    pub anchor: String,
    pub expect: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphEntry {
    pub id: String,
    pub anchor: String,
    /// `from>to=count`
    #[serde(default)]
    pub paths: Vec<String>,
    /// The same, after [`resgraph::remove_arrows`].
    #[serde(default)]
    pub removed_paths: Vec<String>,
    pub sigma: Option<SigmaExpect>,
    #[serde(default)]
    pub nf: Vec<NfExpect>,
    pub counting_bound: Option<BoundExpect>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SigmaExpect {
    pub levels: String,
    pub p1: String,
    pub groups: Vec<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NfExpect {
    pub kind: String,
    pub nu: Vec<String>,
    pub lhs: String,
    pub rhs: String,
    pub satisfied: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundExpect {
    pub nu: Vec<String>,
    pub value: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusEntry {
    pub id: String,
    pub anchor: String,
    pub kind: String,
    pub k_max: usize,
    pub count: Option<usize>,
    pub seed: Option<u64>,
    pub violations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckRecord {
    pub id: String,
    pub anchor: String,
    pub expected: String,
    pub observed: String,
    pub status: Verdict,
    pub values: BTreeMap<String, String>,
    /// Path of the certificate, relative to the report directory.
    pub certificate: Option<String>,
    #[serde(skip)]
    pub certificate_text: Option<String>,
}

impl CheckRecord {
    fn new(id: String, anchor: &str, expected: String, observed: String) -> Self {
        let status = Verdict::from_bool(expected == observed);
        CheckRecord { id, anchor: anchor.to_string(), expected, observed, status, values: BTreeMap::new(), certificate: None, certificate_text: None }
    }

    fn error(id: String, anchor: &str, expected: String, e: impl std::fmt::Display) -> Self {
        CheckRecord::new(id, anchor, expected, format!("error: {e}"))
    }

    fn value(mut self, k: &str, v: impl ToString) -> Self {
        self.values.insert(k.to_string(), v.to_string());
        self
    }

    fn cert(mut self, file: String, text: String) -> Self {
        self.certificate = Some(format!("certs/{file}"));
        self.certificate_text = Some(text);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunReport {
    pub tool: String,
    pub version: String,
    pub verdict: Verdict,
    pub records: Vec<CheckRecord>,
}

impl RunReport {
    pub fn new(records: Vec<CheckRecord>) -> Self {
        let verdict = Verdict::from_bool(records.iter().all(|r| r.status == Verdict::Pass));
        RunReport { tool: "fanocert".into(), version: env!("CARGO_PKG_VERSION").into(), verdict, records }
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| r.status == Verdict::Fail)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises") + "\n"
    }

    /// Human-readable table.
    pub fn to_table(&self) -> String {
        let w = self.records.iter().map(|r| r.id.len()).max().unwrap_or(2).max(5);
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.tool, self.version);
        let _ = writeln!(out, "{:<w$}  {:<8}{}", "check", "status", "observed");
        for r in &self.records {
            let _ = writeln!(out, "{:<w$}  {:<8}{}", r.id, r.status.as_str(), r.observed);
            if r.status == Verdict::Fail {
                let _ = writeln!(out, "{:<w$}  {:<8}expected: {}", "", "", r.expected);
            }
            let _ = writeln!(out, "{:<w$}  {:<8}[{}]", "", "", r.anchor);
        }
        let fails = self.failures().count();
        let _ = writeln!(out, "verdict: {} ({} checks, {} failed)", self.verdict.as_str(), self.records.len(), fails);
        out
    }
}

/// A parsed catalog together with its data files.
#[derive(Debug, Clone)]
pub struct Suite {
    pub data: DataSet,
    pub catalog: Catalog,
}

fn parse_rat(file: &str, s: &str) -> Result<Rat, CatalogError> {
    let q: QuadExt = s.parse().map_err(|e| CatalogError::Data { file: file.into(), msg: format!("`{s}`: {e}") })?;
    q.as_rat().cloned().ok_or_else(|| CatalogError::Data { file: file.into(), msg: format!("`{s}` is not rational") })
}

fn parse_quad(file: &str, s: &str) -> Result<QuadExt, CatalogError> {
    s.parse().map_err(|e| CatalogError::Data { file: file.into(), msg: format!("`{s}`: {e}") })
}

/// `"limit"` or an integer.
pub fn parse_m(s: &str) -> Option<MValue> {
    if s.trim() == "limit" {
        return Some(MValue::Limit);
    }
    s.trim().parse::<BigInt>().ok().map(MValue::Int)
}

impl Suite {
    pub fn new(data: DataSet) -> Result<Self, CatalogError> {
        let src = data.get("catalog.toml").ok_or_else(|| CatalogError::Missing { kind: "file", name: "catalog.toml".into() })?;
        let catalog = toml::from_str(src)?;
        Ok(Suite { data, catalog })
    }

    pub fn embedded() -> Self {
        Suite::new(DataSet::embedded()).expect("embedded catalog is valid")
    }

    pub fn from_env() -> Result<Self, CatalogError> {
        Suite::new(DataSet::from_env()?)
    }

    pub fn system(&self, name: &str) -> Result<LinearSystem, CatalogError> {
        let path = format!("systems/{name}.sys");
        let src = self.data.get(&path).ok_or_else(|| CatalogError::Missing { kind: "system", name: name.into() })?;
        Ok(parse_system(name, src)?)
    }

    pub fn system_names(&self) -> Vec<String> {
        self.catalog.system.iter().map(|s| s.name.clone()).collect()
    }

    pub fn system_entry(&self, name: &str) -> Option<&SystemEntry> {
        self.catalog.system.iter().find(|s| s.name == name)
    }

    pub fn chain(&self, name: &str) -> Result<ChainSpec, CatalogError> {
        let src = self.data.get(&format!("chains/{name}.chain")).ok_or_else(|| CatalogError::Missing { kind: "chain", name: name.into() })?;
        Ok(parse_chain(src)?)
    }

    pub fn pipeline_source(&self, id: &str) -> Result<&str, OptError> {
        self.data.get(&format!("pipelines/{id}.pipe")).ok_or_else(|| OptError::UnknownPipeline(id.into()))
    }

    /// Named graphs from every `graphs/*.graph` file (`name: graph` lines).
    pub fn graphs(&self) -> Result<BTreeMap<String, ResolutionGraph>, CatalogError> {
        let mut out = BTreeMap::new();
        for (path, src) in self.data.files().filter(|(p, _)| p.starts_with("graphs/")) {
            for line in src.lines().map(|l| l.split('#').next().unwrap_or("").trim()).filter(|l| !l.is_empty()) {
                let (name, g) = line.split_once(':').ok_or_else(|| CatalogError::Data { file: path.into(), msg: format!("expected `name: graph`, got `{line}`") })?;
                out.insert(name.trim().to_string(), g.trim().parse()?);
            }
        }
        Ok(out)
    }

    pub fn graph(&self, id: &str) -> Result<ResolutionGraph, CatalogError> {
        self.graphs()?.remove(id).ok_or_else(|| CatalogError::Missing { kind: "graph", name: id.into() })
    }

    /// Decide one system at one `M`, comparing with `expect`.
    pub fn check_point(&self, name: &str, anchor: &str, m: &str, expect: &str) -> CheckRecord {
        let id = format!("system/{name}/M={m}");
        let run = || -> Result<CheckRecord, CatalogError> {
            let s = self.system(name)?;
            let mv = parse_m(m).ok_or_else(|| CatalogError::Data { file: "catalog.toml".into(), msg: format!("bad M `{m}`") })?;
            let inst = match &mv {
                MValue::Int(v) => instantiate(&s, v)?,
                MValue::Limit => limit_system(&s)?,
            };
            Ok(match decide(&inst)? {
                FeasibilityResult::Infeasible(c) => {
                    let text = write_certificate(&inst, &c).map_err(|e| CatalogError::Data { file: name.into(), msg: e.to_string() })?;
                    let kind = c.combine(&inst).ok().and_then(|k| k.kind()).map_or("invalid", |k| k.as_str());
                    CheckRecord::new(id.clone(), anchor, expect.into(), "infeasible".into())
                        .value("contradiction", kind)
                        .value("multipliers", c.multipliers.len())
                        .cert(format!("{name}_M{m}.cert"), text)
                }
                FeasibilityResult::Feasible { point } => {
                    let p: Vec<String> = point.iter().map(|(v, x)| format!("{v}={x}")).collect();
                    CheckRecord::new(id.clone(), anchor, expect.into(), "feasible".into()).value("point", p.join(", "))
                }
            })
        };
        run().unwrap_or_else(|e| CheckRecord::error(id.clone(), anchor, expect.into(), e))
    }

    fn check_scan(&self, e: &SystemEntry, sc: &ScanEntryExpect) -> Vec<CheckRecord> {
        let id = format!("scan/{}", e.name);
        let expected = format!("infeasible from M={}, relaxed from M={}, tail certified", sc.threshold, sc.relaxed_threshold);
        let s = match self.system(&e.name) {
            Ok(s) => s,
            Err(err) => return vec![CheckRecord::error(id, &e.anchor, expected, err)],
        };
        let r = scan_threshold(&s, sc.lo, sc.hi);
        let show = |m: Option<i64>| m.map_or("never".to_string(), |m| format!("M={m}"));
        let certified = r.tail.as_ref().is_some_and(TailCertificate::is_certified);
        let observed = format!(
            "infeasible from {}, relaxed from {}, tail {}",
            show(r.minimal_infeasible_m),
            show(r.minimal_relaxed_infeasible_m),
            if certified { "certified" } else { "not certified" }
        );
        let mut rec = CheckRecord::new(id, &e.anchor, expected, observed).value("range", format!("{}..{}", sc.lo, sc.hi));
        match &r.tail {
            Some(TailCertificate::Certified { m0, base, limit }) => {
                if let Ok(inst) = instantiate(&s, &BigInt::from(*m0)) {
                    if let Ok(text) = write_certificate(&inst, base) {
                        rec = rec.cert(format!("{}_tail_M{m0}.cert", e.name), text);
                    }
                }
                rec = rec.value("limit_certificate", limit.is_some());
            }
            Some(TailCertificate::NotCertified { reason, .. }) => rec = rec.value("tail_reason", reason),
            None => {}
        }
        let mut out = vec![rec];
        if let (Some(from), Some(claim)) = (sc.claim_from, &sc.claim) {
            let bad: Vec<i64> = r.entries.iter().filter(|x| x.m >= from && x.exact != crate::lpsolve::Status::Infeasible).map(|x| x.m).collect();
            let observed = match bad.first() {
                None => "holds".to_string(),
                Some(m) => format!("refuted (not infeasible at M={m})"),
            };
            let holds = bad.is_empty();
            let mut rec = CheckRecord::new(format!("claim/{}", e.name), &e.anchor, claim.clone(), observed.clone());
            rec.status = Verdict::from_bool(if claim == "holds" { holds } else { claim == "refuted" && !holds });
            out.push(rec.value("range", format!("{from}..{}", sc.hi)));
        }
        out
    }

    fn check_minimize(&self, e: &MinimizeEntry) -> CheckRecord {
        let id = format!("minimize/{}", e.id);
        let expected = format!("{} at ({}, {}), verified", e.value, e.argmin[0], e.argmin[1]);
        let run = || -> Result<CheckRecord, CatalogError> {
            let obj = Objective::from_name(&e.objective).ok_or_else(|| CatalogError::Data { file: "catalog.toml".into(), msg: format!("unknown objective `{}`", e.objective) })?;
            let region = TriangleRegion::parse(&e.region)?;
            let r = min_on_triangle(obj, &region)?;
            // normalise the expectation through the same printer
            let v = parse_quad("catalog.toml", &e.value)?;
            let (a, b) = (parse_quad("catalog.toml", &e.argmin[0])?, parse_quad("catalog.toml", &e.argmin[1])?);
            let expected = format!("{v} at ({a}, {b}), verified");
            let within = r.witness_within(crate::optimize::WITNESS_TOL);
            let observed = format!("{} at ({}, {}), {}", r.value, r.argmin.0, r.argmin.1, if r.verified && within { "verified" } else { "not verified" });
            let mut rec = CheckRecord::new(id.clone(), &e.anchor, expected, observed)
                .value("objective", r.objective.name())
                .value("region", &region)
                .value("kkt", r.kkt)
                .value("value_approx", format!("{:.12}", r.value.to_f64()));
            if let Some(w) = &r.witness {
                rec = rec.value("witness_lower", format!("{:.12}", w.lower)).value("witness_upper", format!("{:.12}", w.upper)).value("witness_boxes", w.boxes);
            }
            let active: Vec<String> = r.active.iter().zip(&r.multipliers).map(|(i, l)| format!("{}: {l}", region.constraints[*i])).collect();
            Ok(rec.value("active", active.join("; ")))
        };
        run().unwrap_or_else(|err| CheckRecord::error(id.clone(), &e.anchor, expected.clone(), err))
    }

    fn check_hyperplane(&self, e: &HyperplaneEntry) -> CheckRecord {
        let id = format!("hyperplane/{}", e.id);
        let expected = format!("theta={}, min={}", e.theta, e.value);
        let run = || -> Result<CheckRecord, CatalogError> {
            let f = "catalog.toml";
            let p = e.weights.iter().map(|w| parse_rat(f, w)).collect::<Result<Vec<_>, _>>()?;
            let (theta, value) = min_quadratic_on_hyperplane(&p, &parse_rat(f, &e.c)?, &parse_rat(f, &e.nu1)?)?;
            let expected = format!("theta={}, min={}", parse_rat(f, &e.theta)?, parse_rat(f, &e.value)?);
            Ok(CheckRecord::new(id.clone(), &e.anchor, expected, format!("theta={theta}, min={value}")))
        };
        run().unwrap_or_else(|err| CheckRecord::error(id.clone(), &e.anchor, expected.clone(), err))
    }

    fn check_phi(&self, e: &PhiEntry) -> CheckRecord {
        let id = format!("phi/{}", e.id);
        let expected = if e.expect { "identity holds" } else { "identity fails" }.to_string();
        let run = || -> Result<CheckRecord, CatalogError> {
            let case = PhiCase::from_name(&e.case).ok_or_else(|| CatalogError::Data { file: "catalog.toml".into(), msg: format!("unknown case `{}`", e.case) })?;
            let r = match (&e.m1, &e.m2) {
                (None, None) => check_phi_identity(case),
                (m1, m2) => {
                    let (d1, d2) = case.standard_substitution();
                    let m1 = m1.as_deref().map(|s| parse_rat("catalog.toml", s)).transpose()?.unwrap_or(d1);
                    let m2 = m2.as_deref().map(|s| parse_rat("catalog.toml", s)).transpose()?.unwrap_or(d2);
                    check_phi_identity_at(case, &m1, &m2)
                }
            };
            let observed = if r.holds { "identity holds" } else { "identity fails" }.to_string();
            let mut rec = CheckRecord::new(id.clone(), &e.anchor, expected.clone(), observed).value("m1", &r.m1).value("m2", &r.m2).value("phi", &r.phi);
            if let Some(rem) = &r.remainder {
                rec = rec.value("remainder", rem).value("remainder_nonnegative", rem.has_nonneg_coeffs());
            }
            Ok(rec)
        };
        run().unwrap_or_else(|err| CheckRecord::error(id.clone(), &e.anchor, expected.clone(), err))
    }

    fn check_chain(&self, e: &ChainEntry) -> CheckRecord {
        let id = format!("chain/{}", e.name);
        let show = |m: Option<i64>| m.map_or("never".to_string(), |m| format!("M={m}"));
        let expected = format!("{}; >= bound from {}; > bound from {}; certified", e.closed_form, show(e.threshold_ge), show(e.threshold_gt));
        let run = || -> Result<CheckRecord, CatalogError> {
            let c = self.chain(&e.name)?;
            let want: ParamCoeff = e.closed_form.parse().map_err(|err| CatalogError::Data { file: "catalog.toml".into(), msg: format!("`{}`: {err}", e.closed_form) })?;
            let expected = format!("{want}; >= bound from {}; > bound from {}; certified", show(e.threshold_ge), show(e.threshold_gt));
            let closed = chain_closed_form(&c)?;
            let mut mismatch = None;
            for m in e.range[0]..=e.range[1] {
                let v = chain_value(&c, m)?;
                if closed.eval_int(m).ok() != Some(v.clone()) || want.eval_int(m).ok() != Some(v) {
                    mismatch = Some(m);
                    break;
                }
            }
            let t = threshold_m(&c)?;
            let form = match mismatch {
                Some(m) => format!("{closed} (differs from the product at M={m})"),
                None => closed.to_string(),
            };
            let observed = format!("{form}; >= bound from {}; > bound from {}; {}", show(t.ge), show(t.gt), if t.certified { "certified" } else { "not certified" });
            let mut rec = CheckRecord::new(id.clone(), &e.anchor, expected, observed)
                .value("bound", &c.comparison_bound)
                .value("range", format!("{}..{}", e.range[0], e.range[1]));
            if let Some(x) = &c.expect {
                rec = rec.value("file_expect_matches", *x == closed);
                if *x != closed {
                    rec.status = Verdict::Fail;
                }
            }
            Ok(rec)
        };
        run().unwrap_or_else(|err| CheckRecord::error(id.clone(), &e.anchor, expected.clone(), err))
    }

    fn check_pipeline(&self, e: &PipelineEntry) -> CheckRecord {
        let id = format!("pipeline/{}", e.id);
        let expected = if e.expect { "valid" } else { "invalid" }.to_string();
        let report = self.pipeline_source(&e.id).and_then(|src| run_pipeline(&e.id, src));
        match report {
            Ok(r) => {
                let observed = if r.ok() { "valid" } else { "invalid" }.to_string();
                let mut rec = CheckRecord::new(id, &e.anchor, expected, observed);
                for s in &r.steps {
                    rec = rec.value(&format!("line {:02}", s.line), format!("{}: {} ({})", if s.ok { "ok" } else { "FAILED" }, s.text, s.detail));
                }
                rec
            }
            Err(err) => CheckRecord::error(id, &e.anchor, expected, err),
        }
    }

    fn check_graph(&self, e: &GraphEntry) -> CheckRecord {
        let id = format!("graph/{}", e.id);
        let run = || -> Result<CheckRecord, CatalogError> {
            let g = self.graph(&e.id)?;
            let f = "catalog.toml";
            let bad = |s: &str| CatalogError::Data { file: f.into(), msg: format!("bad path spec `{s}`") };
            let (mut exp, mut obs) = (Vec::new(), Vec::new());
            for (prefix, specs, graph) in [("p", &e.paths, g.clone()), ("p'", &e.removed_paths, resgraph::remove_arrows(&g))] {
                for s in specs {
                    let (ft, n) = s.split_once('=').ok_or_else(|| bad(s))?;
                    let (a, b) = ft.split_once('>').ok_or_else(|| bad(s))?;
                    let (a, b): (usize, usize) = (a.trim().parse().map_err(|_| bad(s))?, b.trim().parse().map_err(|_| bad(s))?);
                    if !(1..=graph.k()).contains(&a) || !(1..=graph.k()).contains(&b) {
                        return Err(bad(s));
                    }
                    exp.push(format!("{prefix}{a}{b}={}", n.trim()));
                    obs.push(format!("{prefix}{a}{b}={}", resgraph::path_counts(&graph, a)[b]));
                }
            }
            if let Some(s) = &e.sigma {
                let levels = match s.levels.as_str() {
                    "Three" => Levels::Three,
                    "Four" => Levels::Four,
                    other => return Err(CatalogError::Data { file: f.into(), msg: format!("unknown levels `{other}`") }),
                };
                let sg = resgraph::sigma_groups(&g, levels)?;
                exp.push(format!("p1={}, sigma=[{}]", s.p1, s.groups.join(", ")));
                let groups: Vec<String> = sg.sigma.iter().map(ToString::to_string).collect();
                obs.push(format!("p1={}, sigma=[{}]", sg.p1, groups.join(", ")));
            }
            for n in &e.nf {
                let kind = match n.kind.as_str() {
                    "Canonical3" => NfKind::Canonical3,
                    "LogCanonical4" => NfKind::LogCanonical4,
                    "Case51" => NfKind::Case51,
                    other => return Err(CatalogError::Data { file: f.into(), msg: format!("unknown kind `{other}`") }),
                };
                let nu = n.nu.iter().map(|x| parse_rat(f, x)).collect::<Result<Vec<_>, _>>()?;
                let r = resgraph::evaluate_nf(&g, &nu, kind)?;
                exp.push(format!("{}({}): {} vs {} {}", n.kind, n.nu.join(","), parse_rat(f, &n.lhs)?, parse_rat(f, &n.rhs)?, n.satisfied));
                obs.push(format!("{}({}): {} vs {} {}", n.kind, n.nu.join(","), r.lhs, r.rhs, r.satisfied));
            }
            if let Some(b) = &e.counting_bound {
                let nu = b.nu.iter().map(|x| parse_rat(f, x)).collect::<Result<Vec<_>, _>>()?;
                exp.push(format!("bound={}", parse_rat(f, &b.value)?));
                obs.push(format!("bound={}", resgraph::counting_mult_bound(&g, &nu)?));
            }
            Ok(CheckRecord::new(id.clone(), &e.anchor, exp.join("; "), obs.join("; ")).value("graph", &g))
        };
        run().unwrap_or_else(|err| CheckRecord::error(id.clone(), &e.anchor, "graph checks".into(), err))
    }

    fn check_corpus(&self, e: &CorpusEntry) -> CheckRecord {
        let id = format!("corpus/{}", e.id);
        let expected = format!("{} violations", e.violations);
        let r = match e.kind.as_str() {
            "exhaustive" => resgraph::exhaustive_corpus(e.k_max),
            "random" => resgraph::random_corpus(e.seed.unwrap_or(0), e.count.unwrap_or(0), e.k_max),
            other => return CheckRecord::error(id, &e.anchor, expected, format!("unknown corpus kind `{other}`")),
        };
        CheckRecord::new(id, &e.anchor, expected, format!("{} violations", r.violations()))
            .value("graphs", r.graphs)
            .value("dp_mismatches", r.dp_mismatches)
            .value("preserve_violations", r.preserve_violations)
            .value("p1_increases", r.p1_increases)
            .value("bound_checked", r.bound_checked)
            .value("bound_violations", r.bound_violations)
    }

    /// Run every check. Checks run concurrently; records come back in
    /// catalog order.
    pub fn verify_all(&self) -> RunReport {
        type Task<'a> = Box<dyn Fn() -> Vec<CheckRecord> + Send + Sync + 'a>;
        let mut tasks: Vec<Task> = Vec::new();
        let c = &self.catalog;
        for e in &c.system {
            for p in &e.checks {
                tasks.push(Box::new(move || vec![self.check_point(&e.name, &e.anchor, &p.m, &p.expect)]));
            }
            if let Some(sc) = &e.scan {
                tasks.push(Box::new(move || self.check_scan(e, sc)));
            }
        }
        tasks.extend(c.minimize.iter().map(|e| Box::new(move || vec![self.check_minimize(e)]) as Task));
        tasks.extend(c.hyperplane.iter().map(|e| Box::new(move || vec![self.check_hyperplane(e)]) as Task));
        tasks.extend(c.phi.iter().map(|e| Box::new(move || vec![self.check_phi(e)]) as Task));
        tasks.extend(c.chain.iter().map(|e| Box::new(move || vec![self.check_chain(e)]) as Task));
        tasks.extend(c.pipeline.iter().map(|e| Box::new(move || vec![self.check_pipeline(e)]) as Task));
        tasks.extend(c.graph.iter().map(|e| Box::new(move || vec![self.check_graph(e)]) as Task));
        tasks.extend(c.corpus.iter().map(|e| Box::new(move || vec![self.check_corpus(e)]) as Task));
        let records: Vec<Vec<CheckRecord>> = tasks.par_iter().map(|t| t()).collect();
        RunReport::new(records.into_iter().flatten().collect())
    }
}

/// Run a shipped bound-propagation pipeline from the embedded data.
pub fn check_bound_pipeline(id: &str) -> Result<bool, OptError> {
    let suite = Suite::embedded();
    Ok(run_pipeline(id, suite.pipeline_source(id)?)?.ok())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_catalog_parses() {
        let s = Suite::embedded();
        assert_eq!(s.catalog.system.len(), 10);
        for name in s.system_names() {
            s.system(&name).unwrap();
        }
        for c in &s.catalog.chain {
            s.chain(&c.name).unwrap();
        }
        for g in &s.catalog.graph {
            s.graph(&g.id).unwrap();
        }
    }

    #[test]
    fn pipelines() {
        assert_eq!(check_bound_pipeline("sec1_5"), Ok(true));
        assert_eq!(check_bound_pipeline("prop1_3"), Ok(true));
        assert_eq!(check_bound_pipeline("identity"), Ok(true));
        assert_eq!(check_bound_pipeline("nope"), Err(OptError::UnknownPipeline("nope".into())));
    }

    #[test]
    fn point_checks() {
        let s = Suite::embedded();
        let r = s.check_point("case_1_1", "a", "15", "infeasible");
        assert_eq!(r.status, Verdict::Pass);
        assert!(r.certificate_text.unwrap().contains("system: case_1_1"));
        let r = s.check_point("case_2_1_quadric", "a", "5", "infeasible");
        assert_eq!((r.status, r.observed.as_str()), (Verdict::Fail, "feasible"));
        assert!(s.check_point("missing", "a", "5", "infeasible").observed.starts_with("error"));
    }

    #[test]
    fn m_values() {
        assert_eq!(parse_m("limit"), Some(MValue::Limit));
        assert_eq!(parse_m(" 12 "), Some(MValue::Int(12.into())));
        assert_eq!(parse_m("x"), None);
    }
}
