use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use fanocert::catalog::{parse_m, CheckRecord, RunReport, Suite, Verdict};
use fanocert::chains::{chain_closed_form, chain_value, threshold_m};
use fanocert::lpsolve::{parse_certificate, scan_threshold, verify_certificate, Status, TailCertificate};
use fanocert::optimize::{min_on_triangle, Objective, TriangleRegion, WITNESS_TOL};
use fanocert::resgraph::{self, Levels, NfKind, ResolutionGraph};
use fanocert::sysmodel::{instantiate, limit_system, MValue};

/// Exact certificates for the finite computations of the rigidity proofs.
#[derive(Parser)]
#[command(name = "fanocert", version)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide one catalog system at one M (or its limit system).
    Check {
        system: String,
        /// An integer, or `limit`.
        #[arg(long = "M")]
        m: String,
        /// Directory for the report and certificate.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide a system for every M in a range and certify the tail.
    Scan { system: String, lo: i64, hi: i64 },
    /// Check a certificate file against the catalog system it names.
    VerifyCert { file: PathBuf },
    /// Minimise PlainNF or ClampedNF over a region such as
    /// "theta > 1; nu <= 3; 5*theta <= 2*nu".
    Minimize { objective: String, region: String },
    /// Evaluate a catalog chain.
    Chain { name: String },
    /// Resolution-graph computations.
    Graph {
        #[command(subcommand)]
        cmd: GraphCmd,
    },
    /// Run the whole catalog.
    VerifyAll {
        /// Directory for the report and certificates.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GraphCmd {
    /// Path counts from a vertex (default: the last).
    Paths {
        graph: String,
        #[arg(long)]
        from: Option<usize>,
    },
    /// Remove the arrows from the upper part to the first vertex.
    Remove { graph: String },
    /// Discrepancy groups of the path counts from the last vertex.
    Sigma {
        graph: String,
        #[arg(long, default_value = "three")]
        levels: String,
    },
    /// Evaluate a Noether–Fano-type inequality.
    Nf {
        graph: String,
        /// Comma-separated multiplicities.
        #[arg(long)]
        nu: String,
        #[arg(long, default_value = "Canonical3")]
        kind: String,
    },
    /// Run the exhaustive and random corpus checks.
    Corpus {
        #[arg(long, default_value_t = 6)]
        k_max: usize,
        #[arg(long, default_value_t = 1000)]
        random: usize,
        #[arg(long, default_value_t = 20131001)]
        seed: u64,
    },
}

/// Exit 2: bad input, unknown names.
struct Usage(anyhow::Error);

type Outcome = std::result::Result<bool, Usage>;

fn usage<E: Into<anyhow::Error>>(e: E) -> Usage {
    Usage(e.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Outcome {
    let suite = Suite::from_env().map_err(usage)?;
    let f = cli.format;
    match cli.cmd {
        Cmd::Check { system, m, out } => cmd_check(&suite, f, &system, &m, out.as_deref()),
        Cmd::Scan { system, lo, hi } => cmd_scan(&suite, f, &system, lo, hi),
        Cmd::VerifyCert { file } => cmd_verify_cert(&suite, f, &file),
        Cmd::Minimize { objective, region } => cmd_minimize(f, &objective, &region),
        Cmd::Chain { name } => cmd_chain(&suite, f, &name),
        Cmd::Graph { cmd } => cmd_graph(f, cmd).map_err(usage),
        Cmd::VerifyAll { out } => {
            let report = suite.verify_all();
            emit_report(&report, f, out.as_deref()).map_err(usage)?;
            Ok(report.verdict == Verdict::Pass)
        }
    }
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json"));
}

/// Print a report; with `out`, also write `report.{txt,json}` and the
/// certificates beneath it.
fn emit_report(report: &RunReport, f: Format, out: Option<&Path>) -> Result<()> {
    let text = match f {
        Format::Table => report.to_table(),
        Format::Json => report.to_json(),
    };
    print!("{text}");
    if let Some(dir) = out {
        std::fs::create_dir_all(dir.join("certs")).with_context(|| format!("creating {}", dir.display()))?;
        std::fs::write(dir.join("report.txt"), report.to_table())?;
        std::fs::write(dir.join("report.json"), report.to_json())?;
        for r in &report.records {
            if let (Some(p), Some(t)) = (&r.certificate, &r.certificate_text) {
                std::fs::write(dir.join(p), t)?;
            }
        }
    }
    Ok(())
}

/// The catalog's expectation for `system` at `m`: an explicit point check,
/// else infeasible on the limit and from the scanned threshold onwards.
fn expected_status(suite: &Suite, system: &str, m: &MValue) -> Option<String> {
    let e = suite.system_entry(system)?;
    if let Some(p) = e.checks.iter().find(|p| parse_m(&p.m).as_ref() == Some(m)) {
        return Some(p.expect.clone());
    }
    match (m, &e.scan) {
        (MValue::Limit, _) => Some("infeasible".into()),
        (MValue::Int(v), Some(sc)) if *v >= sc.threshold.into() => Some("infeasible".into()),
        _ => None,
    }
}

fn cmd_check(suite: &Suite, f: Format, system: &str, m: &str, out: Option<&Path>) -> Outcome {
    let entry = suite.system_entry(system).ok_or_else(|| usage(anyhow!("no system named `{system}` in the catalog")))?;
    let mv = parse_m(m).ok_or_else(|| usage(anyhow!("--M takes an integer or `limit`, got `{m}`")))?;
    let s = suite.system(system).map_err(usage)?;
    // surface poles and domain errors as input errors
    match &mv {
        MValue::Int(v) => instantiate(&s, v).map(drop),
        MValue::Limit => limit_system(&s).map(drop),
    }
    .map_err(usage)?;
    let expect = expected_status(suite, system, &mv);
    let mut rec = suite.check_point(system, &entry.anchor, m, expect.as_deref().unwrap_or("any"));
    if expect.is_none() {
        rec.status = Verdict::Pass;
    }
    let report = RunReport::new(vec![rec]);
    emit_report(&report, f, out).map_err(usage)?;
    Ok(report.verdict == Verdict::Pass)
}

fn cmd_scan(suite: &Suite, f: Format, system: &str, lo: i64, hi: i64) -> Outcome {
    if lo > hi {
        return Err(usage(anyhow!("empty range {lo}..{hi}")));
    }
    let s = suite.system(system).map_err(usage)?;
    let r = scan_threshold(&s, lo, hi);
    if let Some(e) = r.entries.iter().find(|e| e.exact == Status::Undefined) {
        let why = instantiate(&s, &e.m.into()).err().map_or_else(String::new, |e| format!(": {e}"));
        return Err(usage(anyhow!("M = {} is not admissible for {system}{why}", e.m)));
    }
    let tail = match &r.tail {
        Some(TailCertificate::Certified { m0, .. }) => json!({ "m0": m0, "certified": true }),
        Some(TailCertificate::NotCertified { m0, reason }) => json!({ "m0": m0, "certified": false, "reason": reason }),
        None => serde_json::Value::Null,
    };
    match f {
        Format::Json => print_json(&json!({
            "system": system,
            "lo": lo,
            "hi": hi,
            "entries": r.entries.iter().map(|e| json!({ "M": e.m, "exact": e.exact.as_str(), "relaxed": e.relaxed.as_str() })).collect::<Vec<_>>(),
            "minimal_infeasible_m": r.minimal_infeasible_m,
            "minimal_relaxed_infeasible_m": r.minimal_relaxed_infeasible_m,
            "tail": tail,
        })),
        Format::Table => {
            println!("{:>6}  {:<11} {}", "M", "exact", "relaxed");
            for e in &r.entries {
                println!("{:>6}  {:<11} {}", e.m, e.exact.as_str(), e.relaxed.as_str());
            }
            let show = |m: Option<i64>| m.map_or("never".to_string(), |m| format!("M = {m}"));
            println!("infeasible from {}; relaxed from {}", show(r.minimal_infeasible_m), show(r.minimal_relaxed_infeasible_m));
            match &r.tail {
                Some(TailCertificate::Certified { m0, .. }) => println!("tail: certified infeasible for every M >= {m0}"),
                Some(TailCertificate::NotCertified { m0, reason }) => println!("tail: not certified from M = {m0}: {reason}"),
                None => println!("tail: no infeasible tail in range"),
            }
        }
    }
    Ok(true)
}

fn cmd_verify_cert(suite: &Suite, f: Format, file: &Path) -> Outcome {
    let text = std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display())).map_err(usage)?;
    let cert = parse_certificate(&text).map_err(usage)?;
    let s = suite.system(&cert.system).map_err(usage)?;
    let inst = match &cert.m {
        Some(MValue::Int(m)) => instantiate(&s, m),
        Some(MValue::Limit) => limit_system(&s),
        None if !s.depends_on_m() => Ok(s.clone()),
        None => return Err(usage(anyhow!("the certificate does not say which M it is for"))),
    }
    .map_err(usage)?;
    let ok = verify_certificate(&inst, &cert).map_err(usage)?;
    let m = cert.m.as_ref().map_or("-".to_string(), ToString::to_string);
    match f {
        Format::Json => print_json(&json!({ "system": cert.system, "M": m, "valid": ok })),
        Format::Table => println!("{} at M = {m}: certificate {}", cert.system, if ok { "valid" } else { "INVALID" }),
    }
    Ok(ok)
}

fn cmd_minimize(f: Format, objective: &str, region: &str) -> Outcome {
    let obj = Objective::from_name(objective).ok_or_else(|| usage(anyhow!("unknown objective `{objective}` (PlainNF or ClampedNF)")))?;
    let region = TriangleRegion::parse(region).map_err(usage)?;
    let r = min_on_triangle(obj, &region).map_err(usage)?;
    let active: Vec<String> = r.active.iter().map(|&i| region.constraints[i].to_string()).collect();
    let mult: Vec<String> = r.multipliers.iter().map(ToString::to_string).collect();
    let ok = r.verified && r.witness_within(WITNESS_TOL);
    match f {
        Format::Json => print_json(&json!({
            "objective": obj.name(),
            "region": region.to_string(),
            "value": r.value.to_string(),
            "argmin": [r.argmin.0.to_string(), r.argmin.1.to_string()],
            "active": active,
            "multipliers": mult,
            "kkt": r.kkt,
            "witness": r.witness.as_ref().map(|w| json!({ "lower": w.lower, "upper": w.upper, "boxes": w.boxes })),
            "verified": r.verified,
        })),
        Format::Table => {
            println!("{} on {region}", obj.name());
            println!("minimum   {}  (~{:.12})", r.value, r.value.to_f64());
            println!("at        nu = {}, theta = {}", r.argmin.0, r.argmin.1);
            for (a, l) in active.iter().zip(&mult) {
                println!("active    {a}   multiplier {l}");
            }
            if let Some(w) = &r.witness {
                println!("witness   [{:.12}, {:.12}] from {} boxes", w.lower, w.upper, w.boxes);
            }
            println!("verified  {}", ok);
        }
    }
    Ok(ok)
}

fn cmd_chain(suite: &Suite, f: Format, name: &str) -> Outcome {
    let c = suite.chain(name).map_err(usage)?;
    let closed = chain_closed_form(&c).map_err(usage)?;
    let t = threshold_m(&c).map_err(usage)?;
    let samples: Vec<(i64, String)> = [0, 1, 7, 100]
        .iter()
        .map(|d| c.domain_lo + d)
        .filter_map(|m| chain_value(&c, m).ok().map(|v| (m, v.to_string())))
        .collect();
    let expected = suite.catalog.chain.iter().find(|e| e.name == name);
    let matches = expected.map_or(true, |e| {
        e.closed_form.parse::<fanocert::rfunc::ParamCoeff>().is_ok_and(|w| w == closed) && e.threshold_ge == t.ge && e.threshold_gt == t.gt
    }) && c.expect.as_ref().map_or(true, |x| *x == closed);
    match f {
        Format::Json => print_json(&json!({
            "name": c.name,
            "anchor": expected.map_or(c.anchor.clone(), |e| e.anchor.clone()),
            "closed_form": closed.to_string(),
            "bound": c.comparison_bound.to_string(),
            "threshold_ge": t.ge,
            "threshold_gt": t.gt,
            "certified": t.certified,
            "values": samples.iter().map(|(m, v)| json!({ "M": m, "value": v })).collect::<Vec<_>>(),
            "matches_catalog": matches,
        })),
        Format::Table => {
            println!("{}: {}", c.name, c.anchor);
            println!("closed form  {closed}");
            for (m, v) in &samples {
                println!("M = {m:<5} {v}");
            }
            let show = |m: Option<i64>| m.map_or("never".to_string(), |m| m.to_string());
            println!("first M with value >= {}: {}", c.comparison_bound, show(t.ge));
            println!("first M with value >  {}: {}", c.comparison_bound, show(t.gt));
            println!("tail certified: {}; matches catalog: {}", t.certified, matches);
        }
    }
    Ok(matches)
}

fn parse_graph(s: &str) -> Result<ResolutionGraph> {
    // a file path or the graph text itself
    let text = if Path::new(s).is_file() { std::fs::read_to_string(s)? } else { s.to_string() };
    Ok(text.trim().parse()?)
}

fn cmd_graph(f: Format, cmd: GraphCmd) -> Result<bool> {
    match cmd {
        GraphCmd::Paths { graph, from } => {
            let g = parse_graph(&graph)?;
            let from = from.unwrap_or(g.k());
            if !(1..=g.k()).contains(&from) {
                bail!("vertex {from} out of range 1..={}", g.k());
            }
            let p = resgraph::path_counts(&g, from);
            match f {
                Format::Json => print_json(&json!({ "graph": g.to_string(), "from": from, "paths": (1..=g.k()).map(|j| p[j].to_string()).collect::<Vec<_>>() })),
                Format::Table => (1..=g.k()).for_each(|j| println!("p({from},{j}) = {}", p[j])),
            }
        }
        GraphCmd::Remove { graph } => {
            let g = parse_graph(&graph)?;
            let h = resgraph::remove_arrows(&g);
            match f {
                Format::Json => print_json(&json!({ "graph": g.to_string(), "modified": h.to_string() })),
                Format::Table => println!("{h}"),
            }
        }
        GraphCmd::Sigma { graph, levels } => {
            let g = parse_graph(&graph)?;
            let levels = match levels.to_ascii_lowercase().as_str() {
                "three" | "3" => Levels::Three,
                "four" | "4" => Levels::Four,
                other => bail!("levels must be three or four, got `{other}`"),
            };
            let s = resgraph::sigma_groups(&g, levels)?;
            let groups: Vec<String> = s.sigma.iter().map(ToString::to_string).collect();
            match f {
                Format::Json => print_json(&json!({ "graph": g.to_string(), "p1": s.p1.to_string(), "sigma": groups })),
                Format::Table => {
                    println!("p1 = {}", s.p1);
                    groups.iter().enumerate().for_each(|(i, v)| println!("Sigma_{i} = {v}"));
                }
            }
        }
        GraphCmd::Nf { graph, nu, kind } => {
            let g = parse_graph(&graph)?;
            let kind = match kind.as_str() {
                "Canonical3" => NfKind::Canonical3,
                "LogCanonical4" => NfKind::LogCanonical4,
                "Case51" => NfKind::Case51,
                other => bail!("unknown inequality `{other}` (Canonical3, LogCanonical4, Case51)"),
            };
            let nu = nu
                .split(',')
                .map(|x| x.trim().parse::<fanocert::arith::QuadExt>().ok().and_then(|q| q.as_rat().cloned()).ok_or_else(|| anyhow!("bad multiplicity `{x}`")))
                .collect::<Result<Vec<_>>>()?;
            let r = resgraph::evaluate_nf(&g, &nu, kind)?;
            match f {
                Format::Json => print_json(&json!({ "graph": g.to_string(), "lhs": r.lhs.to_string(), "rhs": r.rhs.to_string(), "satisfied": r.satisfied })),
                Format::Table => println!("{} {} {}: {}", r.lhs, if r.satisfied { ">" } else { "<=" }, r.rhs, if r.satisfied { "satisfied" } else { "not satisfied" }),
            }
        }
        GraphCmd::Corpus { k_max, random, seed } => {
            let ex = resgraph::exhaustive_corpus(k_max);
            let rnd = resgraph::random_corpus(seed, random, 12);
            let rec = |id: &str, r: &resgraph::CorpusReport| CheckRecord {
                id: id.into(),
                anchor: "path counts and arrow removal on a graph corpus".into(),
                expected: "0 violations".into(),
                observed: format!("{} violations in {} graphs", r.violations(), r.graphs),
                status: Verdict::from_bool(r.violations() == 0),
                values: Default::default(),
                certificate: None,
                certificate_text: None,
            };
            let report = RunReport::new(vec![rec("corpus/exhaustive", &ex), rec("corpus/random", &rnd)]);
            emit_report(&report, f, None)?;
            return Ok(report.verdict == Verdict::Pass);
        }
    }
    Ok(true)
}

