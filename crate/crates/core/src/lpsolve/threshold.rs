//! Scans over `M` and certification of the infinite tail.

use num_bigint::BigInt;
use rayon::prelude::*;

use super::{decide, decide_both, FarkasCertificate, FeasibilityResult};
use crate::arith::Rat;
use crate::rfunc::Direction;
use crate::sysmodel::{instantiate, limit_system, LinearSystem, Relation};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Feasible,
    Infeasible,
    /// `M` is a pole or outside the parameter domain.
    Undefined,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Feasible => "feasible",
            Status::Infeasible => "infeasible",
            Status::Undefined => "undefined",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanEntry {
    pub m: i64,
    /// Strict inequalities honoured.
    pub exact: Status,
    /// Strict inequalities relaxed to non-strict.
    pub relaxed: Status,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdReport {
    pub system: String,
    pub lo: i64,
    pub hi: i64,
    pub entries: Vec<ScanEntry>,
    /// Least `M0` with every scanned `M >= M0` infeasible.
    pub minimal_infeasible_m: Option<i64>,
    /// The same for the relaxed system.
    pub minimal_relaxed_infeasible_m: Option<i64>,
    /// Tail certification attempted at `minimal_infeasible_m`.
    pub tail: Option<TailCertificate>,
}

impl ThresholdReport {
    pub fn status_at(&self, m: i64) -> Option<&ScanEntry> {
        self.entries.iter().find(|e| e.m == m)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TailCertificate {
    /// Infeasible for every integer `M >= m0`.
    Certified { m0: i64, base: FarkasCertificate, limit: Option<FarkasCertificate> },
    NotCertified { m0: i64, reason: String },
}

impl TailCertificate {
    pub fn is_certified(&self) -> bool {
        matches!(self, TailCertificate::Certified { .. })
    }
}

fn status(r: Result<FeasibilityResult, crate::sysmodel::SysError>) -> Status {
    match r {
        Ok(FeasibilityResult::Feasible { .. }) => Status::Feasible,
        Ok(FeasibilityResult::Infeasible(_)) => Status::Infeasible,
        Err(_) => Status::Undefined,
    }
}

fn minimal_tail(entries: &[ScanEntry], pick: impl Fn(&ScanEntry) -> Status) -> Option<i64> {
    let mut best = None;
    for e in entries.iter().rev() {
        if pick(e) != Status::Infeasible {
            break;
        }
        best = Some(e.m);
    }
    best
}

/// Decide every `M` in `lo..=hi` (in parallel) and certify the tail.
pub fn scan_threshold(s: &LinearSystem, lo: i64, hi: i64) -> ThresholdReport {
    let entries: Vec<ScanEntry> = (lo..=hi)
        .into_par_iter()
        .map(|m| match instantiate(s, &BigInt::from(m)) {
            Ok(sm) => match decide_both(&sm) {
                Ok((e, r)) => ScanEntry { m, exact: status(Ok(e)), relaxed: status(Ok(r)) },
                Err(_) => ScanEntry { m, exact: Status::Undefined, relaxed: Status::Undefined },
            },
            Err(_) => ScanEntry { m, exact: Status::Undefined, relaxed: Status::Undefined },
        })
        .collect();
    let minimal_infeasible_m = minimal_tail(&entries, |e| e.exact);
    let minimal_relaxed_infeasible_m = minimal_tail(&entries, |e| e.relaxed);
    let tail = minimal_infeasible_m.map(|m0| certify_tail(s, m0));
    ThresholdReport {
        system: s.name.clone(),
        lo,
        hi,
        entries,
        minimal_infeasible_m,
        minimal_relaxed_infeasible_m,
        tail,
    }
}

/// Prove infeasibility for every integer `M >= m0`.
///
/// Needs (a) infeasibility at `m0`, (b) an infeasible limit system, and
/// (c) a dominance argument: with every row written as `Σ a_j(M) x_j <= b(M)`,
/// each `M`-dependent `a_j` is non-decreasing on a nonnegative variable and
/// `b` is non-increasing, so the feasible set at `M` sits inside the one at
/// `m0`. Equality rows must not depend on `M`.
pub fn certify_tail(s: &LinearSystem, m0: i64) -> TailCertificate {
    let fail = |reason: String| TailCertificate::NotCertified { m0, reason };
    let base = match instantiate(s, &BigInt::from(m0)).map(|sm| decide(&sm)) {
        Ok(Ok(FeasibilityResult::Infeasible(c))) => c,
        Ok(Ok(FeasibilityResult::Feasible { .. })) => return fail(format!("the system is feasible at M = {m0}")),
        Ok(Err(e)) | Err(e) => return fail(e.to_string()),
    };
    if !s.depends_on_m() {
        return TailCertificate::Certified { m0, base, limit: None };
    }
    let limit = match limit_system(s).map(|l| decide(&l)) {
        Ok(Ok(FeasibilityResult::Infeasible(c))) => c,
        Ok(Ok(FeasibilityResult::Feasible { .. })) => return fail("the limit system is feasible".into()),
        Ok(Err(e)) | Err(e) => return fail(e.to_string()),
    };
    let m0r = Rat::from_integer(m0.into());
    for c in &s.constraints {
        let flip = matches!(c.relation, Relation::Ge | Relation::Gt);
        if c.relation == Relation::Eq {
            if c.rhs.uses_m() || c.coeffs.iter().any(|e| e.uses_m()) {
                return fail(format!("equality {} depends on M", c.id));
            }
            continue;
        }
        for (j, e) in c.coeffs.iter().enumerate() {
            if !e.uses_m() {
                continue;
            }
            let v = &s.variables[j];
            if !v.nonneg {
                return fail(format!("{}: M-dependent coefficient on free variable {}", c.id, v.name));
            }
            let dir = match e.direction_on_tail(&m0r) {
                Ok(d) => d,
                Err(err) => return fail(format!("{}: {err}", c.id)),
            };
            let dir = if flip { flip_dir(dir) } else { dir };
            if !dir.is_non_decreasing() {
                return fail(format!("{}: coefficient of {} is not non-decreasing", c.id, v.name));
            }
        }
        if c.rhs.uses_m() {
            let dir = match c.rhs.direction_on_tail(&m0r) {
                Ok(d) => d,
                Err(err) => return fail(format!("{}: {err}", c.id)),
            };
            let dir = if flip { flip_dir(dir) } else { dir };
            if !dir.is_non_increasing() {
                return fail(format!("{}: right-hand side is not non-increasing", c.id));
            }
        }
    }
    TailCertificate::Certified { m0, base, limit: Some(limit) }
}

fn flip_dir(d: Direction) -> Direction {
    match d {
        Direction::NonDecreasing => Direction::NonIncreasing,
        Direction::NonIncreasing => Direction::NonDecreasing,
        d => d,
    }
}
