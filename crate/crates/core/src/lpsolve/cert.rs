//! Farkas certificates: combination, checking, and a line-based text form.
//!
//! ```text
//! system: case_1_1
//! M: 15
//! kind: nonstrict
//! contradiction: 0 <= -4/13
//! multiplier c1 = 3/2
//! multiplier nonneg:d0 = 1/2
//! ```

use std::collections::BTreeMap;
use std::fmt::Write;

use num_bigint::BigInt;
use num_traits::Zero;

use super::CertError;
use crate::arith::QuadExt;
use crate::sysmodel::{LinearSystem, MValue, Relation, SysError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FarkasCertificate {
    pub system: String,
    pub m: Option<MValue>,
    /// Constraint id (`c3`, `nonneg:x`) to multiplier. Multipliers apply to
    /// rows written as `<=`/`<`, so `>=` rows are negated first; equality
    /// rows accept either sign.
    pub multipliers: BTreeMap<String, QuadExt>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContradictionKind {
    /// `0 <= c` with `c < 0`.
    NonStrict,
    /// `0 < c` with `c <= 0`.
    Strict,
}

impl ContradictionKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ContradictionKind::NonStrict => "nonstrict",
            ContradictionKind::Strict => "strict",
        }
    }
}

/// The inequality `Σ lhs_j x_j (< | <=) rhs` obtained from a certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Combination {
    pub lhs: Vec<QuadExt>,
    pub rhs: QuadExt,
    pub strict: bool,
    /// First multiplier with the wrong sign, if any.
    pub sign_violation: Option<String>,
}

impl Combination {
    pub fn kind(&self) -> Option<ContradictionKind> {
        if self.sign_violation.is_some() || !self.lhs.iter().all(|v| v.is_zero()) {
            return None;
        }
        if self.rhs.is_negative() {
            Some(ContradictionKind::NonStrict)
        } else if self.rhs.is_zero() && self.strict {
            Some(ContradictionKind::Strict)
        } else {
            None
        }
    }

    pub fn is_contradiction(&self) -> bool {
        self.kind().is_some()
    }

    /// `0 < 0`, `0 <= -3/2`, or the full row when it is not a contradiction.
    pub fn describe(&self, s: &LinearSystem) -> String {
        let rel = if self.strict { "<" } else { "<=" };
        let terms: Vec<String> = self
            .lhs
            .iter()
            .zip(&s.variables)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, v)| format!("({c})*{}", v.name))
            .collect();
        let lhs = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
        format!("{lhs} {rel} {}", self.rhs)
    }
}

impl FarkasCertificate {
    /// Sum the multiplied rows of `s`. Independent of the solver.
    pub fn combine(&self, s: &LinearSystem) -> Result<Combination, CertError> {
        let n = s.variables.len();
        let mut lhs = vec![QuadExt::zero(); n];
        let mut rhs = QuadExt::zero();
        let mut strict = false;
        let mut sign_violation = None;
        for (id, lam) in &self.multipliers {
            if lam.is_zero() {
                continue;
            }
            if let Some(var) = id.strip_prefix("nonneg:") {
                let j = s
                    .var_index(var)
                    .filter(|&j| s.variables[j].nonneg)
                    .ok_or_else(|| CertError::UnknownConstraintId(id.clone()))?;
                if lam.is_negative() && sign_violation.is_none() {
                    sign_violation = Some(id.clone());
                }
                // -x_j <= 0
                lhs[j] = &lhs[j] - lam;
                continue;
            }
            let c = s.constraint(id).ok_or_else(|| CertError::UnknownConstraintId(id.clone()))?;
            let sign = match c.relation {
                Relation::Ge | Relation::Gt => -QuadExt::from_int(1),
                _ => QuadExt::from_int(1),
            };
            if c.relation != Relation::Eq && lam.is_negative() && sign_violation.is_none() {
                sign_violation = Some(id.clone());
            }
            let w = lam * &sign;
            for (j, a) in c.coeffs.iter().enumerate() {
                let a = a.as_const().ok_or_else(|| SysError::NotInstantiated(s.name.clone()))?;
                if !a.is_zero() {
                    lhs[j] = &lhs[j] + &(&w * a);
                }
            }
            let b = c.rhs.as_const().ok_or_else(|| SysError::NotInstantiated(s.name.clone()))?;
            rhs = &rhs + &(&w * b);
            if c.relation.is_strict() && lam.is_positive() {
                strict = true;
            }
        }
        Ok(Combination { lhs, rhs, strict, sign_violation })
    }
}

/// Serialise a certificate, recording the derived contradiction.
pub fn write_certificate(s: &LinearSystem, cert: &FarkasCertificate) -> Result<String, CertError> {
    let comb = cert.combine(s)?;
    let mut out = String::new();
    let _ = writeln!(out, "system: {}", cert.system);
    if let Some(m) = &cert.m {
        let _ = writeln!(out, "M: {m}");
    }
    let _ = writeln!(out, "kind: {}", comb.kind().map_or("invalid", |k| k.as_str()));
    let _ = writeln!(out, "contradiction: {}", comb.describe(s));
    for (id, lam) in &cert.multipliers {
        let _ = writeln!(out, "multiplier {id} = {lam}");
    }
    Ok(out)
}

/// Read the text form. `kind` and `contradiction` lines are informational.
pub fn parse_certificate(text: &str) -> Result<FarkasCertificate, CertError> {
    let mut system = None;
    let mut m = None;
    let mut multipliers = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let bad = |msg: &str| CertError::Malformed { line: i + 1, msg: msg.to_string() };
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("multiplier ") {
            let (id, val) = rest.split_once('=').ok_or_else(|| bad("expected `multiplier <id> = <value>`"))?;
            let v: QuadExt = val.trim().parse().map_err(|_| bad("bad multiplier value"))?;
            if multipliers.insert(id.trim().to_string(), v).is_some() {
                return Err(bad("duplicate multiplier"));
            }
        } else if let Some((k, v)) = line.split_once(':') {
            match k.trim() {
                "system" => system = Some(v.trim().to_string()),
                "M" => {
                    let v = v.trim();
                    m = Some(if v == "limit" {
                        MValue::Limit
                    } else {
                        MValue::Int(v.parse::<BigInt>().map_err(|_| bad("bad M value"))?)
                    })
                }
                "kind" | "contradiction" => {}
                _ => return Err(bad("unknown field")),
            }
        } else {
            return Err(bad("unrecognised line"));
        }
    }
    let system = system.ok_or(CertError::Malformed { line: 0, msg: "missing `system:` line".into() })?;
    Ok(FarkasCertificate { system, m, multipliers })
}
