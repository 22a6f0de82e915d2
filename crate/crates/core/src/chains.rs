//! Hypertangent product chains: the `mult/deg` ratio of a subvariety is
//! multiplied by `(i+1)/i` at each intersection with a hypertangent divisor,
//! and the resulting telescoping products are compared with the bound `1`.
//!
//! Chains are data:
//!
//! ```text
//! # description
//! name: sec1_5
//! anchor: hypertangent chain on the codimension-two linear section
//! domain: M >= 7
//! initial: 14/(3*M)
//! factors: telescope(4..M-3)
//! bound: 1
//! expect: 7*(M-2)/(6*M)
//! ```
//!
//! `telescope(a..b)` is `Π_{i=a}^{b} (i+1)/i = (b+1)/a`; it is always
//! evaluated in that closed form.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use thiserror::Error;

use crate::arith::Rat;
use crate::rfunc::{Limit, Monotone, ParamCoeff, RfuncError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainError {
    #[error("M = {m} is outside the chain's domain: {reason}")]
    DomainError { m: i64, reason: String },
    #[error("empty telescoping range {from}..{to} at M = {m}")]
    EmptyRange { m: i64, from: Rat, to: Rat },
    #[error("factor {0} has no closed form")]
    NotTelescoping(String),
    #[error("chain file line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Factor {
    Coeff(ParamCoeff),
    /// `Π_{i=from}^{to} (i+1)/i`
    Telescope { from: ParamCoeff, to: ParamCoeff },
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Coeff(c) => write!(f, "{c}"),
            Factor::Telescope { from, to } => write!(f, "telescope({from}..{to})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainSpec {
    pub name: String,
    pub description: Vec<String>,
    pub anchor: String,
    /// Least admissible `M`.
    pub domain_lo: i64,
    pub initial_ratio: ParamCoeff,
    pub factors: Vec<Factor>,
    pub comparison_bound: Rat,
    /// Claimed closed form, audited against the computed one.
    pub expect: Option<ParamCoeff>,
}

/// Exact value of the chain at `M = m`.
pub fn chain_value(c: &ChainSpec, m: i64) -> Result<Rat, ChainError> {
    if m < c.domain_lo {
        return Err(ChainError::DomainError { m, reason: format!("the domain is M >= {}", c.domain_lo) });
    }
    let dom = |e: RfuncError| ChainError::DomainError { m, reason: e.to_string() };
    let mut v = c.initial_ratio.eval_int(m).map_err(dom)?;
    for f in &c.factors {
        match f {
            Factor::Coeff(p) => v *= p.eval_int(m).map_err(dom)?,
            Factor::Telescope { from, to } => {
                let (a, b) = (from.eval_int(m).map_err(dom)?, to.eval_int(m).map_err(dom)?);
                if !a.is_integer() || !b.is_integer() || !a.is_positive() {
                    return Err(ChainError::DomainError { m, reason: format!("range {a}..{b} is not a range of positive integers") });
                }
                if b < a {
                    return Err(ChainError::EmptyRange { m, from: a, to: b });
                }
                v *= (b + Rat::one()) / a;
            }
        }
    }
    Ok(v)
}

/// The product as a rational function of `M`, checked against
/// [`chain_value`] at five points of the domain.
pub fn chain_closed_form(c: &ChainSpec) -> Result<ParamCoeff, ChainError> {
    let mut v = c.initial_ratio.clone();
    for f in &c.factors {
        let g = match f {
            Factor::Coeff(p) => p.clone(),
            Factor::Telescope { from, to } => {
                to.add(&ParamCoeff::constant(Rat::one())).div(from).map_err(|_| ChainError::NotTelescoping(f.to_string()))?
            }
        };
        v = v.mul(&g);
    }
    for k in 0..5 {
        let m = c.domain_lo + 7 * k;
        let exact = chain_value(c, m)?;
        if v.eval_int(m).ok() != Some(exact) {
            return Err(ChainError::NotTelescoping(format!("closed form disagrees with the product at M = {m}")));
        }
    }
    Ok(v)
}

/// Least `M` from which the chain value stays `>=` (resp. `>`) the bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainThreshold {
    pub ge: Option<i64>,
    pub gt: Option<i64>,
    /// Both answers are backed by a monotonicity certificate for the tail.
    pub certified: bool,
}

/// How far past the domain's start thresholds are searched.
pub const THRESHOLD_SEARCH: i64 = 10_000;

/// Thresholds of the chain against its comparison bound.
///
/// With `f = closed form − bound`, an integer `t` is a tail start when `f(t)`
/// meets the bound and `f` is certified non-decreasing on `[t, ∞)`, or
/// decreasing towards a limit that meets the bound. The threshold is the
/// first tail start, extended downwards while the bound still holds.
pub fn threshold_m(c: &ChainSpec) -> Result<ChainThreshold, ChainError> {
    let f = chain_closed_form(c)?.sub(&ParamCoeff::constant(c.comparison_bound.clone()));
    let limit = f.limit_at_infinity();
    let lo = c.domain_lo;
    let hi = lo + THRESHOLD_SEARCH;
    let mut certified = true;
    let mut find = |strict: bool| -> Option<i64> {
        let meets = |m: i64| f.eval_int(m).ok().is_some_and(|v| if strict { v.is_positive() } else { !v.is_negative() });
        let limit_meets = match &limit {
            Limit::Finite(l) => !l.is_negative(),
            Limit::Infinite(s) => *s > 0,
            _ => false,
        };
        let start = (lo..=hi).find(|&m| {
            meets(m)
                && match f.certify_monotone(&Rat::from_integer(m.into())) {
                    Ok(Monotone::IncreasingOnTail | Monotone::ConstantOnTail) => true,
                    Ok(Monotone::DecreasingOnTail) => limit_meets,
                    _ => false,
                }
        });
        let Some(mut t) = start else {
            // "never" is only proven if f increases towards a limit that
            // misses the bound
            let rising = matches!(f.certify_monotone(&Rat::from_integer(lo.into())), Ok(Monotone::IncreasingOnTail));
            if !rising || limit_meets {
                certified = false;
            }
            return None;
        };
        while t > lo && meets(t - 1) {
            t -= 1;
        }
        Some(t)
    };
    let ge = find(false);
    let gt = find(true);
    Ok(ChainThreshold { ge, gt, certified })
}

/// Codimension of the non-regular locus, `N(N+1)/2 + 2`; `None` for `N = 0`.
pub fn codim_nonreg(n: u64) -> Option<Rat> {
    (n >= 1).then(|| Rat::from_integer(BigInt::from(n) * BigInt::from(n + 1) / 2 + 2))
}

/// Parse a chain file.
pub fn parse_chain(src: &str) -> Result<ChainSpec, ChainError> {
    let mut name = None;
    let mut anchor = None;
    let mut domain_lo = None;
    let mut initial = None;
    let mut factors = None;
    let mut bound = None;
    let mut expect = None;
    let mut description = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let line = i + 1;
        let err = |msg: String| ChainError::Parse { line, msg };
        let (code, comment) = match raw.split_once('#') {
            Some((c, m)) => (c.trim(), Some(m.trim())),
            None => (raw.trim(), None),
        };
        if code.is_empty() {
            if name.is_none() {
                description.extend(comment.filter(|m| !m.is_empty()).map(str::to_string));
            }
            continue;
        }
        let (key, val) = code.split_once(':').ok_or_else(|| err(format!("expected `key: value`, got `{code}`")))?;
        let val = val.trim();
        let coeff = |s: &str| s.parse::<ParamCoeff>().map_err(|e| err(format!("`{s}`: {e}")));
        match key.trim() {
            "name" => name = Some(val.to_string()),
            "anchor" => anchor = Some(val.to_string()),
            "domain" => {
                let n = val
                    .strip_prefix("M")
                    .map(str::trim)
                    .and_then(|s| s.strip_prefix(">="))
                    .ok_or_else(|| err("domain must read `M >= n`".into()))?;
                domain_lo = Some(n.trim().parse::<i64>().map_err(|_| err(format!("bad domain bound `{n}`")))?);
            }
            "initial" => initial = Some(coeff(val)?),
            "factors" => {
                let mut out = Vec::new();
                for part in split_top(val).into_iter().filter(|s| !s.is_empty() && *s != "none") {
                    if let Some(inner) = part.strip_prefix("telescope(").and_then(|s| s.strip_suffix(')')) {
                        let (a, b) = inner.split_once("..").ok_or_else(|| err(format!("bad range `{inner}`")))?;
                        out.push(Factor::Telescope { from: coeff(a.trim())?, to: coeff(b.trim())? });
                    } else {
                        out.push(Factor::Coeff(coeff(part)?));
                    }
                }
                factors = Some(out);
            }
            "bound" => {
                bound = Some(coeff(val)?.as_constant().ok_or_else(|| err("the bound must not depend on M".into()))?);
            }
            "expect" => expect = Some(coeff(val)?),
            k => return Err(err(format!("unknown key `{k}`"))),
        }
    }
    let missing = |k: &str| ChainError::Parse { line: 0, msg: format!("missing `{k}`") };
    Ok(ChainSpec {
        name: name.ok_or_else(|| missing("name"))?,
        description,
        anchor: anchor.ok_or_else(|| missing("anchor"))?,
        domain_lo: domain_lo.ok_or_else(|| missing("domain"))?,
        initial_ratio: initial.ok_or_else(|| missing("initial"))?,
        factors: factors.unwrap_or_default(),
        comparison_bound: bound.unwrap_or_else(Rat::one),
        expect,
    })
}

/// Split on commas outside parentheses.
fn split_top(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out
}
