//! Parametric linear systems and their text form.
//!
//! A system is a list of nonnegative (or free) variables and linear
//! constraints whose coefficients are [`CoeffExpr`]s in the parameter `M`.
//! [`instantiate`] evaluates every coefficient at an integer `M`;
//! [`limit_system`] replaces them by their limits as `M → ∞`.
//!
//! ```text
//! # comments start with '#'
//! param M in [4, inf);
//! var d0, d1, m0 >= 0;
//! d0 + d1 = 4;                        # trailing comment = anchor
//! m0 <= max(3, 8*M/(3*(M-2)))*d0;
//! ```

mod parse;
mod print;

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::arith::{QuadExt, Rat};
use crate::rfunc::{CoeffExpr, Limit, RfuncError};

pub use parse::{parse_coeff, parse_system};
pub use print::print_system;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SysError {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("undeclared variable `{name}` at {line}:{col}")]
    UndeclaredVariable { name: String, line: usize, col: usize },
    #[error("constraint on line {line} has no nonzero coefficient")]
    ZeroRowConstraint { line: usize },
    #[error("M = {m} is outside the domain: {reason}")]
    DomainError { m: String, reason: String },
    #[error("coefficient of `{var}` in {constraint} has no finite limit")]
    InfiniteLimit { constraint: String, var: String },
    #[error("system `{0}` still depends on M")]
    NotInstantiated(String),
    #[error(transparent)]
    Rfunc(#[from] RfuncError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    Le,
    Lt,
    Ge,
    Gt,
    Eq,
}

impl Relation {
    pub fn is_strict(self) -> bool {
        matches!(self, Relation::Lt | Relation::Gt)
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Lt => "<",
            Relation::Ge => ">=",
            Relation::Gt => ">",
            Relation::Eq => "=",
        }
    }

    /// The same relation with both sides negated.
    pub fn flipped(self) -> Self {
        match self {
            Relation::Le => Relation::Ge,
            Relation::Lt => Relation::Gt,
            Relation::Ge => Relation::Le,
            Relation::Gt => Relation::Lt,
            Relation::Eq => Relation::Eq,
        }
    }

    /// Whether `lhs rel rhs` holds.
    pub fn holds(self, lhs: &QuadExt, rhs: &QuadExt) -> bool {
        match self {
            Relation::Le => lhs <= rhs,
            Relation::Lt => lhs < rhs,
            Relation::Ge => lhs >= rhs,
            Relation::Gt => lhs > rhs,
            Relation::Eq => lhs == rhs,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub nonneg: bool,
}

/// `Σ coeffs[j]·x_j  relation  rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearConstraint {
    /// `c1`, `c2`, … in file order.
    pub id: String,
    /// Dense, one entry per variable.
    pub coeffs: Vec<CoeffExpr>,
    pub relation: Relation,
    pub rhs: CoeffExpr,
    /// Trailing comment on the constraint's line.
    pub anchor: Option<String>,
}

/// Domain of the parameter: integers `M >= lo` (and `<= hi` if bounded).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamDomain {
    pub name: String,
    pub lo: BigInt,
    pub hi: Option<BigInt>,
}

impl ParamDomain {
    pub fn contains(&self, m: &BigInt) -> bool {
        *m >= self.lo && self.hi.as_ref().is_none_or(|h| m <= h)
    }
}

/// Which value of `M` a system has been specialised to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MValue {
    Int(BigInt),
    Limit,
}

impl fmt::Display for MValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MValue::Int(m) => write!(f, "{m}"),
            MValue::Limit => f.write_str("limit"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSystem {
    pub name: String,
    /// Leading comment block.
    pub description: Vec<String>,
    pub param: Option<ParamDomain>,
    pub variables: Vec<Variable>,
    pub constraints: Vec<LinearConstraint>,
    /// Set once every coefficient is a constant.
    pub m: Option<MValue>,
}

impl LinearSystem {
    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v.name == name)
    }

    pub fn constraint(&self, id: &str) -> Option<&LinearConstraint> {
        self.constraints.iter().find(|c| c.id == id)
    }

    pub fn depends_on_m(&self) -> bool {
        self.constraints.iter().any(|c| c.rhs.uses_m() || c.coeffs.iter().any(|e| e.uses_m()))
    }

    pub fn has_strict(&self) -> bool {
        self.constraints.iter().any(|c| c.relation.is_strict())
    }

    /// Count of (equalities, inequalities) including nonnegativity rows.
    pub fn row_counts(&self) -> (usize, usize) {
        let eq = self.constraints.iter().filter(|c| c.relation == Relation::Eq).count();
        let nn = self.variables.iter().filter(|v| v.nonneg).count();
        (eq, self.constraints.len() - eq + nn)
    }

    /// Constant coefficients, or an error if some coefficient still uses `M`.
    pub fn numeric_rows(&self) -> Result<Vec<(Vec<QuadExt>, Relation, QuadExt)>, SysError> {
        self.constraints
            .iter()
            .map(|c| {
                let coeffs = c
                    .coeffs
                    .iter()
                    .map(|e| e.as_const().cloned())
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| SysError::NotInstantiated(self.name.clone()))?;
                let rhs = c.rhs.as_const().cloned().ok_or_else(|| SysError::NotInstantiated(self.name.clone()))?;
                Ok((coeffs, c.relation, rhs))
            })
            .collect()
    }

    /// Whether a point satisfies every constraint, nonnegativity included.
    pub fn is_satisfied_by(&self, x: &[QuadExt]) -> Result<bool, SysError> {
        if x.len() != self.variables.len() {
            return Ok(false);
        }
        for (v, xi) in self.variables.iter().zip(x) {
            if v.nonneg && xi.is_negative() {
                return Ok(false);
            }
        }
        for (coeffs, rel, rhs) in self.numeric_rows()? {
            let lhs = coeffs.iter().zip(x).fold(QuadExt::zero(), |acc, (a, xi)| acc + a * xi);
            if !rel.holds(&lhs, &rhs) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Evaluate every coefficient at `M = m`.
pub fn instantiate(s: &LinearSystem, m: &BigInt) -> Result<LinearSystem, SysError> {
    let mr = Rat::from_integer(m.clone());
    let mut out = s.clone();
    for c in &mut out.constraints {
        for e in c.coeffs.iter_mut().chain(std::iter::once(&mut c.rhs)) {
            let v = e.eval_at(&mr).map_err(|err| SysError::DomainError { m: m.to_string(), reason: err.to_string() })?;
            *e = CoeffExpr::Const(v);
        }
    }
    if let Some(p) = &s.param {
        if !p.contains(m) {
            let hi = p.hi.as_ref().map_or("inf)".to_string(), |h| format!("{h}]"));
            return Err(SysError::DomainError {
                m: m.to_string(),
                reason: format!("{} must lie in [{}, {hi}", p.name, p.lo),
            });
        }
    }
    out.m = Some(MValue::Int(m.clone()));
    Ok(out)
}

/// Replace every coefficient by its limit as `M → ∞`.
pub fn limit_system(s: &LinearSystem) -> Result<LinearSystem, SysError> {
    let mut out = s.clone();
    for c in &mut out.constraints {
        let n = c.coeffs.len();
        for (j, e) in c.coeffs.iter_mut().chain(std::iter::once(&mut c.rhs)).enumerate() {
            match e.limit_at_infinity() {
                Limit::Finite(v) => *e = CoeffExpr::Const(v),
                _ => {
                    let var = if j < n { s.variables[j].name.clone() } else { "rhs".to_string() };
                    return Err(SysError::InfiniteLimit { constraint: c.id.clone(), var });
                }
            }
        }
    }
    out.m = Some(MValue::Limit);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    const XI: &str = "\
param M in [3, inf);
var a, b >= 0;
a + b = 4;                  # split
a <= 8*M/(3*(M-2))*b;       # bound
";

    #[test]
    fn instantiate_and_poles() {
        let s = parse_system("xi", XI).unwrap();
        let s15 = instantiate(&s, &15.into()).unwrap();
        assert_eq!(s15.constraints[1].coeffs[1], CoeffExpr::rat(rat(-40, 13)));
        assert!(matches!(instantiate(&s, &2.into()), Err(SysError::DomainError { .. })));
    }

    #[test]
    fn limits() {
        let s = parse_system("xi", XI).unwrap();
        let l = limit_system(&s).unwrap();
        assert_eq!(l.constraints[1].coeffs[1], CoeffExpr::rat(rat(-8, 3)));
        let bad = parse_system("bad", "param M in [1, inf);\nvar x >= 0;\nM*x <= 1;").unwrap();
        assert!(matches!(limit_system(&bad), Err(SysError::InfiniteLimit { .. })));
    }

    #[test]
    fn satisfaction() {
        let s = instantiate(&parse_system("xi", XI).unwrap(), &15.into()).unwrap();
        let p = |a: i64, b: i64| vec![QuadExt::from_rat(int(a)), QuadExt::from_rat(int(b))];
        assert!(s.is_satisfied_by(&p(1, 3)).unwrap());
        assert!(!s.is_satisfied_by(&p(4, 0)).unwrap());
    }
}
