//! Exact feasibility decisions with Farkas certificates.
//!
//! [`decide`] honours strict inequalities: when the relaxed system is
//! feasible it maximises a common slack `t` on the strict rows; `t* = 0`
//! yields a Motzkin-style certificate whose combination reads `0 < 0`.
//! [`verify_certificate`] re-checks any certificate by plain arithmetic and
//! shares no code with the solver.

mod cert;
pub(crate) mod simplex;
mod threshold;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::arith::{Field, QuadExt, Rat};
use crate::sysmodel::{LinearSystem, Relation, SysError};
use simplex::{solve, Lp, LpOutcome, Rhs, RowKind};

pub use cert::{parse_certificate, write_certificate, Combination, ContradictionKind, FarkasCertificate};
pub use threshold::{certify_tail, scan_threshold, ScanEntry, Status, TailCertificate, ThresholdReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertError {
    #[error("unknown constraint id `{0}`")]
    UnknownConstraintId(String),
    #[error(transparent)]
    System(#[from] SysError),
    #[error("malformed certificate, line {line}: {msg}")]
    Malformed { line: usize, msg: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FeasibilityResult {
    /// A point satisfying every constraint, strict ones included.
    Feasible { point: Vec<(String, QuadExt)> },
    Infeasible(FarkasCertificate),
}

impl FeasibilityResult {
    pub fn is_feasible(&self) -> bool {
        matches!(self, FeasibilityResult::Feasible { .. })
    }

    pub fn certificate(&self) -> Option<&FarkasCertificate> {
        match self {
            FeasibilityResult::Infeasible(c) => Some(c),
            _ => None,
        }
    }
}

/// Rows rewritten as `a·x <= b`, `a·x < b` or `a·x = b`.
struct Normalized<F, R> {
    rows: Vec<(Vec<F>, RowKind, bool, R)>,
}

fn normalize<F: Field, R: Rhs<F>>(
    s: &LinearSystem,
    conv_a: impl Fn(&QuadExt) -> F,
    conv_b: impl Fn(&QuadExt) -> R,
) -> Result<Normalized<F, R>, SysError> {
    let rows = s
        .numeric_rows()?
        .into_iter()
        .map(|(a, rel, b)| {
            let a: Vec<F> = a.iter().map(&conv_a).collect();
            let b = conv_b(&b);
            match rel {
                Relation::Le | Relation::Lt => (a, RowKind::Le, rel.is_strict(), b),
                Relation::Ge | Relation::Gt => (a.into_iter().map(|v| -v).collect(), RowKind::Le, rel.is_strict(), -b),
                Relation::Eq => (a, RowKind::Eq, false, b),
            }
        })
        .collect();
    Ok(Normalized { rows })
}

#[derive(Clone)]
enum Decision<F, R> {
    Feasible(Vec<R>),
    /// Multipliers on the normalized rows.
    Infeasible(Vec<F>),
}

/// Decide the closure and, if asked, the system with strict rows honoured.
fn decide_in<F: Field, R: Rhs<F>>(
    s: &LinearSystem,
    norm: &Normalized<F, R>,
    honour_strict: bool,
) -> (Decision<F, R>, Option<Decision<F, R>>) {
    let nv = s.variables.len();
    // column layout: x_j (or x_j⁺, x_j⁻ for free variables), then t
    let mut cols: Vec<(usize, bool)> = Vec::new();
    for (j, v) in s.variables.iter().enumerate() {
        cols.push((j, true));
        if !v.nonneg {
            cols.push((j, false));
        }
    }
    let expand =
        |a: &[F]| -> Vec<F> { cols.iter().map(|&(j, pos)| if pos { a[j].clone() } else { -a[j].clone() }).collect() };
    let collapse = |x: &[R]| -> Vec<R> {
        let mut out = vec![R::zero(); nv];
        for (k, &(j, pos)) in cols.iter().enumerate() {
            out[j] = if pos { out[j].clone() + &x[k] } else { out[j].clone() - &x[k] };
        }
        out
    };

    let lp1 = Lp {
        a: norm.rows.iter().map(|r| expand(&r.0)).collect(),
        kinds: norm.rows.iter().map(|r| r.1).collect(),
        b: norm.rows.iter().map(|r| r.3.clone()).collect(),
        c: vec![F::zero(); cols.len()],
    };
    let relaxed = match solve(&lp1) {
        LpOutcome::Infeasible { lambda } => Decision::Infeasible(lambda),
        LpOutcome::Optimal { x, .. } => Decision::Feasible(collapse(&x)),
        LpOutcome::Unbounded => unreachable!("zero objective is bounded"),
    };
    let has_strict = norm.rows.iter().any(|r| r.2);
    if !honour_strict {
        return (relaxed, None);
    }
    if !has_strict || matches!(relaxed, Decision::Infeasible(_)) {
        return (relaxed.clone(), Some(relaxed));
    }
    // maximise t subject to a·x + t <= b on strict rows, t <= 1
    let nc = cols.len();
    let mut a2 = Vec::new();
    for (r, row) in lp1.a.iter().zip(&norm.rows) {
        let mut v = r.clone();
        v.push(if row.2 { F::one() } else { F::zero() });
        a2.push(v);
    }
    let mut tb = vec![F::zero(); nc + 1];
    tb[nc] = F::one();
    a2.push(tb);
    let mut kinds = lp1.kinds.clone();
    kinds.push(RowKind::Le);
    let mut b = lp1.b.clone();
    b.push(R::one());
    let mut c = vec![F::zero(); nc + 1];
    c[nc] = -F::one();
    let exact = match solve(&Lp { a: a2, kinds, b, c }) {
        LpOutcome::Optimal { x, value, mut lambda } => {
            if value.is_neg() {
                Decision::Feasible(collapse(&x[..nc]))
            } else {
                lambda.pop(); // the t <= 1 row carries no weight when t* = 0
                Decision::Infeasible(lambda)
            }
        }
        _ => unreachable!("the relaxed system is feasible and t is bounded"),
    };
    (relaxed, Some(exact))
}

fn build_result<F: Field, R: Rhs<F>>(s: &LinearSystem, norm: &Normalized<F, R>, d: Decision<F, R>) -> FeasibilityResult {
    match d {
        Decision::Feasible(x) => FeasibilityResult::Feasible {
            point: s.variables.iter().zip(x).map(|(v, xi)| (v.name.clone(), xi.to_quad())).collect(),
        },
        Decision::Infeasible(lambda) => {
            let mut multipliers = BTreeMap::new();
            for (c, l) in s.constraints.iter().zip(&lambda) {
                if !l.is_zero() {
                    multipliers.insert(c.id.clone(), l.to_quad());
                }
            }
            // the nonnegativity rows -x_j <= 0 absorb what is left
            for (j, v) in s.variables.iter().enumerate() {
                if !v.nonneg {
                    continue;
                }
                let mut sum = F::zero();
                for (row, l) in norm.rows.iter().zip(&lambda) {
                    if !l.is_zero() && !row.0[j].is_zero() {
                        sum = sum + &(l.clone() * &row.0[j]);
                    }
                }
                if !sum.is_zero() {
                    multipliers.insert(format!("nonneg:{}", v.name), sum.to_quad());
                }
            }
            FeasibilityResult::Infeasible(FarkasCertificate { system: s.name.clone(), m: s.m.clone(), multipliers })
        }
    }
}

fn finish<F: Field, R: Rhs<F>>(
    s: &LinearSystem,
    norm: Normalized<F, R>,
    honour_strict: bool,
) -> (FeasibilityResult, Option<FeasibilityResult>) {
    let (relaxed, exact) = decide_in(s, &norm, honour_strict);
    (build_result(s, &norm, relaxed), exact.map(|e| build_result(s, &norm, e)))
}

fn run(s: &LinearSystem, honour_strict: bool) -> Result<(FeasibilityResult, Option<FeasibilityResult>), SysError> {
    let rows = s.numeric_rows()?;
    let matrix_rational = rows.iter().all(|(a, _, _)| a.iter().all(|x| x.is_rational()));
    let rhs_rational = rows.iter().all(|(_, _, b)| b.is_rational());
    Ok(match (matrix_rational, rhs_rational) {
        (true, true) => finish(s, normalize::<Rat, Rat>(s, |q| q.a.clone(), |q| q.a.clone())?, honour_strict),
        (true, false) => finish(s, normalize::<Rat, QuadExt>(s, |q| q.a.clone(), |q| q.clone())?, honour_strict),
        _ => finish(s, normalize::<QuadExt, QuadExt>(s, |q| q.clone(), |q| q.clone())?, honour_strict),
    })
}

/// Decide an instantiated system exactly, strict inequalities included.
pub fn decide(s: &LinearSystem) -> Result<FeasibilityResult, SysError> {
    Ok(run(s, true)?.1.expect("exact decision requested"))
}

/// Decide the closure: every strict inequality read as non-strict.
pub fn decide_relaxed(s: &LinearSystem) -> Result<FeasibilityResult, SysError> {
    Ok(run(s, false)?.0)
}

/// Both decisions at once, sharing the relaxed solve: `(exact, relaxed)`.
pub fn decide_both(s: &LinearSystem) -> Result<(FeasibilityResult, FeasibilityResult), SysError> {
    let (relaxed, exact) = run(s, true)?;
    Ok((exact.expect("exact decision requested"), relaxed))
}

/// Check a certificate against an instantiated system by direct arithmetic.
pub fn verify_certificate(s: &LinearSystem, cert: &FarkasCertificate) -> Result<bool, CertError> {
    let comb = cert.combine(s)?;
    Ok(comb.is_contradiction())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;
    use crate::sysmodel::{instantiate, parse_system};

    fn sys(src: &str) -> LinearSystem {
        let s = parse_system("t", src).unwrap();
        if s.param.is_some() {
            instantiate(&s, &s.param.as_ref().unwrap().lo.clone()).unwrap()
        } else {
            s
        }
    }

    #[test]
    fn feasible_point_satisfies() {
        let s = sys("var x, y >= 0;\nx + y = 4;\nx > 1;\ny >= 2*x - 3;");
        match decide(&s).unwrap() {
            FeasibilityResult::Feasible { point } => {
                let x: Vec<QuadExt> = point.into_iter().map(|p| p.1).collect();
                assert!(s.is_satisfied_by(&x).unwrap());
            }
            r => panic!("{r:?}"),
        }
    }

    #[test]
    fn plain_farkas() {
        let s = sys("var x, y >= 0;\nx + y = 4;\nx >= 5;");
        let r = decide(&s).unwrap();
        let c = r.certificate().unwrap();
        assert!(verify_certificate(&s, c).unwrap());
        assert_eq!(c.combine(&s).unwrap().kind(), Some(ContradictionKind::NonStrict));
    }

    #[test]
    fn strict_only_contradiction() {
        // feasible as a closed system (x = 1) but not with x > 1
        let s = sys("var x >= 0;\nx <= 1;\nx > 1;");
        assert!(decide_relaxed(&s).unwrap().is_feasible());
        let r = decide(&s).unwrap();
        let c = r.certificate().unwrap();
        assert!(verify_certificate(&s, c).unwrap());
        assert_eq!(c.combine(&s).unwrap().kind(), Some(ContradictionKind::Strict));
    }

    #[test]
    fn quadratic_field() {
        let s = sys("var x >= 0;\nx <= 10 + 2*sqrt2;\nx > 13;");
        let c = decide(&s).unwrap().certificate().cloned().unwrap();
        assert!(verify_certificate(&s, &c).unwrap());
        let s2 = sys("var x >= 0;\nx <= 10 + 2*sqrt2;\nx > 12;");
        assert!(decide(&s2).unwrap().is_feasible());
    }

    #[test]
    fn free_variables() {
        let s = sys("var z;\nvar x >= 0;\nz + x = -3;\nz >= -1;");
        let c = decide(&s).unwrap().certificate().cloned().unwrap();
        assert!(verify_certificate(&s, &c).unwrap());
        let s2 = sys("var z;\nz <= -3;");
        assert!(decide(&s2).unwrap().is_feasible());
    }

    #[test]
    fn tampered_certificate_rejected() {
        let s = sys("var x, y >= 0;\nx + y = 4;\nx >= 5;");
        let mut c = decide(&s).unwrap().certificate().cloned().unwrap();
        let first = c.multipliers.keys().next().unwrap().clone();
        let v = c.multipliers[&first].clone();
        c.multipliers.insert(first, v + QuadExt::from_rat(int(1)));
        assert!(!verify_certificate(&s, &c).unwrap());
        c.multipliers.insert("c99".into(), QuadExt::from_int(1));
        assert!(matches!(verify_certificate(&s, &c), Err(CertError::UnknownConstraintId(_))));
    }
}
