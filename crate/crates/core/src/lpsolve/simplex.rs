//! Dense two-phase simplex over an exact ordered field, Bland's rule.
//!
//! Rows whose slack cannot start in the basis get an artificial column.
//! Artificials never re-enter after phase 1 but stay in the tableau, so
//! together with the slacks they carry `B⁻¹` and the dual values are read
//! off their reduced costs.

use crate::arith::{Field, QuadExt, Rat};

/// Right-hand-side values: a field containing the matrix field `F`.
/// Keeping the matrix rational while only the right-hand side involves √2
/// keeps almost every pivot operation in plain rationals.
pub(crate) trait Rhs<F>: Field {
    fn scale(&self, f: &F) -> Self;
    fn div_by(&self, f: &F) -> Self;
}

impl Rhs<Rat> for Rat {
    fn scale(&self, f: &Rat) -> Self {
        self * f
    }
    fn div_by(&self, f: &Rat) -> Self {
        self / f
    }
}

impl Rhs<Rat> for QuadExt {
    fn scale(&self, f: &Rat) -> Self {
        QuadExt::new(&self.a * f, &self.b * f)
    }
    fn div_by(&self, f: &Rat) -> Self {
        QuadExt::new(&self.a / f, &self.b / f)
    }
}

impl Rhs<QuadExt> for QuadExt {
    fn scale(&self, f: &QuadExt) -> Self {
        self * f
    }
    fn div_by(&self, f: &QuadExt) -> Self {
        self / f
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum RowKind {
    Le,
    Eq,
}

/// `min c·x` subject to `a_i·x (<= | =) b_i`, `x >= 0`.
#[derive(Debug, Clone)]
pub(crate) struct Lp<F, R> {
    pub a: Vec<Vec<F>>,
    pub kinds: Vec<RowKind>,
    pub b: Vec<R>,
    pub c: Vec<F>,
}

#[derive(Debug, Clone)]
pub(crate) enum LpOutcome<F, R> {
    /// Row multipliers in the sign convention documented on [`solve`].
    Optimal { x: Vec<R>, value: R, lambda: Vec<F> },
    Infeasible { lambda: Vec<F> },
    Unbounded,
}

struct Tableau<F, R> {
    t: Vec<Vec<F>>,
    rhs: Vec<R>,
    z: Vec<F>,
    /// minus the objective value
    zval: R,
    basis: Vec<usize>,
    width: usize,
}

impl<F: Field, R: Rhs<F>> Tableau<F, R> {
    fn pivot(&mut self, r: usize, e: usize) {
        let p = self.t[r][e].clone();
        for v in self.t[r].iter_mut() {
            if !v.is_zero() {
                *v = v.clone() / &p;
            }
        }
        self.rhs[r] = self.rhs[r].div_by(&p);
        let prow = self.t[r].clone();
        let prhs = self.rhs[r].clone();
        let nz: Vec<usize> = (0..self.width).filter(|&k| !prow[k].is_zero()).collect();
        for i in 0..self.t.len() {
            if i == r || self.t[i][e].is_zero() {
                continue;
            }
            let f = self.t[i][e].clone();
            let row = &mut self.t[i];
            for &k in &nz {
                row[k] = row[k].clone() - &(f.clone() * &prow[k]);
            }
            if !prhs.is_zero() {
                self.rhs[i] = self.rhs[i].clone() - &prhs.scale(&f);
            }
        }
        if !self.z[e].is_zero() {
            let f = self.z[e].clone();
            for &k in &nz {
                self.z[k] = self.z[k].clone() - &(f.clone() * &prow[k]);
            }
            if !prhs.is_zero() {
                self.zval = self.zval.clone() - &prhs.scale(&f);
            }
        }
        self.basis[r] = e;
    }

    /// Run Bland's rule over columns `< limit`. Returns false if unbounded.
    fn optimize(&mut self, limit: usize) -> bool {
        loop {
            let Some(e) = (0..limit).find(|&j| self.z[j].is_neg()) else {
                return true;
            };
            let mut best: Option<(usize, R)> = None;
            for i in 0..self.t.len() {
                let a = &self.t[i][e];
                if !a.is_pos() {
                    continue;
                }
                let ratio = self.rhs[i].div_by(a);
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, e),
                None => return false,
            }
        }
    }
}

/// Solve the LP exactly.
///
/// Multipliers are reported for rows in their given orientation:
/// * `Infeasible`: `λ_i >= 0` on `<=` rows, `Σ λ_i a_ij >= 0` for every
///   column and `Σ λ_i b_i < 0` (a Farkas certificate).
/// * `Optimal`: `λ_i >= 0` on `<=` rows, `Σ λ_i a_ij + c_j >= 0` for every
///   column and `Σ λ_i b_i = -value`.
pub(crate) fn solve<F: Field, R: Rhs<F>>(lp: &Lp<F, R>) -> LpOutcome<F, R> {
    let m = lp.a.len();
    let n = lp.c.len();
    let sigma: Vec<bool> = lp.b.iter().map(|b| b.is_neg()).collect(); // true = row negated
    // slack columns for `<=` rows; artificials only where the slack cannot
    // start in the basis (equalities and negated rows)
    let mut slack_of = vec![None; m];
    let mut k = n;
    for i in 0..m {
        if lp.kinds[i] == RowKind::Le {
            slack_of[i] = Some(k);
            k += 1;
        }
    }
    let art0 = k;
    let mut art_of = vec![None; m];
    for i in 0..m {
        if slack_of[i].is_none() || sigma[i] {
            art_of[i] = Some(k);
            k += 1;
        }
    }
    let width = k;

    let mut t = vec![vec![F::zero(); width]; m];
    let mut rhs = Vec::with_capacity(m);
    let mut basis = vec![0; m];
    for i in 0..m {
        let flip = |v: F| if sigma[i] { -v } else { v };
        for j in 0..n {
            if !lp.a[i][j].is_zero() {
                t[i][j] = flip(lp.a[i][j].clone());
            }
        }
        if let Some(s) = slack_of[i] {
            t[i][s] = flip(F::one());
            basis[i] = s;
        }
        if let Some(a) = art_of[i] {
            t[i][a] = F::one();
            basis[i] = a;
        }
        rhs.push(if sigma[i] { -lp.b[i].clone() } else { lp.b[i].clone() });
    }
    // phase 1: minimise the sum of artificials
    let mut z = vec![F::zero(); width];
    let mut zval = R::zero();
    for i in (0..m).filter(|&i| art_of[i].is_some()) {
        for j in 0..art0 {
            if !t[i][j].is_zero() {
                z[j] = z[j].clone() - &t[i][j];
            }
        }
        zval = zval - &rhs[i];
    }
    let mut tab = Tableau { t, rhs, z, zval, basis, width };
    tab.optimize(width);

    // λ_i = -σ_i y'_i; a slack column gives it directly as its reduced cost,
    // an artificial one via y'_i = 1 - d (phase 1) or -d (phase 2)
    let lambda_from = |tab: &Tableau<F, R>, phase1: bool| -> Vec<F> {
        (0..m)
            .map(|i| {
                if let Some(s) = slack_of[i] {
                    return tab.z[s].clone();
                }
                let d = tab.z[art_of[i].unwrap()].clone();
                let y = if phase1 { F::one() - &d } else { -d };
                if sigma[i] {
                    y
                } else {
                    -y
                }
            })
            .collect()
    };

    if tab.zval.is_neg() {
        // -(objective) < 0: artificials cannot all vanish
        return LpOutcome::Infeasible { lambda: lambda_from(&tab, true) };
    }

    // drive zero-level artificials out of the basis where possible
    for r in 0..m {
        if tab.basis[r] >= art0 {
            if let Some(e) = (0..art0).find(|&j| !tab.t[r][j].is_zero()) {
                tab.pivot(r, e);
            }
        }
    }

    // phase 2
    let cost = |j: usize| if j < n { lp.c[j].clone() } else { F::zero() };
    let mut z: Vec<F> = (0..width).map(cost).collect();
    let mut zval = R::zero();
    for (i, row) in tab.t.iter().enumerate() {
        let cb = cost(tab.basis[i]);
        if cb.is_zero() {
            continue;
        }
        for (zj, v) in z.iter_mut().zip(row) {
            if !v.is_zero() {
                *zj = zj.clone() - &(cb.clone() * v);
            }
        }
        zval = zval - &tab.rhs[i].scale(&cb);
    }
    tab.z = z;
    tab.zval = zval;
    if !tab.optimize(art0) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![R::zero(); n];
    for (i, &bv) in tab.basis.iter().enumerate() {
        if bv < n {
            x[bv] = tab.rhs[i].clone();
        }
    }
    let value = -tab.zval.clone();
    LpOutcome::Optimal { x, value, lambda: lambda_from(&tab, false) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;

    fn lp(a: &[&[i64]], kinds: &[RowKind], b: &[i64], c: &[i64]) -> Lp<Rat, Rat> {
        Lp {
            a: a.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect(),
            kinds: kinds.to_vec(),
            b: b.iter().map(|&v| int(v)).collect(),
            c: c.iter().map(|&v| int(v)).collect(),
        }
    }

    #[test]
    fn small_optimum_with_duals() {
        // min -x - y  s.t. x + 2y <= 4, 3x + y <= 6
        let p = lp(&[&[1, 2], &[3, 1]], &[RowKind::Le, RowKind::Le], &[4, 6], &[-1, -1]);
        match solve(&p) {
            LpOutcome::Optimal { x, value, lambda } => {
                assert_eq!(x, vec![Rat::new(8.into(), 5.into()), Rat::new(6.into(), 5.into())]);
                assert_eq!(value, Rat::new((-14).into(), 5.into()));
                // Σ λ b = -value
                let s: Rat = lambda.iter().zip(&p.b).map(|(l, b)| l * b).sum();
                assert_eq!(s, -value);
                assert!(lambda.iter().all(|l| *l >= int(0)));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn farkas_on_infeasible() {
        // -x <= -1, x <= 0
        let p = lp(&[&[-1], &[1]], &[RowKind::Le, RowKind::Le], &[-1, 0], &[0]);
        match solve(&p) {
            LpOutcome::Infeasible { lambda } => {
                assert_eq!(lambda, vec![int(1), int(1)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unbounded() {
        let p = lp(&[&[1, -1]], &[RowKind::Le], &[1], &[0, -1]);
        assert!(matches!(solve(&p), LpOutcome::Unbounded));
    }

    #[test]
    fn redundant_equalities() {
        // x + y = 2 twice, min x
        let p = lp(&[&[1, 1], &[1, 1]], &[RowKind::Eq, RowKind::Eq], &[2, 2], &[1, 0]);
        match solve(&p) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, int(0)),
            other => panic!("{other:?}"),
        }
    }
}
