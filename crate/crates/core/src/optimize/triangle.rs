//! Minimisation of the Noether–Fano objectives over polygons in the
//! `(ν, θ)` plane, with `n` normalised to 1.
//!
//! Both objectives are `g(ν) + h(θ)` with `g` convex and
//! `h(θ) = θ²/(θ−1) = θ + 1 + 1/(θ−1)`.
//!
//! **Lemma (open edge).** For `θ > 1`, `h(θ) >= 4` with equality only at
//! `θ = 2`, and `h(θ) → +∞` as `θ → 1⁺`. So the infimum over a region cut by
//! `θ > 1` is never approached along `θ = 1`, and the minimum over the region
//! equals the minimum over its closure with that edge removed.
//!
//! Since `h` is convex on `θ > 1`, the whole objective is convex there, so a
//! point satisfying the KKT conditions exactly is a global minimiser. The
//! candidates (vertices, stationary points along edges, kinks of
//! `max(ν², 8)`, interior stationary points) all lie in Q(√2); the one with
//! the least value is checked against KKT in exact arithmetic, and an
//! interval branch-and-bound pass gives an independent floating-point witness.

use std::fmt;

use num_traits::{One, Zero};

use super::interval::Interval;
use super::roots::roots_in_q_sqrt2;
use super::OptError;
use crate::arith::{QuadExt, Rat};
use crate::lpsolve::simplex::{solve, Lp, LpOutcome, RowKind};
use crate::rfunc::Poly;
use crate::sysmodel::{parse_system, Relation};

/// Acceptance tolerance of the interval witness.
pub const WITNESS_TOL: f64 = 1e-9;
const MAX_BOXES: usize = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Objective {
    /// `ν² + θ²/(θ−1)`
    PlainNF,
    /// `max(ν², 8) + θ²/(θ−1)`
    ClampedNF,
}

impl Objective {
    pub fn name(self) -> &'static str {
        match self {
            Objective::PlainNF => "PlainNF",
            Objective::ClampedNF => "ClampedNF",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "plainnf" | "plain" => Some(Objective::PlainNF),
            "clampednf" | "clamped" => Some(Objective::ClampedNF),
            _ => None,
        }
    }

    /// Value at `(ν, θ)`; `None` unless `θ > 1`.
    pub fn eval(self, nu: &QuadExt, theta: &QuadExt) -> Option<QuadExt> {
        self.eval_scaled(nu, theta, &QuadExt::one())
    }

    /// The un-normalised objective `g(ν) + nθ²/(θ−n)` (with `8n²` in the
    /// clamp); homogeneous of degree two in `(ν, θ, n)`.
    pub fn eval_scaled(self, nu: &QuadExt, theta: &QuadExt, n: &QuadExt) -> Option<QuadExt> {
        let d = theta - n;
        if !d.is_positive() {
            return None;
        }
        let g = match self {
            Objective::PlainNF => nu * nu,
            Objective::ClampedNF => (nu * nu).max(QuadExt::from_int(8) * n * n),
        };
        Some(g + n * theta * theta / d)
    }

    /// Rigorous lower bound over a box. The objective is separable and each
    /// part is convex in one variable, so the minimum of each part over an
    /// interval is taken at a known point (monotonicity-based enclosure);
    /// only rounding error remains.
    fn lower_bound(self, nu: Interval, theta: Interval) -> f64 {
        let g_arg = if nu.lo <= 0.0 && nu.hi >= 0.0 { 0.0 } else { nu.lo.abs().min(nu.hi.abs()) };
        let g = Interval::point(g_arg).sqr();
        let g = match self {
            Objective::PlainNF => g,
            Objective::ClampedNF => g.max_const(8.0),
        };
        let t = 2.0f64.clamp(theta.lo, theta.hi);
        let t = Interval::point(t);
        let u = t - Interval::point(1.0);
        if u.hi <= 0.0 {
            return f64::INFINITY;
        }
        let u = Interval::new(u.lo.max(0.0), u.hi);
        (g + t + Interval::point(1.0) + u.recip_nonneg()).lo
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `a·ν + b·θ <= c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfPlane {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
}

impl HalfPlane {
    pub fn new(a: Rat, b: Rat, c: Rat) -> Self {
        HalfPlane { a, b, c }
    }

    fn lhs(&self, nu: &QuadExt, theta: &QuadExt) -> QuadExt {
        QuadExt::from_rat(self.a.clone()) * nu + QuadExt::from_rat(self.b.clone()) * theta
    }

    pub fn holds(&self, nu: &QuadExt, theta: &QuadExt) -> bool {
        self.lhs(nu, theta) <= QuadExt::from_rat(self.c.clone())
    }

    pub fn is_tight(&self, nu: &QuadExt, theta: &QuadExt) -> bool {
        self.lhs(nu, theta) == QuadExt::from_rat(self.c.clone())
    }
}

impl fmt::Display for HalfPlane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        for (k, v) in [(&self.a, "nu"), (&self.b, "theta")] {
            if k.is_zero() {
                continue;
            }
            let neg = *k < Rat::zero();
            let mag = if neg { -k.clone() } else { k.clone() };
            let term = if mag.is_one() { v.to_string() } else { format!("{mag}*{v}") };
            s = match (s.is_empty(), neg) {
                (true, false) => term,
                (true, true) => format!("-{term}"),
                (false, false) => format!("{s} + {term}"),
                (false, true) => format!("{s} - {term}"),
            };
        }
        if s.is_empty() {
            s.push('0');
        }
        write!(f, "{s} <= {}", self.c)
    }
}

/// A polygon `{ θ > 1 } ∩ ⋂ half-planes`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangleRegion {
    pub constraints: Vec<HalfPlane>,
}

impl TriangleRegion {
    pub fn new(constraints: Vec<HalfPlane>) -> Self {
        TriangleRegion { constraints }
    }

    /// Parse `;`-separated linear constraints in `nu` and `theta`, e.g.
    /// `"nu <= 3; 5*theta <= 2*nu; theta > 1"`. Equalities become two
    /// half-planes; strict inequalities are taken as their closure (the only
    /// open edge the minimiser treats specially is `θ > 1`).
    pub fn parse(src: &str) -> Result<Self, OptError> {
        let body: String = src
            .split([';', ','])
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| format!("{s};\n"))
            .collect();
        let sys = parse_system("region", &format!("var nu, theta;\n{body}")).map_err(|e| OptError::Region(e.to_string()))?;
        let mut out = Vec::new();
        for c in &sys.constraints {
            let num = |e: &crate::rfunc::CoeffExpr| -> Result<Rat, OptError> {
                e.as_const()
                    .and_then(|q| q.as_rat().cloned())
                    .ok_or_else(|| OptError::Region(format!("{}: coefficients must be rational constants", c.id)))
            };
            let (a, b, r) = (num(&c.coeffs[0])?, num(&c.coeffs[1])?, num(&c.rhs)?);
            let le = HalfPlane::new(a.clone(), b.clone(), r.clone());
            let ge = HalfPlane::new(-a, -b, -r);
            match c.relation {
                Relation::Le | Relation::Lt => out.push(le),
                Relation::Ge | Relation::Gt => out.push(ge),
                Relation::Eq => {
                    out.push(le);
                    out.push(ge);
                }
            }
        }
        Ok(TriangleRegion::new(out))
    }

    /// Membership in the region itself (so `θ > 1` strictly).
    pub fn contains(&self, nu: &QuadExt, theta: &QuadExt) -> bool {
        *theta > QuadExt::one() && self.constraints.iter().all(|h| h.holds(nu, theta))
    }

    /// Whether the region has a point with `θ > 1`: maximise `θ − 1` over
    /// the closure by exact LP.
    pub fn is_nonempty(&self) -> bool {
        // columns ν⁺, ν⁻, u with θ = 1 + u
        let a: Vec<Vec<Rat>> = self.constraints.iter().map(|h| vec![h.a.clone(), -h.a.clone(), h.b.clone()]).collect();
        let b: Vec<Rat> = self.constraints.iter().map(|h| &h.c - &h.b).collect();
        let lp = Lp { kinds: vec![RowKind::Le; a.len()], a, b, c: vec![Rat::zero(), Rat::zero(), -Rat::one()] };
        match solve(&lp) {
            LpOutcome::Infeasible { .. } => false,
            LpOutcome::Unbounded => true,
            LpOutcome::Optimal { value, .. } => value < Rat::zero(),
        }
    }
}

impl fmt::Display for TriangleRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("theta > 1")?;
        for h in &self.constraints {
            write!(f, "; {h}")?;
        }
        Ok(())
    }
}

/// Floating-point enclosure found by branch-and-bound.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalWitness {
    /// Rigorous lower bound of the objective over the whole region.
    pub lower: f64,
    /// Upper end of an enclosure of the exact minimum.
    pub upper: f64,
    pub boxes: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinResult {
    pub objective: Objective,
    pub value: QuadExt,
    pub argmin: (QuadExt, QuadExt),
    /// Indices of the constraints tight at the minimiser.
    pub active: Vec<usize>,
    /// KKT multipliers on `active`, when the check succeeded.
    pub multipliers: Vec<QuadExt>,
    /// Exact first-order optimality.
    pub kkt: bool,
    pub witness: Option<IntervalWitness>,
    pub verified: bool,
}

impl MinResult {
    /// The interval witness is within the acceptance tolerance of the exact
    /// value.
    pub fn witness_within(&self, tol: f64) -> bool {
        let v = self.value.to_f64();
        self.witness.as_ref().is_some_and(|w| w.lower >= v - tol && w.lower <= v + tol)
    }
}

/// Exact minimum of `obj` over `region`.
pub fn min_on_triangle(obj: Objective, region: &TriangleRegion) -> Result<MinResult, OptError> {
    if !region.is_nonempty() {
        return Err(OptError::EmptyRegion);
    }
    let (cands, unresolved) = candidates(obj, region);
    let mut best: Option<(QuadExt, QuadExt, QuadExt)> = None;
    for (nu, th) in cands {
        if !region.contains(&nu, &th) {
            continue;
        }
        let v = obj.eval(&nu, &th).expect("θ > 1 checked");
        let better = match &best {
            None => true,
            Some((bv, bn, bt)) => v < *bv || (v == *bv && (&nu, &th) < (bn, bt)),
        };
        if better {
            best = Some((v, nu, th));
        }
    }
    let Some((value, nu, theta)) = best else {
        return Err(OptError::NotRepresentable);
    };
    let active: Vec<usize> =
        region.constraints.iter().enumerate().filter(|(_, h)| h.is_tight(&nu, &theta)).map(|(i, _)| i).collect();
    let kkt = kkt_multipliers(obj, region, &nu, &theta, &active);
    if kkt.is_none() && unresolved {
        return Err(OptError::NotRepresentable);
    }
    let witness = branch_and_bound(obj, region, &value);
    let verified = kkt.is_some() && witness.as_ref().is_some_and(|w| w.lower >= Interval::from_quad(&value).lo - WITNESS_TOL);
    Ok(MinResult {
        objective: obj,
        value,
        argmin: (nu, theta),
        active,
        kkt: kkt.is_some(),
        multipliers: kkt.unwrap_or_default(),
        witness,
        verified,
    })
}

type Point = (QuadExt, QuadExt);

fn q(r: &Rat) -> QuadExt {
    QuadExt::from_rat(r.clone())
}

/// Candidate minimisers, and whether some edge had stationary points that
/// could not be written in Q(√2).
fn candidates(obj: Objective, region: &TriangleRegion) -> (Vec<Point>, bool) {
    let two = QuadExt::from_int(2);
    let kink = QuadExt::new(Rat::zero(), Rat::from_integer(2.into())); // 2√2
    let mut out: Vec<Point> = vec![(QuadExt::zero(), two.clone())];
    if obj == Objective::ClampedNF {
        out.push((kink.clone(), two.clone()));
        out.push((-kink.clone(), two.clone()));
    }
    let hs = &region.constraints;
    // vertices
    for i in 0..hs.len() {
        for j in i + 1..hs.len() {
            let (h, k) = (&hs[i], &hs[j]);
            let det = &h.a * &k.b - &h.b * &k.a;
            if det.is_zero() {
                continue;
            }
            let nu = (&h.c * &k.b - &h.b * &k.c) / &det;
            let th = (&h.a * &k.c - &h.c * &k.a) / &det;
            out.push((q(&nu), q(&th)));
        }
    }
    let mut unresolved = false;
    for h in hs {
        if h.a.is_zero() && h.b.is_zero() {
            continue;
        }
        if h.b.is_zero() {
            // vertical line ν = c/a: stationary in θ at θ = 2
            out.push((q(&(&h.c / &h.a)), two.clone()));
            continue;
        }
        let theta_at = |nu: &QuadExt| (q(&h.c) - q(&h.a) * nu) / q(&h.b);
        if h.a.is_zero() {
            // horizontal line: g is least at ν = 0
            out.push((QuadExt::zero(), theta_at(&QuadExt::zero())));
            continue;
        }
        let nu_at = |theta: &QuadExt| (q(&h.c) - q(&h.b) * theta) / q(&h.a);
        // with θ = 1 + u, d/dν [ν² + h(θ)] = 0 along the line reads
        // -2b²u³ + (2b(c−b) − a²)u² + a² = 0
        let (a, b, c) = (&h.a, &h.b, &h.c);
        let a2 = a * a;
        let cubic = Poly::new(vec![
            a2.clone(),
            Rat::zero(),
            Rat::from_integer(2.into()) * b * (c - b) - &a2,
            -Rat::from_integer(2.into()) * b * b,
        ]);
        let (roots, rest) = roots_in_q_sqrt2(&cubic);
        if rest.degree().unwrap_or(0) > 0 && rest.count_roots_above(&Rat::zero()) > 0 {
            unresolved = true;
        }
        for u in roots.into_iter().filter(|u| u.is_positive()) {
            let th = QuadExt::one() + u;
            out.push((nu_at(&th), th));
        }
        if obj == Objective::ClampedNF {
            out.push((nu_at(&two), two.clone()));
            out.push((kink.clone(), theta_at(&kink)));
            out.push((-kink.clone(), theta_at(&-kink.clone())));
        }
    }
    (out, unresolved)
}

/// Solve `∇f + Σ λ_j ∇(row_j) = 0`, `λ >= 0` over the active rows, with the
/// subgradient of `max(ν², 8)` at a kink taken as the segment between the
/// two one-sided derivatives.
fn kkt_multipliers(obj: Objective, region: &TriangleRegion, nu: &QuadExt, theta: &QuadExt, active: &[usize]) -> Option<Vec<QuadExt>> {
    let eight = QuadExt::from_int(8);
    let sq = nu * nu;
    let two_nu = QuadExt::from_int(2) * nu;
    // subgradient of g in ν: [lo, hi]
    let (g_lo, g_hi) = match obj {
        Objective::PlainNF => (two_nu.clone(), two_nu),
        Objective::ClampedNF if sq > eight => (two_nu.clone(), two_nu),
        Objective::ClampedNF if sq < eight => (QuadExt::zero(), QuadExt::zero()),
        Objective::ClampedNF => (QuadExt::zero().min(two_nu.clone()), QuadExt::zero().max(two_nu)),
    };
    let u = theta - &QuadExt::one();
    let h_prime = QuadExt::one() - (&u * &u).inv().ok()?;
    let kink = g_lo != g_hi;
    let ncols = active.len() + usize::from(kink);
    if ncols == 0 {
        return (g_lo.is_zero() && h_prime.is_zero()).then(Vec::new);
    }
    let mut row_nu: Vec<QuadExt> = active.iter().map(|&j| q(&region.constraints[j].a)).collect();
    let mut row_th: Vec<QuadExt> = active.iter().map(|&j| q(&region.constraints[j].b)).collect();
    let mut a = Vec::new();
    let mut kinds = vec![RowKind::Eq, RowKind::Eq];
    let mut b = vec![-g_lo.clone(), -h_prime];
    if kink {
        row_nu.push(&g_hi - &g_lo);
        row_th.push(QuadExt::zero());
    }
    a.push(row_nu);
    a.push(row_th);
    if kink {
        let mut cap = vec![QuadExt::zero(); ncols];
        cap[ncols - 1] = QuadExt::one();
        a.push(cap);
        kinds.push(RowKind::Le);
        b.push(QuadExt::one());
    }
    let lp = Lp { a, kinds, b, c: vec![QuadExt::zero(); ncols] };
    match solve(&lp) {
        LpOutcome::Optimal { x, .. } => Some(x[..active.len()].to_vec()),
        _ => None,
    }
}

#[derive(Clone, Copy)]
struct Box2 {
    nu: Interval,
    theta: Interval,
}

/// Shrink the box to the part that can meet the closed region.
fn contract(region: &TriangleRegion, mut bx: Box2) -> Option<Box2> {
    bx.theta.lo = bx.theta.lo.max(1.0);
    for _ in 0..2 {
        for h in &region.constraints {
            let (a, b, c) = (Interval::from_rat(&h.a), Interval::from_rat(&h.b), Interval::from_rat(&h.c));
            if !h.a.is_zero() {
                // ν (<= or >=) (c − bθ)/a
                let r = (c - b * bx.theta) * recip(a);
                if h.a > Rat::zero() {
                    bx.nu.hi = bx.nu.hi.min(r.hi);
                } else {
                    bx.nu.lo = bx.nu.lo.max(r.lo);
                }
            }
            if !h.b.is_zero() {
                let r = (c - a * bx.nu) * recip(b);
                if h.b > Rat::zero() {
                    bx.theta.hi = bx.theta.hi.min(r.hi);
                } else {
                    bx.theta.lo = bx.theta.lo.max(r.lo);
                }
            }
            if bx.nu.is_empty() || bx.theta.is_empty() {
                return None;
            }
        }
    }
    Some(bx)
}

/// `1/x` for an interval of one sign.
fn recip(x: Interval) -> Interval {
    if x.lo > 0.0 {
        x.recip_nonneg()
    } else {
        -(-x).recip_nonneg()
    }
}

/// Certify that nothing in the region lies below `value − 10⁻⁹`.
///
/// Starts from the sublevel box `{f <= V}`: both objectives are at least
/// `ν² + 4` and at least `θ + 1`, so `|ν| <= √(V−4)` and `θ <= V − 1`.
fn branch_and_bound(obj: Objective, region: &TriangleRegion, value: &QuadExt) -> Option<IntervalWitness> {
    let venc = Interval::from_quad(value);
    let target = venc.lo - WITNESS_TOL;
    let vmax = venc.hi + 1.0;
    let r = (vmax - 4.0).max(0.0).sqrt().next_up() + 1e-6;
    let root = Box2 { nu: Interval::new(-r, r), theta: Interval::new(1.0, (vmax - 1.0).next_up()) };
    let mut stack = vec![root];
    let mut lower = f64::INFINITY;
    let mut boxes = 0usize;
    while let Some(bx) = stack.pop() {
        boxes += 1;
        if boxes > MAX_BOXES {
            return None;
        }
        let Some(bx) = contract(region, bx) else { continue };
        let lb = obj.lower_bound(bx.nu, bx.theta);
        if lb >= target {
            lower = lower.min(lb);
            continue;
        }
        let (wn, wt) = (bx.nu.width(), bx.theta.width());
        if wn.max(wt) < 1e-13 {
            return None;
        }
        if wn >= wt {
            let m = bx.nu.mid();
            stack.push(Box2 { nu: Interval::new(bx.nu.lo, m), ..bx });
            stack.push(Box2 { nu: Interval::new(m, bx.nu.hi), ..bx });
        } else {
            let m = bx.theta.mid();
            stack.push(Box2 { theta: Interval::new(bx.theta.lo, m), ..bx });
            stack.push(Box2 { theta: Interval::new(m, bx.theta.hi), ..bx });
        }
    }
    lower.is_finite().then_some(IntervalWitness { lower, upper: venc.hi, boxes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn plain_triangle() -> TriangleRegion {
        TriangleRegion::parse("nu <= 3; 5*theta <= 2*nu; theta > 1").unwrap()
    }

    fn clamped_triangle() -> TriangleRegion {
        TriangleRegion::parse("nu <= 3; 2*theta <= nu; theta > 1").unwrap()
    }

    #[test]
    fn plain_minimum_at_vertex() {
        let r = min_on_triangle(Objective::PlainNF, &plain_triangle()).unwrap();
        assert_eq!(r.value, QuadExt::from_rat(rat(81, 5)));
        assert_eq!(r.argmin, (QuadExt::from_int(3), QuadExt::from_rat(rat(6, 5))));
        assert_eq!(r.multipliers, vec![QuadExt::from_rat(rat(18, 5)), QuadExt::from_rat(rat(24, 5))]);
        assert!(r.kkt && r.verified);
        assert!(r.witness_within(WITNESS_TOL));
    }

    #[test]
    fn clamped_minimum_at_kink() {
        let r = min_on_triangle(Objective::ClampedNF, &clamped_triangle()).unwrap();
        assert_eq!(r.value, "10 + 2*sqrt2".parse().unwrap());
        assert_eq!(r.argmin, ("2*sqrt2".parse().unwrap(), QuadExt::sqrt2()));
        assert_eq!(r.multipliers, vec!["1 + sqrt2".parse().unwrap()]);
        assert!(r.verified);
    }

    #[test]
    fn single_point_region() {
        let reg = TriangleRegion::parse("nu = 3; theta = 6/5").unwrap();
        let r = min_on_triangle(Objective::PlainNF, &reg).unwrap();
        assert_eq!(r.value, QuadExt::from_rat(rat(81, 5)));
        assert!(r.verified);
    }

    #[test]
    fn interior_minimum() {
        let reg = TriangleRegion::parse("nu <= 3; theta <= 5; -nu <= 3").unwrap();
        let r = min_on_triangle(Objective::PlainNF, &reg).unwrap();
        assert_eq!(r.value, QuadExt::from_int(4));
        assert!(r.active.is_empty() && r.verified);
        let c = min_on_triangle(Objective::ClampedNF, &reg).unwrap();
        assert_eq!(c.value, QuadExt::from_int(12));
    }

    #[test]
    fn unbounded_region_still_has_a_minimum() {
        let reg = TriangleRegion::parse("theta >= 3").unwrap();
        let r = min_on_triangle(Objective::PlainNF, &reg).unwrap();
        assert_eq!(r.value, QuadExt::from_rat(rat(9, 2)));
        assert!(r.verified);
    }

    #[test]
    fn edge_stationary_point_in_field() {
        // along ν = θ the stationarity cubic -2u³ - 3u² + 1 has the root u = 1/2
        let reg = TriangleRegion::parse("nu >= theta").unwrap();
        let r = min_on_triangle(Objective::PlainNF, &reg).unwrap();
        assert_eq!(r.value, QuadExt::from_rat(rat(27, 4)));
        assert_eq!(r.argmin, (QuadExt::from_rat(rat(3, 2)), QuadExt::from_rat(rat(3, 2))));
        assert!(r.verified);
    }

    #[test]
    fn irrational_edge_minimum_is_reported() {
        // stationarity along ν + θ = 4 is -2u³ + 5u² + 1 = 0, a cubic
        // irreducible over Q, so its root is not in Q(√2)
        let reg = TriangleRegion::parse("nu + theta >= 4").unwrap();
        assert_eq!(min_on_triangle(Objective::PlainNF, &reg), Err(OptError::NotRepresentable));
    }

    #[test]
    fn empty_regions() {
        let reg = TriangleRegion::parse("theta <= 1").unwrap();
        assert_eq!(min_on_triangle(Objective::PlainNF, &reg), Err(OptError::EmptyRegion));
        let reg = TriangleRegion::parse("nu <= 0; nu >= 1").unwrap();
        assert_eq!(min_on_triangle(Objective::PlainNF, &reg), Err(OptError::EmptyRegion));
    }

    #[test]
    fn display_half_planes() {
        assert_eq!(plain_triangle().to_string(), "theta > 1; nu <= 3; -2*nu + 5*theta <= 0; -theta <= -1");
    }
}
