//! Sparse multivariate polynomials with exact rational coefficients, and the
//! Φ-form identities of the counting-multiplicities argument.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::arith::Rat;

/// Polynomial over a fixed, ordered list of variables. Terms are kept in a
/// map from exponent vectors with zero coefficients removed, so structural
/// equality is mathematical equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultivarPoly {
    vars: Vec<String>,
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl MultivarPoly {
    pub fn zero(vars: &[&str]) -> Self {
        MultivarPoly { vars: vars.iter().map(|s| s.to_string()).collect(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &[&str], c: Rat) -> Self {
        let mut p = Self::zero(vars);
        p.insert(vec![0; vars.len()], c);
        p
    }

    /// The variable `name`, which must be one of `vars`.
    pub fn var(vars: &[&str], name: &str) -> Self {
        let i = vars.iter().position(|v| *v == name).unwrap_or_else(|| panic!("unknown variable {name}"));
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        let mut p = Self::zero(vars);
        p.insert(e, Rat::one());
        p
    }

    /// Linear form `Σ c_i · v_i` with integer coefficients in variable order.
    pub fn linear(vars: &[&str], coeffs: &[i64]) -> Self {
        assert_eq!(vars.len(), coeffs.len());
        vars.iter()
            .zip(coeffs)
            .fold(Self::zero(vars), |acc, (v, &c)| acc + Self::var(vars, v).scale(&Rat::from_integer(c.into())))
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    fn insert(&mut self, e: Vec<u32>, c: Rat) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e.clone()).or_insert_with(Rat::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of the monomial with exponents `e`.
    pub fn coeff(&self, e: &[u32]) -> Rat {
        self.terms.get(e).cloned().unwrap_or_else(Rat::zero)
    }

    /// Terms in canonical (graded, then lexicographically descending) order.
    pub fn terms(&self) -> Vec<(Vec<u32>, Rat)> {
        let mut t: Vec<_> = self.terms.iter().map(|(e, c)| (e.clone(), c.clone())).collect();
        t.sort_by(|(a, _), (b, _)| {
            let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        t
    }

    pub fn scale(&self, k: &Rat) -> Self {
        let mut out = Self { vars: self.vars.clone(), terms: BTreeMap::new() };
        for (e, c) in &self.terms {
            out.insert(e.clone(), c * k);
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::constant(&self.var_refs(), Rat::one());
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    pub fn eval(&self, x: &[Rat]) -> Rat {
        assert_eq!(x.len(), self.vars.len());
        self.terms.iter().fold(Rat::zero(), |acc, (e, c)| {
            let m = e.iter().zip(x).fold(Rat::one(), |m, (&k, xi)| m * num_traits::pow(xi.clone(), k as usize));
            acc + c * m
        })
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Whether every coefficient is nonnegative.
    pub fn has_nonneg_coeffs(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    fn var_refs(&self) -> Vec<&str> {
        self.vars.iter().map(String::as_str).collect()
    }

    fn check_vars(&self, o: &Self) {
        assert_eq!(self.vars, o.vars, "polynomials over different variables");
    }
}

impl Add for &MultivarPoly {
    type Output = MultivarPoly;
    fn add(self, o: &MultivarPoly) -> MultivarPoly {
        self.check_vars(o);
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.insert(e.clone(), c.clone());
        }
        out
    }
}

impl Add for MultivarPoly {
    type Output = MultivarPoly;
    fn add(self, o: MultivarPoly) -> MultivarPoly {
        &self + &o
    }
}

impl Neg for &MultivarPoly {
    type Output = MultivarPoly;
    fn neg(self) -> MultivarPoly {
        self.scale(&-Rat::one())
    }
}

impl Neg for MultivarPoly {
    type Output = MultivarPoly;
    fn neg(self) -> MultivarPoly {
        -&self
    }
}

impl Sub for &MultivarPoly {
    type Output = MultivarPoly;
    fn sub(self, o: &MultivarPoly) -> MultivarPoly {
        self + &(-o)
    }
}

impl Sub for MultivarPoly {
    type Output = MultivarPoly;
    fn sub(self, o: MultivarPoly) -> MultivarPoly {
        &self - &o
    }
}

impl Mul for &MultivarPoly {
    type Output = MultivarPoly;
    fn mul(self, o: &MultivarPoly) -> MultivarPoly {
        self.check_vars(o);
        let mut out = MultivarPoly { vars: self.vars.clone(), terms: BTreeMap::new() };
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.insert(e, c1 * c2);
            }
        }
        out
    }
}

impl Mul for MultivarPoly {
    type Output = MultivarPoly;
    fn mul(self, o: MultivarPoly) -> MultivarPoly {
        &self * &o
    }
}

impl fmt::Display for MultivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            let mono: Vec<String> = e
                .iter()
                .zip(&self.vars)
                .filter(|(k, _)| **k > 0)
                .map(|(k, v)| if *k == 1 { v.clone() } else { format!("{v}^{k}") })
                .collect();
            let body = match (mono.is_empty(), mag.is_one()) {
                (true, _) => mag.to_string(),
                (false, true) => mono.join("*"),
                (false, false) => format!("{mag}*{}", mono.join("*")),
            };
            match (i, neg) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PhiCase {
    /// Discrepancies in {1, 2, 3}; coefficient 3 at `p₁`.
    ThreeLevel,
    /// Discrepancies in {1, 2, 3, 4}; coefficient 4 at `p₁`.
    FourLevel,
}

impl PhiCase {
    pub fn name(self) -> &'static str {
        match self {
            PhiCase::ThreeLevel => "ThreeLevel",
            PhiCase::FourLevel => "FourLevel",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "threelevel" | "three" => Some(PhiCase::ThreeLevel),
            "fourlevel" | "four" => Some(PhiCase::FourLevel),
            _ => None,
        }
    }

    /// The substitution `(m₁, m₂)` the argument needs to rule out.
    pub fn standard_substitution(self) -> (Rat, Rat) {
        match self {
            PhiCase::ThreeLevel => (Rat::from_integer(8.into()), Rat::from_integer(4.into())),
            PhiCase::FourLevel => (Rat::from_integer(12.into()), Rat::from_integer(4.into())),
        }
    }

    pub fn vars(self) -> &'static [&'static str] {
        match self {
            PhiCase::ThreeLevel => &["s", "t0", "t1", "t2"],
            PhiCase::FourLevel => &["s", "t0", "t1", "t2", "t3"],
        }
    }
}

/// Outcome of an identity check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiReport {
    pub case: PhiCase,
    pub m1: Rat,
    pub m2: Rat,
    /// `RHS − LHS` of the counting-multiplicities estimate after substitution.
    pub phi: MultivarPoly,
    /// For the four-level case, `Φ − (2s − t₃)²`.
    pub remainder: Option<MultivarPoly>,
    pub holds: bool,
}

/// The two sides of the counting-multiplicities estimate, `n = 1`:
/// three-level `(s+t₀+t₁+t₂)(s·m₁+(t₀+t₁)m₂)` vs `(3s+3t₀+2t₁+t₂)²`;
/// four-level `(s+t₀+…+t₃)(s·m₁+(t₀+t₁+t₂)m₂)` vs `(4s+4t₀+3t₁+2t₂+t₃)²`.
pub fn estimate_sides(case: PhiCase, m1: &Rat, m2: &Rat) -> (MultivarPoly, MultivarPoly) {
    let v = case.vars();
    let x = |n: &str| MultivarPoly::var(v, n);
    match case {
        PhiCase::ThreeLevel => {
            let total = MultivarPoly::linear(v, &[1, 1, 1, 1]);
            let weighted = x("s").scale(m1) + (x("t0") + x("t1")).scale(m2);
            (total * weighted, MultivarPoly::linear(v, &[3, 3, 2, 1]).pow(2))
        }
        PhiCase::FourLevel => {
            let total = MultivarPoly::linear(v, &[1, 1, 1, 1, 1]);
            let weighted = x("s").scale(m1) + (x("t0") + x("t1") + x("t2")).scale(m2);
            (total * weighted, MultivarPoly::linear(v, &[4, 4, 3, 2, 1]).pow(2))
        }
    }
}

/// `(s − t₂)² + 6st₀ + 5t₀² + 4t₀t₁ + 2t₀t₂`
pub fn three_level_phi() -> MultivarPoly {
    let v = PhiCase::ThreeLevel.vars();
    let x = |n: &str| MultivarPoly::var(v, n);
    let k = |c: i64| Rat::from_integer(c.into());
    (x("s") - x("t2")).pow(2)
        + (x("s") * x("t0")).scale(&k(6))
        + x("t0").pow(2).scale(&k(5))
        + (x("t0") * x("t1")).scale(&k(4))
        + (x("t0") * x("t2")).scale(&k(2))
}

/// Check the Φ identity at the standard substitution.
pub fn check_phi_identity(case: PhiCase) -> PhiReport {
    let (m1, m2) = case.standard_substitution();
    check_phi_identity_at(case, &m1, &m2)
}

/// Check the Φ identity at an arbitrary substitution `(m₁, m₂)`.
///
/// Three-level: `LHS − RHS = −Φ` with Φ the displayed quadratic form.
/// Four-level: `Φ = RHS − LHS` splits as `(2s − t₃)²` plus a form whose
/// coefficients are all nonnegative.
pub fn check_phi_identity_at(case: PhiCase, m1: &Rat, m2: &Rat) -> PhiReport {
    let (lhs, rhs) = estimate_sides(case, m1, m2);
    let phi = &rhs - &lhs;
    let (remainder, holds) = match case {
        PhiCase::ThreeLevel => (None, phi == three_level_phi()),
        PhiCase::FourLevel => {
            let v = case.vars();
            let sq = (MultivarPoly::var(v, "s").scale(&Rat::from_integer(2.into())) - MultivarPoly::var(v, "t3")).pow(2);
            let rem = &phi - &sq;
            let ok = rem.has_nonneg_coeffs();
            (Some(rem), ok)
        }
    };
    PhiReport { case, m1: m1.clone(), m2: m2.clone(), phi, remainder, holds }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    #[test]
    fn canonical_form() {
        let v = ["x", "y"];
        let x = MultivarPoly::var(&v, "x");
        let y = MultivarPoly::var(&v, "y");
        let p = (&x + &y) * (&x - &y);
        let q = x.pow(2) - y.pow(2);
        assert_eq!(p, q);
        assert_eq!(p.to_string(), "x^2 - y^2");
        assert!((&p - &q).is_zero());
        assert_eq!(p.eval(&[int(3), int(1)]), int(8));
    }

    #[test]
    fn display_with_coefficients() {
        let v = ["s", "t"];
        let p = MultivarPoly::linear(&v, &[2, -1]).pow(2);
        assert_eq!(p.to_string(), "4*s^2 - 4*s*t + t^2");
        assert_eq!(MultivarPoly::constant(&v, rat(-1, 2)).to_string(), "-1/2");
    }

    #[test]
    fn three_level_identity() {
        let r = check_phi_identity(PhiCase::ThreeLevel);
        assert!(r.holds);
        assert_eq!(r.phi.to_string(), "s^2 + 6*s*t0 - 2*s*t2 + 5*t0^2 + 4*t0*t1 + 2*t0*t2 + t2^2");
    }

    #[test]
    fn four_level_remainder_is_nonnegative() {
        let r = check_phi_identity(PhiCase::FourLevel);
        assert!(r.holds);
        let rem = r.remainder.unwrap();
        assert_eq!(rem.to_string(), "16*s*t0 + 8*s*t1 + 12*t0^2 + 16*t0*t1 + 8*t0*t2 + 4*t0*t3 + 5*t1^2 + 4*t1*t2 + 2*t1*t3");
    }

    #[test]
    fn perturbed_substitution_fails() {
        assert!(!check_phi_identity_at(PhiCase::ThreeLevel, &int(9), &int(4)).holds);
    }
}
