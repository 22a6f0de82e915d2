//! Roots of rational polynomials that lie in Q(√2).

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::{QuadExt, Rat};
use crate::rfunc::Poly;

/// Integer trial division stops above this; larger coefficients are not
/// searched for rational roots.
const DIVISOR_LIMIT: u64 = 1_000_000_000_000;

/// All roots of `p` in Q(√2) that can be found from rational roots plus one
/// remaining quadratic factor, and the leftover factor whose roots (if any)
/// were not identified.
pub fn roots_in_q_sqrt2(p: &Poly) -> (Vec<QuadExt>, Poly) {
    let mut roots = Vec::new();
    let mut rest = p.clone();
    for r in rational_roots(p) {
        let (q, _) = rest.deflate_at(&r);
        rest = q;
        roots.push(QuadExt::from_rat(r));
    }
    if rest.degree() == Some(2) {
        if let Some((r1, r2)) = solve_quadratic(&rest) {
            roots.push(r1);
            roots.push(r2);
            rest = Poly::constant(rest.lead());
        }
    }
    (roots, rest)
}

/// Distinct rational roots, by the rational root theorem.
pub fn rational_roots(p: &Poly) -> Vec<Rat> {
    let mut out = Vec::new();
    if p.is_zero() || p.is_constant() {
        return out;
    }
    let (p0, k) = p.deflate_at(&Rat::zero());
    if k > 0 {
        out.push(Rat::zero());
    }
    if p0.is_constant() {
        return out;
    }
    let l = p0.coeffs().iter().fold(BigInt::one(), |acc, c| num_integer::Integer::lcm(&acc, c.denom()));
    let ints: Vec<BigInt> = p0.coeffs().iter().map(|c| (c * Rat::from_integer(l.clone())).to_integer()).collect();
    let (Some(ps), Some(qs)) = (divisors(&ints[0]), divisors(ints.last().unwrap())) else {
        return out;
    };
    let mut cands: Vec<Rat> = Vec::new();
    for a in &ps {
        for b in &qs {
            for s in [1, -1] {
                let r = Rat::new(a * s, b.clone());
                if !cands.contains(&r) {
                    cands.push(r);
                }
            }
        }
    }
    cands.sort();
    for r in cands {
        if p0.eval(&r).is_zero() {
            out.push(r);
        }
    }
    out.sort();
    out
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs();
    let small: u64 = n.clone().try_into().ok()?;
    if small > DIVISOR_LIMIT {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= small {
        if small % d == 0 {
            out.push(BigInt::from(d));
            if d * d != small {
                out.push(BigInt::from(small / d));
            }
        }
        d += 1;
    }
    Some(out)
}

/// Square root of a nonnegative rational inside Q(√2), if it lies there.
pub fn sqrt_in_q_sqrt2(r: &Rat) -> Option<QuadExt> {
    if r.is_negative() {
        return None;
    }
    if let Some(s) = rat_sqrt(r) {
        return Some(QuadExt::from_rat(s));
    }
    // √r = s√2 with s = √(r/2)
    rat_sqrt(&(r / Rat::from_integer(2.into()))).map(|s| QuadExt::new(Rat::zero(), s))
}

fn rat_sqrt(r: &Rat) -> Option<Rat> {
    let (n, d) = (r.numer(), r.denom());
    let (sn, sd) = (n.sqrt(), d.sqrt());
    (&sn * &sn == *n && &sd * &sd == *d).then(|| Rat::new(sn, sd))
}

fn solve_quadratic(p: &Poly) -> Option<(QuadExt, QuadExt)> {
    let c = p.coeffs();
    let (c0, c1, c2) = (&c[0], &c[1], &c[2]);
    let disc = c1 * c1 - Rat::from_integer(4.into()) * c2 * c0;
    let s = sqrt_in_q_sqrt2(&disc)?;
    let two_a = QuadExt::from_rat(c2 * Rat::from_integer(2.into()));
    let mb = QuadExt::from_rat(-c1.clone());
    let r1 = (&mb - &s) / &two_a;
    let r2 = (mb + s) / two_a;
    Some((r1.clone().min(r2.clone()), r1.max(r2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn finds_rational_roots() {
        // (2x - 1)(x + 3)x = 2x^3 + 5x^2 - 3x
        let p = Poly::from_ints(&[0, -3, 5, 2]);
        assert_eq!(rational_roots(&p), vec![rat(-3, 1), rat(0, 1), rat(1, 2)]);
    }

    #[test]
    fn finds_conjugate_pair() {
        // (x - 1)(x^2 - 2) = x^3 - x^2 - 2x + 2
        let p = Poly::from_ints(&[2, -2, -1, 1]);
        let (roots, rest) = roots_in_q_sqrt2(&p);
        assert!(rest.is_constant());
        assert_eq!(roots.len(), 3);
        assert!(roots.contains(&QuadExt::sqrt2()));
        assert!(roots.contains(&-QuadExt::sqrt2()));
    }

    #[test]
    fn leaves_cube_roots() {
        let p = Poly::from_ints(&[-2, 0, 0, 1]);
        let (roots, rest) = roots_in_q_sqrt2(&p);
        assert!(roots.is_empty());
        assert_eq!(rest.degree(), Some(3));
    }

    #[test]
    fn square_roots() {
        assert_eq!(sqrt_in_q_sqrt2(&rat(8, 1)), Some(QuadExt::new(rat(0, 1), rat(2, 1))));
        assert_eq!(sqrt_in_q_sqrt2(&rat(9, 4)), Some(QuadExt::from_rat(rat(3, 2))));
        assert_eq!(sqrt_in_q_sqrt2(&rat(3, 1)), None);
    }
}
