//! Outward-rounded `f64` intervals. Every operation widens its result by one
//! ulp on each side, so the true real result is always enclosed.

use std::ops::{Add, Mul, Neg, Sub};

use crate::arith::{QuadExt, Rat};
use num_traits::ToPrimitive;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "bad interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    /// Enclosure of an exact rational.
    pub fn from_rat(r: &Rat) -> Self {
        let x = r.to_f64().unwrap_or(f64::NAN);
        Interval { lo: x.next_down(), hi: x.next_up() }
    }

    /// Enclosure of an element of Q(√2).
    pub fn from_quad(q: &QuadExt) -> Self {
        let a = Interval::from_rat(&q.a);
        if q.is_rational() {
            return a;
        }
        let s = Interval { lo: std::f64::consts::SQRT_2.next_down(), hi: std::f64::consts::SQRT_2.next_up() };
        a + Interval::from_rat(&q.b) * s
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        self.lo + (self.hi - self.lo) / 2.0
    }

    pub fn is_empty(&self) -> bool {
        !(self.lo <= self.hi)
    }

    pub fn intersect(&self, o: &Interval) -> Interval {
        Interval { lo: self.lo.max(o.lo), hi: self.hi.min(o.hi) }
    }

    pub fn sqr(self) -> Interval {
        let (a, b) = (self.lo * self.lo, self.hi * self.hi);
        if self.lo >= 0.0 {
            Interval::new(a.next_down().max(0.0), b.next_up())
        } else if self.hi <= 0.0 {
            Interval::new(b.next_down().max(0.0), a.next_up())
        } else {
            Interval::new(0.0, a.max(b).next_up())
        }
    }

    /// `1/x` for an interval with `lo >= 0`; a zero lower end gives `+∞`.
    pub fn recip_nonneg(self) -> Interval {
        assert!(self.lo >= 0.0);
        let hi = if self.lo == 0.0 { f64::INFINITY } else { (1.0 / self.lo).next_up() };
        Interval::new((1.0 / self.hi).next_down().max(0.0), hi)
    }

    pub fn max_const(self, c: f64) -> Interval {
        Interval::new(self.lo.max(c), self.hi.max(c))
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, o: Interval) -> Interval {
        Interval::new((self.lo + o.lo).next_down(), (self.hi + o.hi).next_up())
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, o: Interval) -> Interval {
        self + (-o)
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval { lo: -self.hi, hi: -self.lo }
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, o: Interval) -> Interval {
        let p = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        // 0·∞ only arises from an unbounded factor against an exact zero
        let p = p.map(|x| if x.is_nan() { 0.0 } else { x });
        let lo = p.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = p.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        Interval::new(lo.next_down(), hi.next_up())
    }
}

impl std::fmt::Display for Interval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn encloses_thirds() {
        let i = Interval::from_rat(&rat(1, 3)) * Interval::point(3.0);
        assert!(i.contains(1.0));
        assert!(i.width() < 1e-15);
    }

    #[test]
    fn encloses_sqrt2() {
        let q = Interval::from_quad(&QuadExt::sqrt2()).sqr();
        assert!(q.contains(2.0));
    }

    #[test]
    fn recip_at_zero_is_unbounded() {
        let r = Interval::new(0.0, 0.5).recip_nonneg();
        assert_eq!(r.hi, f64::INFINITY);
        assert!(r.lo <= 2.0);
    }

    #[test]
    fn square_straddling_zero() {
        let s = Interval::new(-1.0, 2.0).sqr();
        assert_eq!(s.lo, 0.0);
        assert!(s.hi >= 4.0);
    }
}
