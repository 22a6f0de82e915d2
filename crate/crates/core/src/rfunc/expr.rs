//! Coefficient expressions: rational functions of `M`, Q(√2) constants and
//! `max(...)` of such, closed under the field operations.
//!
//! Smart constructors fold everything that stays a rational function, so a
//! tree node survives only where it has to (a `max`, or a √2 constant times
//! a non-constant function).

use std::fmt;

use num_traits::{One, Zero};

use super::{Limit, Monotone, ParamCoeff, RfuncError};
use crate::arith::{QuadExt, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CoeffExpr {
    Const(QuadExt),
    /// A rational function that genuinely depends on `M`.
    Func(ParamCoeff),
    Add(Box<CoeffExpr>, Box<CoeffExpr>),
    Mul(Box<CoeffExpr>, Box<CoeffExpr>),
    Div(Box<CoeffExpr>, Box<CoeffExpr>),
    Neg(Box<CoeffExpr>),
    Max(Vec<CoeffExpr>),
}

/// Monotonicity of a coefficient on a tail `[M0, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Constant,
    NonDecreasing,
    NonIncreasing,
    Unknown,
}

impl Direction {
    fn flip(self) -> Self {
        match self {
            Direction::NonDecreasing => Direction::NonIncreasing,
            Direction::NonIncreasing => Direction::NonDecreasing,
            d => d,
        }
    }

    fn join(self, o: Self) -> Self {
        use Direction::*;
        match (self, o) {
            (Constant, d) | (d, Constant) => d,
            (a, b) if a == b => a,
            _ => Unknown,
        }
    }

    pub fn is_non_decreasing(self) -> bool {
        matches!(self, Direction::Constant | Direction::NonDecreasing)
    }

    pub fn is_non_increasing(self) -> bool {
        matches!(self, Direction::Constant | Direction::NonIncreasing)
    }
}

impl CoeffExpr {
    pub fn zero() -> Self {
        CoeffExpr::Const(QuadExt::zero())
    }

    pub fn one() -> Self {
        CoeffExpr::Const(QuadExt::one())
    }

    pub fn constant(q: QuadExt) -> Self {
        CoeffExpr::Const(q)
    }

    pub fn rat(r: Rat) -> Self {
        CoeffExpr::Const(QuadExt::from_rat(r))
    }

    pub fn func(p: ParamCoeff) -> Self {
        match p.as_constant() {
            Some(c) => CoeffExpr::rat(c),
            None => CoeffExpr::Func(p),
        }
    }

    /// The parameter `M` itself.
    pub fn m() -> Self {
        CoeffExpr::Func(ParamCoeff::m())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, CoeffExpr::Const(q) if q.is_zero())
    }

    pub fn as_const(&self) -> Option<&QuadExt> {
        match self {
            CoeffExpr::Const(q) => Some(q),
            _ => None,
        }
    }

    /// The value as a rational function, if it is one.
    pub fn as_param_coeff(&self) -> Option<ParamCoeff> {
        match self {
            CoeffExpr::Const(q) => q.as_rat().map(|r| ParamCoeff::constant(r.clone())),
            CoeffExpr::Func(p) => Some(p.clone()),
            _ => None,
        }
    }

    pub fn uses_m(&self) -> bool {
        match self {
            CoeffExpr::Const(_) => false,
            CoeffExpr::Func(_) => true,
            CoeffExpr::Add(a, b) | CoeffExpr::Mul(a, b) | CoeffExpr::Div(a, b) => a.uses_m() || b.uses_m(),
            CoeffExpr::Neg(a) => a.uses_m(),
            CoeffExpr::Max(v) => v.iter().any(|e| e.uses_m()),
        }
    }

    pub fn add(self, o: Self) -> Self {
        if o.is_zero() {
            return self;
        }
        if self.is_zero() {
            return o;
        }
        match (&self, &o) {
            (CoeffExpr::Const(a), CoeffExpr::Const(b)) => CoeffExpr::Const(a + b),
            _ => match (self.as_param_coeff(), o.as_param_coeff()) {
                (Some(a), Some(b)) => CoeffExpr::func(a.add(&b)),
                _ => CoeffExpr::Add(Box::new(self), Box::new(o)),
            },
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(self) -> Self {
        match self {
            CoeffExpr::Const(q) => CoeffExpr::Const(-q),
            CoeffExpr::Func(p) => CoeffExpr::Func(p.neg()),
            CoeffExpr::Neg(a) => *a,
            e => CoeffExpr::Neg(Box::new(e)),
        }
    }

    pub fn sub(self, o: Self) -> Self {
        self.add(o.neg())
    }

    pub fn mul(self, o: Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return CoeffExpr::zero();
        }
        if matches!(&self, CoeffExpr::Const(q) if q.is_one()) {
            return o;
        }
        if matches!(&o, CoeffExpr::Const(q) if q.is_one()) {
            return self;
        }
        match (&self, &o) {
            (CoeffExpr::Const(a), CoeffExpr::Const(b)) => CoeffExpr::Const(a * b),
            _ => match (self.as_param_coeff(), o.as_param_coeff()) {
                (Some(a), Some(b)) => CoeffExpr::func(a.mul(&b)),
                _ => CoeffExpr::Mul(Box::new(self), Box::new(o)),
            },
        }
    }

    pub fn div(self, o: Self) -> Result<Self, RfuncError> {
        if o.is_zero() {
            return Err(RfuncError::ZeroDenominator);
        }
        if self.is_zero() {
            return Ok(CoeffExpr::zero());
        }
        if matches!(&o, CoeffExpr::Const(q) if q.is_one()) {
            return Ok(self);
        }
        Ok(match (&self, &o) {
            (CoeffExpr::Const(a), CoeffExpr::Const(b)) => CoeffExpr::Const(a / b),
            _ => match (self.as_param_coeff(), o.as_param_coeff()) {
                (Some(a), Some(b)) => CoeffExpr::func(a.div(&b)?),
                _ => CoeffExpr::Div(Box::new(self), Box::new(o)),
            },
        })
    }

    pub fn pow(self, k: u32) -> Self {
        let mut r = CoeffExpr::one();
        for _ in 0..k {
            r = r.mul(self.clone());
        }
        r
    }

    /// `max` of the arguments; folds when all are constants.
    pub fn max(args: Vec<CoeffExpr>) -> Self {
        if args.len() == 1 {
            return args.into_iter().next().unwrap();
        }
        if args.iter().all(|a| a.as_const().is_some()) {
            let best = args.iter().filter_map(|a| a.as_const()).max().cloned().unwrap_or_else(QuadExt::zero);
            return CoeffExpr::Const(best);
        }
        CoeffExpr::Max(args)
    }

    pub fn eval_at(&self, m: &Rat) -> Result<QuadExt, RfuncError> {
        Ok(match self {
            CoeffExpr::Const(q) => q.clone(),
            CoeffExpr::Func(p) => QuadExt::from_rat(p.eval_at(m)?),
            CoeffExpr::Add(a, b) => a.eval_at(m)? + b.eval_at(m)?,
            CoeffExpr::Mul(a, b) => a.eval_at(m)? * b.eval_at(m)?,
            CoeffExpr::Div(a, b) => {
                let d = b.eval_at(m)?;
                if d.is_zero() {
                    return Err(RfuncError::Pole { m: m.clone(), den: b.to_string() });
                }
                a.eval_at(m)? / d
            }
            CoeffExpr::Neg(a) => -a.eval_at(m)?,
            CoeffExpr::Max(v) => {
                let mut best: Option<QuadExt> = None;
                for e in v {
                    let x = e.eval_at(m)?;
                    best = Some(match best {
                        Some(b) => b.max(x),
                        None => x,
                    });
                }
                best.unwrap_or_else(QuadExt::zero)
            }
        })
    }

    pub fn limit_at_infinity(&self) -> Limit {
        use Limit::*;
        match self {
            CoeffExpr::Const(q) => Finite(q.clone()),
            CoeffExpr::Func(p) => p.limit_at_infinity(),
            CoeffExpr::Add(a, b) => match (a.limit_at_infinity(), b.limit_at_infinity()) {
                (Finite(x), Finite(y)) => Finite(x + y),
                (Infinite(s), Finite(_)) | (Finite(_), Infinite(s)) => Infinite(s),
                (Infinite(s), Infinite(t)) if s == t => Infinite(s),
                _ => Unknown,
            },
            CoeffExpr::Neg(a) => match a.limit_at_infinity() {
                Finite(x) => Finite(-x),
                Infinite(s) => Infinite(-s),
                Unknown => Unknown,
            },
            CoeffExpr::Mul(a, b) => match (a.limit_at_infinity(), b.limit_at_infinity()) {
                (Finite(x), Finite(y)) => Finite(x * y),
                (Infinite(s), Finite(x)) | (Finite(x), Infinite(s)) if !x.is_zero() => Infinite(s * x.signum()),
                (Infinite(s), Infinite(t)) => Infinite(s * t),
                _ => Unknown,
            },
            CoeffExpr::Div(a, b) => match (a.limit_at_infinity(), b.limit_at_infinity()) {
                (Finite(x), Finite(y)) if !y.is_zero() => Finite(x / y),
                (Finite(x), Infinite(_)) => Finite(x.clone() * QuadExt::zero()),
                (Infinite(s), Finite(y)) if !y.is_zero() => Infinite(s * y.signum()),
                _ => Unknown,
            },
            CoeffExpr::Max(v) => {
                let mut best: Option<Limit> = None;
                for e in v {
                    let l = e.limit_at_infinity();
                    best = Some(match (best, l) {
                        (None, l) => l,
                        (Some(Unknown), _) | (Some(_), Unknown) => Unknown,
                        (Some(Infinite(1)), _) | (_, Infinite(1)) => Infinite(1),
                        (Some(Infinite(_)), l) => l,
                        (Some(l), Infinite(_)) => l,
                        (Some(Finite(x)), Finite(y)) => Finite(x.max(y)),
                    });
                }
                best.unwrap_or(Unknown)
            }
        }
    }

    /// Monotonicity on `[m0, ∞)`, propagated through the tree.
    pub fn direction_on_tail(&self, m0: &Rat) -> Result<Direction, RfuncError> {
        Ok(match self {
            CoeffExpr::Const(_) => Direction::Constant,
            CoeffExpr::Func(p) => match p.certify_monotone(m0)? {
                Monotone::ConstantOnTail => Direction::Constant,
                Monotone::IncreasingOnTail => Direction::NonDecreasing,
                Monotone::DecreasingOnTail => Direction::NonIncreasing,
                Monotone::NotCertified => Direction::Unknown,
            },
            CoeffExpr::Add(a, b) => a.direction_on_tail(m0)?.join(b.direction_on_tail(m0)?),
            CoeffExpr::Neg(a) => a.direction_on_tail(m0)?.flip(),
            CoeffExpr::Mul(a, b) => match (a.as_const(), b.as_const()) {
                (Some(c), _) => scale_dir(b.direction_on_tail(m0)?, c),
                (_, Some(c)) => scale_dir(a.direction_on_tail(m0)?, c),
                _ => Direction::Unknown,
            },
            CoeffExpr::Div(a, b) => match b.as_const() {
                Some(c) => scale_dir(a.direction_on_tail(m0)?, c),
                None => Direction::Unknown,
            },
            CoeffExpr::Max(v) => {
                let dirs = v.iter().map(|e| e.direction_on_tail(m0)).collect::<Result<Vec<_>, _>>()?;
                if dirs.iter().all(|d| *d == Direction::Constant) {
                    Direction::Constant
                } else if dirs.iter().all(|d| d.is_non_decreasing()) {
                    Direction::NonDecreasing
                } else if dirs.iter().all(|d| d.is_non_increasing()) {
                    Direction::NonIncreasing
                } else {
                    Direction::Unknown
                }
            }
        })
    }

    /// Printing precedence: 0 sum, 1 product, 2 atom.
    fn level(&self) -> u8 {
        match self {
            CoeffExpr::Const(q) => {
                if q.is_rational() {
                    if q.is_negative() {
                        0
                    } else if q.a.is_integer() {
                        2
                    } else {
                        1
                    }
                } else if q.a.is_zero() && !q.is_negative() {
                    if q.b.is_one() {
                        2
                    } else {
                        1
                    }
                } else {
                    0
                }
            }
            CoeffExpr::Func(p) => {
                if p.numer().lead() < Rat::zero() || p.numer().is_compound() {
                    0
                } else if p.is_compound() || !p.denom().lead().is_one() || !p.numer().lead().is_one() {
                    1
                } else {
                    2
                }
            }
            CoeffExpr::Add(..) | CoeffExpr::Neg(_) => 0,
            CoeffExpr::Mul(..) | CoeffExpr::Div(..) => 1,
            CoeffExpr::Max(_) => 2,
        }
    }

    /// Write with parentheses unless the expression binds at least `min`.
    pub(crate) fn fmt_at(&self, min: u8) -> String {
        let s = self.to_string();
        if self.level() >= min {
            s
        } else {
            format!("({s})")
        }
    }

    /// A negative-looking constant or function, for `a - b` printing.
    pub(crate) fn negated_if_negative(&self) -> Option<CoeffExpr> {
        match self {
            CoeffExpr::Const(q) if q.is_rational() && q.is_negative() => Some(self.clone().neg()),
            CoeffExpr::Const(q) if !q.is_rational() && q.a.is_zero() && q.b < Rat::zero() => {
                Some(self.clone().neg())
            }
            CoeffExpr::Func(p) if p.numer().lead() < Rat::zero() && !p.numer().is_compound() => {
                Some(self.clone().neg())
            }
            CoeffExpr::Neg(a) => Some((**a).clone()),
            _ => None,
        }
    }
}

fn scale_dir(d: Direction, c: &QuadExt) -> Direction {
    match c.signum() {
        0 => Direction::Constant,
        s if s > 0 => d,
        _ => d.flip(),
    }
}

impl fmt::Display for CoeffExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffExpr::Const(q) => write!(f, "{q}"),
            CoeffExpr::Func(p) => write!(f, "{p}"),
            CoeffExpr::Add(a, b) => match b.negated_if_negative() {
                Some(nb) => write!(f, "{} - {}", a, nb.fmt_at(1)),
                None => write!(f, "{} + {}", a, b.fmt_at(1)),
            },
            CoeffExpr::Mul(a, b) => write!(f, "{}*{}", a.fmt_at(1), b.fmt_at(2)),
            CoeffExpr::Div(a, b) => write!(f, "{}/{}", a.fmt_at(1), b.fmt_at(2)),
            CoeffExpr::Neg(a) => write!(f, "-{}", a.fmt_at(2)),
            CoeffExpr::Max(v) => {
                let parts: Vec<String> = v.iter().map(|e| e.to_string()).collect();
                write!(f, "max({})", parts.join(", "))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use crate::sysmodel::parse_coeff;

    fn c(s: &str) -> CoeffExpr {
        parse_coeff(s).unwrap()
    }

    #[test]
    fn max_resolves_exactly() {
        let e = c("max(3, 8*M/(3*(M-2)))");
        assert_eq!(e.eval_at(&int(4)).unwrap(), QuadExt::from_rat(rat(16, 3)));
        assert_eq!(e.eval_at(&int(15)).unwrap(), QuadExt::from_rat(rat(40, 13)));
        assert_eq!(e.eval_at(&int(20)).unwrap(), QuadExt::from_int(3));
        assert_eq!(e.limit_at_infinity(), Limit::Finite(QuadExt::from_int(3)));
        assert_eq!(e.direction_on_tail(&int(4)).unwrap(), Direction::NonIncreasing);
    }

    #[test]
    fn folding() {
        assert!(matches!(c("2*M/(M-1) - M/(M-1)"), CoeffExpr::Func(_)));
        assert_eq!(c("10 + 2*sqrt2"), CoeffExpr::Const(QuadExt::new(int(10), int(2))));
        assert!(matches!(c("sqrt2*M"), CoeffExpr::Mul(..)));
    }

    #[test]
    fn print_parse_roundtrip() {
        for s in [
            "max(3, 8*M/(3*M - 6))",
            "sqrt2*M + 1",
            "(1 + sqrt2)*M/(M - 1)",
            "-max(1, M)",
            "max(2, M) - 3",
            "2*M/(M - 2)",
            "-M - 3",
            "3/4*max(1/2, M)",
        ] {
            let e = c(s);
            let p = e.to_string();
            assert_eq!(c(&p), e, "{s} printed as {p}");
        }
    }
}
