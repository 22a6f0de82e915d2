//! Exact scalars: big rationals and the quadratic field Q(√2).
//!
//! [`Rat`] is `num_rational::BigRational`, always kept in lowest terms with a
//! positive denominator. [`QuadExt`] is `a + b·√2` with rational `a`, `b`;
//! its ordering is decided exactly by comparing squares, never by floats.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary-precision rational, canonical form.
pub type Rat = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse scalar `{0}`")]
    Parse(String),
}

/// `n / d` as a rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Integer as a rational.
pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parse `p`, `-p` or `p/q`.
pub fn parse_rat(s: &str) -> Result<Rat, ArithError> {
    let t = s.trim();
    let bad = || ArithError::Parse(s.to_string());
    if let Some((p, q)) = t.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(Rat::new(p, q))
    } else {
        BigInt::from_str(t).map(Rat::from_integer).map_err(|_| bad())
    }
}

/// `a + b·√2` with `a, b ∈ Q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadExt {
    pub a: Rat,
    pub b: Rat,
}

impl QuadExt {
    pub fn new(a: Rat, b: Rat) -> Self {
        QuadExt { a, b }
    }

    pub fn from_rat(a: Rat) -> Self {
        QuadExt { a, b: Rat::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rat(int(n))
    }

    /// The element √2.
    pub fn sqrt2() -> Self {
        QuadExt { a: Rat::zero(), b: Rat::one() }
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// The rational part if `b == 0`.
    pub fn as_rat(&self) -> Option<&Rat> {
        self.is_rational().then_some(&self.a)
    }

    /// Galois conjugate `a - b·√2`.
    pub fn conj(&self) -> Self {
        QuadExt { a: self.a.clone(), b: -self.b.clone() }
    }

    /// Field norm `a² - 2b²`.
    pub fn norm(&self) -> Rat {
        &self.a * &self.a - int(2) * &self.b * &self.b
    }

    /// Exact sign: -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        sign_of(&self.a, &self.b)
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn inv(&self) -> Result<Self, ArithError> {
        let n = self.norm();
        if n.is_zero() {
            // norm vanishes only at zero since √2 is irrational
            return Err(ArithError::DivisionByZero);
        }
        Ok(QuadExt { a: &self.a / &n, b: -(&self.b / &n) })
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, ArithError> {
        Ok(self * &rhs.inv()?)
    }

    /// Floating-point approximation (display and heuristics only).
    pub fn to_f64(&self) -> f64 {
        self.a.to_f64().unwrap_or(f64::NAN)
            + self.b.to_f64().unwrap_or(f64::NAN) * std::f64::consts::SQRT_2
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }
}

/// Sign of `a + b√2`: same-sign parts decide immediately, otherwise
/// compare `a²` with `2b²`.
fn sign_of(a: &Rat, b: &Rat) -> i32 {
    let sa = sgn(a);
    let sb = sgn(b);
    if sb == 0 {
        return sa;
    }
    if sa == 0 {
        return sb;
    }
    if sa == sb {
        return sa;
    }
    let a2 = a * a;
    let b2 = int(2) * b * b;
    match a2.cmp(&b2) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => 0, // impossible for nonzero rationals
    }
}

fn sgn(r: &Rat) -> i32 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

impl Ord for QuadExt {
    fn cmp(&self, other: &Self) -> Ordering {
        let d = self - other;
        d.signum().cmp(&0)
    }
}

impl PartialOrd for QuadExt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Rat> for QuadExt {
    fn from(a: Rat) -> Self {
        QuadExt::from_rat(a)
    }
}

impl From<i64> for QuadExt {
    fn from(n: i64) -> Self {
        QuadExt::from_int(n)
    }
}

impl Zero for QuadExt {
    fn zero() -> Self {
        QuadExt::from_rat(Rat::zero())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for QuadExt {
    fn one() -> Self {
        QuadExt::from_rat(Rat::one())
    }
}

macro_rules! quad_binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl<'a, 'b> $tr<&'b QuadExt> for &'a QuadExt {
            type Output = QuadExt;
            fn $m(self, rhs: &'b QuadExt) -> QuadExt {
                let f: fn(&QuadExt, &QuadExt) -> QuadExt = $body;
                f(self, rhs)
            }
        }
        impl $tr<QuadExt> for QuadExt {
            type Output = QuadExt;
            fn $m(self, rhs: QuadExt) -> QuadExt {
                (&self).$m(&rhs)
            }
        }
        impl<'b> $tr<&'b QuadExt> for QuadExt {
            type Output = QuadExt;
            fn $m(self, rhs: &'b QuadExt) -> QuadExt {
                (&self).$m(rhs)
            }
        }
    };
}

quad_binop!(Add, add, |x, y| QuadExt { a: &x.a + &y.a, b: &x.b + &y.b });
quad_binop!(Sub, sub, |x, y| QuadExt { a: &x.a - &y.a, b: &x.b - &y.b });
quad_binop!(Mul, mul, |x, y| QuadExt {
    a: &x.a * &y.a + int(2) * &x.b * &y.b,
    b: &x.a * &y.b + &x.b * &y.a,
});
// panics on zero divisor, like the rational operators
quad_binop!(Div, div, |x, y| x.checked_div(y).expect("division by zero in Q(sqrt2)"));

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt { a: -self.a, b: -self.b }
    }
}

impl Neg for &QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt { a: -self.a.clone(), b: -self.b.clone() }
    }
}

impl fmt::Display for QuadExt {
    /// `3`, `1/2*sqrt2`, `10 + 2*sqrt2`, `-1 - sqrt2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let babs = self.b.abs();
        let bpart = if babs.is_one() { "sqrt2".to_string() } else { format!("{babs}*sqrt2") };
        if self.a.is_zero() {
            if self.b.is_negative() {
                write!(f, "-{bpart}")
            } else {
                write!(f, "{bpart}")
            }
        } else {
            let op = if self.b.is_negative() { '-' } else { '+' };
            write!(f, "{} {op} {bpart}", self.a)
        }
    }
}

impl FromStr for QuadExt {
    type Err = ArithError;

    /// Accepts the forms produced by `Display`, plus `a+b*sqrt2` without spaces.
    fn from_str(s: &str) -> Result<Self, ArithError> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || ArithError::Parse(s.to_string());
        if t.is_empty() {
            return Err(bad());
        }
        if !t.contains("sqrt2") {
            return parse_rat(&t).map(QuadExt::from_rat);
        }
        // split at the last +/- that is not a leading sign
        let split = t
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(i, _)| i)
            .last();
        let (apart, bpart) = match split {
            Some(i) if t[i..].contains("sqrt2") && !t[..i].contains("sqrt2") => (&t[..i], &t[i..]),
            _ => ("0", t.as_str()),
        };
        let a = parse_rat(apart)?;
        let bstr = bpart.strip_suffix("sqrt2").ok_or_else(bad)?;
        let bstr = bstr.strip_suffix('*').unwrap_or(bstr);
        let b = match bstr {
            "" | "+" => Rat::one(),
            "-" => -Rat::one(),
            other => parse_rat(other.strip_prefix('+').unwrap_or(other))?,
        };
        Ok(QuadExt { a, b })
    }
}

/// Ordered field operations needed by the exact simplex.
pub trait Field:
    Clone
    + Ord
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Send
    + Sync
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
    + Neg<Output = Self>
{
    fn to_quad(&self) -> QuadExt;
    fn is_pos(&self) -> bool {
        *self > Self::zero()
    }
    fn is_neg(&self) -> bool {
        *self < Self::zero()
    }
}

impl Field for Rat {
    fn to_quad(&self) -> QuadExt {
        QuadExt::from_rat(self.clone())
    }
}

impl Field for QuadExt {
    fn to_quad(&self) -> QuadExt {
        self.clone()
    }
}
