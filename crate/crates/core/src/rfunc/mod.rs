//! Rational functions of the integer parameter `M`.
//!
//! A [`ParamCoeff`] is `N(M)/D(M)` reduced to lowest terms with integer
//! coefficients and a positive leading denominator coefficient, so two equal
//! functions are also structurally equal. Monotonicity on a tail `[M0, ∞)`
//! is certified by Sturm sequences on the numerator of the derivative.

mod expr;
mod poly;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::arith::{QuadExt, Rat};

pub use expr::{CoeffExpr, Direction};
pub use poly::Poly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RfuncError {
    #[error("pole at M = {m}: denominator {den} vanishes")]
    Pole { m: Rat, den: String },
    #[error("denominator has a root in [{m0}, ∞)")]
    PoleOnTail { m0: Rat },
    #[error("division by the zero function")]
    ZeroDenominator,
    #[error("not a rational function of M: {0}")]
    NotRational(String),
}

/// Behaviour of a coefficient as `M → ∞`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Limit {
    Finite(QuadExt),
    /// Diverges with the given sign (+1 or -1).
    Infinite(i32),
    /// Not determined by the structure (e.g. `∞ - ∞`).
    Unknown,
}

/// Result of tail monotonicity certification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monotone {
    DecreasingOnTail,
    IncreasingOnTail,
    /// The function does not depend on `M`.
    ConstantOnTail,
    NotCertified,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParamCoeff {
    num: Poly,
    den: Poly,
}

impl ParamCoeff {
    pub fn new(num: Poly, den: Poly) -> Result<Self, RfuncError> {
        if den.is_zero() {
            return Err(RfuncError::ZeroDenominator);
        }
        Ok(Self::normalize(num, den))
    }

    pub fn constant(c: Rat) -> Self {
        Self::normalize(Poly::constant(c), Poly::constant(Rat::one()))
    }

    /// The function `M`.
    pub fn m() -> Self {
        Self::normalize(Poly::x(), Poly::constant(Rat::one()))
    }

    fn normalize(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return ParamCoeff { num, den: Poly::constant(Rat::one()) };
        }
        let g = num.gcd(&den);
        let (num, _) = num.div_rem(&g);
        let (den, _) = den.div_rem(&g);
        // integer coefficients with joint content 1
        let (l1, g1) = num.content_parts();
        let (l2, g2) = den.content_parts();
        let l = num_integer::Integer::lcm(&l1, &l2);
        let gn = num_integer::Integer::gcd(&(&g1 * &l / &l1), &(&g2 * &l / &l2));
        let mut k = Rat::new(l, gn);
        if den.lead().is_negative() {
            k = -k;
        }
        ParamCoeff { num: num.scale(&k), den: den.scale(&k) }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    /// The constant value if the function does not depend on `M`.
    pub fn as_constant(&self) -> Option<Rat> {
        self.is_constant().then(|| self.num.lead() / self.den.lead())
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn eval_at(&self, m: &Rat) -> Result<Rat, RfuncError> {
        let d = self.den.eval(m);
        if d.is_zero() {
            return Err(RfuncError::Pole { m: m.clone(), den: self.den.to_string() });
        }
        Ok(self.num.eval(m) / d)
    }

    pub fn eval_int(&self, m: i64) -> Result<Rat, RfuncError> {
        self.eval_at(&Rat::from_integer(BigInt::from(m)))
    }

    pub fn limit_at_infinity(&self) -> Limit {
        let dn = self.num.degree();
        let dd = self.den.degree().unwrap_or(0);
        match dn {
            None => Limit::Finite(QuadExt::from_rat(Rat::zero())),
            Some(n) if n < dd => Limit::Finite(QuadExt::from_rat(Rat::zero())),
            Some(n) if n == dd => Limit::Finite(QuadExt::from_rat(self.num.lead() / self.den.lead())),
            Some(_) => {
                let s = if self.num.lead().is_positive() == self.den.lead().is_positive() { 1 } else { -1 };
                Limit::Infinite(s)
            }
        }
    }

    /// Certify monotonicity on `[m0, ∞)`.
    ///
    /// The derivative has numerator `g = N'D - ND'` over the positive `D²`.
    /// Roots of `g` at `m0` are divided out; any remaining root in
    /// `(m0, ∞)` makes the answer [`Monotone::NotCertified`]. A root of the
    /// denominator in `[m0, ∞)` is an error.
    pub fn certify_monotone(&self, m0: &Rat) -> Result<Monotone, RfuncError> {
        if self.den.eval(m0).is_zero() || self.den.count_roots_above(m0) > 0 {
            return Err(RfuncError::PoleOnTail { m0: m0.clone() });
        }
        let g = self.num.derivative().mul(&self.den).sub(&self.num.mul(&self.den.derivative()));
        if g.is_zero() {
            return Ok(Monotone::ConstantOnTail);
        }
        let (g, _) = g.deflate_at(m0);
        if g.count_roots_above(m0) > 0 {
            return Ok(Monotone::NotCertified);
        }
        Ok(if g.lead().is_positive() { Monotone::IncreasingOnTail } else { Monotone::DecreasingOnTail })
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::normalize(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }

    pub fn neg(&self) -> Self {
        ParamCoeff { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::normalize(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn div(&self, o: &Self) -> Result<Self, RfuncError> {
        if o.is_zero() {
            return Err(RfuncError::ZeroDenominator);
        }
        Ok(Self::normalize(self.num.mul(&o.den), self.den.mul(&o.num)))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut r = Self::constant(Rat::one());
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    /// Whether the printed form needs parentheses inside a product.
    pub(crate) fn is_compound(&self) -> bool {
        !self.den.is_constant() || self.num.is_compound() || self.num.lead().is_negative()
    }
}

impl fmt::Display for ParamCoeff {
    /// `8*M/(3*M - 6)`, `(M - 4)/M`, `M^2 - 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.num.to_string();
        if self.den.is_constant() {
            let d = self.den.lead();
            if d.is_one() {
                return f.write_str(&n);
            }
            let n = if self.num.is_compound() { format!("({n})") } else { n };
            return write!(f, "{n}/{d}");
        }
        let n = if self.num.is_compound() { format!("({n})") } else { n };
        let d = if self.den.is_compound() || !self.den.lead().is_one() {
            format!("({})", self.den)
        } else {
            self.den.to_string()
        };
        write!(f, "{n}/{d}")
    }
}

impl FromStr for ParamCoeff {
    type Err = crate::sysmodel::SysError;

    /// Parse an arithmetic expression in `M`, e.g. `8*M/(3*(M-2))`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let e = crate::sysmodel::parse_coeff(s)?;
        e.as_param_coeff()
            .ok_or_else(|| crate::sysmodel::SysError::Rfunc(RfuncError::NotRational(s.to_string())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    fn pc(s: &str) -> ParamCoeff {
        s.parse().unwrap()
    }

    #[test]
    fn canonical_form() {
        assert_eq!(pc("8*M/(3*(M-2))"), pc("16*M/(6*M-12)"));
        assert_eq!(pc("8*M/(3*(M-2))").to_string(), "8*M/(3*M - 6)");
        assert_eq!(pc("(M*M-1)/(M-1)"), pc("M+1"));
        assert_eq!(pc("-M/(2-M)"), pc("M/(M-2)"));
        assert_eq!(pc("(1/2)*M").to_string(), "M/2");
    }

    #[test]
    fn evaluation() {
        assert_eq!(pc("8*M/(3*(M-2))").eval_int(15).unwrap(), rat(40, 13));
        assert!(matches!(pc("8*M/(3*(M-2))").eval_int(2), Err(RfuncError::Pole { .. })));
    }

    #[test]
    fn limits() {
        assert_eq!(pc("8*M/(3*(M-2))").limit_at_infinity(), Limit::Finite(QuadExt::from_rat(rat(8, 3))));
        assert_eq!(pc("1/M").limit_at_infinity(), Limit::Finite(QuadExt::from_int(0)));
        assert_eq!(pc("-M*M/(M+1)").limit_at_infinity(), Limit::Infinite(-1));
    }

    #[test]
    fn monotonicity() {
        assert_eq!(pc("8*M/(3*(M-2))").certify_monotone(&int(3)).unwrap(), Monotone::DecreasingOnTail);
        assert_eq!(pc("M").certify_monotone(&int(1)).unwrap(), Monotone::IncreasingOnTail);
        assert_eq!(pc("7").certify_monotone(&int(1)).unwrap(), Monotone::ConstantOnTail);
        // (M-5)^2 has a critical point at 5
        assert_eq!(pc("(M-5)*(M-5)").certify_monotone(&int(1)).unwrap(), Monotone::NotCertified);
        assert_eq!(pc("(M-5)*(M-5)").certify_monotone(&int(5)).unwrap(), Monotone::IncreasingOnTail);
        assert!(pc("1/(M-7)").certify_monotone(&int(4)).is_err());
        assert!(pc("1/(M-7)").certify_monotone(&int(7)).is_err());
    }
}
