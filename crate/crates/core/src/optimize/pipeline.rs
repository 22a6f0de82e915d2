//! Bound-propagation pipelines: short derivations of constants, each step an
//! exact rational identity or an implication under a linear hypothesis.
//!
//! ```text
//! # comment
//! given l > 1                   # at most one hypothesis variable
//! implies 4/3*(l + 1) > 8/3     # must hold for every l satisfying it
//! let b = 8/3 + 2/3*(2 - 4/3)
//! check b = 28/9
//! ```

use std::collections::HashMap;

use num_traits::{One, Signed, Zero};

use super::OptError;
use crate::arith::Rat;
use crate::rfunc::{ParamCoeff, Poly};
use crate::sysmodel::Relation;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepReport {
    pub line: usize,
    pub text: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineReport {
    pub id: String,
    pub description: Vec<String>,
    pub steps: Vec<StepReport>,
}

impl PipelineReport {
    pub fn ok(&self) -> bool {
        self.steps.iter().all(|s| s.ok)
    }
}

struct Hyp {
    name: String,
    rel: Relation,
    bound: Rat,
}

/// Run every step of a pipeline.
pub fn run_pipeline(id: &str, src: &str) -> Result<PipelineReport, OptError> {
    let mut env: HashMap<String, ParamCoeff> = HashMap::new();
    let mut hyp: Option<Hyp> = None;
    let mut steps = Vec::new();
    let mut description = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let line = i + 1;
        let err = |msg: String| OptError::Pipeline { line, msg };
        let (code, comment) = match raw.split_once('#') {
            Some((c, m)) => (c.trim(), Some(m.trim())),
            None => (raw.trim(), None),
        };
        if code.is_empty() {
            if steps.is_empty() && hyp.is_none() && env.is_empty() {
                if let Some(m) = comment.filter(|m| !m.is_empty()) {
                    description.push(m.to_string());
                }
            }
            continue;
        }
        let (kw, rest) = code.split_once(char::is_whitespace).ok_or_else(|| err(format!("incomplete step `{code}`")))?;
        let rest = rest.trim();
        match kw {
            "let" => {
                let (name, expr) = rest.split_once('=').ok_or_else(|| err("expected `let name = expr`".into()))?;
                let name = name.trim();
                if !is_ident(name) || hyp.as_ref().is_some_and(|h| h.name == name) {
                    return Err(err(format!("bad binding name `{name}`")));
                }
                let v = eval(expr, &env, hyp.as_ref()).map_err(err)?;
                env.insert(name.to_string(), v);
            }
            "given" => {
                if hyp.is_some() {
                    return Err(err("only one hypothesis per pipeline".into()));
                }
                let (l, rel, r) = split_relation(rest).map_err(err)?;
                let name = l.trim();
                if !is_ident(name) || env.contains_key(name) {
                    return Err(err(format!("bad hypothesis variable `{name}`")));
                }
                if rel == Relation::Eq {
                    return Err(err("a hypothesis must be an inequality".into()));
                }
                let bound = eval(r, &env, None).map_err(err)?.as_constant().ok_or_else(|| err("non-constant bound".into()))?;
                hyp = Some(Hyp { name: name.to_string(), rel, bound });
            }
            "check" | "implies" => {
                let (l, rel, r) = split_relation(rest).map_err(err)?;
                let d = eval(l, &env, hyp.as_ref()).map_err(err)?.sub(&eval(r, &env, hyp.as_ref()).map_err(err)?);
                let (ok, detail) = if kw == "check" {
                    match d.as_constant() {
                        Some(c) => (rel.holds(&c.clone().into(), &Rat::zero().into()), format!("lhs - rhs = {c}")),
                        None => return Err(err("`check` steps must not use the hypothesis variable".into())),
                    }
                } else {
                    let h = hyp.as_ref().ok_or_else(|| err("`implies` needs a `given` hypothesis".into()))?;
                    implication_holds(&d, rel, h)
                };
                steps.push(StepReport { line, text: code.to_string(), ok, detail });
            }
            _ => return Err(err(format!("unknown step `{kw}`"))),
        }
    }
    if steps.is_empty() {
        return Err(OptError::Pipeline { line: 0, msg: "pipeline has no check".into() });
    }
    Ok(PipelineReport { id: id.to_string(), description, steps })
}

/// Does `d(x) rel 0` hold for every `x` with `x h.rel h.bound`?
///
/// Only affine `d` is accepted: write `x = bound ± t`, then `d` is
/// `d(bound) + k·t` on a ray in `t`, and the question is decided exactly.
fn implication_holds(d: &ParamCoeff, rel: Relation, h: &Hyp) -> (bool, String) {
    let (num, den) = (d.numer(), d.denom());
    if !den.is_constant() || num.degree().unwrap_or(0) > 1 {
        return (false, format!("not affine in {}", h.name));
    }
    let slope = num.coeffs().get(1).cloned().unwrap_or_else(Rat::zero) / den.lead();
    let at = d.eval_at(&h.bound).expect("constant denominator");
    // normalise `rel` to `>` / `>=` and the ray direction to increasing
    let (at, slope, strict) = match rel {
        Relation::Gt => (at, slope, true),
        Relation::Ge => (at, slope, false),
        Relation::Lt => (-at, -slope, true),
        Relation::Le => (-at, -slope, false),
        Relation::Eq => return (slope.is_zero() && at.is_zero(), format!("difference at the bound is {at}")),
    };
    let (k, open) = match h.rel {
        Relation::Gt => (slope, true),
        Relation::Ge => (slope, false),
        Relation::Lt => (-slope, true),
        Relation::Le => (-slope, false),
        Relation::Eq => unreachable!(),
    };
    let ok = if k.is_negative() {
        false
    } else if k.is_zero() || !open {
        if strict {
            at.is_positive()
        } else {
            !at.is_negative()
        }
    } else {
        !at.is_negative()
    };
    (ok, format!("at {} = {}: difference {}, slope {}", h.name, h.bound, if rel == Relation::Lt || rel == Relation::Le { -at } else { at }, k))
}

fn is_ident(s: &str) -> bool {
    let mut c = s.chars();
    c.next().is_some_and(|f| f.is_ascii_alphabetic() || f == '_') && c.all(|ch| ch.is_ascii_alphanumeric() || ch == '_')
}

fn split_relation(s: &str) -> Result<(&str, Relation, &str), String> {
    for (tok, rel) in [("<=", Relation::Le), (">=", Relation::Ge), ("<", Relation::Lt), (">", Relation::Gt), ("=", Relation::Eq)] {
        if let Some(i) = s.find(tok) {
            return Ok((&s[..i], rel, &s[i + tok.len()..]));
        }
    }
    Err(format!("no relation in `{s}`"))
}

/// Evaluate an arithmetic expression; the hypothesis variable, if present,
/// stays symbolic.
fn eval(src: &str, env: &HashMap<String, ParamCoeff>, hyp: Option<&Hyp>) -> Result<ParamCoeff, String> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, env, hyp };
    let v = p.sum()?;
    if p.pos != p.toks.len() {
        return Err(format!("unexpected `{}` in `{}`", p.toks[p.pos], src.trim()));
    }
    Ok(v)
}

fn lex(s: &str) -> Result<Vec<String>, String> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            out.push(cs[st..i].iter().collect());
        } else if c.is_ascii_alphabetic() || c == '_' {
            let st = i;
            while i < cs.len() && (cs[i].is_ascii_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(cs[st..i].iter().collect());
        } else if "+-*/^()".contains(c) {
            out.push(c.to_string());
            i += 1;
        } else {
            return Err(format!("unexpected character `{c}`"));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<String>,
    pos: usize,
    env: &'a HashMap<String, ParamCoeff>,
    hyp: Option<&'a Hyp>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&str> {
        self.toks.get(self.pos).map(String::as_str)
    }

    fn next(&mut self) -> Option<String> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn sum(&mut self) -> Result<ParamCoeff, String> {
        let mut v = self.product()?;
        while let Some(op) = self.peek().filter(|t| *t == "+" || *t == "-").map(str::to_string) {
            self.pos += 1;
            let r = self.product()?;
            v = if op == "+" { v.add(&r) } else { v.sub(&r) };
        }
        Ok(v)
    }

    fn product(&mut self) -> Result<ParamCoeff, String> {
        let mut v = self.unary()?;
        while let Some(op) = self.peek().filter(|t| *t == "*" || *t == "/").map(str::to_string) {
            self.pos += 1;
            let r = self.unary()?;
            v = if op == "*" { v.mul(&r) } else { v.div(&r).map_err(|e| e.to_string())? };
        }
        Ok(v)
    }

    fn unary(&mut self) -> Result<ParamCoeff, String> {
        if self.peek() == Some("-") {
            self.pos += 1;
            return Ok(self.unary()?.neg());
        }
        let base = self.atom()?;
        if self.peek() == Some("^") {
            self.pos += 1;
            let e = self.next().ok_or("missing exponent")?;
            let k: u32 = e.parse().map_err(|_| format!("bad exponent `{e}`"))?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<ParamCoeff, String> {
        let t = self.next().ok_or("unexpected end of expression")?;
        if t == "(" {
            let v = self.sum()?;
            if self.next().as_deref() != Some(")") {
                return Err("missing `)`".into());
            }
            return Ok(v);
        }
        if t.chars().all(|c| c.is_ascii_digit()) {
            let n: num_bigint::BigInt = t.parse().map_err(|_| format!("bad number `{t}`"))?;
            return Ok(ParamCoeff::constant(Rat::from_integer(n)));
        }
        if self.hyp.is_some_and(|h| h.name == t) {
            return Ok(ParamCoeff::new(Poly::x(), Poly::constant(Rat::one())).expect("x/1"));
        }
        self.env.get(&t).cloned().ok_or_else(|| format!("unbound name `{t}`"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_checks() {
        let r = run_pipeline("t", "let a = 8/3 + 2/3*(2 - 4/3)\ncheck a = 28/9\ncheck 3/2*a = 14/3\n").unwrap();
        assert!(r.ok());
        let r = run_pipeline("t", "check 3/2*28/9 = 14/5\n").unwrap();
        assert!(!r.ok());
    }

    #[test]
    fn implications() {
        let ok = |src: &str| run_pipeline("t", src).unwrap().ok();
        assert!(ok("given l > 1\nimplies 4/3*(l + 1) > 8/3\n"));
        assert!(ok("given l >= 1\nimplies 4/3*(l + 1) >= 8/3\n"));
        assert!(!ok("given l >= 1\nimplies 4/3*(l + 1) > 8/3\n"));
        assert!(!ok("given l > 1\nimplies 8/3 - l > 0\n"));
        assert!(ok("given l < 1\nimplies 2 - l > 1\n"));
        assert!(!ok("given l > 1\nimplies l*l > 1\n"));
    }

    #[test]
    fn description_and_errors() {
        let r = run_pipeline("t", "# first\n# second\ncheck 1 = 1\n").unwrap();
        assert_eq!(r.description, vec!["first", "second"]);
        assert!(matches!(run_pipeline("t", "check x = 1\n"), Err(OptError::Pipeline { line: 1, .. })));
        assert!(matches!(run_pipeline("t", "given l > 1\ncheck l = 1\n"), Err(OptError::Pipeline { line: 2, .. })));
        assert!(matches!(run_pipeline("t", "# nothing\n"), Err(OptError::Pipeline { .. })));
    }
}
