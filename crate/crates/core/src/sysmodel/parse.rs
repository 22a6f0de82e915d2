//! Lexer and recursive-descent parser for the system text format.

use std::collections::{BTreeMap, HashMap};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::{LinearConstraint, LinearSystem, ParamDomain, Relation, SysError, Variable};
use crate::arith::{QuadExt, Rat};
use crate::rfunc::CoeffExpr;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(BigInt),
    Sym(&'static str),
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

struct Lexed {
    tokens: Vec<Token>,
    /// line -> trailing comment text
    comments: HashMap<usize, String>,
    /// comment lines before the first token
    header: Vec<String>,
}

const SYMS: [&str; 15] = ["<=", ">=", "<", ">", "=", "+", "-", "*", "/", "^", "(", ")", ",", ";", "["];

fn lex(src: &str) -> Result<Lexed, SysError> {
    let mut tokens = Vec::new();
    let mut comments = HashMap::new();
    let mut header = Vec::new();
    for (li, line) in src.lines().enumerate() {
        let ln = li + 1;
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            if c.is_whitespace() {
                i += 1;
            } else if c == '#' {
                let text: String = chars[i + 1..].iter().collect::<String>().trim().to_string();
                if tokens.is_empty() {
                    header.push(text);
                } else {
                    comments.insert(ln, text);
                }
                break;
            } else if c.is_ascii_digit() {
                let st = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[st..i].iter().collect();
                tokens.push(Token { tok: Tok::Num(BigInt::from_str(&s).unwrap()), line: ln, col });
            } else if c.is_alphabetic() || c == '_' {
                let st = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                tokens.push(Token { tok: Tok::Ident(chars[st..i].iter().collect()), line: ln, col });
            } else {
                let rest: String = chars[i..].iter().take(2).collect();
                let sym = SYMS
                    .iter()
                    .chain(std::iter::once(&"]"))
                    .find(|s| rest.starts_with(**s))
                    .ok_or_else(|| SysError::Syntax { line: ln, col, msg: format!("unexpected character `{c}`") })?;
                tokens.push(Token { tok: Tok::Sym(sym), line: ln, col });
                i += sym.len();
            }
        }
    }
    let (line, col) = tokens.last().map_or((1, 1), |t| (t.line, t.col + 1));
    tokens.push(Token { tok: Tok::Eof, line, col });
    Ok(Lexed { tokens, comments, header })
}

/// An affine form `Σ c_j x_j + c0` with coefficient expressions.
#[derive(Debug, Clone, Default)]
struct LinForm {
    terms: BTreeMap<usize, CoeffExpr>,
    constant: Option<CoeffExpr>,
}

impl LinForm {
    fn constant(c: CoeffExpr) -> Self {
        LinForm { terms: BTreeMap::new(), constant: Some(c) }
    }

    fn var(j: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(j, CoeffExpr::one());
        LinForm { terms, constant: None }
    }

    fn cst(&self) -> CoeffExpr {
        self.constant.clone().unwrap_or_else(CoeffExpr::zero)
    }

    fn is_constant(&self) -> bool {
        self.terms.is_empty()
    }

    fn add(mut self, o: LinForm) -> LinForm {
        for (j, c) in o.terms {
            let cur = self.terms.remove(&j).unwrap_or_else(CoeffExpr::zero);
            let s = cur.add(c);
            if !s.is_zero() {
                self.terms.insert(j, s);
            }
        }
        self.constant = match (self.constant, o.constant) {
            (None, None) => None,
            (a, b) => Some(a.unwrap_or_else(CoeffExpr::zero).add(b.unwrap_or_else(CoeffExpr::zero))),
        };
        self
    }

    fn neg(self) -> LinForm {
        LinForm {
            terms: self.terms.into_iter().map(|(j, c)| (j, c.neg())).collect(),
            constant: self.constant.map(|c| c.neg()),
        }
    }

    fn scale(self, k: &CoeffExpr) -> LinForm {
        LinForm {
            terms: self
                .terms
                .into_iter()
                .map(|(j, c)| (j, c.mul(k.clone())))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
            constant: self.constant.map(|c| c.mul(k.clone())),
        }
    }
}

struct Parser<'a> {
    toks: &'a [Token],
    pos: usize,
    param: Option<String>,
    vars: Vec<Variable>,
    /// true when parsing a bare coefficient expression
    coeff_only: bool,
}

type PResult<T> = Result<T, SysError>;

impl<'a> Parser<'a> {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, t: &Token, msg: impl Into<String>) -> PResult<T> {
        Err(SysError::Syntax { line: t.line, col: t.col, msg: msg.into() })
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(&self.peek().tok, Tok::Sym(x) if *x == s)
    }

    fn is_ident(&self, s: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(x) if x == s)
    }

    fn expect_sym(&mut self, s: &str) -> PResult<Token> {
        let t = self.next();
        match &t.tok {
            Tok::Sym(x) if *x == s => Ok(t),
            other => self.err(&t, format!("expected `{s}`, found {}", describe(other))),
        }
    }

    fn ident(&mut self) -> PResult<(String, Token)> {
        let t = self.next();
        match &t.tok {
            Tok::Ident(s) => Ok((s.clone(), t.clone())),
            other => self.err(&t, format!("expected identifier, found {}", describe(other))),
        }
    }

    fn signed_int(&mut self) -> PResult<BigInt> {
        let neg = if self.is_sym("-") {
            self.next();
            true
        } else {
            false
        };
        let t = self.next();
        match t.tok {
            Tok::Num(n) => Ok(if neg { -n } else { n }),
            ref other => self.err(&t, format!("expected integer, found {}", describe(other))),
        }
    }

    // expr := term (('+'|'-') term)*
    fn expr(&mut self) -> PResult<LinForm> {
        let mut acc = self.term()?;
        loop {
            if self.is_sym("+") {
                self.next();
                acc = acc.add(self.term()?);
            } else if self.is_sym("-") {
                self.next();
                acc = acc.add(self.term()?.neg());
            } else {
                return Ok(acc);
            }
        }
    }

    // term := unary (('*'|'/') unary)*
    fn term(&mut self) -> PResult<LinForm> {
        let mut acc = self.unary()?;
        loop {
            if self.is_sym("*") {
                let t = self.next();
                let rhs = self.unary()?;
                acc = if rhs.is_constant() {
                    acc.scale(&rhs.cst())
                } else if acc.is_constant() {
                    rhs.scale(&acc.cst())
                } else {
                    return self.err(&t, "product of two variable terms is not linear");
                };
            } else if self.is_sym("/") {
                let t = self.next();
                let rhs = self.unary()?;
                if !rhs.is_constant() {
                    return self.err(&t, "division by a variable term is not linear");
                }
                let inv = CoeffExpr::one().div(rhs.cst()).map_err(|_| SysError::Syntax {
                    line: t.line,
                    col: t.col,
                    msg: "division by zero".into(),
                })?;
                acc = if matches!(inv, CoeffExpr::Div(..)) {
                    // keep a/b rather than a*(1/b) for non-rational divisors
                    self.div_form(acc, rhs.cst(), &t)?
                } else {
                    acc.scale(&inv)
                };
            } else {
                return Ok(acc);
            }
        }
    }

    fn div_form(&self, a: LinForm, d: CoeffExpr, t: &Token) -> PResult<LinForm> {
        let f = |c: CoeffExpr| {
            c.div(d.clone()).map_err(|_| SysError::Syntax { line: t.line, col: t.col, msg: "division by zero".into() })
        };
        Ok(LinForm {
            terms: a.terms.into_iter().map(|(j, c)| Ok((j, f(c)?))).collect::<PResult<_>>()?,
            constant: a.constant.map(f).transpose()?,
        })
    }

    // unary := '-' unary | power
    fn unary(&mut self) -> PResult<LinForm> {
        if self.is_sym("-") {
            self.next();
            return Ok(self.unary()?.neg());
        }
        if self.is_sym("+") {
            self.next();
            return self.unary();
        }
        self.power()
    }

    // power := atom ('^' int)?
    fn power(&mut self) -> PResult<LinForm> {
        let base = self.atom()?;
        if self.is_sym("^") {
            let t = self.next();
            let e = self.next();
            let k = match &e.tok {
                Tok::Num(n) => n.to_u32().filter(|&k| k <= 64),
                _ => None,
            };
            let Some(k) = k else { return self.err(&e, "expected a small integer exponent") };
            if !base.is_constant() {
                return self.err(&t, "power of a variable term is not linear");
            }
            return Ok(LinForm::constant(base.cst().pow(k)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> PResult<LinForm> {
        let t = self.next();
        match &t.tok {
            Tok::Num(n) => Ok(LinForm::constant(CoeffExpr::rat(Rat::from_integer(n.clone())))),
            Tok::Sym("(") => {
                let e = self.expr()?;
                self.expect_sym(")")?;
                Ok(e)
            }
            Tok::Ident(name) if name == "sqrt2" => Ok(LinForm::constant(CoeffExpr::Const(QuadExt::sqrt2()))),
            Tok::Ident(name) if name == "max" && self.is_sym("(") => {
                self.next();
                let mut args = vec![self.coeff_arg()?];
                while self.is_sym(",") {
                    self.next();
                    args.push(self.coeff_arg()?);
                }
                self.expect_sym(")")?;
                Ok(LinForm::constant(CoeffExpr::max(args)))
            }
            Tok::Ident(name) if self.param.as_deref() == Some(name.as_str()) => Ok(LinForm::constant(CoeffExpr::m())),
            Tok::Ident(name) => {
                if self.coeff_only {
                    return self.err(&t, format!("unexpected identifier `{name}` in a coefficient"));
                }
                match self.vars.iter().position(|v| &v.name == name) {
                    Some(j) => Ok(LinForm::var(j)),
                    None => Err(SysError::UndeclaredVariable { name: name.clone(), line: t.line, col: t.col }),
                }
            }
            other => self.err(&t, format!("unexpected {}", describe(other))),
        }
    }

    fn coeff_arg(&mut self) -> PResult<CoeffExpr> {
        let t = self.peek().clone();
        let e = self.expr()?;
        if !e.is_constant() {
            return self.err(&t, "max(...) arguments must not contain variables");
        }
        Ok(e.cst())
    }

    fn relation(&mut self) -> PResult<Relation> {
        let t = self.next();
        Ok(match t.tok {
            Tok::Sym("<=") => Relation::Le,
            Tok::Sym("<") => Relation::Lt,
            Tok::Sym(">=") => Relation::Ge,
            Tok::Sym(">") => Relation::Gt,
            Tok::Sym("=") => Relation::Eq,
            ref other => return self.err(&t, format!("expected a relation, found {}", describe(other))),
        })
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Num(n) => format!("`{n}`"),
        Tok::Sym(s) => format!("`{s}`"),
        Tok::Eof => "end of input".into(),
    }
}

/// Parse a system; `name` is recorded as the system's name.
pub fn parse_system(name: &str, src: &str) -> Result<LinearSystem, SysError> {
    let lexed = lex(src)?;
    let mut p = Parser { toks: &lexed.tokens, pos: 0, param: None, vars: Vec::new(), coeff_only: false };
    let mut domain = None;
    let mut constraints = Vec::new();
    while p.peek().tok != Tok::Eof {
        if p.is_ident("param") && p.toks.get(p.pos + 2).is_some_and(|t| t.tok == Tok::Ident("in".into())) {
            let t = p.next();
            if domain.is_some() {
                return p.err(&t, "parameter declared twice");
            }
            let (pname, _) = p.ident()?;
            p.next(); // in
            p.expect_sym("[")?;
            let lo = p.signed_int()?;
            p.expect_sym(",")?;
            let hi = if p.is_ident("inf") {
                p.next();
                p.expect_sym(")")?;
                None
            } else {
                let h = p.signed_int()?;
                p.expect_sym("]")?;
                Some(h)
            };
            p.expect_sym(";")?;
            p.param = Some(pname.clone());
            domain = Some(ParamDomain { name: pname, lo, hi });
        } else if p.is_ident("var") && matches!(p.toks.get(p.pos + 1).map(|t| &t.tok), Some(Tok::Ident(_))) {
            p.next();
            let mut names = vec![p.ident()?];
            while p.is_sym(",") {
                p.next();
                names.push(p.ident()?);
            }
            let nonneg = if p.is_sym(">=") {
                p.next();
                let t = p.next();
                if t.tok != Tok::Num(BigInt::zero()) {
                    return p.err(&t, "only `>= 0` bounds are supported in declarations");
                }
                true
            } else {
                false
            };
            p.expect_sym(";")?;
            for (n, t) in names {
                if p.vars.iter().any(|v| v.name == n) || p.param.as_deref() == Some(n.as_str()) {
                    return p.err(&t, format!("`{n}` declared twice"));
                }
                if n == "max" || n == "sqrt2" {
                    return p.err(&t, format!("`{n}` is reserved"));
                }
                p.vars.push(Variable { name: n, nonneg });
            }
        } else {
            let first = p.peek().clone();
            let lhs = p.expr()?;
            let rel = p.relation()?;
            let rhs = p.expr()?;
            let semi = p.expect_sym(";")?;
            let form = lhs.add(rhs.neg());
            if form.terms.is_empty() {
                return Err(SysError::ZeroRowConstraint { line: first.line });
            }
            let n = p.vars.len();
            let mut coeffs = vec![CoeffExpr::zero(); n];
            for (j, c) in form.terms.iter() {
                coeffs[*j] = c.clone();
            }
            constraints.push(LinearConstraint {
                id: format!("c{}", constraints.len() + 1),
                coeffs,
                relation: rel,
                rhs: form.cst().neg(),
                anchor: lexed.comments.get(&semi.line).cloned(),
            });
        }
    }
    // variables declared after a constraint widen earlier rows
    let n = p.vars.len();
    for c in &mut constraints {
        c.coeffs.resize(n, CoeffExpr::zero());
    }
    Ok(LinearSystem {
        name: name.to_string(),
        description: lexed.header,
        param: domain,
        variables: p.vars,
        constraints,
        m: None,
    })
}

/// Parse a variable-free expression in `M`, e.g. `max(3, 8*M/(3*(M-2)))`.
pub fn parse_coeff(src: &str) -> Result<CoeffExpr, SysError> {
    let lexed = lex(src)?;
    let mut p = Parser { toks: &lexed.tokens, pos: 0, param: Some("M".into()), vars: Vec::new(), coeff_only: true };
    let e = p.expr()?;
    if p.peek().tok != Tok::Eof {
        let t = p.peek().clone();
        return p.err(&t, format!("unexpected {}", describe(&t.tok)));
    }
    Ok(e.cst())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;

    #[test]
    fn parses_declarations_and_anchors() {
        let s = parse_system(
            "t",
            "# header line\nparam M in [4, inf);\nvar x, y >= 0;\nvar z;\nx + 2*y - z <= 10 + 2*sqrt2; # the bound\nx > 0;\n",
        )
        .unwrap();
        assert_eq!(s.description, vec!["header line"]);
        assert_eq!(s.variables.len(), 3);
        assert!(!s.variables[2].nonneg);
        assert_eq!(s.constraints[0].anchor.as_deref(), Some("the bound"));
        assert_eq!(s.constraints[0].rhs, CoeffExpr::Const(QuadExt::new(int(10), int(2))));
        assert_eq!(s.constraints[1].relation, Relation::Gt);
        assert_eq!(s.param.as_ref().unwrap().lo, BigInt::from(4));
    }

    #[test]
    fn error_positions() {
        match parse_system("t", "var x >= 0;\nx + y <= 1;") {
            Err(SysError::UndeclaredVariable { name, line, col }) => {
                assert_eq!((name.as_str(), line, col), ("y", 2, 5));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_system("t", "var x >= 0;\nx <= ;"), Err(SysError::Syntax { line: 2, col: 6, .. })));
        assert!(matches!(parse_system("t", "var x >= 0;\nx - x <= 1;"), Err(SysError::ZeroRowConstraint { line: 2 })));
        assert!(matches!(parse_system("t", "var x, y >= 0;\nx*y <= 1;"), Err(SysError::Syntax { .. })));
    }

    #[test]
    fn collects_terms() {
        let s = parse_system("t", "param M in [3, inf);\nvar x >= 0;\n2*(x + 1) <= x*M/(M-1) + 3;").unwrap();
        let c = &s.constraints[0];
        assert_eq!(c.coeffs[0].to_string(), "(M - 2)/(M - 1)");
        assert_eq!(c.rhs, CoeffExpr::rat(int(1)));
    }
}
