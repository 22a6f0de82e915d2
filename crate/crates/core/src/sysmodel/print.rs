//! Canonical text form; `parse_system(print_system(s)) == s`.

use std::fmt::Write;

use super::{LinearConstraint, LinearSystem};
use num_traits::One;

use crate::rfunc::CoeffExpr;

fn term(coef: &CoeffExpr, var: &str) -> String {
    match coef {
        CoeffExpr::Const(q) if q.is_one() => var.to_string(),
        _ => format!("{}*{var}", coef.fmt_at(1)),
    }
}

fn constraint_line(s: &LinearSystem, c: &LinearConstraint) -> String {
    let mut out = String::new();
    for (j, coef) in c.coeffs.iter().enumerate() {
        if coef.is_zero() {
            continue;
        }
        let name = &s.variables[j].name;
        if out.is_empty() {
            match coef.negated_if_negative() {
                Some(n) => {
                    out.push('-');
                    out.push_str(&neg_term(&n, name));
                }
                None => out.push_str(&term(coef, name)),
            }
        } else {
            match coef.negated_if_negative() {
                Some(n) => {
                    out.push_str(" - ");
                    out.push_str(&term(&n, name));
                }
                None => {
                    out.push_str(" + ");
                    out.push_str(&term(coef, name));
                }
            }
        }
    }
    let _ = write!(out, " {} {};", c.relation, c.rhs);
    if let Some(a) = &c.anchor {
        let _ = write!(out, "  # {a}");
    }
    out
}

/// After a leading unary minus the term must bind tighter than a product.
fn neg_term(coef: &CoeffExpr, var: &str) -> String {
    match coef {
        CoeffExpr::Const(q) if q.is_one() => var.to_string(),
        _ => format!("{}*{var}", coef.fmt_at(2)),
    }
}

pub fn print_system(s: &LinearSystem) -> String {
    let mut out = String::new();
    for line in &s.description {
        if line.is_empty() {
            out.push_str("#\n");
        } else {
            let _ = writeln!(out, "# {line}");
        }
    }
    if let Some(p) = &s.param {
        match &p.hi {
            Some(h) => {
                let _ = writeln!(out, "param {} in [{}, {h}];", p.name, p.lo);
            }
            None => {
                let _ = writeln!(out, "param {} in [{}, inf);", p.name, p.lo);
            }
        }
    }
    // group runs of variables with the same sign condition
    let mut i = 0;
    while i < s.variables.len() {
        let nn = s.variables[i].nonneg;
        let mut j = i;
        while j < s.variables.len() && s.variables[j].nonneg == nn {
            j += 1;
        }
        let names: Vec<&str> = s.variables[i..j].iter().map(|v| v.name.as_str()).collect();
        let _ = writeln!(out, "var {}{};", names.join(", "), if nn { " >= 0" } else { "" });
        i = j;
    }
    for c in &s.constraints {
        out.push_str(&constraint_line(s, c));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::parse_system;
    use super::*;

    #[test]
    fn roundtrip_keeps_structure() {
        let src = "\
# two lines
# of description
param M in [4, inf);
var d0, d1, m0 >= 0;
var z;
d0 + d1 = 4;  # split
m0 <= max(3, 8*M/(3*(M-2)))*d0;
-m0 - 2*z + sqrt2*M*d1 > -1/2 - sqrt2;
";
        let s = parse_system("t", src).unwrap();
        let printed = print_system(&s);
        let again = parse_system("t", &printed).unwrap();
        assert_eq!(again, s, "{printed}");
        assert_eq!(print_system(&again), printed);
    }
}
