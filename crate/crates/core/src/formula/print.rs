//! Canonical, deterministic printer. `parse(print(f))` reproduces the AST
//! exactly, up to re-expansion of decimal integer literals.

use num::{BigInt, Signed};

use super::{Formula, Quantifier, Term};

/// Canonical text with maximal nonnegative-integer constant subtrees printed
/// as decimal literals.
pub fn print(f: &Formula) -> String {
    let mut out = String::new();
    fmt_formula(f, 0, true, &mut out);
    out
}

/// Symbol count of the canonical text with constants left as their
/// binary-expansion trees (`1+1` instead of `2`).
pub fn raw_token_count(f: &Formula) -> usize {
    let mut out = String::new();
    fmt_formula(f, 0, false, &mut out);
    super::parse::token_count(&out)
}

fn level(f: &Formula) -> u8 {
    match f {
        Formula::Quant(..) => 0,
        Formula::Iff(..) => 1,
        Formula::Or(..) => 2,
        Formula::And(..) => 3,
        Formula::Not(..) => 4,
        Formula::Atom(..) => 5,
    }
}

fn fmt_formula(f: &Formula, min: u8, sugar: bool, out: &mut String) {
    let wrap = level(f) < min;
    if wrap {
        out.push('(');
    }
    match f {
        Formula::Atom(l, rel, r) => {
            fmt_term(l, 0, sugar, out);
            out.push(' ');
            out.push_str(rel.text());
            out.push(' ');
            fmt_term(r, 0, sugar, out);
        }
        Formula::Not(g) => {
            out.push_str("~(");
            fmt_formula(g, 0, sugar, out);
            out.push(')');
        }
        Formula::And(l, r) => {
            fmt_formula(l, 3, sugar, out);
            out.push_str(" /\\ ");
            fmt_formula(r, 4, sugar, out);
        }
        Formula::Or(l, r) => {
            fmt_formula(l, 2, sugar, out);
            out.push_str(" \\/ ");
            fmt_formula(r, 3, sugar, out);
        }
        Formula::Iff(l, r) => {
            fmt_formula(l, 1, sugar, out);
            out.push_str(" <=> ");
            fmt_formula(r, 2, sugar, out);
        }
        Formula::Quant(q, vars, body) => {
            out.push('(');
            out.push(match q {
                Quantifier::Exists => 'E',
                Quantifier::Forall => 'A',
            });
            for v in vars {
                out.push(' ');
                out.push_str(v);
            }
            out.push_str(")(");
            fmt_formula(body, 0, sugar, out);
            out.push(')');
        }
    }
    if wrap {
        out.push(')');
    }
}

fn term_level(t: &Term) -> u8 {
    match t {
        Term::Add(..) | Term::Sub(..) => 1,
        Term::Mul(..) => 2,
        Term::Zero | Term::One | Term::Var(_) => 3,
    }
}

/// The decimal value to print for this subtree, when sugaring applies.
fn sugar_value(t: &Term) -> Option<BigInt> {
    let v = t.constant_value()?;
    if !v.is_integer() {
        return None;
    }
    let i = v.to_integer();
    if i.is_negative() {
        None
    } else {
        Some(i)
    }
}

fn fmt_term(t: &Term, min: u8, sugar: bool, out: &mut String) {
    if sugar {
        if let Some(i) = sugar_value(t) {
            // A decimal literal is a single factor: never needs parentheses.
            out.push_str(&i.to_string());
            return;
        }
    }
    let wrap = term_level(t) < min;
    if wrap {
        out.push('(');
    }
    match t {
        Term::Zero => out.push('0'),
        Term::One => out.push('1'),
        Term::Var(v) => out.push_str(v),
        Term::Add(l, r) => {
            fmt_term(l, 1, sugar, out);
            out.push('+');
            fmt_term(r, 2, sugar, out);
        }
        Term::Sub(l, r) => {
            fmt_term(l, 1, sugar, out);
            out.push('-');
            fmt_term(r, 2, sugar, out);
        }
        Term::Mul(l, r) => {
            fmt_term(l, 2, sugar, out);
            out.push('*');
            fmt_term(r, 3, sugar, out);
        }
    }
    if wrap {
        out.push(')');
    }
}
