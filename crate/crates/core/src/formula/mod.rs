//! First-order formulas over the reals: AST, parsing, printing, prenex
//! normalization, exact evaluation, and a sampling equivalence oracle.
//!
//! The language has constants 0 and 1, binary `+ - *`, the six relations
//! `< <= > >= = !=`, connectives `~ /\ \/ <=>`, and quantifiers `E`/`A`.
//! There is no power operator and no division. Decimal integer literals are
//! accepted by the parser and desugared into binary-expansion trees of size
//! O(log k) at parse time; the printer re-sugars maximal nonnegative-integer
//! constant subtrees back to decimal, so `parse(print(f))` equals `f` up to
//! that constant normalization.

mod parse;
mod print;
mod prenex;
mod sample;

pub use parse::parse;
pub use prenex::to_prenex;
pub use sample::{sample_equiv, Equivalence, SampleOptions};

use std::collections::{BTreeMap, BTreeSet};

use num::{BigUint, One, Zero};

use crate::error::{Error, Result};
use crate::rat::Rat;

/// Arithmetic term. Appears only beneath atomic relations.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Zero,
    One,
    Var(String),
    Add(Box<Term>, Box<Term>),
    Sub(Box<Term>, Box<Term>),
    Mul(Box<Term>, Box<Term>),
}

/// Relation symbol of an atomic formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rel {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
}

impl Rel {
    pub fn text(self) -> &'static str {
        match self {
            Rel::Lt => "<",
            Rel::Le => "<=",
            Rel::Gt => ">",
            Rel::Ge => ">=",
            Rel::Eq => "=",
            Rel::Ne => "!=",
        }
    }

    /// Relation holding for the mirrored operands: `a rel b` iff `b rel' a`.
    pub fn mirror(self) -> Rel {
        match self {
            Rel::Lt => Rel::Gt,
            Rel::Le => Rel::Ge,
            Rel::Gt => Rel::Lt,
            Rel::Ge => Rel::Le,
            Rel::Eq => Rel::Eq,
            Rel::Ne => Rel::Ne,
        }
    }

    /// Does a quantity of the given sign satisfy `rel 0`?
    pub fn admits(self, sign: crate::rat::Sign) -> bool {
        use crate::rat::Sign::*;
        match self {
            Rel::Lt => sign == Neg,
            Rel::Le => sign != Pos,
            Rel::Gt => sign == Pos,
            Rel::Ge => sign != Neg,
            Rel::Eq => sign == Zero,
            Rel::Ne => sign != Zero,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Exists,
    Forall,
}

/// Formula of the first-order theory of the reals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(Term, Rel, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    /// Quantifier binding a nonempty variable list over a subformula.
    Quant(Quantifier, Vec<String>, Box<Formula>),
}

/// Map from variable names to exact rational values.
pub type Assignment = BTreeMap<String, Rat>;

impl Term {
    /// Binary-expansion tree for a nonnegative integer, size O(log k).
    /// `13` becomes `((1+1+1)*(1+1))*(1+1)+1`, mirroring 13 = (2+1)·2·2+1.
    pub fn integer(k: &BigUint) -> Term {
        if k.is_zero() {
            return Term::Zero;
        }
        if k.is_one() {
            return Term::One;
        }
        let two = BigUint::from(2u32);
        if (k % &two).is_zero() {
            let half = Term::integer(&(k / &two));
            let two_t = Term::Add(Box::new(Term::One), Box::new(Term::One));
            if half == Term::One {
                two_t
            } else {
                Term::Mul(Box::new(half), Box::new(two_t))
            }
        } else {
            let pred = Term::integer(&(k - BigUint::one()));
            Term::Add(Box::new(pred), Box::new(Term::One))
        }
    }

    pub fn integer_u64(k: u64) -> Term {
        Term::integer(&BigUint::from(k))
    }

    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    /// Exact value when the term contains no variables.
    pub fn constant_value(&self) -> Option<Rat> {
        match self {
            Term::Zero => Some(Rat::zero()),
            Term::One => Some(Rat::one()),
            Term::Var(_) => None,
            Term::Add(a, b) => Some(a.constant_value()? + b.constant_value()?),
            Term::Sub(a, b) => Some(a.constant_value()? - b.constant_value()?),
            Term::Mul(a, b) => Some(a.constant_value()? * b.constant_value()?),
        }
    }

    pub fn eval(&self, a: &Assignment) -> Result<Rat> {
        match self {
            Term::Zero => Ok(Rat::zero()),
            Term::One => Ok(Rat::one()),
            Term::Var(v) => a
                .get(v)
                .cloned()
                .ok_or_else(|| Error::MissingVariable(v.clone())),
            Term::Add(l, r) => Ok(l.eval(a)? + r.eval(a)?),
            Term::Sub(l, r) => Ok(l.eval(a)? - r.eval(a)?),
            Term::Mul(l, r) => Ok(l.eval(a)? * r.eval(a)?),
        }
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Zero | Term::One => {}
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Add(l, r) | Term::Sub(l, r) | Term::Mul(l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
        }
    }
}

impl Formula {
    pub fn atom(l: Term, rel: Rel, r: Term) -> Formula {
        Formula::Atom(l, rel, r)
    }

    /// Canonical true formula `0 = 0`.
    pub fn truth() -> Formula {
        Formula::Atom(Term::Zero, Rel::Eq, Term::Zero)
    }

    /// Canonical false formula `0 = 1`.
    pub fn falsity() -> Formula {
        Formula::Atom(Term::Zero, Rel::Eq, Term::One)
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Formula {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn iff(l: Formula, r: Formula) -> Formula {
        Formula::Iff(Box::new(l), Box::new(r))
    }

    pub fn exists(vars: Vec<String>, body: Formula) -> Formula {
        assert!(!vars.is_empty(), "quantifier needs a nonempty variable list");
        Formula::Quant(Quantifier::Exists, vars, Box::new(body))
    }

    pub fn forall(vars: Vec<String>, body: Formula) -> Formula {
        assert!(!vars.is_empty(), "quantifier needs a nonempty variable list");
        Formula::Quant(Quantifier::Forall, vars, Box::new(body))
    }

    /// Left-associated conjunction of a nonempty list.
    pub fn and_all(mut parts: Vec<Formula>) -> Formula {
        assert!(!parts.is_empty());
        let first = parts.remove(0);
        parts.into_iter().fold(first, Formula::and)
    }

    /// Left-associated disjunction of a nonempty list.
    pub fn or_all(mut parts: Vec<Formula>) -> Formula {
        assert!(!parts.is_empty());
        let first = parts.remove(0);
        parts.into_iter().fold(first, Formula::or)
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Atom(..) => true,
            Formula::Not(f) => f.is_quantifier_free(),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Iff(l, r) => {
                l.is_quantifier_free() && r.is_quantifier_free()
            }
            Formula::Quant(..) => false,
        }
    }

    /// Exact set of unbound variables.
    pub fn free_vars(&self) -> BTreeSet<String> {
        fn walk(f: &Formula, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
            match f {
                Formula::Atom(l, _, r) => {
                    let mut vs = BTreeSet::new();
                    l.collect_vars(&mut vs);
                    r.collect_vars(&mut vs);
                    for v in vs {
                        if !bound.iter().any(|b| *b == v) {
                            out.insert(v);
                        }
                    }
                }
                Formula::Not(g) => walk(g, bound, out),
                Formula::And(l, r) | Formula::Or(l, r) | Formula::Iff(l, r) => {
                    walk(l, bound, out);
                    walk(r, bound, out);
                }
                Formula::Quant(_, vars, body) => {
                    let n = vars.len();
                    bound.extend(vars.iter().cloned());
                    walk(body, bound, out);
                    bound.truncate(bound.len() - n);
                }
            }
        }
        let mut out = BTreeSet::new();
        walk(self, &mut Vec::new(), &mut out);
        out
    }

    /// All variable names occurring anywhere (free or bound).
    pub fn all_names(&self) -> BTreeSet<String> {
        fn walk(f: &Formula, out: &mut BTreeSet<String>) {
            match f {
                Formula::Atom(l, _, r) => {
                    l.collect_vars(out);
                    r.collect_vars(out);
                }
                Formula::Not(g) => walk(g, out),
                Formula::And(l, r) | Formula::Or(l, r) | Formula::Iff(l, r) => {
                    walk(l, out);
                    walk(r, out);
                }
                Formula::Quant(_, vars, body) => {
                    out.extend(vars.iter().cloned());
                    walk(body, out);
                }
            }
        }
        let mut out = BTreeSet::new();
        walk(self, &mut out);
        out
    }

    /// Exact evaluation of a quantifier-free formula.
    pub fn eval_qfree(&self, a: &Assignment) -> Result<bool> {
        match self {
            Formula::Atom(l, rel, r) => {
                let lv = l.eval(a)?;
                let rv = r.eval(a)?;
                Ok(match rel {
                    Rel::Lt => lv < rv,
                    Rel::Le => lv <= rv,
                    Rel::Gt => lv > rv,
                    Rel::Ge => lv >= rv,
                    Rel::Eq => lv == rv,
                    Rel::Ne => lv != rv,
                })
            }
            Formula::Not(f) => Ok(!f.eval_qfree(a)?),
            Formula::And(l, r) => Ok(l.eval_qfree(a)? && r.eval_qfree(a)?),
            Formula::Or(l, r) => Ok(l.eval_qfree(a)? || r.eval_qfree(a)?),
            Formula::Iff(l, r) => Ok(l.eval_qfree(a)? == r.eval_qfree(a)?),
            Formula::Quant(..) => Err(Error::Input(
                "eval_qfree requires a quantifier-free formula".into(),
            )),
        }
    }

    /// Symbol count of the canonical printed form, with integer constants
    /// expanded into their binary-expansion trees.
    pub fn length(&self) -> usize {
        print::raw_token_count(self)
    }

    /// Splits a prenex formula into its quantifier blocks and matrix.
    pub fn prenex_split(&self) -> (Vec<(Quantifier, Vec<String>)>, &Formula) {
        let mut blocks = Vec::new();
        let mut cur = self;
        while let Formula::Quant(q, vars, body) = cur {
            blocks.push((*q, vars.clone()));
            cur = body;
        }
        (blocks, cur)
    }
}

impl std::fmt::Display for Formula {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", print::print(self))
    }
}
