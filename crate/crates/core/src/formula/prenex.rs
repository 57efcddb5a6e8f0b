//! Prenex normal form.
//!
//! Quantifiers are pulled to the front with the usual rewriting rules
//! (`~(E X)Φ` to `(A X)~Φ`, `((E X)Φ) \/ Ψ` to `(E X)(Φ \/ Ψ)`, and so on).
//! Every bound variable is alpha-renamed to a fresh `name#k` first, so no
//! pulled quantifier can capture a free or differently-bound occurrence.
//! An `<=>` whose operands contain quantifiers is not monotone in them, so it
//! is expanded to `(~A \/ B) /\ (~B \/ A)` before pulling.

use std::collections::BTreeSet;

use super::{Formula, Quantifier, Term};

/// Converts a formula to prenex form: a (possibly empty) chain of quantifier
/// blocks followed by a quantifier-free matrix. Semantically equivalent to the
/// input; quantifier-free input is returned unchanged.
pub fn to_prenex(f: &Formula) -> Formula {
    if f.is_quantifier_free() {
        return f.clone();
    }
    let expanded = expand_iff(f);
    let taken = expanded.all_names();
    let mut fresh = FreshNames {
        taken,
        counter: 0,
    };
    let renamed = rename_bound(&expanded, &mut Vec::new(), &mut fresh);
    let pulled = pull(&renamed);
    merge_blocks(pulled)
}

fn contains_quantifier(f: &Formula) -> bool {
    !f.is_quantifier_free()
}

fn expand_iff(f: &Formula) -> Formula {
    match f {
        Formula::Atom(..) => f.clone(),
        Formula::Not(g) => Formula::not(expand_iff(g)),
        Formula::And(l, r) => Formula::and(expand_iff(l), expand_iff(r)),
        Formula::Or(l, r) => Formula::or(expand_iff(l), expand_iff(r)),
        Formula::Iff(l, r) => {
            let l = expand_iff(l);
            let r = expand_iff(r);
            if contains_quantifier(&l) || contains_quantifier(&r) {
                Formula::and(
                    Formula::or(Formula::not(l.clone()), r.clone()),
                    Formula::or(Formula::not(r), l),
                )
            } else {
                Formula::iff(l, r)
            }
        }
        Formula::Quant(q, vars, body) => Formula::Quant(*q, vars.clone(), Box::new(expand_iff(body))),
    }
}

struct FreshNames {
    taken: BTreeSet<String>,
    counter: usize,
}

impl FreshNames {
    fn fresh(&mut self, base: &str) -> String {
        let stem = base.split('#').next().unwrap_or(base);
        loop {
            self.counter += 1;
            let candidate = format!("{}#{}", stem, self.counter);
            if !self.taken.contains(&candidate) {
                self.taken.insert(candidate.clone());
                return candidate;
            }
        }
    }
}

fn rename_term(t: &Term, env: &[(String, String)]) -> Term {
    match t {
        Term::Zero => Term::Zero,
        Term::One => Term::One,
        Term::Var(v) => {
            for (from, to) in env.iter().rev() {
                if from == v {
                    return Term::Var(to.clone());
                }
            }
            Term::Var(v.clone())
        }
        Term::Add(l, r) => Term::Add(
            Box::new(rename_term(l, env)),
            Box::new(rename_term(r, env)),
        ),
        Term::Sub(l, r) => Term::Sub(
            Box::new(rename_term(l, env)),
            Box::new(rename_term(r, env)),
        ),
        Term::Mul(l, r) => Term::Mul(
            Box::new(rename_term(l, env)),
            Box::new(rename_term(r, env)),
        ),
    }
}

fn rename_bound(f: &Formula, env: &mut Vec<(String, String)>, fresh: &mut FreshNames) -> Formula {
    match f {
        Formula::Atom(l, rel, r) => Formula::Atom(rename_term(l, env), *rel, rename_term(r, env)),
        Formula::Not(g) => Formula::not(rename_bound(g, env, fresh)),
        Formula::And(l, r) => Formula::and(
            rename_bound(l, env, fresh),
            rename_bound(r, env, fresh),
        ),
        Formula::Or(l, r) => Formula::or(
            rename_bound(l, env, fresh),
            rename_bound(r, env, fresh),
        ),
        Formula::Iff(l, r) => Formula::iff(
            rename_bound(l, env, fresh),
            rename_bound(r, env, fresh),
        ),
        Formula::Quant(q, vars, body) => {
            let mut new_vars = Vec::with_capacity(vars.len());
            for v in vars {
                let nv = fresh.fresh(v);
                env.push((v.clone(), nv.clone()));
                new_vars.push(nv);
            }
            let b = rename_bound(body, env, fresh);
            env.truncate(env.len() - vars.len());
            Formula::Quant(*q, new_vars, Box::new(b))
        }
    }
}

fn dual(q: Quantifier) -> Quantifier {
    match q {
        Quantifier::Exists => Quantifier::Forall,
        Quantifier::Forall => Quantifier::Exists,
    }
}

fn pull(f: &Formula) -> Formula {
    match f {
        Formula::Atom(..) => f.clone(),
        Formula::Iff(..) => f.clone(), // quantifier-free after expansion
        Formula::Not(g) => {
            let p = pull(g);
            match p {
                Formula::Quant(q, vars, body) => {
                    Formula::Quant(dual(q), vars, Box::new(pull(&Formula::not(*body))))
                }
                other => Formula::not(other),
            }
        }
        Formula::And(l, r) => pull_binary(pull(l), pull(r), true),
        Formula::Or(l, r) => pull_binary(pull(l), pull(r), false),
        Formula::Quant(q, vars, body) => Formula::Quant(*q, vars.clone(), Box::new(pull(body))),
    }
}

fn pull_binary(l: Formula, r: Formula, conj: bool) -> Formula {
    // Bound names are globally fresh, so the quantifier cannot capture
    // anything in the sibling.
    let rebuild = |a: Formula, b: Formula| {
        if conj {
            Formula::and(a, b)
        } else {
            Formula::or(a, b)
        }
    };
    if let Formula::Quant(q, vars, body) = l {
        return Formula::Quant(q, vars, Box::new(pull_binary(*body, r, conj)));
    }
    if let Formula::Quant(q, vars, body) = r {
        return Formula::Quant(q, vars, Box::new(pull_binary(l, *body, conj)));
    }
    rebuild(l, r)
}

fn merge_blocks(f: Formula) -> Formula {
    match f {
        Formula::Quant(q, mut vars, body) => {
            let inner = merge_blocks(*body);
            match inner {
                Formula::Quant(q2, vars2, body2) if q2 == q => {
                    vars.extend(vars2);
                    Formula::Quant(q, vars, body2)
                }
                other => Formula::Quant(q, vars, Box::new(other)),
            }
        }
        other => other,
    }
}
