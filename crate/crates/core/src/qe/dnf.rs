//! Disjunctions of sign-condition conjunctions over canonical polynomials.
//!
//! A conjunct maps each polynomial (primitive, integer, positive lex-leading
//! coefficient) to the set of signs it is allowed to take. Conjuncts with an
//! empty allowed set vanish; the whole structure is kept sorted, deduplicated,
//! and absorption-reduced, so it is a canonical disjunctive normal form.

use std::collections::{BTreeMap, BTreeSet};

use crate::formula::{Formula, Rel, Term};
use crate::poly::{poly_to_term, Polynomial};
use crate::rat::Sign;

pub type SignSet = u8;

pub const NEG: SignSet = 0b001;
pub const ZERO: SignSet = 0b010;
pub const POS: SignSet = 0b100;
pub const ALL: SignSet = 0b111;

pub fn sign_to_set(s: Sign) -> SignSet {
    match s {
        Sign::Neg => NEG,
        Sign::Zero => ZERO,
        Sign::Pos => POS,
    }
}

pub fn rel_to_set(rel: Rel) -> SignSet {
    match rel {
        Rel::Lt => NEG,
        Rel::Le => NEG | ZERO,
        Rel::Gt => POS,
        Rel::Ge => ZERO | POS,
        Rel::Eq => ZERO,
        Rel::Ne => NEG | POS,
    }
}

/// The relation expressing `sign(p) ∈ set`; `None` for the empty or full set.
pub fn set_to_rel(set: SignSet) -> Option<Rel> {
    match set {
        x if x == NEG => Some(Rel::Lt),
        x if x == ZERO => Some(Rel::Eq),
        x if x == POS => Some(Rel::Gt),
        x if x == (NEG | ZERO) => Some(Rel::Le),
        x if x == (ZERO | POS) => Some(Rel::Ge),
        x if x == (NEG | POS) => Some(Rel::Ne),
        _ => None,
    }
}

/// Conjunction of sign constraints; the empty conjunct is TRUE.
pub type Conjunct = BTreeMap<Polynomial, SignSet>;

/// Canonical disjunction of conjuncts; the empty disjunction is FALSE.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dnf(BTreeSet<Conjunct>);

impl Dnf {
    pub fn falsity() -> Dnf {
        Dnf(BTreeSet::new())
    }

    pub fn truth() -> Dnf {
        let mut s = BTreeSet::new();
        s.insert(Conjunct::new());
        Dnf(s)
    }

    pub fn is_falsity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_truth(&self) -> bool {
        self.0.contains(&Conjunct::new())
    }

    pub fn conjuncts(&self) -> impl Iterator<Item = &Conjunct> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn insert(&mut self, c: Conjunct) {
        debug_assert!(c.values().all(|s| *s != 0 && *s != ALL));
        self.0.insert(c);
    }

    fn normalized(mut self) -> Dnf {
        if self.is_truth() {
            return Dnf::truth();
        }
        self.absorb();
        self
    }

    /// Drops every conjunct implied by a strictly weaker one.
    fn absorb(&mut self) {
        if self.0.len() < 2 || self.0.len() > 4096 {
            return;
        }
        let items: Vec<Conjunct> = self.0.iter().cloned().collect();
        let implied_by = |weak: &Conjunct, strong: &Conjunct| -> bool {
            weak.iter().all(|(p, sw)| {
                strong
                    .get(p)
                    .map(|ss| ss & sw == *ss) // strong's set ⊆ weak's set
                    .unwrap_or(false)
            })
        };
        let mut keep = vec![true; items.len()];
        for i in 0..items.len() {
            if !keep[i] {
                continue;
            }
            for j in 0..items.len() {
                if i == j || !keep[j] {
                    continue;
                }
                // drop j if i is weaker than j (j implies i) and i ≠ j
                if items[i].len() <= items[j].len()
                    && items[i] != items[j]
                    && implied_by(&items[i], &items[j])
                {
                    keep[j] = false;
                }
            }
        }
        self.0 = items
            .into_iter()
            .zip(keep)
            .filter_map(|(c, k)| if k { Some(c) } else { None })
            .collect();
    }

    pub fn union(mut self, other: Dnf) -> Dnf {
        for c in other.0 {
            self.0.insert(c);
        }
        self.normalized()
    }

    /// Conjoins `sign(p) ∈ set` onto every conjunct.
    pub fn constrain(self, p: &Polynomial, set: SignSet) -> Dnf {
        debug_assert!(set != 0);
        if set == ALL {
            return self;
        }
        let mut out = BTreeSet::new();
        for mut c in self.0 {
            let merged = c.get(p).map(|s| s & set).unwrap_or(set);
            if merged == 0 {
                continue;
            }
            if merged == ALL {
                c.remove(p);
            } else {
                c.insert(p.clone(), merged);
            }
            out.insert(c);
        }
        Dnf(out).normalized()
    }

    /// Complement, distributed back into disjunctive form.
    pub fn negate(&self) -> Dnf {
        let mut acc = Dnf::truth();
        for conj in &self.0 {
            let mut next = Dnf::falsity();
            for (p, set) in conj {
                let comp = !set & ALL;
                if comp == 0 {
                    continue;
                }
                next = next.union(acc.clone().constrain(p, comp));
            }
            acc = next;
            if acc.is_falsity() {
                break;
            }
        }
        acc
    }

    /// Renders the canonical `disjunction of conjunctions of atoms p rel 0`
    /// formula; TRUE is `0 = 0` and FALSE is `0 = 1`.
    pub fn to_formula(&self) -> Formula {
        if self.is_falsity() {
            return Formula::falsity();
        }
        if self.is_truth() {
            return Formula::truth();
        }
        let disjuncts: Vec<Formula> = self
            .0
            .iter()
            .map(|c| {
                if c.is_empty() {
                    return Formula::truth();
                }
                let atoms: Vec<Formula> = c
                    .iter()
                    .map(|(p, set)| {
                        let rel = set_to_rel(*set).expect("proper sign set");
                        Formula::Atom(poly_to_term(p), rel, Term::Zero)
                    })
                    .collect();
                Formula::and_all(atoms)
            })
            .collect();
        Formula::or_all(disjuncts)
    }

    /// Conjunct rendered as a quantifier-free matrix for a nested run.
    pub fn conjunct_formula(c: &Conjunct) -> Formula {
        if c.is_empty() {
            return Formula::truth();
        }
        let atoms: Vec<Formula> = c
            .iter()
            .map(|(p, set)| {
                let rel = set_to_rel(*set).expect("proper sign set");
                Formula::Atom(poly_to_term(p), rel, Term::Zero)
            })
            .collect();
        Formula::and_all(atoms)
    }
}

/// Merges the three sign branches of a test on `p` into one disjunction,
/// collapsing branches with identical outcomes so tests that do not affect
/// the verdict disappear from the output.
pub fn combine(p: &Polynomial, neg: Dnf, zero: Dnf, pos: Dnf) -> Dnf {
    if neg == zero && zero == pos {
        return neg;
    }
    let arms: Vec<(SignSet, Dnf)> = if neg == zero {
        vec![(NEG | ZERO, neg), (POS, pos)]
    } else if zero == pos {
        vec![(NEG, neg), (ZERO | POS, zero)]
    } else if neg == pos {
        vec![(ZERO, zero), (NEG | POS, neg)]
    } else {
        vec![(NEG, neg), (ZERO, zero), (POS, pos)]
    };
    let mut out = Dnf::falsity();
    for (set, dnf) in arms {
        out = out.union(dnf.constrain(p, set));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pv(v: &str) -> Polynomial {
        Polynomial::var(v)
    }

    #[test]
    fn truth_absorbs_everything() {
        let d = Dnf::truth().union(Dnf::falsity().union({
            let mut d = Dnf::falsity();
            let mut c = Conjunct::new();
            c.insert(pv("Y"), POS);
            d.insert(c);
            d
        }));
        assert!(d.is_truth());
        assert_eq!(d.len(), 1);
    }

    #[test]
    fn combine_merges_adjacent_branches() {
        // same result for negative and zero sign → one ≤ atom
        let t = Dnf::truth();
        let f = Dnf::falsity();
        let d = combine(&pv("Y"), t.clone(), t.clone(), f.clone());
        let rendered = d.to_formula().to_string();
        assert_eq!(rendered, "Y <= 0");
        // all equal → the test vanishes
        let d2 = combine(&pv("Y"), t.clone(), t.clone(), t.clone());
        assert!(d2.is_truth());
        // only zero true → equality atom
        let d3 = combine(&pv("Y"), f.clone(), t, f);
        assert_eq!(d3.to_formula().to_string(), "Y = 0");
    }

    /// membership of a sign assignment in the union of the conjuncts
    fn holds(d: &Dnf, signs: &[(&Polynomial, SignSet)]) -> bool {
        d.conjuncts().any(|c| {
            c.iter().all(|(p, set)| {
                signs
                    .iter()
                    .find(|(q, _)| *q == p)
                    .map(|(_, s)| set & s != 0)
                    .unwrap_or(false)
            })
        })
    }

    #[test]
    fn negate_is_semantic_complement() {
        let a = pv("A");
        let b = pv("B");
        let mut d = Dnf::falsity();
        let mut c = Conjunct::new();
        c.insert(a.clone(), POS);
        c.insert(b.clone(), ZERO);
        d.insert(c);
        let mut c2 = Conjunct::new();
        c2.insert(a.clone(), NEG | ZERO);
        d.insert(c2);
        let neg = d.negate();
        let back = neg.negate();
        for sa in [NEG, ZERO, POS] {
            for sb in [NEG, ZERO, POS] {
                let point = [(&a, sa), (&b, sb)];
                assert_ne!(holds(&d, &point), holds(&neg, &point));
                assert_eq!(holds(&d, &point), holds(&back, &point));
            }
        }
        assert!(Dnf::truth().negate().is_falsity());
        assert!(Dnf::falsity().negate().is_truth());
    }

    #[test]
    fn absorption_removes_implied_conjuncts() {
        let mut d = Dnf::falsity();
        let mut weak = Conjunct::new();
        weak.insert(pv("A"), POS);
        let mut strong = Conjunct::new();
        strong.insert(pv("A"), POS);
        strong.insert(pv("B"), NEG);
        d.insert(weak.clone());
        d.insert(strong);
        let d = d.union(Dnf::falsity());
        assert_eq!(d.len(), 1);
        assert!(d.conjuncts().next().unwrap() == &weak);
    }
}
