//! One symbolic run of the univariate sign-table algorithm.
//!
//! Coefficients are polynomials in the outer variables; each sign the
//! algorithm needs is answered from the set of assumptions on the current
//! branch, and a missing answer aborts the run so the caller can fork it
//! three ways. Replaying the run per branch keeps the algorithm a plain
//! sequential function.

use std::collections::BTreeMap;
use std::sync::Mutex;

use crate::error::Error;
use crate::formula::{Formula, Rel};
use crate::poly::{poly_from_atom, Degree, Polynomial};
use crate::rat::Sign;

/// Memo table for sign-corrected pseudoremainders within one elimination.
/// They are pure polynomial computations, independent of the branch, and the
/// branch replays recompute the same pairs constantly.
#[derive(Default)]
pub(super) struct PremCache {
    map: Mutex<BTreeMap<(Polynomial, Polynomial), Polynomial>>,
}

impl PremCache {
    fn get(&self, a: &Polynomial, b: &Polynomial, var: &str) -> Result<Polynomial, Error> {
        if let Some(r) = self.map.lock().unwrap().get(&(a.clone(), b.clone())) {
            return Ok(r.clone());
        }
        let r = Polynomial::signed_pseudorem(a, b, var)?;
        self.map
            .lock()
            .unwrap()
            .insert((a.clone(), b.clone()), r.clone());
        Ok(r)
    }
}

/// Why a run stopped before producing a verdict.
pub(super) enum Stop {
    /// The branch must fork on the sign of this canonical polynomial.
    Need(Polynomial),
    /// The assumptions contradict the geometry of the real line; the branch
    /// denotes the empty set and contributes nothing.
    Inconsistent,
    /// Real error (budget, internal invariant).
    Fail(Error),
}

pub(super) struct Prepared {
    pub var: String,
    /// Distinct atom polynomials with their relations.
    pub atoms: Vec<(Polynomial, Rel)>,
    pub expr: BoolExpr,
    pub monomial_budget: usize,
}

pub(super) enum BoolExpr {
    Atom(usize),
    Not(Box<BoolExpr>),
    And(Box<BoolExpr>, Box<BoolExpr>),
    Or(Box<BoolExpr>, Box<BoolExpr>),
    Iff(Box<BoolExpr>, Box<BoolExpr>),
}

impl BoolExpr {
    fn eval(&self, atom: &impl Fn(usize) -> bool) -> bool {
        match self {
            BoolExpr::Atom(i) => atom(*i),
            BoolExpr::Not(e) => !e.eval(atom),
            BoolExpr::And(l, r) => l.eval(atom) && r.eval(atom),
            BoolExpr::Or(l, r) => l.eval(atom) || r.eval(atom),
            BoolExpr::Iff(l, r) => l.eval(atom) == r.eval(atom),
        }
    }
}

pub(super) fn prepare(matrix: &Formula, var: &str, monomial_budget: usize) -> Result<Prepared, Error> {
    let mut atoms: Vec<(Polynomial, Rel)> = Vec::new();
    let expr = compile(matrix, monomial_budget, &mut atoms)?;
    Ok(Prepared {
        var: var.to_string(),
        atoms,
        expr,
        monomial_budget,
    })
}

fn compile(
    f: &Formula,
    budget: usize,
    atoms: &mut Vec<(Polynomial, Rel)>,
) -> Result<BoolExpr, Error> {
    match f {
        Formula::Atom(l, rel, r) => {
            let p = poly_from_atom(l, r, budget)?;
            let key = (p, *rel);
            let idx = match atoms.iter().position(|a| *a == key) {
                Some(i) => i,
                None => {
                    atoms.push(key);
                    atoms.len() - 1
                }
            };
            Ok(BoolExpr::Atom(idx))
        }
        Formula::Not(g) => Ok(BoolExpr::Not(Box::new(compile(g, budget, atoms)?))),
        Formula::And(l, r) => Ok(BoolExpr::And(
            Box::new(compile(l, budget, atoms)?),
            Box::new(compile(r, budget, atoms)?),
        )),
        Formula::Or(l, r) => Ok(BoolExpr::Or(
            Box::new(compile(l, budget, atoms)?),
            Box::new(compile(r, budget, atoms)?),
        )),
        Formula::Iff(l, r) => Ok(BoolExpr::Iff(
            Box::new(compile(l, budget, atoms)?),
            Box::new(compile(r, budget, atoms)?),
        )),
        Formula::Quant(..) => Err(Error::Input(
            "quantifier inside the matrix of a single elimination".into(),
        )),
    }
}

/// A polynomial reduced against the branch assumptions: leading coefficients
/// assumed zero are dropped, so the degree in the eliminated variable is
/// definite on this branch.
enum VarReduced {
    Zero,
    /// Degree 0 in the eliminated variable (a polynomial in the outer ones).
    ConstInVar(Polynomial),
    /// Positive degree; `canon` is the sign-normal form and `neg` records a
    /// sign flip between the original and `canon`.
    Poly {
        canon: Polynomial,
        neg: bool,
        deg: u32,
    },
}

enum AtomEntry {
    Fixed(Sign),
    Row { canon: Polynomial, neg: bool },
}

pub(super) struct Run<'a> {
    pub prep: &'a Prepared,
    pub assumed: &'a BTreeMap<Polynomial, Sign>,
    pub prems: &'a PremCache,
}

struct Col {
    boundary: bool,
    signs: Vec<Sign>,
}

impl<'a> Run<'a> {
    /// Sign of an arbitrary coefficient polynomial under the branch
    /// assumptions. Signs are canonical up to positive scaling, so `p` and
    /// `3p/2` share one assumption and `−p` reuses it flipped.
    fn sign_of(&self, p: &Polynomial) -> Result<Sign, Stop> {
        if let Some(c) = p.constant_value() {
            return Ok(Sign::of(&c));
        }
        let (canon, neg) = p.sign_normal_form();
        match self.assumed.get(&canon) {
            Some(s) => Ok(if neg { s.flip() } else { *s }),
            None => Err(Stop::Need(canon)),
        }
    }

    fn reduce_in(&self, p: &Polynomial) -> Result<VarReduced, Stop> {
        let var = &self.prep.var;
        let mut q = p.clone();
        loop {
            match q.degree(var) {
                Degree::NegInfinity => return Ok(VarReduced::Zero),
                Degree::Finite(0) => return Ok(VarReduced::ConstInVar(q)),
                Degree::Finite(d) => {
                    let lc = q.coeff_of(var, d);
                    if self.sign_of(&lc)? == Sign::Zero {
                        // drop the vanished leading term and retry
                        let shift = Polynomial::var(var)
                            .pow_checked(d, usize::MAX)
                            .expect("power of a variable");
                        q = q.sub(&lc.mul(&shift));
                    } else {
                        let (canon, neg) = q.sign_normal_form();
                        return Ok(VarReduced::Poly { canon, neg, deg: d });
                    }
                }
            }
        }
    }

    /// Sign of a reduced quantity, forcing constant-in-var cases to resolve.
    fn reduced_sign_at(
        &self,
        vr: &VarReduced,
        row_index: &BTreeMap<Polynomial, usize>,
        col: &Col,
    ) -> Result<Sign, Stop> {
        match vr {
            VarReduced::Zero => Ok(Sign::Zero),
            VarReduced::ConstInVar(c) => self.sign_of(c),
            VarReduced::Poly { canon, neg, .. } => {
                let idx = *row_index.get(canon).ok_or_else(|| {
                    Stop::Fail(Error::Internal(format!(
                        "pseudoremainder {} missing from processed rows",
                        canon
                    )))
                })?;
                let s = col.signs[idx];
                Ok(if *neg { s.flip() } else { s })
            }
        }
    }

    /// Inserts a reduced row polynomial together with its iterated reduced
    /// derivatives (their leading signs are already forced by the path).
    fn add_row_with_derivatives(
        &self,
        canon: Polynomial,
        deg: u32,
        rows: &mut BTreeMap<Polynomial, u32>,
    ) -> Result<(), Stop> {
        let mut cur = (canon, deg);
        loop {
            if rows.contains_key(&cur.0) {
                return Ok(());
            }
            rows.insert(cur.0.clone(), cur.1);
            if cur.1 <= 1 {
                return Ok(());
            }
            match self.reduce_in(&cur.0.derivative(&self.prep.var))? {
                VarReduced::Poly { canon, deg, .. } => cur = (canon, deg),
                _ => return Ok(()),
            }
        }
    }

    pub(super) fn execute(&self) -> Result<bool, Stop> {
        let var = self.prep.var.clone();
        let budget = self.prep.monomial_budget;
        // atoms, with degree dispatch on their leading coefficients
        let mut entries: Vec<AtomEntry> = Vec::new();
        let mut rows_set: BTreeMap<Polynomial, u32> = BTreeMap::new();
        for (p, _) in &self.prep.atoms {
            let e = match self.reduce_in(p)? {
                VarReduced::Zero => AtomEntry::Fixed(Sign::Zero),
                VarReduced::ConstInVar(c) => AtomEntry::Fixed(self.sign_of(&c)?),
                VarReduced::Poly { canon, neg, deg } => {
                    self.add_row_with_derivatives(canon.clone(), deg, &mut rows_set)?;
                    AtomEntry::Row { canon, neg }
                }
            };
            entries.push(e);
        }

        // The rows are processed in degree order. A pseudoremainder demanded
        // by step (i) that is not yet a row joins the set (with its
        // derivative chain) and the table is rebuilt; each such element has
        // strictly smaller degree than the row that demanded it.
        let (columns, row_index) = 'rebuild: loop {
            let mut rows: Vec<(Polynomial, u32)> =
                rows_set.iter().map(|(p, d)| (p.clone(), *d)).collect();
            rows.sort_by_cached_key(|(p, d)| (*d, p.to_string()));

            let mut columns: Vec<Col> = vec![Col {
                boundary: false,
                signs: Vec::new(),
            }];
            let mut row_index: BTreeMap<Polynomial, usize> = BTreeMap::new();
            let mut processed: Vec<Polynomial> = Vec::new();
            for (pk, deg) in &rows {
                let lc = pk.coeff_of(&var, *deg);
                let s_lc = self.sign_of(&lc)?;
                if s_lc == Sign::Zero {
                    return Err(Stop::Fail(Error::Internal(
                        "reduced polynomial has vanishing leading coefficient".into(),
                    )));
                }
                let pos_inf = s_lc;
                let neg_inf = if deg % 2 == 0 { s_lc } else { s_lc.flip() };

                // step (i): sign of pk at every old boundary
                let mut at_boundary: Vec<Sign> = Vec::new();
                for col in columns.iter().filter(|c| c.boundary) {
                    let owner = (0..processed.len())
                        .find(|&r| col.signs[r] == Sign::Zero)
                        .ok_or_else(|| {
                            Stop::Fail(Error::Internal("boundary without owner".into()))
                        })?;
                    let r = self
                        .prems
                        .get(pk, &processed[owner], &var)
                        .map_err(Stop::Fail)?;
                    if r.monomial_count() > budget {
                        return Err(Stop::Fail(Error::ExpansionBudget { limit: budget }));
                    }
                    let vr = if r.is_zero() {
                        VarReduced::Zero
                    } else {
                        self.reduce_in(&r)?
                    };
                    if let VarReduced::Poly { canon, deg, .. } = &vr {
                        if !row_index.contains_key(canon) {
                            self.add_row_with_derivatives(canon.clone(), *deg, &mut rows_set)?;
                            continue 'rebuild;
                        }
                    }
                    at_boundary.push(self.reduced_sign_at(&vr, &row_index, col)?);
                }

                // step (ii): insert the roots of pk between old boundaries
                let n_intervals = columns.len() / 2 + 1;
                let mut next: Vec<Col> = Vec::new();
                for i in 0..n_intervals {
                    let left = if i == 0 { neg_inf } else { at_boundary[i - 1] };
                    let right = if i + 1 == n_intervals {
                        pos_inf
                    } else {
                        at_boundary[i]
                    };
                    let old = &columns[2 * i];
                    if left.mul(right) == Sign::Neg {
                        let mut a = Col {
                            boundary: false,
                            signs: old.signs.clone(),
                        };
                        a.signs.push(left);
                        let mut b = Col {
                            boundary: true,
                            signs: old.signs.clone(),
                        };
                        b.signs.push(Sign::Zero);
                        let mut c = Col {
                            boundary: false,
                            signs: old.signs.clone(),
                        };
                        c.signs.push(right);
                        next.extend([a, b, c]);
                    } else {
                        let s = if left != Sign::Zero { left } else { right };
                        if s == Sign::Zero {
                            // impossible over the reals; the branch
                            // assumptions are contradictory
                            return Err(Stop::Inconsistent);
                        }
                        let mut col = Col {
                            boundary: false,
                            signs: old.signs.clone(),
                        };
                        col.signs.push(s);
                        next.push(col);
                    }
                    if i + 1 < n_intervals {
                        let mut bcol = Col {
                            boundary: true,
                            signs: columns[2 * i + 1].signs.clone(),
                        };
                        bcol.signs.push(at_boundary[i]);
                        next.push(bcol);
                    }
                }
                columns = next;
                row_index.insert(pk.clone(), processed.len());
                processed.push(pk.clone());
            }
            break (columns, row_index);
        };

        // verdict: some column satisfies the matrix
        let atom_sets: Vec<super::dnf::SignSet> = self
            .prep
            .atoms
            .iter()
            .map(|(_, rel)| super::dnf::rel_to_set(*rel))
            .collect();
        for col in &columns {
            let ok = self.prep.expr.eval(&|i| {
                let sign = match &entries[i] {
                    AtomEntry::Fixed(s) => *s,
                    AtomEntry::Row { canon, neg } => {
                        let idx = row_index[canon];
                        let s = col.signs[idx];
                        if *neg {
                            s.flip()
                        } else {
                            s
                        }
                    }
                };
                atom_sets[i] & super::dnf::sign_to_set(sign) != 0
            });
            if ok {
                return Ok(true);
            }
        }
        Ok(false)
    }
}
