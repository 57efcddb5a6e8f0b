//! Constructive reductions between decision problems, as formula compilers:
//! existential formulas onto a single polynomial equation (FEASIBLE), a
//! single equation onto a system of strict inequalities (STRICTINEQ), and
//! graphs onto segment-representability sentences.

use std::collections::BTreeSet;

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::formula::{Assignment, Formula, Quantifier, Rel, Term};
use crate::poly::{poly_from_atom, poly_to_term, Polynomial, DEFAULT_MONOMIAL_BUDGET};
use crate::rat::{rat_sqrt_exact, Rat};

/// `∃ vars: poly = 0`, with the polynomial in standard form over integers.
#[derive(Debug, Clone)]
pub struct FeasibleInstance {
    pub vars: Vec<String>,
    pub poly: Polynomial,
}

/// `∃ vars: q1 > 0 ∧ … ∧ qt > 0`, strict inequalities only.
#[derive(Debug, Clone)]
pub struct StrictIneqInstance {
    pub vars: Vec<String>,
    pub polys: Vec<Polynomial>,
}

/// Simple graph on vertices `1..=n`.
#[derive(Debug, Clone)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Graph> {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::Input(format!("loop at vertex {}", a)));
            }
            if a < 1 || a > n || b < 1 || b > n {
                return Err(Error::Input(format!("edge ({}, {}) out of range", a, b)));
            }
            set.insert((a.min(b), a.max(b)));
        }
        Ok(Graph { n, edges: set })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    /// Parses the `n m` header followed by `m` lines `i j` (1-based).
    pub fn parse(text: &str) -> Result<Graph> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let perr = |line: usize, msg: String| Error::Parse {
            line: line + 1,
            col: 1,
            msg,
        };
        let (ln, header) = lines
            .next()
            .ok_or_else(|| perr(0, "empty graph file".into()))?;
        let mut it = header.split_whitespace();
        let n: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| perr(ln, "expected vertex count".into()))?;
        let m: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| perr(ln, "expected edge count".into()))?;
        let mut edges = Vec::with_capacity(m);
        for _ in 0..m {
            let (ln, line) = lines
                .next()
                .ok_or_else(|| perr(0, format!("expected {} edge lines", m)))?;
            let mut it = line.split_whitespace();
            let a: usize = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| perr(ln, "expected edge endpoint".into()))?;
            let b: usize = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| perr(ln, "expected edge endpoint".into()))?;
            edges.push((a, b));
        }
        Graph::new(n, edges)
    }
}

impl FeasibleInstance {
    /// The closed sentence `(E vars)(p = 0)`.
    pub fn as_sentence(&self) -> Formula {
        let eq = self.as_equation();
        if self.vars.is_empty() {
            eq
        } else {
            Formula::exists(self.vars.clone(), eq)
        }
    }

    /// The quantifier-free equation `p = 0`.
    pub fn as_equation(&self) -> Formula {
        Formula::Atom(poly_to_term(&self.poly), Rel::Eq, Term::Zero)
    }

    /// Formula length of the instance sentence; the size parameter for the
    /// strict-inequality reduction.
    pub fn length(&self) -> usize {
        self.as_sentence().length()
    }

    /// Reads an instance back from `(E vars)(p = 0)` or a bare equation.
    pub fn from_formula(f: &Formula, budget: usize) -> Result<FeasibleInstance> {
        let (blocks, matrix) = f.prenex_split();
        let mut vars: Vec<String> = Vec::new();
        for (q, vs) in &blocks {
            if *q != Quantifier::Exists {
                return Err(Error::Input("instance must be existential".into()));
            }
            vars.extend(vs.iter().cloned());
        }
        let poly = match matrix {
            Formula::Atom(l, Rel::Eq, r) => poly_from_atom(l, r, budget)?,
            _ => {
                return Err(Error::Input(
                    "instance matrix must be a single equation".into(),
                ))
            }
        };
        for v in matrix.free_vars() {
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
        Ok(FeasibleInstance {
            vars,
            poly: poly.cleared_denominators(),
        })
    }
}

impl StrictIneqInstance {
    pub fn as_sentence(&self) -> Formula {
        let atoms: Vec<Formula> = self
            .polys
            .iter()
            .map(|q| Formula::Atom(poly_to_term(q), Rel::Gt, Term::Zero))
            .collect();
        Formula::exists(self.vars.clone(), Formula::and_all(atoms))
    }
}

#[derive(Debug, Clone)]
pub struct TseitinOptions {
    /// Collapse the truth-variable scaffolding for monotone matrices and
    /// inline small atoms. Disable to keep the systematic construction.
    pub peephole: bool,
    pub monomial_budget: usize,
}

impl Default for TseitinOptions {
    fn default() -> Self {
        TseitinOptions {
            peephole: true,
            monomial_budget: DEFAULT_MONOMIAL_BUDGET,
        }
    }
}

/// How an auxiliary variable's witness value is computed from the values of
/// everything introduced before it.
enum AuxRule {
    /// `var := eval(expr)`.
    Value { var: String, expr: Polynomial },
    /// `var := 1` if the subformula holds, else `0`.
    Truth { var: String, sub: Formula },
    /// `var := sqrt(±expr or its reciprocal)` when `cond` evaluates to
    /// `cond_value`, else `0`. Fails (no rational witness) when the radicand
    /// is not a perfect square.
    Sqrt {
        var: String,
        expr: Polynomial,
        negate: bool,
        recip: bool,
        cond: Formula,
        cond_value: bool,
    },
    /// `var := 1/|eval(expr)|` when `cond` evaluates to `cond_value`, else 0.
    RecipAbs {
        var: String,
        expr: Polynomial,
        cond: Formula,
        cond_value: bool,
    },
}

struct Compiler {
    equations: Vec<Polynomial>,
    rules: Vec<AuxRule>,
    aux_vars: Vec<String>,
    used: BTreeSet<String>,
    budget: usize,
}

impl Compiler {
    fn new(f: &Formula, budget: usize) -> Compiler {
        Compiler {
            equations: Vec::new(),
            rules: Vec::new(),
            aux_vars: Vec::new(),
            used: f.all_names(),
            budget,
        }
    }

    fn fresh(&mut self, letter: &str) -> String {
        let mut n = 1usize;
        loop {
            let candidate = format!("{}{}", letter, n);
            if !self.used.contains(&candidate) {
                self.used.insert(candidate.clone());
                self.aux_vars.push(candidate.clone());
                return candidate;
            }
            n += 1;
        }
    }

    fn mul(&self, a: &Polynomial, b: &Polynomial) -> Result<Polynomial> {
        a.mul_checked(b, self.budget)
    }

    fn square(&self, a: &Polynomial) -> Result<Polynomial> {
        self.mul(a, a)
    }

    /// Value variable for an arithmetic node; leaves are used directly.
    fn compile_term(&mut self, t: &Term) -> Result<Polynomial> {
        match t {
            Term::Zero => Ok(Polynomial::zero()),
            Term::One => Ok(Polynomial::one()),
            Term::Var(v) => Ok(Polynomial::var(v)),
            Term::Add(l, r) | Term::Sub(l, r) | Term::Mul(l, r) => {
                let lp = self.compile_term(l)?;
                let rp = self.compile_term(r)?;
                let expr = match t {
                    Term::Add(..) => lp.add(&rp),
                    Term::Sub(..) => lp.sub(&rp),
                    Term::Mul(..) => self.mul(&lp, &rp)?,
                    _ => unreachable!(),
                };
                let v = self.fresh("V");
                let vp = Polynomial::var(&v);
                self.equations.push(vp.sub(&expr));
                self.rules.push(AuxRule::Value { var: v, expr });
                Ok(vp)
            }
        }
    }

    fn atom_diff(&mut self, l: &Term, r: &Term) -> Result<Polynomial> {
        let lp = self.compile_term(l)?;
        let rp = self.compile_term(r)?;
        Ok(lp.sub(&rp))
    }

    /// Inline the atom's polynomial when it stays tiny; otherwise build the
    /// value-variable chain so each equation stays constant-size.
    fn atom_poly(&mut self, l: &Term, r: &Term) -> Result<Polynomial> {
        const INLINE_CAP: usize = 16;
        match poly_from_atom(l, r, INLINE_CAP) {
            Ok(p) => Ok(p),
            Err(Error::ExpansionBudget { .. }) => self.atom_diff(l, r),
            Err(e) => Err(e),
        }
    }

    /// Systematic truth-variable encoding of an atom `e rel 0`. `sub` is the
    /// original subformula whose truth the returned variable stores.
    fn encode_atom_poly(&mut self, e: Polynomial, rel: Rel, sub: &Formula) -> Result<String> {
        if rel == Rel::Ge {
            // ≥ reuses the strict machinery through negation
            let inner = self.encode_atom_poly(e, Rel::Lt, &Formula::not(sub.clone()))?;
            let w = self.fresh("W");
            let wp = Polynomial::var(&w);
            self.equations
                .push(wp.add(&Polynomial::var(&inner)).sub(&Polynomial::one()));
            self.rules.push(AuxRule::Truth {
                var: w.clone(),
                sub: sub.clone(),
            });
            return Ok(w);
        }
        let w = self.fresh("W");
        let wp = Polynomial::var(&w);
        self.rules.push(AuxRule::Truth {
            var: w.clone(),
            sub: sub.clone(),
        });
        let one = Polynomial::one();
        let w_is_1 = self.square(&wp.sub(&one))?;
        let w_is_0 = self.square(&wp)?;
        let (true_eq, false_eq) = match rel {
            Rel::Gt | Rel::Lt => {
                let e = if rel == Rel::Lt { e.neg() } else { e };
                // e > 0 ⟺ ∃S: e·S² = 1 ; its negation e ≤ 0 ⟺ ∃T: e + T² = 0
                let s = self.fresh("S");
                self.rules.push(AuxRule::Sqrt {
                    var: s.clone(),
                    expr: e.clone(),
                    negate: false,
                    recip: true,
                    cond: sub.clone(),
                    cond_value: rel == Rel::Gt,
                });
                let t = self.fresh("T");
                self.rules.push(AuxRule::Sqrt {
                    var: t.clone(),
                    expr: e.clone(),
                    negate: true,
                    recip: false,
                    cond: sub.clone(),
                    cond_value: rel != Rel::Gt,
                });
                let s2 = self.square(&Polynomial::var(&s))?;
                let t2 = self.square(&Polynomial::var(&t))?;
                (self.mul(&e, &s2)?.sub(&one), e.add(&t2))
            }
            Rel::Le => {
                // e ≤ 0 ⟺ ∃T: e + T² = 0 ; negation e > 0 ⟺ ∃S: e·S² = 1
                let t = self.fresh("T");
                self.rules.push(AuxRule::Sqrt {
                    var: t.clone(),
                    expr: e.clone(),
                    negate: true,
                    recip: false,
                    cond: sub.clone(),
                    cond_value: true,
                });
                let s = self.fresh("S");
                self.rules.push(AuxRule::Sqrt {
                    var: s.clone(),
                    expr: e.clone(),
                    negate: false,
                    recip: true,
                    cond: sub.clone(),
                    cond_value: false,
                });
                let t2 = self.square(&Polynomial::var(&t))?;
                let s2 = self.square(&Polynomial::var(&s))?;
                (e.add(&t2), self.mul(&e, &s2)?.sub(&one))
            }
            Rel::Eq => {
                // e = 0 directly; negation e ≠ 0 ⟺ ∃S: e²·S² = 1
                let s = self.fresh("S");
                self.rules.push(AuxRule::RecipAbs {
                    var: s.clone(),
                    expr: e.clone(),
                    cond: sub.clone(),
                    cond_value: false,
                });
                let e2 = self.square(&e)?;
                let s2 = self.square(&Polynomial::var(&s))?;
                (e.clone(), self.mul(&e2, &s2)?.sub(&one))
            }
            Rel::Ne => {
                let s = self.fresh("S");
                self.rules.push(AuxRule::RecipAbs {
                    var: s.clone(),
                    expr: e.clone(),
                    cond: sub.clone(),
                    cond_value: true,
                });
                let e2 = self.square(&e)?;
                let s2 = self.square(&Polynomial::var(&s))?;
                (self.mul(&e2, &s2)?.sub(&one), e.clone())
            }
            Rel::Ge => unreachable!(),
        };
        // ((true_eq)² + (W−1)²) · ((false_eq)² + W²) = 0
        let b1 = self.square(&true_eq)?.add(&w_is_1);
        let b2 = self.square(&false_eq)?.add(&w_is_0);
        let eq = self.mul(&b1, &b2)?;
        self.equations.push(eq);
        Ok(w)
    }

    /// Truth variable for an arbitrary quantifier-free subformula.
    fn encode_formula(&mut self, f: &Formula) -> Result<String> {
        match f {
            Formula::Atom(l, rel, r) => {
                let e = self.atom_diff(l, r)?;
                self.encode_atom_poly(e, *rel, f)
            }
            Formula::Not(g) => {
                let inner = self.encode_formula(g)?;
                let w = self.fresh("W");
                let wp = Polynomial::var(&w);
                self.equations
                    .push(wp.add(&Polynomial::var(&inner)).sub(&Polynomial::one()));
                self.rules.push(AuxRule::Truth {
                    var: w.clone(),
                    sub: f.clone(),
                });
                Ok(w)
            }
            Formula::And(a, b) => {
                let wa = self.encode_formula(a)?;
                let wb = self.encode_formula(b)?;
                let w = self.fresh("W");
                let prod = self.mul(&Polynomial::var(&wa), &Polynomial::var(&wb))?;
                self.equations.push(Polynomial::var(&w).sub(&prod));
                self.rules.push(AuxRule::Truth {
                    var: w.clone(),
                    sub: f.clone(),
                });
                Ok(w)
            }
            Formula::Or(a, b) => {
                let wa = self.encode_formula(a)?;
                let wb = self.encode_formula(b)?;
                let w = self.fresh("W");
                self.rules.push(AuxRule::Truth {
                    var: w.clone(),
                    sub: f.clone(),
                });
                let one = Polynomial::one();
                let wp = Polynomial::var(&w);
                let wap = Polynomial::var(&wa);
                let wbp = Polynomial::var(&wb);
                // ((W−1)² + ((Wa−1)(Wb−1))²)·(W² + Wa² + Wb²) = 0
                let disj = self.mul(&wap.sub(&one), &wbp.sub(&one))?;
                let b1 = self.square(&wp.sub(&one))?.add(&self.square(&disj)?);
                let b2 = self
                    .square(&wp)?
                    .add(&self.square(&wap)?)
                    .add(&self.square(&wbp)?);
                let eq = self.mul(&b1, &b2)?;
                self.equations.push(eq);
                Ok(w)
            }
            Formula::Iff(a, b) => {
                let wa = self.encode_formula(a)?;
                let wb = self.encode_formula(b)?;
                let w = self.fresh("W");
                self.rules.push(AuxRule::Truth {
                    var: w.clone(),
                    sub: f.clone(),
                });
                // W = 1 − (Wa − Wb)², valid on {0,1} values
                let diff = Polynomial::var(&wa).sub(&Polynomial::var(&wb));
                let eq = Polynomial::var(&w)
                    .sub(&Polynomial::one())
                    .add(&self.square(&diff)?);
                self.equations.push(eq);
                Ok(w)
            }
            Formula::Quant(..) => Err(Error::Input("matrix must be quantifier-free".into())),
        }
    }

    /// Collapsed encoding for a monotone matrix (atoms, ∧, ∨ only): a single
    /// polynomial that has a zero over the auxiliaries iff the matrix holds.
    /// Conjunction is `p² + q²`, disjunction is `p·q`.
    fn encode_monotone(&mut self, f: &Formula) -> Result<Polynomial> {
        match f {
            Formula::Atom(l, rel, r) => {
                let e = self.atom_poly(l, r)?;
                let one = Polynomial::one();
                match rel {
                    Rel::Eq => Ok(e),
                    Rel::Gt | Rel::Lt => {
                        let e = if *rel == Rel::Lt { e.neg() } else { e };
                        let s = self.fresh("S");
                        self.rules.push(AuxRule::Sqrt {
                            var: s.clone(),
                            expr: e.clone(),
                            negate: false,
                            recip: true,
                            cond: f.clone(),
                            cond_value: true,
                        });
                        let s2 = self.square(&Polynomial::var(&s))?;
                        Ok(self.mul(&e, &s2)?.sub(&one))
                    }
                    Rel::Ge | Rel::Le => {
                        let e = if *rel == Rel::Le { e } else { e.neg() };
                        // e + T² = 0 has a solution iff e ≤ 0
                        let t = self.fresh("T");
                        self.rules.push(AuxRule::Sqrt {
                            var: t.clone(),
                            expr: e.clone(),
                            negate: true,
                            recip: false,
                            cond: f.clone(),
                            cond_value: true,
                        });
                        let t2 = self.square(&Polynomial::var(&t))?;
                        Ok(e.add(&t2))
                    }
                    Rel::Ne => {
                        let s = self.fresh("S");
                        self.rules.push(AuxRule::RecipAbs {
                            var: s.clone(),
                            expr: e.clone(),
                            cond: f.clone(),
                            cond_value: true,
                        });
                        let e2 = self.square(&e)?;
                        let s2 = self.square(&Polynomial::var(&s))?;
                        Ok(self.mul(&e2, &s2)?.sub(&one))
                    }
                }
            }
            Formula::And(a, b) => {
                let ga = self.encode_monotone(a)?;
                let gb = self.encode_monotone(b)?;
                Ok(self.square(&ga)?.add(&self.square(&gb)?))
            }
            Formula::Or(a, b) => {
                let ga = self.encode_monotone(a)?;
                let gb = self.encode_monotone(b)?;
                self.mul(&ga, &gb)
            }
            _ => Err(Error::Internal("encode_monotone on non-monotone input".into())),
        }
    }
}

fn is_monotone(f: &Formula) -> bool {
    match f {
        Formula::Atom(..) => true,
        Formula::And(l, r) | Formula::Or(l, r) => is_monotone(l) && is_monotone(r),
        _ => false,
    }
}

fn existential_parts(f: &Formula) -> Result<(Vec<String>, &Formula)> {
    let (blocks, matrix) = f.prenex_split();
    let mut vars = Vec::new();
    for (q, vs) in blocks {
        if q != Quantifier::Exists {
            return Err(Error::Input(
                "reduction requires an existential formula".into(),
            ));
        }
        vars.extend(vs);
    }
    if !matrix.is_quantifier_free() {
        return Err(Error::Input("matrix must be quantifier-free".into()));
    }
    for v in matrix.free_vars() {
        if !vars.contains(&v) {
            vars.push(v);
        }
    }
    Ok((vars, matrix))
}

fn run_compiler(f: &Formula, opts: &TseitinOptions) -> Result<(Vec<String>, Compiler, Polynomial)> {
    let (vars, matrix) = existential_parts(f)?;
    let mut c = Compiler::new(f, opts.monomial_budget);
    let poly = if opts.peephole && is_monotone(matrix) {
        let g = c.encode_monotone(matrix)?;
        if c.equations.is_empty() {
            g
        } else {
            let mut acc = c.square(&g)?;
            let equations = c.equations.clone();
            for eq in &equations {
                acc = acc.add(&c.square(eq)?);
            }
            acc
        }
    } else {
        let w_root = c.encode_formula(matrix)?;
        c.equations
            .push(Polynomial::var(&w_root).sub(&Polynomial::one()));
        let mut acc = Polynomial::zero();
        let equations = c.equations.clone();
        for eq in &equations {
            acc = acc.add(&c.square(eq)?);
        }
        acc
    };
    Ok((vars, c, poly))
}

/// Compiles an existential formula into an equisatisfiable single-equation
/// instance, Tseitin-style: value variables for arithmetic subterms, truth
/// variables for Boolean subformulas, auxiliary square variables for the
/// relations, all collapsed into one polynomial via `p² + q²` and `p·q`.
/// Output size is linear in the formula length.
pub fn to_feasible(f: &Formula, opts: &TseitinOptions) -> Result<FeasibleInstance> {
    let (mut vars, c, poly) = run_compiler(f, opts)?;
    vars.extend(c.aux_vars.iter().cloned());
    Ok(FeasibleInstance {
        vars,
        poly: poly.cleared_denominators(),
    })
}

/// Extends a witness of the original matrix to the auxiliary variables of
/// `to_feasible(f)`. Returns `None` when some strict-inequality auxiliary
/// needs an irrational square root, i.e. no rational extension exists for
/// this base point.
pub fn extend_witness(
    f: &Formula,
    base: &Assignment,
    opts: &TseitinOptions,
) -> Result<Option<Assignment>> {
    let (_, c, _) = run_compiler(f, opts)?;
    let mut a = base.clone();
    for rule in &c.rules {
        match rule {
            AuxRule::Value { var, expr } => {
                let v = expr.eval(&a)?;
                a.insert(var.clone(), v);
            }
            AuxRule::Truth { var, sub } => {
                let t = sub.eval_qfree(&a)?;
                a.insert(var.clone(), if t { Rat::one() } else { Rat::zero() });
            }
            AuxRule::Sqrt {
                var,
                expr,
                negate,
                recip,
                cond,
                cond_value,
            } => {
                let active = cond.eval_qfree(&a)? == *cond_value;
                let value = if active {
                    let mut e = expr.eval(&a)?;
                    if *negate {
                        e = -e;
                    }
                    if *recip {
                        if e.is_zero() {
                            return Ok(None);
                        }
                        e = e.recip();
                    }
                    match rat_sqrt_exact(&e) {
                        Some(s) => s,
                        None => return Ok(None),
                    }
                } else {
                    Rat::zero()
                };
                a.insert(var.clone(), value);
            }
            AuxRule::RecipAbs {
                var,
                expr,
                cond,
                cond_value,
            } => {
                let active = cond.eval_qfree(&a)? == *cond_value;
                let value = if active {
                    let e = expr.eval(&a)?;
                    if e.is_zero() {
                        return Ok(None);
                    }
                    e.abs().recip()
                } else {
                    Rat::zero()
                };
                a.insert(var.clone(), value);
            }
        }
    }
    Ok(Some(a))
}

/// Default chain lengths `k = ⌈c·L·log₂L⌉` and `ℓ = ⌈c₁·L·(log₂L)²⌉`,
/// clamped to at least 1. The true constants are not known numerically; both
/// factors are configurable and semantic preservation is only guaranteed
/// with honest constants.
pub fn default_k_l(length: usize, c: f64, c1: f64) -> (usize, usize) {
    let l = length.max(2) as f64;
    let log = l.log2();
    let k = (c * l * log).ceil() as usize;
    let ell = (c1 * l * log * log).ceil() as usize;
    (k.max(1), ell.max(1))
}

fn fresh_chain(base: char, count: usize, taken: &BTreeSet<String>) -> Vec<String> {
    let mut prefix = base.to_string();
    loop {
        let names: Vec<String> = (1..=count).map(|i| format!("{}{}", prefix, i)).collect();
        if names.iter().all(|n| !taken.contains(n)) {
            return names;
        }
        prefix.push(base);
    }
}

/// The strict-inequality system for `∃: p = 0`: a doubly-exponentially large
/// bound `Y_k` built by repeated squaring below 4, a doubly-exponentially
/// small tolerance `1/Z_ℓ²` built by repeated squaring above 4, and the
/// tolerance test on `p²`.
pub fn to_strictineq(
    inst: &FeasibleInstance,
    k: usize,
    ell: usize,
) -> Result<StrictIneqInstance> {
    if k < 1 || ell < 1 {
        return Err(Error::Input("chain lengths must be at least 1".into()));
    }
    let taken: BTreeSet<String> = inst.vars.iter().cloned().collect();
    let ys = fresh_chain('Y', k, &taken);
    let mut taken2 = taken.clone();
    taken2.extend(ys.iter().cloned());
    let zs = fresh_chain('Z', ell, &taken2);

    let four = Polynomial::constant(Rat::from_integer(4.into()));
    let one = Polynomial::one();
    let mut polys: Vec<Polynomial> = Vec::new();
    // Y_i > 0
    for y in &ys {
        polys.push(Polynomial::var(y));
    }
    // Y_1 < 4, Y_{i+1} < Y_i², ΣX_j² < Y_k²
    polys.push(four.sub(&Polynomial::var(&ys[0])));
    for i in 0..k - 1 {
        let yi = Polynomial::var(&ys[i]);
        polys.push(yi.mul(&yi).sub(&Polynomial::var(&ys[i + 1])));
    }
    let mut sum_sq = Polynomial::zero();
    for x in &inst.vars {
        let xv = Polynomial::var(x);
        sum_sq = sum_sq.add(&xv.mul(&xv));
    }
    let yk = Polynomial::var(&ys[k - 1]);
    polys.push(yk.mul(&yk).sub(&sum_sq));
    // Z_1 > 4, Z_{i+1} > Z_i²
    polys.push(Polynomial::var(&zs[0]).sub(&four));
    for i in 0..ell - 1 {
        let zi = Polynomial::var(&zs[i]);
        polys.push(Polynomial::var(&zs[i + 1]).sub(&zi.mul(&zi)));
    }
    // Z_ℓ²·p² < 1
    let zl = Polynomial::var(&zs[ell - 1]);
    let p2 = inst.poly.mul_checked(&inst.poly, DEFAULT_MONOMIAL_BUDGET)?;
    let zp = zl.mul(&zl).mul_checked(&p2, DEFAULT_MONOMIAL_BUDGET)?;
    polys.push(one.sub(&zp));

    let mut vars = inst.vars.clone();
    vars.extend(ys);
    vars.extend(zs);
    Ok(StrictIneqInstance { vars, polys })
}

fn seg_var(letter: char, i: usize) -> Term {
    Term::var(&format!("{}{}", letter, i))
}

/// The segment-intersection predicate on the eight line/interval parameters
/// of segments `i` and `j`: equal lines with overlapping intervals, or the
/// crossing abscissa `(B_j−B_i)/(A_i−A_j)` inside both intervals, stated
/// multiplicatively for either sign of `A_i−A_j`. Callers must conjoin
/// `C_i ≤ D_i` globally for it to be faithful.
pub fn ints_predicate(i: usize, j: usize) -> Result<Formula> {
    if i == j {
        return Err(Error::Input("segment indices must differ".into()));
    }
    let (ai, bi, ci, di) = (seg_var('A', i), seg_var('B', i), seg_var('C', i), seg_var('D', i));
    let (aj, bj, cj, dj) = (seg_var('A', j), seg_var('B', j), seg_var('C', j), seg_var('D', j));
    let slope_diff = Term::Sub(Box::new(ai.clone()), Box::new(aj.clone()));
    let icept_diff = Term::Sub(Box::new(bj.clone()), Box::new(bi.clone()));
    let prod = |t: &Term| Term::Mul(Box::new(t.clone()), Box::new(slope_diff.clone()));

    let same_line = Formula::and_all(vec![
        Formula::Atom(ai.clone(), Rel::Eq, aj.clone()),
        Formula::Atom(bi.clone(), Rel::Eq, bj.clone()),
        Formula::not(Formula::or(
            Formula::Atom(di.clone(), Rel::Lt, cj.clone()),
            Formula::Atom(dj.clone(), Rel::Lt, ci.clone()),
        )),
    ]);
    let crossing = |rel_low: Rel, rel_high: Rel, slope_rel: Rel| {
        Formula::and_all(vec![
            Formula::Atom(ai.clone(), slope_rel, aj.clone()),
            Formula::Atom(prod(&ci), rel_low, icept_diff.clone()),
            Formula::Atom(icept_diff.clone(), rel_high, prod(&di)),
            Formula::Atom(prod(&cj), rel_low, icept_diff.clone()),
            Formula::Atom(icept_diff.clone(), rel_high, prod(&dj)),
        ])
    };
    Ok(Formula::or_all(vec![
        same_line,
        crossing(Rel::Le, Rel::Le, Rel::Gt),
        crossing(Rel::Ge, Rel::Ge, Rel::Lt),
    ]))
}

/// The segment-representability sentence for a graph: 4 parameters per
/// vertex, the global interval conditions, and an INTS (or negated INTS)
/// conjunct per vertex pair. Length O(n²).
pub fn encode_seg(g: &Graph) -> Result<Formula> {
    let n = g.vertex_count();
    if n == 0 {
        return Ok(Formula::truth());
    }
    let mut vars = Vec::with_capacity(4 * n);
    for i in 1..=n {
        for l in ['A', 'B', 'C', 'D'] {
            vars.push(format!("{}{}", l, i));
        }
    }
    let mut conjuncts: Vec<Formula> = Vec::new();
    for i in 1..=n {
        conjuncts.push(Formula::Atom(seg_var('C', i), Rel::Le, seg_var('D', i)));
    }
    for i in 1..=n {
        for j in (i + 1)..=n {
            let ints = ints_predicate(i, j)?;
            conjuncts.push(if g.has_edge(i, j) {
                ints
            } else {
                Formula::not(ints)
            });
        }
    }
    Ok(Formula::exists(vars, Formula::and_all(conjuncts)))
}
