//! Multivariate quantifier elimination.
//!
//! To eliminate `(E X)` from a quantifier-free matrix, the univariate
//! sign-table algorithm runs with coefficients that are polynomials in the
//! remaining variables. Every sign it asks for is a branch point: the
//! explorer forks the run three ways (−1, 0, +1, in that order), reusing the
//! assumed sign when a syntactically identical polynomial is tested again on
//! the same branch. TRUE leaves contribute the conjunction of their branch
//! assumptions; the result is their disjunction, assembled bottom-up with
//! branches that agree being merged away.

mod dnf;
mod engine;

pub use dnf::Dnf;

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::formula::{to_prenex, Formula, Quantifier, Rel, Term};
use crate::par::{join3, Strategy};
use crate::poly::{poly_from_atom, poly_to_term, Polynomial, RationalFunction};
use crate::rat::Sign;

use engine::{PremCache, Prepared, Run, Stop};

/// Budgets and execution controls for an elimination.
#[derive(Debug, Clone)]
pub struct EliminationOptions {
    /// Cap on explored branch nodes per eliminated variable.
    pub node_budget: usize,
    /// Cap on monomial counts during polynomial expansion.
    pub monomial_budget: usize,
    pub strategy: Strategy,
    /// Record every explored leaf (forces sequential exploration).
    pub collect_leaves: bool,
}

impl Default for EliminationOptions {
    fn default() -> Self {
        EliminationOptions {
            node_budget: 100_000,
            monomial_budget: crate::poly::DEFAULT_MONOMIAL_BUDGET,
            strategy: Strategy::auto(),
            collect_leaves: false,
        }
    }
}

/// Sign assumptions accumulated along one branch of the elimination tree.
/// Entries are rational functions; with division-free pseudoremainder
/// execution every denominator is 1.
#[derive(Debug, Clone)]
pub struct ConditionPath(pub Vec<(RationalFunction, Sign)>);

/// One fully explored branch with its terminal verdict.
#[derive(Debug, Clone)]
pub struct BranchOutcome {
    pub path: ConditionPath,
    pub verdict: bool,
}

/// Statistics (and optionally leaves) from one `eliminate_exists` call.
#[derive(Debug, Default)]
pub struct EliminationReport {
    pub nodes: usize,
    pub leaf_count: usize,
    pub leaves: Vec<BranchOutcome>,
}

struct ExploreCtx<'a> {
    prep: &'a Prepared,
    nodes: &'a AtomicUsize,
    node_budget: usize,
    strategy: Strategy,
    leaf_count: &'a AtomicUsize,
    collect: Option<&'a Mutex<Vec<BranchOutcome>>>,
    prems: &'a PremCache,
}

fn record_leaf(ctx: &ExploreCtx, path: &[(Polynomial, Sign)], verdict: bool) {
    ctx.leaf_count.fetch_add(1, Ordering::Relaxed);
    if let Some(sink) = ctx.collect {
        let cond = ConditionPath(
            path.iter()
                .map(|(p, s)| (RationalFunction::from_poly(p.clone()), *s))
                .collect(),
        );
        sink.lock().unwrap().push(BranchOutcome {
            path: cond,
            verdict,
        });
    }
}

fn explore(
    ctx: &ExploreCtx,
    assumed: &BTreeMap<Polynomial, Sign>,
    path: &[(Polynomial, Sign)],
    depth: usize,
) -> Result<Dnf> {
    let visited = ctx.nodes.fetch_add(1, Ordering::Relaxed) + 1;
    if visited > ctx.node_budget {
        return Err(Error::NodeBudget {
            limit: ctx.node_budget,
        });
    }
    let run = Run {
        prep: ctx.prep,
        assumed,
        prems: ctx.prems,
    };
    match run.execute() {
        Ok(verdict) => {
            record_leaf(ctx, path, verdict);
            Ok(if verdict { Dnf::truth() } else { Dnf::falsity() })
        }
        Err(Stop::Inconsistent) => {
            record_leaf(ctx, path, false);
            Ok(Dnf::falsity())
        }
        Err(Stop::Fail(e)) => Err(e),
        Err(Stop::Need(p)) => {
            let branch = |s: Sign| -> Result<Dnf> {
                let mut a = assumed.clone();
                a.insert(p.clone(), s);
                let mut pt: Vec<(Polynomial, Sign)> = path.to_vec();
                pt.push((p.clone(), s));
                explore(ctx, &a, &pt, depth + 1)
            };
            // spawn only near the root; deeper subtrees are cheap enough
            let strategy = if depth < 10 {
                ctx.strategy
            } else {
                Strategy::Sequential
            };
            let (rn, rz, rp) = join3(
                strategy,
                || branch(Sign::Neg),
                || branch(Sign::Zero),
                || branch(Sign::Pos),
            );
            Ok(dnf::combine(&p, rn?, rz?, rp?))
        }
    }
}

/// Matrix of a single-variable elimination: an arbitrary quantifier-free
/// formula, or an already-normalized disjunction.
enum Matrix {
    Formula(Formula),
    Normal(Dnf),
}

fn eliminate_matrix(
    matrix: &Matrix,
    var: &str,
    opts: &EliminationOptions,
    report: &mut EliminationReport,
) -> Result<Dnf> {
    let nodes = AtomicUsize::new(0);
    let leaf_count = AtomicUsize::new(0);
    let collect = if opts.collect_leaves {
        Some(Mutex::new(Vec::new()))
    } else {
        None
    };
    let strategy = if opts.collect_leaves {
        Strategy::Sequential
    } else {
        opts.strategy
    };

    // The existential quantifier distributes over disjunction, so each
    // top-level disjunct is eliminated on its own small atom set.
    let mut pieces: Vec<Formula> = Vec::new();
    match matrix {
        Matrix::Formula(f) => flatten_or(f, &mut pieces),
        Matrix::Normal(d) => {
            if d.is_truth() {
                pieces.push(Formula::truth());
            } else {
                for c in d.conjuncts() {
                    pieces.push(Dnf::conjunct_formula(c));
                }
            }
        }
    }

    let mut out = Dnf::falsity();
    let prems = PremCache::default();
    for piece in &pieces {
        let prep = engine::prepare(piece, var, opts.monomial_budget)?;
        let ctx = ExploreCtx {
            prep: &prep,
            nodes: &nodes,
            node_budget: opts.node_budget,
            strategy,
            leaf_count: &leaf_count,
            collect: collect.as_ref(),
            prems: &prems,
        };
        let d = explore(&ctx, &BTreeMap::new(), &[], 0)?;
        out = out.union(d);
    }

    report.nodes += nodes.load(Ordering::Relaxed);
    report.leaf_count += leaf_count.load(Ordering::Relaxed);
    if let Some(sink) = collect {
        report.leaves.extend(sink.into_inner().unwrap());
    }
    Ok(out)
}

fn flatten_or(f: &Formula, out: &mut Vec<Formula>) {
    match f {
        Formula::Or(l, r) => {
            flatten_or(l, out);
            flatten_or(r, out);
        }
        other => out.push(other.clone()),
    }
}

/// Eliminates one existential block: `(E X1 .. Xk)(matrix)` with a
/// quantifier-free matrix. Returns the quantifier-free equivalent over the
/// free variables, as a disjunction of sign-condition conjunctions.
pub fn eliminate_exists(f: &Formula, opts: &EliminationOptions) -> Result<Formula> {
    Ok(eliminate_exists_with_report(f, opts)?.0)
}

pub fn eliminate_exists_with_report(
    f: &Formula,
    opts: &EliminationOptions,
) -> Result<(Formula, EliminationReport)> {
    let (blocks, matrix) = f.prenex_split();
    let vars: Vec<String> = match blocks.as_slice() {
        [(Quantifier::Exists, vars)] => vars.clone(),
        _ => {
            return Err(Error::Input(
                "eliminate_exists expects a single existential block".into(),
            ))
        }
    };
    if !matrix.is_quantifier_free() {
        return Err(Error::Input("matrix must be quantifier-free".into()));
    }
    let mut report = EliminationReport::default();
    let mut m = Matrix::Formula(matrix.clone());
    for var in vars.iter().rev() {
        let d = eliminate_matrix(&m, var, opts, &mut report)?;
        m = Matrix::Normal(d);
    }
    let formula = match m {
        Matrix::Normal(d) => d.to_formula(),
        Matrix::Formula(f) => f,
    };
    Ok((formula, report))
}

/// Eliminates every quantifier of a prenex formula, innermost first; a
/// universal block is handled through `(A X)Φ ≡ ~(E X)~Φ`. Non-prenex input
/// is first converted with `to_prenex`.
pub fn eliminate_all(f: &Formula, opts: &EliminationOptions) -> Result<Formula> {
    let p = if f.prenex_split().1.is_quantifier_free() {
        f.clone()
    } else {
        to_prenex(f)
    };
    let (blocks, matrix) = p.prenex_split();
    let mut m = Matrix::Formula(matrix.clone());
    let mut report = EliminationReport::default();
    let trace = std::env::var("REALQE_TRACE").is_ok();
    for (q, vars) in blocks.iter().rev() {
        for var in vars.iter().rev() {
            let t0 = std::time::Instant::now();
            let n0 = report.nodes;
            match q {
                Quantifier::Exists => {
                    let d = eliminate_matrix(&m, var, opts, &mut report)?;
                    m = Matrix::Normal(d);
                }
                Quantifier::Forall => {
                    let negated = match &m {
                        Matrix::Formula(f) => Matrix::Formula(Formula::not(f.clone())),
                        Matrix::Normal(d) => Matrix::Normal(d.negate()),
                    };
                    let d = eliminate_matrix(&negated, var, opts, &mut report)?;
                    m = Matrix::Normal(d.negate());
                }
            }
            if trace {
                let size = match &m { Matrix::Normal(d) => d.len(), Matrix::Formula(_) => 0 };
                eprintln!("[trace] {} {:?}: {:?}, nodes {}, dnf size {}", var, q, t0.elapsed(), report.nodes - n0, size);
            }
        }
    }
    let out = match m {
        Matrix::Normal(d) => d.to_formula(),
        Matrix::Formula(f) => f,
    };
    Ok(simplify(&out))
}

/// Decides a sentence: prenex conversion, full elimination, then exact
/// evaluation of the closed quantifier-free result.
pub fn decide_sentence(f: &Formula, opts: &EliminationOptions) -> Result<bool> {
    let free = f.free_vars();
    if !free.is_empty() {
        return Err(Error::Input(format!(
            "decide_sentence requires a sentence; free variables {:?}",
            free
        )));
    }
    let qfree = eliminate_all(f, opts)?;
    qfree.eval_qfree(&crate::formula::Assignment::new())
}

/// Renders one branch condition `sign(u/v) = s` as a quantifier-free formula,
/// splitting the rational function into numerator and denominator tests with
/// the `denominator ≠ 0` conjunct included.
pub fn condition_to_formula(rf: &RationalFunction, sign: Sign) -> Formula {
    let rel = match sign {
        Sign::Neg => Rel::Lt,
        Sign::Zero => Rel::Eq,
        Sign::Pos => Rel::Gt,
    };
    if let Some(c) = rf.denom.constant_value() {
        let s = Sign::of(&c);
        let rel = if s == Sign::Neg { rel.mirror() } else { rel };
        return Formula::Atom(poly_to_term(&rf.numer), rel, Term::Zero);
    }
    let den_nonzero = Formula::Atom(poly_to_term(&rf.denom), Rel::Ne, Term::Zero);
    match sign {
        Sign::Zero => Formula::and(
            Formula::Atom(poly_to_term(&rf.numer), Rel::Eq, Term::Zero),
            den_nonzero,
        ),
        _ => {
            let product = rf.numer.mul(&rf.denom);
            Formula::and(
                Formula::Atom(poly_to_term(&product), rel, Term::Zero),
                den_nonzero,
            )
        }
    }
}

/// Applies sound local simplification rules: canonical atom normalization,
/// constant-atom folding, flattening with duplicate removal, contradictory
/// sign constraints pruning a conjunction, and absorption between disjuncts.
/// Idempotent and sample-equivalent to the input.
pub fn simplify(f: &Formula) -> Formula {
    match f {
        Formula::Atom(l, rel, r) => simplify_atom(l, *rel, r),
        Formula::Not(g) => {
            let s = simplify(g);
            if s == Formula::truth() {
                Formula::falsity()
            } else if s == Formula::falsity() {
                Formula::truth()
            } else {
                Formula::not(s)
            }
        }
        Formula::Iff(l, r) => {
            let sl = simplify(l);
            let sr = simplify(r);
            let t = Formula::truth();
            let fl = Formula::falsity();
            if sl == t {
                sr
            } else if sr == t {
                sl
            } else if sl == fl {
                simplify(&Formula::not(sr))
            } else if sr == fl {
                simplify(&Formula::not(sl))
            } else if sl == sr {
                Formula::truth()
            } else {
                Formula::iff(sl, sr)
            }
        }
        Formula::And(..) => simplify_junction(f, true),
        Formula::Or(..) => simplify_junction(f, false),
        Formula::Quant(q, vars, body) => Formula::Quant(*q, vars.clone(), Box::new(simplify(body))),
    }
}

fn simplify_atom(l: &Term, rel: Rel, r: &Term) -> Formula {
    let p = match poly_from_atom(l, r, crate::poly::DEFAULT_MONOMIAL_BUDGET) {
        Ok(p) => p,
        Err(_) => return Formula::Atom(l.clone(), rel, r.clone()),
    };
    if let Some(c) = p.constant_value() {
        return if rel.admits(Sign::of(&c)) {
            Formula::truth()
        } else {
            Formula::falsity()
        };
    }
    let (canon, negated) = p.sign_normal_form();
    let rel = if negated { rel.mirror() } else { rel };
    Formula::Atom(poly_to_term(&canon), rel, Term::Zero)
}

fn flatten_junction(f: &Formula, conj: bool, out: &mut Vec<Formula>) {
    match (f, conj) {
        (Formula::And(l, r), true) | (Formula::Or(l, r), false) => {
            flatten_junction(l, conj, out);
            flatten_junction(r, conj, out);
        }
        _ => out.push(simplify(f)),
    }
}

/// Constraint view of a canonical atom `p rel 0`.
fn atom_constraint(f: &Formula) -> Option<(Polynomial, dnf::SignSet)> {
    if let Formula::Atom(l, rel, Term::Zero) = f {
        let p = poly_from_atom(l, &Term::Zero, crate::poly::DEFAULT_MONOMIAL_BUDGET).ok()?;
        if p.is_constant() {
            return None;
        }
        Some((p, dnf::rel_to_set(*rel)))
    } else {
        None
    }
}

fn simplify_junction(f: &Formula, conj: bool) -> Formula {
    let mut parts = Vec::new();
    flatten_junction(f, conj, &mut parts);
    let unit = if conj {
        Formula::truth()
    } else {
        Formula::falsity()
    };
    let zero = if conj {
        Formula::falsity()
    } else {
        Formula::truth()
    };
    let mut kept: Vec<Formula> = Vec::new();
    for p in parts {
        if p == zero {
            return zero;
        }
        if p == unit || kept.contains(&p) {
            continue;
        }
        kept.push(p);
    }
    if conj {
        // merge sign constraints per polynomial; an empty intersection makes
        // the whole conjunction unsatisfiable
        let mut merged: Vec<(Polynomial, dnf::SignSet)> = Vec::new();
        let mut rest: Vec<Formula> = Vec::new();
        for part in &kept {
            match atom_constraint(part) {
                Some((p, set)) => {
                    match merged.iter_mut().find(|(q, _)| *q == p) {
                        Some((_, s)) => *s &= set,
                        None => merged.push((p, set)),
                    }
                }
                None => rest.push(part.clone()),
            }
        }
        let mut atoms: Vec<Formula> = Vec::new();
        for (p, set) in merged {
            if set == 0 {
                return Formula::falsity();
            }
            match dnf::set_to_rel(set) {
                Some(rel) => atoms.push(Formula::Atom(poly_to_term(&p), rel, Term::Zero)),
                None => {} // full set: no constraint
            }
        }
        kept = atoms;
        kept.extend(rest);
    } else {
        // absorption between purely conjunctive disjuncts
        fn flatten_ands(g: &Formula, out: &mut Vec<Formula>) {
            if let Formula::And(l, r) = g {
                flatten_ands(l, out);
                flatten_ands(r, out);
            } else {
                out.push(g.clone());
            }
        }
        let constraint_map = |g: &Formula| -> Option<Vec<(Polynomial, dnf::SignSet)>> {
            let mut parts = Vec::new();
            flatten_ands(g, &mut parts);
            let mut out = Vec::new();
            for p in parts {
                out.push(atom_constraint(&p)?);
            }
            Some(out)
        };
        let maps: Vec<Option<Vec<(Polynomial, dnf::SignSet)>>> =
            kept.iter().map(constraint_map).collect();
        let implied = |weak: &[(Polynomial, dnf::SignSet)],
                       strong: &[(Polynomial, dnf::SignSet)]| {
            weak.iter().all(|(p, sw)| {
                strong
                    .iter()
                    .any(|(q, ss)| q == p && ss & sw == *ss)
            })
        };
        let mut keep = vec![true; kept.len()];
        for i in 0..kept.len() {
            if !keep[i] {
                continue;
            }
            for j in 0..kept.len() {
                if i == j || !keep[j] {
                    continue;
                }
                if let (Some(wi), Some(sj)) = (&maps[i], &maps[j]) {
                    if kept[i] != kept[j] && implied(wi, sj) {
                        keep[j] = false;
                    }
                }
            }
        }
        kept = kept
            .into_iter()
            .zip(keep)
            .filter_map(|(f, k)| if k { Some(f) } else { None })
            .collect();
    }
    match kept.len() {
        0 => unit,
        1 => kept.pop().unwrap(),
        _ => {
            if conj {
                Formula::and_all(kept)
            } else {
                Formula::or_all(kept)
            }
        }
    }
}
