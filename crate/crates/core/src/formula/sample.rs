//! Seeded sampling oracle for checking two quantifier-free formulas against
//! each other on rational assignments.

use rand::RngCore;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Assignment, Formula};
use crate::error::Result;
use crate::poly::{poly_from_atom, Degree};
use crate::rat::{rat, rat_int, rat_sqrt_exact, Rat};

/// Outcome of a sampling comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Equivalence {
    NoCounterexample,
    Counterexample(Assignment),
}

impl Equivalence {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Equivalence::NoCounterexample)
    }
}

#[derive(Debug, Clone)]
pub struct SampleOptions {
    /// Extra grid values tried for every variable, besides the built-in grid.
    pub extra_grid: Vec<Rat>,
    /// Monomial cap used when inspecting atoms for boundary values.
    pub monomial_budget: usize,
}

impl Default for SampleOptions {
    fn default() -> Self {
        SampleOptions {
            extra_grid: Vec::new(),
            monomial_budget: crate::poly::DEFAULT_MONOMIAL_BUDGET,
        }
    }
}

fn base_grid() -> Vec<Rat> {
    vec![
        rat_int(0),
        rat_int(1),
        rat_int(-1),
        rat(1, 2),
        rat(-1, 2),
        rat_int(2),
        rat_int(-2),
        rat(3, 2),
        rat(-3, 2),
        rat(1, 3),
        rat(-1, 3),
        rat_int(3),
        rat_int(-3),
    ]
}

/// Rational roots of univariate restrictions of the atoms: exact roots of
/// linear atom polynomials, and of quadratics whose discriminant is a perfect
/// square. These are the cheap boundary-biased sample points.
fn boundary_values(f: &Formula, var: &str, budget: usize) -> Vec<Rat> {
    let mut out = Vec::new();
    let mut stack = vec![f];
    while let Some(g) = stack.pop() {
        match g {
            Formula::Atom(l, _, r) => {
                let p = match poly_from_atom(l, r, budget) {
                    Ok(p) => p,
                    Err(_) => continue,
                };
                if p.vars() != [var.to_string()] {
                    continue;
                }
                match p.degree(var) {
                    Degree::Finite(1) => {
                        let a = p.coeff_of(var, 1).constant_value().unwrap();
                        let b = p.coeff_of(var, 0).constant_value().unwrap();
                        out.push(-b / a);
                    }
                    Degree::Finite(2) => {
                        let a = p.coeff_of(var, 2).constant_value().unwrap();
                        let b = p.coeff_of(var, 1).constant_value().unwrap();
                        let c = p.coeff_of(var, 0).constant_value().unwrap();
                        let disc = &b * &b - rat_int(4) * &a * &c;
                        if let Some(s) = rat_sqrt_exact(&disc) {
                            let two_a = rat_int(2) * &a;
                            out.push((-&b + &s) / &two_a);
                            out.push((-&b - &s) / &two_a);
                        }
                    }
                    _ => {}
                }
            }
            Formula::Not(a) => stack.push(a),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Iff(a, b) => {
                stack.push(a);
                stack.push(b);
            }
            Formula::Quant(_, _, a) => stack.push(a),
        }
    }
    out
}

/// Evaluates `f` and `g` at `trials` pseudorandom rational assignments over
/// `vars`, deterministic in `seed`, and returns the first disagreement.
///
/// The first trials sweep a fixed grid diagonally (all variables take the
/// same grid value, zero first), then values mix grid points, boundary-biased
/// points, and random small rationals.
pub fn sample_equiv(
    f: &Formula,
    g: &Formula,
    vars: &[String],
    trials: usize,
    seed: u64,
) -> Result<Equivalence> {
    sample_equiv_with(f, g, vars, trials, seed, &SampleOptions::default())
}

pub fn sample_equiv_with(
    f: &Formula,
    g: &Formula,
    vars: &[String],
    trials: usize,
    seed: u64,
    opts: &SampleOptions,
) -> Result<Equivalence> {
    let mut grid = base_grid();
    grid.extend(opts.extra_grid.iter().cloned());
    // per-variable pools: grid plus boundary values from both formulas
    let pools: Vec<Vec<Rat>> = vars
        .iter()
        .map(|v| {
            let mut pool = grid.clone();
            pool.extend(boundary_values(f, v, opts.monomial_budget));
            pool.extend(boundary_values(g, v, opts.monomial_budget));
            pool
        })
        .collect();
    let max_pool = pools.iter().map(|p| p.len()).max().unwrap_or(0);

    let assignment_for = |i: usize| -> Assignment {
        let mut a = Assignment::new();
        if i < max_pool {
            // diagonal sweep over the pools
            for (v, pool) in vars.iter().zip(&pools) {
                a.insert(v.clone(), pool[i % pool.len()].clone());
            }
            return a;
        }
        // mixed deterministic randomness, independent per trial
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (i as u64).wrapping_mul(0x9e3779b97f4a7c15));
        for (v, pool) in vars.iter().zip(&pools) {
            let r = rng.next_u64();
            let value = if r % 5 < 2 {
                pool[((r / 5) as usize) % pool.len()].clone()
            } else {
                let num = ((r >> 8) % 25) as i64 - 12;
                let den = (((r >> 16) % 8) + 1) as i64;
                rat(num, den)
            };
            a.insert(v.clone(), value);
        }
        a
    };

    let check = |i: usize| -> Result<Option<Assignment>> {
        let a = assignment_for(i);
        let fa = f.eval_qfree(&a)?;
        let ga = g.eval_qfree(&a)?;
        Ok(if fa != ga { Some(a) } else { None })
    };

    match crate::par::find_first_result(trials, check)? {
        Some(a) => Ok(Equivalence::Counterexample(a)),
        None => Ok(Equivalence::NoCounterexample),
    }
}
