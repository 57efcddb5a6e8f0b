//! Seeded random generators for the test suites.

use rand::RngCore;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use realqe::formula::{Formula, Rel, Term};
use realqe::geom::Point;
use realqe::rat::{rat, rat_int, Rat};

pub struct Gen {
    rng: ChaCha8Rng,
}

impl Gen {
    pub fn new(seed: u64) -> Gen {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn next(&mut self) -> u64 {
        self.rng.next_u64()
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next() % n as u64) as usize
    }

    pub fn int_in(&mut self, lo: i64, hi: i64) -> i64 {
        lo + (self.next() % ((hi - lo + 1) as u64)) as i64
    }

    pub fn rat_small(&mut self) -> Rat {
        rat(self.int_in(-12, 12), self.int_in(1, 8))
    }

    /// Random univariate polynomial term over `var` with integer
    /// coefficients in ±bound and exact degree ≤ max_deg (nonzero).
    pub fn upoly_term(&mut self, var: &str, max_deg: usize, bound: i64) -> Term {
        loop {
            let coeffs: Vec<i64> = (0..=max_deg)
                .map(|_| self.int_in(-bound, bound))
                .collect();
            if coeffs.iter().all(|c| *c == 0) {
                continue;
            }
            return term_from_coeffs(var, &coeffs);
        }
    }

    pub fn rel(&mut self) -> Rel {
        match self.below(6) {
            0 => Rel::Lt,
            1 => Rel::Le,
            2 => Rel::Gt,
            3 => Rel::Ge,
            4 => Rel::Eq,
            _ => Rel::Ne,
        }
    }

    /// Random quantifier-free univariate formula: up to `max_atoms` atoms
    /// over random polynomials, combined with ∧/∨/¬.
    pub fn univariate_formula(&mut self, var: &str, max_atoms: usize, max_deg: usize) -> Formula {
        let n = 1 + self.below(max_atoms);
        let mut cur: Option<Formula> = None;
        for _ in 0..n {
            let deg = 1 + self.below(max_deg);
            let t = self.upoly_term(var, deg, 5);
            let mut atom = Formula::Atom(t, self.rel(), Term::Zero);
            if self.below(4) == 0 {
                atom = Formula::not(atom);
            }
            cur = Some(match cur {
                None => atom,
                Some(f) => {
                    if self.below(2) == 0 {
                        Formula::and(f, atom)
                    } else {
                        Formula::or(f, atom)
                    }
                }
            });
        }
        cur.unwrap()
    }

    /// Random existential formula for the single-equation reduction: a few
    /// atoms over `vars` with shallow arithmetic, ∧/∨/¬ structure.
    pub fn existential_formula(&mut self, vars: &[&str], atoms: usize) -> Formula {
        let mut parts: Vec<Formula> = Vec::new();
        for _ in 0..atoms {
            let t = self.multi_term(vars, 2);
            let rhs = Term::integer_u64(self.int_in(0, 6) as u64);
            let mut atom = Formula::Atom(t, self.rel(), rhs);
            if self.below(5) == 0 {
                atom = Formula::not(atom);
            }
            parts.push(atom);
        }
        let mut f = parts.remove(0);
        for p in parts {
            f = if self.below(2) == 0 {
                Formula::and(f, p)
            } else {
                Formula::or(f, p)
            };
        }
        Formula::exists(vars.iter().map(|s| s.to_string()).collect(), f)
    }

    fn multi_term(&mut self, vars: &[&str], depth: usize) -> Term {
        if depth == 0 || self.below(3) == 0 {
            return match self.below(4) {
                0 => Term::integer_u64(self.int_in(0, 5) as u64),
                _ => Term::var(vars[self.below(vars.len())]),
            };
        }
        let l = self.multi_term(vars, depth - 1);
        let r = self.multi_term(vars, depth - 1);
        match self.below(3) {
            0 => Term::Add(Box::new(l), Box::new(r)),
            1 => Term::Sub(Box::new(l), Box::new(r)),
            _ => Term::Mul(Box::new(l), Box::new(r)),
        }
    }

    /// Random point with small rational coordinates.
    pub fn point(&mut self) -> Point {
        Point::new(self.rat_small(), self.rat_small())
    }

    /// Random points in general position (no collinear triple), rejection
    /// sampled on an integer grid.
    pub fn points_general_position(&mut self, n: usize) -> Vec<Point> {
        loop {
            let pts: Vec<Point> = (0..n)
                .map(|_| {
                    Point::new(
                        rat_int(self.int_in(-50, 50)),
                        rat_int(self.int_in(-50, 50)),
                    )
                })
                .collect();
            let mut ok = true;
            'outer: for i in 0..n {
                for j in (i + 1)..n {
                    if pts[i] == pts[j] {
                        ok = false;
                        break 'outer;
                    }
                    for k in (j + 1)..n {
                        if realqe::geom::triple_sign(&pts[i], &pts[j], &pts[k])
                            == realqe::rat::Sign::Zero
                        {
                            ok = false;
                            break 'outer;
                        }
                    }
                }
            }
            if ok {
                return pts;
            }
        }
    }

    /// Random segment family with pairwise distinct slopes: per segment the
    /// line parameters (a, b) and the interval [c, d] with c ≤ d.
    pub fn segment_family(&mut self, n: usize) -> Vec<(Rat, Rat, Rat, Rat)> {
        loop {
            let segs: Vec<(Rat, Rat, Rat, Rat)> = (0..n)
                .map(|_| {
                    let a = rat(self.int_in(-9, 9), self.int_in(1, 4));
                    let b = rat(self.int_in(-9, 9), self.int_in(1, 4));
                    let c = rat(self.int_in(-8, 6), self.int_in(1, 3));
                    let len = rat(self.int_in(0, 9), self.int_in(1, 2));
                    let d = &c + &len;
                    (a, b, c, d)
                })
                .collect();
            let distinct = (0..n)
                .all(|i| (0..i).all(|j| segs[i].0 != segs[j].0));
            if distinct {
                return segs;
            }
        }
    }
}

fn term_from_coeffs(var: &str, coeffs: &[i64]) -> Term {
    let mut acc: Option<Term> = None;
    for (k, &c) in coeffs.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let mut mono: Option<Term> = if c.abs() == 1 && k > 0 {
            None
        } else {
            Some(Term::integer_u64(c.unsigned_abs()))
        };
        for _ in 0..k {
            mono = Some(match mono {
                None => Term::var(var),
                Some(m) => Term::Mul(Box::new(m), Box::new(Term::var(var))),
            });
        }
        let mono = mono.expect("nonzero monomial");
        acc = Some(match acc {
            None => {
                if c < 0 {
                    Term::Sub(Box::new(Term::Zero), Box::new(mono))
                } else {
                    mono
                }
            }
            Some(a) => {
                if c < 0 {
                    Term::Sub(Box::new(a), Box::new(mono))
                } else {
                    Term::Add(Box::new(a), Box::new(mono))
                }
            }
        });
    }
    acc.expect("nonzero polynomial")
}
