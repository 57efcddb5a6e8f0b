//! Shared test support: an independent univariate decision oracle built on
//! dense-coefficient arithmetic with Sturm-guided bisection (no sign tables,
//! no pseudoremainders), plus seeded random generators.
//!
//! The oracle isolates every real root of every atom polynomial into rational
//! enclosures, refines enclosures until distinct roots separate, and decides
//! a formula by evaluating it at every root column and at rational samples
//! inside every open interval of the induced decomposition.

#![allow(dead_code)]

pub mod gen;

use num::{BigInt, One, Signed, Zero};
use realqe::formula::{Formula, Rel};
use realqe::poly::Polynomial;
use realqe::rat::{rat_int, Rat, Sign};

/// Dense univariate polynomial, constant term first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UPoly(pub Vec<Rat>);

impl UPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> UPoly {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        UPoly(coeffs)
    }

    pub fn zero() -> UPoly {
        UPoly(Vec::new())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.0.is_empty() {
            None
        } else {
            Some(self.0.len() - 1)
        }
    }

    pub fn from_poly(p: &Polynomial, var: &str) -> Option<UPoly> {
        p.univariate_coeffs(var).map(UPoly::new)
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn sign_at(&self, x: &Rat) -> Sign {
        Sign::of(&self.eval(x))
    }

    pub fn derivative(&self) -> UPoly {
        if self.0.len() <= 1 {
            return UPoly::zero();
        }
        UPoly::new(
            self.0[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * rat_int(i as i64 + 1))
                .collect(),
        )
    }

    fn divrem(&self, b: &UPoly) -> (UPoly, UPoly) {
        assert!(!b.is_zero());
        let mut r = self.0.clone();
        let db = b.0.len() - 1;
        let lb = &b.0[db];
        let mut q = vec![Rat::zero(); self.0.len().saturating_sub(db)];
        while r.len() > db {
            let dr = r.len() - 1;
            let factor = r.last().unwrap() / lb;
            q[dr - db] = factor.clone();
            for i in 0..=db {
                let t = &b.0[i] * &factor;
                r[dr - db + i] -= t;
            }
            while r.last().map(|c| c.is_zero()).unwrap_or(false) {
                r.pop();
            }
        }
        (UPoly::new(q), UPoly::new(r))
    }

    /// Rescales by the positive rational making the coefficients coprime
    /// integers; every sign is preserved, and it keeps the bisection
    /// arithmetic from drowning in giant denominators.
    fn primitive_pos(&self) -> UPoly {
        if self.is_zero() {
            return UPoly::zero();
        }
        let mut den_lcm = BigInt::one();
        for c in &self.0 {
            den_lcm = num::integer::lcm(den_lcm, c.denom().clone());
        }
        let mut num_gcd = BigInt::zero();
        for c in &self.0 {
            num_gcd = num::integer::gcd(num_gcd, c.numer() * (&den_lcm / c.denom()));
        }
        let f = Rat::new(den_lcm, num_gcd);
        UPoly(self.0.iter().map(|c| c * &f).collect())
    }

    fn gcd(a: &UPoly, b: &UPoly) -> UPoly {
        let (mut x, mut y) = (a.primitive_pos(), b.primitive_pos());
        while !y.is_zero() {
            let (_, r) = x.divrem(&y);
            x = y;
            y = r.primitive_pos();
        }
        // monic normalization
        if let Some(lead) = x.0.last().cloned() {
            UPoly::new(x.0.iter().map(|c| c / &lead).collect())
        } else {
            x
        }
    }

    /// Square-free part `p / gcd(p, p')`; all real roots become simple.
    pub fn squarefree(&self) -> UPoly {
        if self.degree().unwrap_or(0) <= 1 {
            return self.clone();
        }
        let g = UPoly::gcd(self, &self.derivative());
        if g.degree() == Some(0) {
            self.clone()
        } else {
            let (q, r) = self.divrem(&g);
            assert!(r.is_zero(), "gcd must divide");
            q
        }
    }

    /// `1 + max |a_i| / |a_n|`: every real root lies strictly inside ±bound.
    pub fn cauchy_bound(&self) -> Rat {
        let lead = self.0.last().expect("nonzero").abs();
        let mx = self.0[..self.0.len() - 1]
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(Rat::zero);
        Rat::one() + mx / lead
    }
}

/// Sturm chain of a square-free polynomial.
pub struct Sturm {
    chain: Vec<UPoly>,
}

impl Sturm {
    pub fn new(squarefree: &UPoly) -> Sturm {
        // positive rescaling of each element preserves all sign variations
        let mut chain = vec![
            squarefree.primitive_pos(),
            squarefree.derivative().primitive_pos(),
        ];
        while !chain.last().unwrap().is_zero() {
            let n = chain.len();
            let (_, r) = chain[n - 2].divrem(&chain[n - 1]);
            let neg = UPoly::new(r.0.iter().map(|c| -c).collect()).primitive_pos();
            chain.push(neg);
        }
        chain.pop();
        Sturm { chain }
    }

    fn variations(&self, x: &Rat) -> usize {
        let mut count = 0;
        let mut last = Sign::Zero;
        for p in &self.chain {
            let s = p.sign_at(x);
            if s == Sign::Zero {
                continue;
            }
            if last != Sign::Zero && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    /// Number of distinct roots in the half-open interval `(l, r]`.
    pub fn count(&self, l: &Rat, r: &Rat) -> usize {
        self.variations(l) - self.variations(r)
    }
}

/// Location of one real root of a square-free polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RootLoc {
    Exact(Rat),
    /// Open interval containing exactly one (irrational) root; the
    /// polynomial is nonzero at both rational endpoints.
    Open(Rat, Rat),
}

impl RootLoc {
    pub fn low(&self) -> Rat {
        match self {
            RootLoc::Exact(x) => x.clone(),
            RootLoc::Open(l, _) => l.clone(),
        }
    }

    pub fn high(&self) -> Rat {
        match self {
            RootLoc::Exact(x) => x.clone(),
            RootLoc::Open(_, r) => r.clone(),
        }
    }
}

/// All real roots of `p`, isolated by Sturm-count bisection on the Cauchy
/// interval. Returns the square-free part alongside the sorted locations.
pub fn isolate_roots(p: &UPoly) -> (UPoly, Vec<RootLoc>) {
    let sf = p.squarefree();
    if sf.degree().unwrap_or(0) == 0 {
        return (sf, Vec::new());
    }
    let sturm = Sturm::new(&sf);
    let bound = sf.cauchy_bound();
    let lo = -&bound;
    let hi = bound.clone();
    let mut out = Vec::new();
    let mut stack = vec![(lo, hi)];
    while let Some((l, r)) = stack.pop() {
        // invariant: sf(l) ≠ 0 and sf(r) ≠ 0 (true at the Cauchy endpoints)
        let n = sturm.count(&l, &r);
        if n == 0 {
            continue;
        }
        if n == 1 && sf.sign_at(&l).mul(sf.sign_at(&r)) == Sign::Neg {
            out.push(RootLoc::Open(l, r));
            continue;
        }
        let mut m = (&l + &r) / rat_int(2);
        if sf.sign_at(&m) == Sign::Zero {
            // rational root at the midpoint: shrink a hole around it
            let mut eps = (&r - &l) / rat_int(4);
            loop {
                let a = &m - &eps;
                let b = &m + &eps;
                if sf.sign_at(&a) != Sign::Zero
                    && sf.sign_at(&b) != Sign::Zero
                    && sturm.count(&a, &b) == 1
                {
                    out.push(RootLoc::Exact(m.clone()));
                    stack.push((l.clone(), a));
                    stack.push((b, r.clone()));
                    break;
                }
                eps /= rat_int(2);
            }
            continue;
        }
        // midpoint may still be a root of a sibling; nudge if needed
        while sf.sign_at(&m) == Sign::Zero {
            m = (&l + &m) / rat_int(2);
        }
        stack.push((l, m.clone()));
        stack.push((m, r));
    }
    out.sort_by(|a, b| a.low().cmp(&b.low()).then_with(|| a.high().cmp(&b.high())));
    (sf, out)
}

/// Halves an open enclosure, keeping the root inside.
pub fn refine(sf: &UPoly, loc: &RootLoc) -> RootLoc {
    match loc {
        RootLoc::Exact(_) => loc.clone(),
        RootLoc::Open(l, r) => {
            let m = (l + r) / rat_int(2);
            if sf.sign_at(&m) == Sign::Zero {
                return RootLoc::Exact(m);
            }
            // keep the half with the sign change
            if sf.sign_at(l).mul(sf.sign_at(&m)) == Sign::Neg {
                RootLoc::Open(l.clone(), m)
            } else {
                RootLoc::Open(m, r.clone())
            }
        }
    }
}

/// Orders two distinct roots by refining both enclosures until they separate.
pub fn compare_roots(
    sf_a: &UPoly,
    loc_a: &RootLoc,
    sf_b: &UPoly,
    loc_b: &RootLoc,
) -> std::cmp::Ordering {
    let mut a = loc_a.clone();
    let mut b = loc_b.clone();
    loop {
        if let (RootLoc::Exact(x), RootLoc::Exact(y)) = (&a, &b) {
            return x.cmp(y);
        }
        if a.high() < b.low() {
            return std::cmp::Ordering::Less;
        }
        if b.high() < a.low() {
            return std::cmp::Ordering::Greater;
        }
        a = refine(sf_a, &a);
        b = refine(sf_b, &b);
    }
}

/// Exact sign of `q` at the unique root of square-free `sf` inside `loc`.
pub fn sign_at_root(q: &UPoly, sf: &UPoly, loc: &RootLoc) -> Sign {
    match loc {
        RootLoc::Exact(x) => q.sign_at(x),
        RootLoc::Open(l, r) => {
            if q.is_zero() {
                return Sign::Zero;
            }
            let qsf = q.squarefree();
            let g = UPoly::gcd(sf, &qsf);
            if g.degree().unwrap_or(0) >= 1 {
                let gs = Sturm::new(&g);
                if gs.count(l, r) > 0 {
                    // the only root of sf in (l, r) is a common root with q
                    return Sign::Zero;
                }
            }
            // q has no root at α: shrink until q has none in the enclosure
            let qs = Sturm::new(&qsf);
            let mut cur = RootLoc::Open(l.clone(), r.clone());
            loop {
                match &cur {
                    RootLoc::Exact(x) => return q.sign_at(x),
                    RootLoc::Open(cl, cr) => {
                        if qs.count(cl, cr) == 0 {
                            let mid = (cl + cr) / rat_int(2);
                            let s = q.sign_at(&mid);
                            if s != Sign::Zero {
                                return s;
                            }
                        }
                        cur = refine(sf, &cur);
                    }
                }
            }
        }
    }
}

/// One distinct root of the family, with the polynomials vanishing there.
pub struct MergedRoot {
    /// Index of the polynomial whose (square-free) enclosure holds the root.
    pub owner: usize,
    pub loc: RootLoc,
}

/// Distinct real roots of a family, sorted left to right. Enclosures from
/// different polynomials are compared exactly: equal if the other polynomial
/// vanishes at the root, otherwise refined until they separate.
pub fn merged_roots(polys: &[UPoly]) -> (Vec<UPoly>, Vec<MergedRoot>) {
    let mut sfs = Vec::with_capacity(polys.len());
    let mut all: Vec<MergedRoot> = Vec::new();
    for (i, p) in polys.iter().enumerate() {
        if p.is_zero() || p.degree() == Some(0) {
            sfs.push(p.clone());
            continue;
        }
        let (sf, locs) = isolate_roots(p);
        sfs.push(sf);
        for loc in locs {
            let dup = all
                .iter()
                .any(|m| roots_equal(&sfs[m.owner], &m.loc, &sfs[i], &loc));
            if !dup {
                all.push(MergedRoot { owner: i, loc });
            }
        }
    }
    // order the distinct roots by separating enclosures
    all.sort_by(|a, b| compare_roots(&sfs[a.owner], &a.loc, &sfs[b.owner], &b.loc));
    (sfs, all)
}

fn roots_equal(sf_a: &UPoly, loc_a: &RootLoc, sf_b: &UPoly, loc_b: &RootLoc) -> bool {
    // disjoint enclosures hold distinct roots
    if loc_a.high() < loc_b.low() || loc_b.high() < loc_a.low() {
        return false;
    }
    match (loc_a, loc_b) {
        (RootLoc::Exact(x), RootLoc::Exact(y)) => x == y,
        // an exact point inside the other enclosure is its unique root
        // exactly when the other square-free part vanishes there
        (RootLoc::Exact(x), RootLoc::Open(..)) => sf_b.sign_at(x) == Sign::Zero,
        (RootLoc::Open(..), RootLoc::Exact(y)) => sf_a.sign_at(y) == Sign::Zero,
        (RootLoc::Open(la, ra), RootLoc::Open(lb, rb)) => {
            // equal iff gcd(sf_a, sf_b) has a root in the intersection: any
            // such root is simultaneously the unique root of sf_a in loc_a
            // and of sf_b in loc_b
            let g = UPoly::gcd(sf_a, sf_b);
            if g.degree().unwrap_or(0) < 1 {
                return false;
            }
            let l = la.max(lb);
            let r = ra.min(rb);
            if l >= r {
                return false;
            }
            Sturm::new(&g).count(l, r) >= 1
        }
    }
}

/// Full sign decomposition of the real line induced by the atom polynomials:
/// for each column (interval or root) the exact sign vector.
pub struct Decomposition {
    pub polys: Vec<UPoly>,
    /// alternating interval sample / root, starting and ending with samples
    pub columns: Vec<(bool, Vec<Sign>)>, // (is_boundary, signs)
}

pub fn decompose(polys: &[UPoly]) -> Decomposition {
    let (sfs, roots) = merged_roots(polys);
    // refine all enclosures until pairwise disjoint so gaps are visible
    let mut locs: Vec<RootLoc> = roots.iter().map(|m| m.loc.clone()).collect();
    loop {
        let mut overlapping = false;
        for i in 1..locs.len() {
            if !(locs[i - 1].high() < locs[i].low()) {
                overlapping = true;
            }
        }
        if !overlapping {
            break;
        }
        for (m, loc) in roots.iter().zip(locs.iter_mut()) {
            *loc = refine(&sfs[m.owner], loc);
        }
    }
    let mut samples: Vec<Rat> = Vec::new();
    let global = polys
        .iter()
        .filter(|p| p.degree().unwrap_or(0) >= 1)
        .map(|p| p.cauchy_bound())
        .max()
        .unwrap_or_else(|| rat_int(1));
    samples.push(-&global - rat_int(1));
    for i in 1..locs.len() {
        samples.push((locs[i - 1].high() + locs[i].low()) / rat_int(2));
    }
    samples.push(&global + rat_int(1));

    let mut columns = Vec::new();
    if locs.is_empty() {
        let x = rat_int(0);
        columns.push((false, polys.iter().map(|p| p.sign_at(&x)).collect()));
    } else {
        for (i, (m, loc)) in roots.iter().zip(locs.iter()).enumerate() {
            columns.push((
                false,
                polys.iter().map(|p| p.sign_at(&samples[i])).collect(),
            ));
            let signs: Vec<Sign> = polys
                .iter()
                .map(|p| {
                    if p.is_zero() {
                        Sign::Zero
                    } else if p.degree() == Some(0) {
                        Sign::of(&p.0[0])
                    } else {
                        sign_at_root(p, &sfs[m.owner], loc)
                    }
                })
                .collect();
            columns.push((true, signs));
        }
        columns.push((
            false,
            polys
                .iter()
                .map(|p| p.sign_at(samples.last().unwrap()))
                .collect(),
        ));
    }
    Decomposition {
        polys: polys.to_vec(),
        columns,
    }
}

/// Atom polynomials in a fixed traversal order, with the formula compiled
/// against them. Duplicate atoms share an entry.
fn formula_atoms(f: &Formula, var: &str) -> (Vec<UPoly>, Vec<(usize, Rel)>, FormulaShape) {
    fn walk(
        f: &Formula,
        var: &str,
        polys: &mut Vec<UPoly>,
        atoms: &mut Vec<(usize, Rel)>,
    ) -> FormulaShape {
        match f {
            Formula::Atom(l, rel, r) => {
                let p = realqe::poly::poly_from_atom(l, r, 1 << 20).expect("atom fits budget");
                let u = UPoly::from_poly(&p, var).expect("univariate atom");
                let idx = polys.iter().position(|q| *q == u).unwrap_or_else(|| {
                    polys.push(u.clone());
                    polys.len() - 1
                });
                let aidx = atoms.len();
                atoms.push((idx, *rel));
                FormulaShape::Atom(aidx)
            }
            Formula::Not(g) => FormulaShape::Not(Box::new(walk(g, var, polys, atoms))),
            Formula::And(a, b) => FormulaShape::And(
                Box::new(walk(a, var, polys, atoms)),
                Box::new(walk(b, var, polys, atoms)),
            ),
            Formula::Or(a, b) => FormulaShape::Or(
                Box::new(walk(a, var, polys, atoms)),
                Box::new(walk(b, var, polys, atoms)),
            ),
            Formula::Iff(a, b) => FormulaShape::Iff(
                Box::new(walk(a, var, polys, atoms)),
                Box::new(walk(b, var, polys, atoms)),
            ),
            Formula::Quant(..) => panic!("oracle needs a quantifier-free matrix"),
        }
    }
    let mut polys = Vec::new();
    let mut atoms = Vec::new();
    let shape = walk(f, var, &mut polys, &mut atoms);
    (polys, atoms, shape)
}

pub enum FormulaShape {
    Atom(usize),
    Not(Box<FormulaShape>),
    And(Box<FormulaShape>, Box<FormulaShape>),
    Or(Box<FormulaShape>, Box<FormulaShape>),
    Iff(Box<FormulaShape>, Box<FormulaShape>),
}

impl FormulaShape {
    fn eval(&self, atom: &impl Fn(usize) -> bool) -> bool {
        match self {
            FormulaShape::Atom(i) => atom(*i),
            FormulaShape::Not(e) => !e.eval(atom),
            FormulaShape::And(l, r) => l.eval(atom) && r.eval(atom),
            FormulaShape::Or(l, r) => l.eval(atom) || r.eval(atom),
            FormulaShape::Iff(l, r) => l.eval(atom) == r.eval(atom),
        }
    }
}

/// Satisfaction mask of a univariate quantifier-free formula over the exact
/// decomposition columns.
pub fn satisfaction_mask(matrix: &Formula, var: &str) -> Vec<bool> {
    let (polys, atoms, shape) = formula_atoms(matrix, var);
    let dec = decompose(&polys);
    dec.columns
        .iter()
        .map(|(_, signs)| {
            shape.eval(&|a| {
                let (pidx, rel) = atoms[a];
                rel.admits(signs[pidx])
            })
        })
        .collect()
}

/// Brute-force decision of `(E var)(matrix)`.
pub fn decide_oracle(matrix: &Formula, var: &str) -> bool {
    satisfaction_mask(matrix, var).iter().any(|b| *b)
}

/// Brute-force component count of a univariate solution set.
pub fn count_components_oracle(matrix: &Formula, var: &str) -> usize {
    let mask = satisfaction_mask(matrix, var);
    let mut runs = 0;
    let mut inside = false;
    for sat in mask {
        if sat && !inside {
            runs += 1;
        }
        inside = sat;
    }
    runs
}

/// Number of distinct real roots across the family.
pub fn distinct_root_count(polys: &[UPoly]) -> usize {
    merged_roots(polys).1.len()
}
