//! Exact multivariate polynomials and rational functions in standard form.
//!
//! A polynomial is kept as a sparse map from exponent vectors to nonzero
//! rational coefficients over a sorted variable list. The representation is
//! canonical: unused variables are pruned, so structural equality coincides
//! with syntactic identity of the standard form.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rat::{Int, Rat, Sign};

/// Degree of a polynomial in one variable; the zero polynomial has degree −∞.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Degree {
    NegInfinity,
    Finite(u32),
}

impl Degree {
    pub fn finite(self) -> Option<u32> {
        match self {
            Degree::NegInfinity => None,
            Degree::Finite(d) => Some(d),
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{}", d),
        }
    }
}

/// Multivariate polynomial over arbitrary-precision rationals.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Polynomial {
    vars: Vec<String>,
    /// Exponent vector (aligned with `vars`) → nonzero coefficient.
    terms: BTreeMap<Vec<u32>, Rat>,
}

/// Quotient of two polynomials; the denominator is never the zero polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalFunction {
    pub numer: Polynomial,
    pub denom: Polynomial,
}

impl RationalFunction {
    pub fn new(numer: Polynomial, denom: Polynomial) -> Result<Self> {
        if denom.is_zero() {
            return Err(Error::Input("rational function with zero denominator".into()));
        }
        Ok(RationalFunction { numer, denom })
    }

    pub fn from_poly(p: Polynomial) -> Self {
        RationalFunction {
            numer: p,
            denom: Polynomial::one(),
        }
    }

    pub fn is_polynomial(&self) -> bool {
        self.denom.is_one()
    }
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial {
            vars: Vec::new(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Polynomial::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        Polynomial {
            vars: Vec::new(),
            terms,
        }
    }

    pub fn var(name: &str) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![1], Rat::one());
        Polynomial {
            vars: vec![name.to_string()],
            terms,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.is_constant() && self.constant_value().map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn is_constant(&self) -> bool {
        self.vars.is_empty()
    }

    /// Value of a constant polynomial (zero polynomial included).
    pub fn constant_value(&self) -> Option<Rat> {
        if !self.vars.is_empty() {
            return None;
        }
        Some(
            self.terms
                .get(&Vec::new())
                .cloned()
                .unwrap_or_else(Rat::zero),
        )
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn monomial_count(&self) -> usize {
        self.terms.len()
    }

    /// Iterates monomials as (exponent vector, coefficient) in lex-ascending order.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rat)> {
        self.terms.iter()
    }

    /// Largest bit length among numerators and denominators of the coefficients.
    /// Exposed as a size metric; it plays no role in the algorithms.
    pub fn coefficient_bits(&self) -> u64 {
        self.terms
            .values()
            .map(|c| c.numer().bits().max(c.denom().bits()))
            .max()
            .unwrap_or(0)
    }

    /// Normalizes after construction: drop zero coefficients and unused variables.
    fn normalize(mut self) -> Self {
        self.terms.retain(|_, c| !c.is_zero());
        let n = self.vars.len();
        let mut used = vec![false; n];
        for exps in self.terms.keys() {
            for (i, e) in exps.iter().enumerate() {
                if *e > 0 {
                    used[i] = true;
                }
            }
        }
        if used.iter().all(|u| *u) && !self.terms.is_empty() {
            return self;
        }
        let keep: Vec<usize> = (0..n).filter(|&i| used[i]).collect();
        if keep.len() == n {
            return self;
        }
        let vars: Vec<String> = keep.iter().map(|&i| self.vars[i].clone()).collect();
        let mut terms = BTreeMap::new();
        for (exps, c) in self.terms {
            let e: Vec<u32> = keep.iter().map(|&i| exps[i]).collect();
            terms.insert(e, c);
        }
        Polynomial { vars, terms }
    }

    /// Reindexes both operands onto the union of their variable lists.
    fn align(a: &Polynomial, b: &Polynomial) -> (Vec<String>, BTreeMap<Vec<u32>, Rat>, BTreeMap<Vec<u32>, Rat>) {
        let mut names: BTreeSet<&str> = BTreeSet::new();
        names.extend(a.vars.iter().map(|s| s.as_str()));
        names.extend(b.vars.iter().map(|s| s.as_str()));
        let vars: Vec<String> = names.into_iter().map(|s| s.to_string()).collect();
        let remap = |p: &Polynomial| -> BTreeMap<Vec<u32>, Rat> {
            let idx: Vec<usize> = p
                .vars
                .iter()
                .map(|v| vars.binary_search(v).expect("aligned variable"))
                .collect();
            p.terms
                .iter()
                .map(|(exps, c)| {
                    let mut e = vec![0u32; vars.len()];
                    for (i, x) in exps.iter().enumerate() {
                        e[idx[i]] = *x;
                    }
                    (e, c.clone())
                })
                .collect()
        };
        let ta = remap(a);
        let tb = remap(b);
        (vars, ta, tb)
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let (vars, ta, mut tb) = Polynomial::align(self, other);
        let mut terms = ta;
        for (e, c) in std::mem::take(&mut tb) {
            let entry = terms.entry(e).or_insert_with(Rat::zero);
            *entry += c;
        }
        Polynomial { vars, terms }.normalize()
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        self.mul_checked(other, usize::MAX)
            .expect("unbounded multiplication cannot exceed the budget")
    }

    /// Product in standard form; errs when the result would exceed `limit` monomials.
    pub fn mul_checked(&self, other: &Polynomial, limit: usize) -> Result<Polynomial> {
        if self.is_zero() || other.is_zero() {
            return Ok(Polynomial::zero());
        }
        let (vars, ta, tb) = Polynomial::align(self, other);
        let mut terms: BTreeMap<Vec<u32>, Rat> = BTreeMap::new();
        for (ea, ca) in &ta {
            for (eb, cb) in &tb {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let entry = terms.entry(e).or_insert_with(Rat::zero);
                *entry += ca * cb;
                if terms.len() > limit {
                    return Err(Error::ExpansionBudget { limit });
                }
            }
        }
        Ok(Polynomial { vars, terms }.normalize())
    }

    pub fn scale(&self, c: &Rat) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, k)| (e.clone(), k * c)).collect(),
        }
    }

    pub fn pow_checked(&self, exp: u32, limit: usize) -> Result<Polynomial> {
        let mut acc = Polynomial::one();
        for _ in 0..exp {
            acc = acc.mul_checked(self, limit)?;
        }
        Ok(acc)
    }

    fn var_index(&self, v: &str) -> Option<usize> {
        self.vars.binary_search_by(|x| x.as_str().cmp(v)).ok()
    }

    /// Highest exponent of `v` with a nonzero coefficient; −∞ for the zero polynomial.
    pub fn degree(&self, v: &str) -> Degree {
        if self.is_zero() {
            return Degree::NegInfinity;
        }
        match self.var_index(v) {
            None => Degree::Finite(0),
            Some(i) => Degree::Finite(self.terms.keys().map(|e| e[i]).max().unwrap_or(0)),
        }
    }

    /// Total degree across all variables; −∞ for zero.
    pub fn total_degree(&self) -> Degree {
        if self.is_zero() {
            return Degree::NegInfinity;
        }
        Degree::Finite(
            self.terms
                .keys()
                .map(|e| e.iter().sum::<u32>())
                .max()
                .unwrap_or(0),
        )
    }

    /// Coefficient of `v^k`, as a polynomial in the remaining variables.
    pub fn coeff_of(&self, v: &str, k: u32) -> Polynomial {
        match self.var_index(v) {
            None => {
                if k == 0 {
                    self.clone()
                } else {
                    Polynomial::zero()
                }
            }
            Some(i) => {
                let vars: Vec<String> = self
                    .vars
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .map(|(_, s)| s.clone())
                    .collect();
                let mut terms = BTreeMap::new();
                for (e, c) in &self.terms {
                    if e[i] == k {
                        let mut rest: Vec<u32> = e.clone();
                        rest.remove(i);
                        terms.insert(rest, c.clone());
                    }
                }
                Polynomial { vars, terms }.normalize()
            }
        }
    }

    /// Leading coefficient in `v` (the whole polynomial if `v` does not occur).
    pub fn leading_coeff(&self, v: &str) -> Polynomial {
        match self.degree(v) {
            Degree::NegInfinity => Polynomial::zero(),
            Degree::Finite(d) => self.coeff_of(v, d),
        }
    }

    /// Formal partial derivative with respect to `v`.
    pub fn derivative(&self, v: &str) -> Polynomial {
        let i = match self.var_index(v) {
            None => return Polynomial::zero(),
            Some(i) => i,
        };
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut ne = e.clone();
            ne[i] -= 1;
            let k = Rat::from_integer(Int::from(e[i]));
            let entry = terms.entry(ne).or_insert_with(Rat::zero);
            *entry += c * k;
        }
        Polynomial {
            vars: self.vars.clone(),
            terms,
        }
        .normalize()
    }

    /// Exact evaluation; errs when the assignment misses a variable.
    pub fn eval(&self, assignment: &BTreeMap<String, Rat>) -> Result<Rat> {
        for v in &self.vars {
            if !assignment.contains_key(v) {
                return Err(Error::MissingVariable(v.clone()));
            }
        }
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            let mut m = c.clone();
            for (i, exp) in e.iter().enumerate() {
                if *exp > 0 {
                    m *= crate::rat::rat_pow(&assignment[&self.vars[i]], *exp);
                }
            }
            acc += m;
        }
        Ok(acc)
    }

    /// Substitutes an exact value for one variable.
    pub fn substitute(&self, v: &str, value: &Rat) -> Polynomial {
        let i = match self.var_index(v) {
            None => return self.clone(),
            Some(i) => i,
        };
        let mut terms: BTreeMap<Vec<u32>, Rat> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut ne = e.clone();
            let exp = ne.remove(i);
            let coeff = c * crate::rat::rat_pow(value, exp);
            let vars_minus: Vec<u32> = ne;
            let entry = terms.entry(vars_minus).or_insert_with(Rat::zero);
            *entry += coeff;
        }
        let vars: Vec<String> = self
            .vars
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, s)| s.clone())
            .collect();
        Polynomial { vars, terms }.normalize()
    }

    /// Dense coefficient vector (constant term first) of a polynomial that is
    /// univariate in `v`. `None` if another variable occurs.
    pub fn univariate_coeffs(&self, v: &str) -> Option<Vec<Rat>> {
        if self.vars.iter().any(|x| x != v) {
            return None;
        }
        let d = match self.degree(v) {
            Degree::NegInfinity => return Some(Vec::new()),
            Degree::Finite(d) => d,
        };
        let mut coeffs = vec![Rat::zero(); d as usize + 1];
        for (e, c) in &self.terms {
            let k = e.first().copied().unwrap_or(0);
            coeffs[k as usize] = c.clone();
        }
        Some(coeffs)
    }

    /// Sign of the univariate `p(x)` for all sufficiently large `|x|` with the
    /// given sign of `x`. Panics on multivariate input.
    pub fn sign_at_infinity(&self, direction: InfinityDirection) -> Sign {
        if self.is_zero() {
            return Sign::Zero;
        }
        assert!(
            self.vars.len() <= 1,
            "sign_at_infinity requires a univariate polynomial"
        );
        if self.is_constant() {
            return Sign::of(&self.constant_value().unwrap());
        }
        let v = self.vars[0].clone();
        let d = self.degree(&v).finite().unwrap();
        let lead = self.coeff_of(&v, d).constant_value().unwrap();
        let s = Sign::of(&lead);
        match direction {
            InfinityDirection::Plus => s,
            InfinityDirection::Minus => {
                if d % 2 == 0 {
                    s
                } else {
                    s.flip()
                }
            }
        }
    }

    /// Pseudoremainder in `v` under the defining identity
    /// `lc(b)^(d−e+1) · a = q·b + r`, with `deg_v r < deg_v b`.
    ///
    /// Coefficients stay polynomial: no division is performed.
    pub fn pseudorem(a: &Polynomial, b: &Polynomial, v: &str) -> Result<Polynomial> {
        Polynomial::pseudorem_pow(a, b, v, false)
    }

    /// Pseudoremainder scaled so the multiplier on `a` is an even power of
    /// `lc(b)`: `lc(b)^(2⌈(d−e+1)/2⌉) · a = q·b + r`. Wherever `lc(b) ≠ 0`,
    /// the sign of `r` at a common root of `b` equals the sign of `a` there.
    pub fn signed_pseudorem(a: &Polynomial, b: &Polynomial, v: &str) -> Result<Polynomial> {
        Polynomial::pseudorem_pow(a, b, v, true)
    }

    fn pseudorem_pow(a: &Polynomial, b: &Polynomial, v: &str, even: bool) -> Result<Polynomial> {
        let d = match a.degree(v) {
            Degree::NegInfinity => return Err(Error::Input("pseudoremainder of zero dividend".into())),
            Degree::Finite(d) => d,
        };
        let e = match b.degree(v) {
            Degree::NegInfinity => return Err(Error::Input("pseudoremainder by zero polynomial".into())),
            Degree::Finite(e) => e,
        };
        if d < e {
            return Err(Error::Input(format!(
                "pseudoremainder requires deg_{v}(a) >= deg_{v}(b), got {d} < {e}"
            )));
        }
        let lc_b = b.leading_coeff(v);
        let exponent = d - e + 1;
        let target = if even && exponent % 2 == 1 {
            exponent + 1
        } else {
            exponent
        };
        let mut r = a.clone();
        let mut scaled = 0u32;
        // Each round multiplies the running remainder by lc(b) once and kills
        // its leading v-term, so the v-degree strictly decreases.
        while let Degree::Finite(dr) = r.degree(v) {
            if dr < e {
                break;
            }
            let lc_r = r.leading_coeff(v);
            let shift = Polynomial::var(v).pow_checked(dr - e, usize::MAX)?;
            let t = lc_r.mul(&shift).mul(b);
            r = r.mul(&lc_b).sub(&t);
            scaled += 1;
        }
        for _ in scaled..target {
            r = r.mul(&lc_b);
        }
        Ok(r)
    }

    /// Splits the polynomial as `c · q` with `c` a positive rational and `q`
    /// primitive: integer coefficients with no common factor and a positive
    /// lex-leading coefficient. Returns `(q, negated)` where `negated` records
    /// whether the sign was flipped, i.e. the input equals `±c·q`.
    pub fn sign_normal_form(&self) -> (Polynomial, bool) {
        if self.is_zero() {
            return (Polynomial::zero(), false);
        }
        let mut den_lcm = Int::one();
        for c in self.terms.values() {
            den_lcm = num::integer::lcm(den_lcm, c.denom().clone());
        }
        let mut num_gcd = Int::zero();
        for c in self.terms.values() {
            let scaled = c.numer() * (&den_lcm / c.denom());
            num_gcd = num::integer::gcd(num_gcd, scaled);
        }
        // Lex-leading monomial = last key in the BTreeMap (lex-largest exponent).
        let lead = self.terms.iter().next_back().unwrap().1;
        let negated = lead.is_negative();
        let factor = Rat::new(
            if negated { -den_lcm } else { den_lcm },
            num_gcd,
        );
        (self.scale(&factor), negated)
    }

    /// Scales by the unique positive rational making the coefficients
    /// coprime integers. Signs are preserved everywhere, so the result is
    /// interchangeable with the original in any sign test.
    pub fn positive_primitive(&self) -> Polynomial {
        if self.is_zero() {
            return Polynomial::zero();
        }
        let mut den_lcm = Int::one();
        for c in self.terms.values() {
            den_lcm = num::integer::lcm(den_lcm, c.denom().clone());
        }
        let mut num_gcd = Int::zero();
        for c in self.terms.values() {
            let scaled = c.numer() * (&den_lcm / c.denom());
            num_gcd = num::integer::gcd(num_gcd, scaled);
        }
        self.scale(&Rat::new(den_lcm, num_gcd))
    }

    /// Integer-coefficient scaled copy: the polynomial multiplied by the
    /// positive lcm of its coefficient denominators.
    pub fn cleared_denominators(&self) -> Polynomial {
        let mut den_lcm = Int::one();
        for c in self.terms.values() {
            den_lcm = num::integer::lcm(den_lcm, c.denom().clone());
        }
        self.scale(&Rat::from_integer(den_lcm))
    }

    fn fmt_monomial(&self, exps: &[u32], coeff: &Rat, out: &mut String) {
        let abs = coeff.abs();
        let mut parts: Vec<String> = Vec::new();
        if !abs.is_one() || exps.iter().all(|e| *e == 0) {
            parts.push(abs.to_string());
        }
        for (i, e) in exps.iter().enumerate() {
            match *e {
                0 => {}
                1 => parts.push(self.vars[i].clone()),
                k => parts.push(format!("{}^{}", self.vars[i], k)),
            }
        }
        out.push_str(&parts.join("*"));
    }
}

/// Direction argument for [`Polynomial::sign_at_infinity`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InfinityDirection {
    Minus,
    Plus,
}

/// Default cap on monomial counts during expansion: 2^20 (about 10^6).
/// `(1+X_1)···(1+X_20)` just fits; one more factor fails loudly.
pub const DEFAULT_MONOMIAL_BUDGET: usize = 1 << 20;

/// Expands an arithmetic term of a formula into standard form, aborting with
/// a budget error if any intermediate result exceeds `limit` monomials.
pub fn poly_from_term(t: &crate::formula::Term, limit: usize) -> Result<Polynomial> {
    use crate::formula::Term;
    let p = match t {
        Term::Zero => Polynomial::zero(),
        Term::One => Polynomial::one(),
        Term::Var(v) => Polynomial::var(v),
        Term::Add(l, r) => poly_from_term(l, limit)?.add(&poly_from_term(r, limit)?),
        Term::Sub(l, r) => poly_from_term(l, limit)?.sub(&poly_from_term(r, limit)?),
        Term::Mul(l, r) => {
            poly_from_term(l, limit)?.mul_checked(&poly_from_term(r, limit)?, limit)?
        }
    };
    if p.monomial_count() > limit {
        return Err(Error::ExpansionBudget { limit });
    }
    Ok(p)
}

/// Standard form of `l − r` for an atom `l rel r`.
pub fn poly_from_atom(
    l: &crate::formula::Term,
    r: &crate::formula::Term,
    limit: usize,
) -> Result<Polynomial> {
    Ok(poly_from_term(l, limit)?.sub(&poly_from_term(r, limit)?))
}

/// Renders a polynomial with integer coefficients as a formula term:
/// monomials lex-descending, coefficients as binary-expansion constants,
/// powers as repeated products. Rational coefficients are first cleared by a
/// positive integer scaling (which preserves every `rel 0` atom).
pub fn poly_to_term(p: &Polynomial) -> crate::formula::Term {
    use crate::formula::Term;
    let p = p.cleared_denominators();
    if p.is_zero() {
        return Term::Zero;
    }
    let monomial_term = |exps: &[u32], coeff: &Rat| -> Term {
        let k = coeff.abs().to_integer();
        let mut factors: Vec<Term> = Vec::new();
        if !k.is_one() || exps.iter().all(|e| *e == 0) {
            let ku = k.to_biguint().expect("nonnegative integer coefficient");
            factors.push(Term::integer(&ku));
        }
        for (i, e) in exps.iter().enumerate() {
            for _ in 0..*e {
                factors.push(Term::var(&p.vars[i]));
            }
        }
        let mut it = factors.into_iter();
        let first = it.next().expect("nonzero monomial");
        it.fold(first, |acc, f| Term::Mul(Box::new(acc), Box::new(f)))
    };
    let mut term: Option<Term> = None;
    for (exps, coeff) in p.terms.iter().rev() {
        let mono = monomial_term(exps, coeff);
        term = Some(match term {
            None => {
                if coeff.is_negative() {
                    Term::Sub(Box::new(Term::Zero), Box::new(mono))
                } else {
                    mono
                }
            }
            Some(acc) => {
                if coeff.is_negative() {
                    Term::Sub(Box::new(acc), Box::new(mono))
                } else {
                    Term::Add(Box::new(acc), Box::new(mono))
                }
            }
        });
    }
    term.unwrap()
}

impl fmt::Display for Polynomial {
    /// Canonical text: monomials lex-descending, `^` for powers, e.g.
    /// `3*X^2*Y - 1/2`. This display/serialization form is distinct from the
    /// formula language, which has no power operator.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (i, (exps, coeff)) in self.terms.iter().rev().enumerate() {
            if i == 0 {
                if coeff.is_negative() {
                    out.push('-');
                }
            } else if coeff.is_negative() {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            self.fmt_monomial(exps, coeff, &mut out);
        }
        write!(f, "{}", out)
    }
}
