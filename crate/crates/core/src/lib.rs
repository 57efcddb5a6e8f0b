//! Exact-arithmetic toolkit for the first-order theory of the reals.
//!
//! The crate provides:
//! - [`formula`]: parsing, printing, prenex form, and exact evaluation of
//!   first-order real-arithmetic formulas;
//! - [`poly`]: multivariate polynomials over arbitrary-precision rationals,
//!   with derivatives and division-free pseudoremainders;
//! - [`signtable`]: the univariate sign-table engine (closure under
//!   derivatives and remainders, incremental table construction, decision of
//!   univariate existential sentences, component counting);
//! - [`qe`]: multivariate quantifier elimination by running the univariate
//!   engine symbolically over coefficient polynomials and branching three
//!   ways at every sign test;
//! - [`reduce`]: formula compilers onto a single equation (FEASIBLE), onto
//!   strict inequalities (STRICTINEQ), and from graphs onto
//!   segment-representability sentences;
//! - [`geom`]: exact order types, line-point duality, combinatorial
//!   arrangement descriptions, and cross-ratios.
//!
//! All semantic paths use exact rational arithmetic; no floating point
//! appears anywhere in evaluation or elimination.

pub mod error;
pub mod formula;
pub mod geom;
pub mod par;
pub mod poly;
pub mod qe;
pub mod rat;
pub mod reduce;
pub mod signtable;

pub use error::{Error, Result};
pub use formula::{parse, to_prenex, Assignment, Formula, Quantifier, Rel, Term};
pub use poly::{poly_from_atom, poly_from_term, poly_to_term, Polynomial, RationalFunction};
pub use rat::{Rat, Sign};
