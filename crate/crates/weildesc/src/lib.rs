//! Differential Weil descent of differential polynomial systems.
//!
//! Given a finite free differential ring extension `B / A` with basis
//! `b_1, ..., b_l`, every system of differential polynomial equations over
//! `B` can be rewritten as an equivalent system over `A` in `l` times as
//! many unknowns: each unknown `x` over `B` splits into coordinate unknowns
//! `x(1), ..., x(l)` along the basis, and the derivations of `B` induce
//! derivations on the coordinates through the matrices
//! `lambda_i(delta_k(b_j))` of the dual basis applied to the derived basis
//! elements. This crate computes that descent exactly.
//!
//! The base field is the fraction field of a multivariate polynomial ring
//! over the rationals, with arbitrary-precision arithmetic throughout:
//! every equality in the library is an exact identity, not a numerical
//! approximation.
//!
//! The layers, bottom up:
//!
//! * [`exact_arith`]: sparse multivariate polynomials and canonical
//!   fractions over an exact scalar, plus the base differential field.
//! * [`extension`]: the finite free extension `B` as a multiplication
//!   table over `A`, with derivations, dual basis functionals and
//!   inversion.
//! * [`diffpoly`]: differential polynomials in variables indexed by a
//!   derivative multi-index, over either `B` or `A`.
//! * [`descent`]: the descent itself, the induced derivation table, the
//!   prolongation identity and the geometric rewriting of the output.
//! * [`points`]: evaluation of systems at points and the bijection between
//!   solutions over `B` and solutions of the descended system over `A`.
//! * [`cli`]: the `weildesc` command line front end.
//!
//! The polynomial and fraction layers are generic over the scalar type via
//! [`scalar::Scalar`]; the aliases below fix the exact rational
//! instantiation that the rest of the crate works with.

// Index loops here mirror tensor sums like `sum c[i][j][k] f_i g_j`;
// iterator chains would obscure the formulas they implement.
#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod descent;
pub mod diffpoly;
pub mod error;
pub mod exact_arith;
pub mod extension;
pub mod points;
pub mod sample;
pub mod scalar;
pub mod selftest;

pub use error::{Error, Result};

/// Arbitrary-precision rational scalar.
pub type Rat = num_rational::BigRational;

/// Polynomial in the base variables with rational coefficients.
pub type BasePoly = exact_arith::MPoly<Rat>;

/// Element of the base field: a canonical fraction of base polynomials.
pub type BaseElem = exact_arith::Frac<Rat>;

/// The base differential field over the rationals.
pub type BaseField = exact_arith::BaseField<Rat>;
