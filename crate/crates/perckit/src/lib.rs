//! Connection probabilities of two-dimensional critical percolation:
//! exact formulas and three independent numerical verification routes.
//!
//! The library computes the exact crossing / connection densities of
//! critical site percolation in the upper half-plane — Cardy's crossing
//! probability, the three-point boundary density, the four- and five-point
//! bulk densities, the pairwise densities P₂/P₃/P₄ and the factorization
//! identity P₄² = K_F·P₃·P₃·P₂ — and checks them by:
//!
//! * finite-difference residuals of the differential identities the
//!   densities satisfy, plus a discretized spectral problem whose leading
//!   eigenvalue −5/144 controls the bulk decay rate ([`pde`]);
//! * chordal Loewner / SLE Monte Carlo: martingale observables and
//!   hitting probabilities ([`loewner`]);
//! * triangular-lattice percolation Monte Carlo: crossings, one-arm
//!   exponents 1/3 and 5/48, and the factorization ratio ([`lattice`]).
//!
//! Entry points: [`formulas`] for the closed forms, [`cli`] for the
//! `perckit` binary, and the crate examples for one runnable program per
//! capability.

// Negated comparisons (`!(x > 0.0)`) are NaN-rejecting domain guards.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod conformal;
pub mod error;
pub mod formulas;
pub mod lattice;
pub mod loewner;
pub mod numerics;
pub mod pde;
pub mod report;
pub mod rng;

pub use error::{Error, Result};
