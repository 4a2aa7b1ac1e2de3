//! Exact computation with automorphic forms for GL(2) over the rational
//! function field F_q(t).
//!
//! The crate computes graphs of Hecke operators at the unramified level, at
//! the level with degree-one ramification in a single place, and (by brute
//! force) at deeper ramification levels, entirely in exact arithmetic:
//! finite-field coefficients, rational functions in the uniformizer t, and
//! rational functions in a generic eigenvalue λ.
//!
//! The main entry points are:
//!
//! * [`algebra`] — F_q, polynomials and rational functions in t, places and
//!   divisors of the projective line.
//! * [`reduction`] — classification of a 2×2 matrix into its double-coset
//!   vertex, with full factor tracking.
//! * [`hecke`] — operator descriptors, neighbor enumeration and graph
//!   construction.
//! * [`eigen`] — eigenspace dimensions by λ-generic elimination and eigenform
//!   propagation from nucleus values.
//! * [`levels`] — brute-force class enumeration for ramification exponent
//!   r ≥ 2.
//! * [`verify`] — the acceptance checks run by the `verify` CLI subcommand.

pub mod algebra;
pub mod error;
pub mod export;
pub mod grammar;
pub mod hecke;
pub mod lambda;
pub mod eigen;
pub mod levels;
pub mod matrix;
pub mod reduction;
pub mod verify;

pub use error::Error;
