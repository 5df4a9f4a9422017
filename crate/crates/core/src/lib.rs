//! Exact algorithms for logarithmic-space counting classes.
//!
//! The crate is organised bottom-up:
//!
//! * [`graphs`]: digraphs, layered DAGs, reachability and exact path counting.
//! * [`reductions`]: many-one reductions among NL-complete problems.
//! * [`ndsim`]: an interpreter for nondeterministic choice programs with exact
//!   accepting/rejecting path statistics.
//! * [`isolation`]: isolating-lemma weightings and weight-based path counting.
//! * [`clowdet`]: clow sequences, the `H_A` graph, determinants, characteristic
//!   polynomials and rank.
//! * [`matred`]: matrix problems reducible to the determinant and exact linear
//!   systems.
//! * [`classlab`]: counting-function combinators, modulus transforms and sign
//!   approximation polynomials.
//! * [`cli`]: file formats and command dispatch for the `logcount` binary.

pub mod classlab;
pub mod cli;
pub mod clowdet;
pub mod error;
pub mod graphs;
pub mod isolation;
pub mod matrix;
pub mod matred;
pub mod ndsim;
pub mod reductions;

pub use error::{Error, Result};
