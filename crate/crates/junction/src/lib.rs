//! Symbol analysis for 2×2 Wiener–Hopf operators arising from Helmholtz
//! boundary-transmission problems on a half-line junction.
//!
//! The pipeline builds the boundary symbols, composes and lifts them to L²,
//! evaluates the limits at infinity exactly, applies the Fredholm criterion,
//! decomposes the jump matrix and prescribes an image normalization when the
//! operator fails to be normally solvable.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotic;
pub mod branch;
pub mod closed_form;
pub mod fredholm;
pub mod linalg;
pub mod pipeline;
pub mod planner;
pub mod spec;
pub mod symbol;
pub mod theorems;
pub mod witness;
