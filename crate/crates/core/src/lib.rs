//! Deterministic contextual models that reproduce quantum probabilities.
//!
//! Every measurement outcome in this crate is a *function* of the state and
//! a contextual variable. Probabilities only appear once the contextual
//! variable is weighted:
//!
//! - [`dichotomic::sphere`]: the qubit model where the contextual variable is
//!   a uniform coordinate on the diagonal joining the two outcome points of
//!   the Bloch sphere.
//! - [`dichotomic::dyadic`]: the discrete model where the contextual variable
//!   is a positive integer `λ` with weight `2^-λ`, in a greedy-threshold form
//!   and an interval-parity form.
//! - [`history`]: homogeneous histories encoded as pure-tensor projectors,
//!   with negation, disjoint disjunction, the pseudo-projector, history
//!   probabilities and deterministic history outcomes.
//! - [`sampler`] and [`verify`]: seeded Monte Carlo runs and exact
//!   `λ`-enumeration checks.
//!
//! The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod dichotomic;
mod error;
pub mod hilbert;
pub mod history;
pub mod sampler;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64;
