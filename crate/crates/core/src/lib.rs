//! Finitary tools for Ramsey-theoretic largeness on windows of ℕ.
//!
//! Sets live on finite windows ([`sets`]). On top of them sit detectors for
//! syndetic, thick and piecewise-syndetic structure ([`largeness`]), the
//! arithmetic-progression lift `A ↦ {(a, d) : a, a+d, …, a+ld ∈ A}`
//! ([`lift`]), J-set witness search and its transfer to the lift ([`jset`]),
//! decreasing-chain checks ([`towers`]), and a certificate layer plus CLI
//! ([`dsl`], [`cert`], [`cli`]).

pub mod bits;
pub mod cert;
pub mod cli;
pub mod dsl;
pub mod error;
pub mod jset;
pub mod largeness;
pub mod lift;
pub mod par;
pub mod sets;
pub mod towers;

pub use error::{Error, Result};
pub use sets::{evaluate, IntSet, SetExpr, Window};
