//! Executable combinatorics of the Fibonacci unimodal map.
//!
//! The crate works with the symmetric family `f(x) = a (1 - |2x - 1|^ℓ)`
//! at arbitrary binary precision and provides:
//!
//! * [`combinatorics`]: Fibonacci sums and the combinatorial order of the
//!   critical orbit;
//! * [`numerics`]: evaluation, validated critical orbits and monotone
//!   inverse solving;
//! * [`kneading`]: cutting times (tower recursion and a literal preimage
//!   oracle), closest returns and the Fibonacci parameter search;
//! * [`nest`]: marked points, nice intervals, first entry/return maps,
//!   the principal nest and the verifiers built on them.

pub mod combinatorics;
pub mod error;
pub mod kneading;
pub mod nest;
pub mod numerics;

pub use error::{Error, Result};
