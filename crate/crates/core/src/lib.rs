//! Explicit bad-prime sets for irreducibility of mod-p Galois representations
//! of elliptic curves over totally real Galois number fields.

pub mod arith;
pub mod config;
pub mod curve;
pub mod error;
pub mod finite_field;
mod interval;
pub mod irreducibility;
pub mod number_field;
pub mod pipeline;
pub mod report;
pub mod signature;
pub mod sweep;
pub mod units;

pub use error::{Error, Result};
