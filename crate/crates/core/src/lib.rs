//! Numerical laboratory for nowhere-differentiable and strongly monoHölder
//! functions: construction ([`zoo`]), Faber–Schauder analysis ([`schauder`]),
//! graph box dimension ([`dimension`]), Riemann–Liouville fractional
//! derivatives ([`fractional`]) and exponential-like generator algebras
//! ([`algebra`]).

pub mod algebra;
pub mod dimension;
pub mod error;
pub mod fit;
pub mod fractional;
pub mod schauder;
pub mod zoo;

pub use error::{LabError, Result};
