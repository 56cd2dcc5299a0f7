//! Frobenius-trace statistics for elliptic curve families over prime fields.
//!
//! The crate provides the arithmetic backbone (primes, residue symbols,
//! Dirichlet characters), Kronecker class numbers through reduced binary
//! quadratic forms and truncated L-series, per-curve trace computation with
//! naive and baby-step giant-step backends, the singular-series constants
//! governing trace statistics in families, and averaged Sato-Tate interval
//! experiments with deterministic parallel reductions.

pub mod cache;
pub mod calibration;
pub mod checks;
pub mod curves;
pub mod error;
pub mod lconstants;
pub mod numthy;
pub mod parallel;
pub mod progressions;
pub mod quadforms;
pub mod satotate;
pub mod sum;

pub use error::{Error, Result};
pub use parallel::Pool;
