//! Exact twist-deformation calculus over truncated rational power series.
//!
//! The crate models a concrete polynomial world — a coordinate algebra A on
//! R^n, free modules of vector fields and exterior forms, and the enveloping
//! algebra U(g)[[h]] of a Lie algebra of polynomial vector fields acting on
//! everything by Lie derivatives — and deforms the whole picture by Drinfeld
//! twists. Every structural identity (Hopf axioms, cocycle conditions, star
//! associativity, braiding coherence, Leibniz rules, curvature identities)
//! is decidable exactly because the ground ring is Q[[h]]/(h^{N+1}).
//!
//! The `suites` module turns those identities into named, seeded, runnable
//! checks; the `twistar` binary drives them from scenario files.

pub mod connection;
pub mod context;
pub mod geometry;
pub mod linmap;
pub mod hopf;
pub mod lie;
pub mod module;
pub mod par;
pub mod poly;
pub mod series;
pub mod twist;

pub use context::Context;
pub use lie::LieAlgebra;
// re-exports added as modules land

pub use series::{KSeries, Rat};

use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum Error {
    #[error("non-invertible: {0}")]
    NonInvertible(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("unsupported twist: {0}")]
    UnsupportedTwist(String),
    #[error("structural mismatch: {0}")]
    Structural(String),
    #[error("linearity check failed: {0}")]
    Linearity(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
