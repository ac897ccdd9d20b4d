//! Numerical study of colored Jones polynomials `J_N(K; exp(c/N))` for the
//! figure-eight knot, torus knots, their mirrors and connected sums.
//!
//! The library evaluates the invariant exactly by finite sums, re-derives it
//! through a contour-integral route, expands it asymptotically in `N` at
//! rational parameters, and classifies the large-`N` behavior over the
//! `c`-plane (convergence to the inverse Alexander polynomial, polynomial
//! growth `N^{1/2}`, `N^{2/3}` or `N^{3/2}`, exponential growth, or bounded
//! oscillation).
//!
//! Module map:
//! - [`knot`]: knot algebra, Alexander polynomial, logarithmic zero sets.
//! - [`parse`]: the small knot-expression grammar and canonical printer.
//! - [`jones`]: exact evaluation (cyclotomic sum, torus closed sum, contour).
//! - [`fig8`]: the figure-eight sandwich bounds and the Laplace-method law.
//! - [`torus`]: Laurent data, asymptotic expansions, regime classifier.
//! - [`quad`]: shared contour/circle quadrature engine.
//! - [`acceptance`]: the verification suite behind `jonesasym verify`.

pub mod acceptance;
pub mod fig8;
pub mod jones;
pub mod knot;
pub mod parse;
pub mod quad;
pub mod special;
pub mod sweep;
pub mod torus;

pub use jones::{jones_eval, EvalPoint, JonesValue, Method};
pub use knot::KnotExpr;
pub use torus::Regime;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid knot: {0}")]
    InvalidKnot(String),
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("numeric domain error: {0}")]
    NumericDomain(String),
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("pole hit at z = {re}+{im}i")]
    PoleHit { re: f64, im: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
