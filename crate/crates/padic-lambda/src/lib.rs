//! Exact p-adic arithmetic, the dynamical systems attached to lambda-models
//! on Cayley trees, subshift/weak-repeller analysis, and exact finite-volume
//! generalized p-adic quasi Gibbs measures.
//!
//! The crate is organized around five layers:
//!
//! - [`padic`] — elements of Q_p at fixed relative precision, norms,
//!   canonical digit expansions, the p-adic exponential, region predicates.
//! - [`residue`] — k-th roots of -1 mod p, Hensel lifting, and a windowed
//!   root finder for polynomials over Q_p.
//! - [`dynamics`] — rational maps on Q_p as first-class objects: evaluation,
//!   exact derivatives, fixed points with multiplier classification, orbits
//!   and periodic points.
//! - [`subshift`] — weak-repeller data for a map and a ball cover: scaling
//!   exponents, incidence matrix, itineraries, the dynamical metric, and the
//!   shift-conjugacy witness.
//! - [`gibbs`] — the Cayley tree, lambda-model Hamiltonians, exact
//!   finite-volume measures, the compatibility recurrence, boundedness
//!   classification, and phase-transition verdicts.
//!
//! Every quantity is exact: valuations are never approximated, and any
//! operation that cannot determine a valuation at the carried precision
//! reports an error instead of guessing.
//!
//! See the `examples/` directory for one runnable example per capability,
//! and the `padic-lambda` binary for the batch CLI.

pub mod dynamics;
pub mod error;
pub mod gibbs;
pub mod padic;
pub mod poly;
pub mod residue;
pub mod subshift;
pub mod tree;

pub use error::{Error, Result};
pub use padic::{Norm, PAdic, PAdicBall, DEFAULT_PRECISION};
pub use poly::QpPoly;
