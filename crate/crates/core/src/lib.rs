//! Exact computer-algebra pipeline for the Löwner-series identity and the
//! nonnegativity of the `(1 - z(2c + (1-c)(w + 1/w)) + z^2)^{-1/2}` coefficients.
//!
//! The crate is layered bottom-up:
//!
//! * [`poly`], [`ratfn`], [`linalg`]: exact multivariate polynomials over
//!   big rationals, rational functions and fraction-free linear solving.
//! * [`series`]: truncated power/Laurent series with explicit truncation state.
//! * [`fact1`]: symbolic verification of the Löwner-chain identity.
//! * [`tables`]: coefficient tables of the two kernels.
//! * [`wz`]: the telescoping certificate and the order-3 recurrence it implies.
//! * [`squares`]: square-structure certificates for the table entries.
//! * [`holonomic`]: unrolling, guessing, symmetric squares and operator comparison.
//! * [`pipeline`]: end-to-end orchestration and the proof report.

pub mod error;
pub mod fact1;
pub mod holonomic;
pub mod linalg;
pub mod pipeline;
pub mod poly;
pub mod ratfn;
pub mod series;
pub mod squares;
pub mod tables;
pub mod wz;

pub use error::{Error, Result};
pub use poly::{Poly, Rational, Vars};
pub use ratfn::RatFn;
