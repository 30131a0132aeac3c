//! Truncated formal series with explicit truncation state.

mod laurent2;
mod univariate;

pub use laurent2::{InvSqrtMethod, LaurentSeries2};
pub use univariate::Series1;
