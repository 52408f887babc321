//! Exact arithmetic for characteristic-p L-series L(χ_t^β, s) over
//! A = F_q[θ]: degree-wise power sums, certified evaluation, continuation
//! coefficients, special polynomials and trivial zeroes, the normalized
//! Carlitz products π̃Ω(t) and π̃^{q-1}, and v-adic reductions.
//!
//! Values in the completion F_q((1/θ)) are [`rings::LaurentSeries`] with
//! absolute precision; scalars live in a configurable finite field tower
//! ([`scalars::Field`]).

pub mod carlitz;
pub mod charsum;
pub mod error;
pub mod lseries;
pub mod rings;
pub mod scalars;
pub mod special;
pub mod vadic;

pub use error::{Error, Result};
