//! A = F_q[θ], E[θ, t], and the completion E((1/θ)) with precision tracking.

pub mod bipoly;
pub mod laurent;
pub mod monic;
pub mod parse;
pub mod poly;

pub use bipoly::ThetaTPoly;
pub use laurent::{LaurentSeries, SeriesWire, INF_PREC};
pub use monic::{is_irreducible, monic_enumerate, prime_enumerate, MonicRange, DEFAULT_CAP};
pub use parse::{parse_laurent, parse_poly, parse_scalar};
pub use poly::ThetaPoly;

use crate::error::{Error, Result};

/// ⟨a⟩ = θ^{-deg a}·a for monic `a`, an exact 1-unit.
pub fn bracket(a: &ThetaPoly) -> Result<LaurentSeries> {
    if a.is_zero() || !a.is_monic() {
        return Err(Error::NotMonic);
    }
    let coeffs = a.coeffs().iter().rev().copied().collect();
    Ok(LaurentSeries::exact(0, coeffs))
}

/// ⟨a⟩ from a raw monic coefficient vector (lowest first), skipping the
/// canonicalization done by [`ThetaPoly`].
pub(crate) fn bracket_of_coeffs(coeffs: &[crate::scalars::Fe]) -> LaurentSeries {
    LaurentSeries::exact(0, coeffs.iter().rev().copied().collect())
}
