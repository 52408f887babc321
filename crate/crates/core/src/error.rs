use thiserror::Error;

/// Errors surfaced by the arithmetic and L-series layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid field specification: {0}")]
    InvalidSpec(String),
    #[error("modulus for {level} is not irreducible")]
    ReducibleModulus { level: &'static str },
    #[error("field specification mismatch")]
    FieldMismatch,
    #[error("element {index} does not belong to the field (order {order})")]
    NotInField { index: u64, order: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("enumeration of {requested} items exceeds the cap of {cap}; raise the cap explicitly")]
    CapExceeded { requested: u128, cap: u64 },
    #[error("p-adic precision exhausted: digit {needed} requested but only {available} known")]
    PrecisionExhausted { needed: u64, available: u64 },
    #[error("series precision exhausted: O(theta^-{needed}) requested but only O(theta^-{available}) reached")]
    SeriesPrecision { needed: i64, available: i64 },
    #[error("value vanishes to precision O(theta^-{prec})")]
    ZeroToPrecision { prec: i64 },
    #[error("not a 1-unit: {0}")]
    NotOneUnit(String),
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("degree overflow: {0}")]
    DegreeOverflow(String),
    #[error("point lies outside the half-plane of convergence |x| > max(1,|t|)^beta (margin {margin})")]
    Divergent { margin: i64 },
    #[error("shift alpha too small: need -v(alpha) >= delta_t = {delta_t}, got {got}")]
    AlphaTooSmall { delta_t: i64, got: i64 },
    #[error("map {map} has non-positive valuation on basis combination {index}")]
    NonPositiveValuation { map: usize, index: usize },
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("internal inconsistency (arithmetic bug): {0}")]
    Internal(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
