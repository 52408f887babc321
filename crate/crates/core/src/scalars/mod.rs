//! Exact scalars: the field tower F_p ⊆ F_q ⊆ E and p-adic exponents.

pub mod field;
pub mod padic;

pub use field::{Fe, Field, FieldSpec, Level, MAX_FIELD_ORDER};
pub use padic::{lucas_binom, lucas_binom_u64, PadicInt};
