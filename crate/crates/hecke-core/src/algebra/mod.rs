//! Exact arithmetic over F_q and over the rational function field F_q(t).

mod divisor;
mod field;
mod poly;
mod ratfunc;

pub use divisor::{divisor_of, factor_monic, is_irreducible, uniformizer_for, Divisor, Place};
pub use field::{make_field, FieldSpec, Fq, ProjPoint};
pub use poly::Poly;
pub use ratfunc::RatFunc;
