//! Exact arithmetic: prime fields, dense matrices over them, and
//! arbitrary-precision binomial counts.

mod binom;
mod field;
mod matrix;

pub use binom::{binom, binom_i64, gaussian_binom};
pub use field::{is_prime, PrimeField};
pub use matrix::Matrix;
