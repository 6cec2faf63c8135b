//! Exact noncommutative polynomials over the hermitian game generators.

mod parse;
mod poly;
mod word;

pub use parse::parse_poly;
pub(crate) use parse::parse_poly_at_line;
pub use poly::{int, rat, NCPolynomial};
pub use word::{compare_words, GeneratorId, MonomialOrder, Word};

/// Coefficient field: exact rationals.
pub type Coeff = num_rational::BigRational;
