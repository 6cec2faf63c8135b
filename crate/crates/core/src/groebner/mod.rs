//! Truncated noncommutative Gröbner bases and tri-state ideal queries.

mod basis;
mod buchberger;
pub mod closed_form;
mod io;

pub use basis::{ideal_contains, is_trivial, normal_form, GroebnerBasis, ReductionMode, ReductionResult, TriState};
pub use buchberger::{
    default_degree_bound, eliminate_last_output, groebner_truncated, groebner_with, interreduce, GroebnerOptions,
};
pub use io::{read_basis, write_basis};
