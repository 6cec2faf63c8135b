//! Exact rational linear algebra used around the floating-point solver:
//! sparse echelon forms, LDLᵀ positivity checks, affine projection and
//! rounding.

mod echelon;
mod ldlt;
mod round;

pub use echelon::{Echelon, Reduction};
pub use ldlt::{ldlt_psd, PsdCheck};
pub use round::{project_affine, rationalize, round_to_grid};

/// Dense exact matrix, row-major.
pub type RatMatrix = Vec<Vec<crate::ncpoly::Coeff>>;
