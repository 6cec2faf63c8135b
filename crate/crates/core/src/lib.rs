//! Perfect-strategy deciders for synchronous non-local games.

pub mod error;
pub mod exec;
pub mod games;
pub mod graphs;
pub mod groebner;
pub mod linalg;
pub mod ncpoly;
pub mod psatz;
pub mod reduction;
pub mod sdp;
pub mod theta;

pub use error::{Error, Result};
pub use exec::Exec;
