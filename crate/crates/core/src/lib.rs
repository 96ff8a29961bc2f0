//! Linear codes arising from incidences of subspaces in finite projective
//! spaces, with tooling to build them, measure weights, and check the
//! structural results about their small-weight words.

pub mod error;
pub mod field;
pub mod geometry;
pub mod codespace;
pub mod linalg;
pub mod maps;
pub mod constructions;
pub mod analysis;
pub mod io;

pub use error::{Error, Result};
