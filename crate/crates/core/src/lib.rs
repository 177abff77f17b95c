pub mod blowup;
pub mod classify;
pub mod cli;
pub mod diophantine;
pub mod error;
pub mod lattice;
pub mod linalg;
pub mod mutation;

pub use error::{Error, Result};
