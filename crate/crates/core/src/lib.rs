pub mod check;
pub mod classifier;
pub mod cli;
pub mod error;
pub mod io;
pub mod k3;
pub mod lattice;
pub mod linalg;
pub mod matrix;
pub mod period;
pub mod verify;

pub use error::{Error, Result};
