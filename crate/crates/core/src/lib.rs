pub mod boundary;
pub mod error;
pub mod geodesy;
pub mod graph;
pub mod harness;
pub mod kappa;
pub mod percolation;
pub mod recurrence;

pub use error::{Error, Result};
