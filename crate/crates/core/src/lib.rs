//! DNA lexicodes over Z4 with GC-content and edit-distance constraints.

pub mod bounds;
pub mod cli;
pub mod codefile;
pub mod error;
pub mod lexicode;
pub mod metrics;
pub mod property;
pub mod tables;
pub mod z4;

pub use error::{Error, Result};
