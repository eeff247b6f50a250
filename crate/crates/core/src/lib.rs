pub mod cli;
pub mod descent;
pub mod error;
pub mod groebner;
pub mod invariants;
pub mod multipoly;
pub mod numberfield;

pub use error::{Error, Result};
