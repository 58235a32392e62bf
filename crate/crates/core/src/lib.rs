pub mod brackets;
pub mod error;
pub mod exactalg;
pub mod flags;
pub mod interface;
pub mod nilpotent;
pub mod orders;
pub mod probe;
pub mod submanifold;
pub mod verdict;

#[cfg(test)]
pub(crate) mod testframes;

pub use error::{Error, Result};
