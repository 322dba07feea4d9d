pub mod cli;
pub mod config;
pub mod error;
pub mod grid;
pub mod growth;
pub mod intrinsic;
pub mod norms;
pub mod simplex;
pub mod verify;

pub use error::{Error, Result};
