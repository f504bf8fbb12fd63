pub mod commands;
pub mod data;
pub mod error;
pub mod eval;
pub mod fixtures;
pub mod plot;
pub mod sax;
pub mod selection;
pub mod spf;
pub mod synthetic;
pub mod validity;
pub mod vectorize;

pub use error::{Error, Result};
