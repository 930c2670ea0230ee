pub mod bootstrap;
pub mod cli;
pub mod dataset;
pub mod error;
pub mod hugoniot;
pub mod regression;
pub mod stats;
pub mod svg;
pub mod validation;

pub use error::{Error, ErrorClass, Result};
