pub mod algebra;
pub mod catalog;
pub mod classifier;
pub mod cli;
pub mod construct;
pub mod error;
pub mod poly;
pub mod enumeration;
pub mod relclosure;

pub use error::{Error, Result};
