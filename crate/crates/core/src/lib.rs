pub mod error;
pub mod geometry;
pub mod heat;
pub mod bergman;
pub mod charclass;
pub mod flag;

pub use error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
