pub mod checks;
pub mod cli;
pub mod elliptic;
pub mod error;
pub mod fourier;
pub mod green;
pub mod io;
pub mod modes;
pub mod oracle;
pub mod solutions;

pub use error::{Error, Result};
