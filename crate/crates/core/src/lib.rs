pub mod cli;
pub mod error;
pub mod model;
pub mod nu;
pub mod oracle;
pub mod pekeris;
pub mod specfun;
pub mod spectra;
pub mod validate;
pub mod wavefun;

pub use error::{Error, Result};
