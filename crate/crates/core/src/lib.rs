pub mod error;
pub mod io;
pub mod linalg;
pub mod measures;
pub mod quadrature;
pub mod rsp;
pub mod state;
pub mod teleport;

pub use error::{Error, Result};
