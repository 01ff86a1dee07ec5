pub mod conformal;
pub mod error;
pub mod harness;
pub mod matfun;
pub mod operators;
pub mod quadrature;
pub mod semigroup;
pub mod specfun;
pub mod stability;
pub mod verify;

pub use error::{Error, Result};
