pub mod abelian;
pub mod arith;
pub mod census;
pub mod cm;
pub mod dirichlet;
pub mod error;
pub mod local;
pub mod modforms;
pub mod qz;
pub mod weil_deligne;

pub use error::{Error, Result};
pub use qz::QZ;
