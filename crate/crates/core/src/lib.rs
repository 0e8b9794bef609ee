pub mod angular;
pub mod app;
pub mod atom;
pub mod config;
pub mod constants;
pub mod dipole;
pub mod engine;
pub mod error;
pub mod green;
pub mod kernel;
pub mod material;
pub mod mirror;
pub mod quadrature;
pub mod special;

pub use error::{Error, Result};
