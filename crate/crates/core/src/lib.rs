#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod compactify;
pub mod dd;
pub mod error;
pub mod escobar;
pub mod geometry;
pub mod ode;
pub mod quad;
pub mod scattering;
pub mod series;
pub mod specfun;
pub mod verify;
pub mod yamabe;

pub use error::{Error, Result};
