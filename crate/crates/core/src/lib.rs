#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod deterministic;
pub mod error;
pub mod mc;
pub mod rng;
pub mod sim;

pub use bounds::*;
pub use error::{Error, Result};
pub use rng::RngStream;
