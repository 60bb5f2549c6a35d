// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod axioms;
pub mod carrier;
pub mod cli;
pub mod error;
pub mod instances;
pub mod io;
pub mod metric;
pub mod spatial;
pub mod suitable;
pub mod words;

pub use carrier::{stream_rng, GyroRng, Gyrogroup};
pub use error::{GyroError, Result};
