// negated comparisons reject NaN along with out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bandlimit;
pub mod error;
pub mod harness;
pub mod io;
pub mod predictor;
pub mod seq;
pub mod serde_ext;
pub mod transforms;

pub use error::{Error, Result};
