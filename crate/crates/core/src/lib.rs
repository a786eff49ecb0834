// `!(x > 0.0)` is used on purpose so that NaN fails domain checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dense;
pub mod error;
pub mod estimators;
pub mod kernels;
pub mod oracle;
pub mod quad;
pub mod special;
pub mod sum;
pub mod verify;

pub use error::{Error, Result};
