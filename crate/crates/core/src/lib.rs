// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod channels;
pub mod error;
pub mod linalg;
pub mod presets;
pub mod scenarios;
pub mod specfun;
pub mod speeds;
