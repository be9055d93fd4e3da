#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![cfg_attr(test, allow(clippy::excessive_precision))]

pub mod config;
pub mod eavesdropper;
pub mod error;
pub mod fading;
pub mod gof;
pub mod interference;
pub mod meijer_g;
pub mod montecarlo;
pub mod quadrature;
pub mod ris_channel;
pub mod sop;
pub mod special;
pub mod stream;
pub mod sweep;

pub use error::{Error, Result};
