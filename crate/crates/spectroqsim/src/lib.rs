//! Configuration, ledger files, parallel sweeps and reports on top of
//! `spectroqsim-core`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod config;
pub mod error;
pub mod ledger_io;
pub mod output;
pub mod runner;
pub mod validate;

pub use error::{Error, Result};
