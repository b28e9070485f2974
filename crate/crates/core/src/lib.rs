//! Simulation core for phase-cycled two-dimensional electronic spectroscopy
//! executed as quantum circuits.
//!
//! Everything here is `no_std` with `alloc`; file formats, configuration and
//! the command line live in the `spectroqsim` crate.

#![no_std]
// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]
extern crate alloc;

pub mod error;
pub mod evolve;
pub mod fit;
pub mod ledger;
pub mod model;
pub mod protocol;
pub mod resources;
pub mod spectra;

pub use error::{Error, Result};

pub type C64 = num_complex::Complex<f64>;
pub type CMatrix = nalgebra::DMatrix<C64>;
