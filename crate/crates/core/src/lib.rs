//! Models for prestressed hair-clip mechanisms (HCMs) and the biped crawler
//! built from them.
//!
//! The crate is `no_std` and only needs `alloc`. Everything here is a pure
//! function of its inputs; file formats, configuration and the command line
//! live in the `hcm` companion crate.
//!
//! - [`mechanics`]: section stiffnesses, the lateral-torsional buckling mode,
//!   critical load, tip angle, energy barrier, snap timescale and the
//!   double-well spine landscape.
//! - [`design`]: `(l, D)` sweeps and budget-constrained optimization.
//! - [`simulation`]: planar two-body crawler with a bi-stable spine and
//!   direction-dependent foot friction.
//! - [`analysis`]: bending-test fits and gait metrics from motion traces.
#![no_std]
// `!(x > 0.0)` is used on purpose: it rejects NaN along with the bad values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod design;
mod error;
pub mod mechanics;
pub mod quadrature;
pub mod roots;
pub mod simulation;
pub mod special;

pub use error::{Error, Result};

/// Standard gravity used everywhere in the toolkit (m/s²).
pub const GRAVITY: f64 = 9.81;
