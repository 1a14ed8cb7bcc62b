//! Reductions of experiment data: three-point-bending fits and gait metrics.
//!
//! Bending records use the test-machine units (mm, N); everything else is SI
//! except where a name says otherwise.

mod bending;
mod gait;

pub use bending::{barrier_from_curve, fit_stiffness, static_deflection, BendingRecord, StiffnessFit};
pub use gait::{
    air_intervals, angular_velocity, gait_metrics, jump_metrics, GaitMetrics, GaitTrace, JumpMetrics, AIR_THRESHOLD,
};
