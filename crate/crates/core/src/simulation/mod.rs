//! Planar two-body model of the dual-HCM biped crawler.
//!
//! The fore and hind bodies are point masses sitting on their feet. They are
//! joined by an axial spine whose length change `s` (0 in extension, `Δ` in
//! flexion) moves in the double-well landscape of the HCM chassis. The feet
//! touch the ground through a unilateral spring-damper and slide with
//! direction-dependent friction; the servo toggles the spine between wells.
//!
//! Horizontal positions are stored as offsets from each body's start so that
//! a mirrored run (fore and hind exchanged, x negated, coefficients swapped)
//! reproduces the original bit for bit with the opposite sign.

mod config;
mod friction;
mod integrator;
mod spine;
mod suite;

pub use config::{Actuation, ContactModel, GaitMode, RobotConfig};
pub use friction::{friction_force, SubstrateFriction};
pub use integrator::{
    run_gait, step, BodyState, EnergyLedger, GaitRun, Sample, ServoState, SimState, Trajectory, Well,
};
pub use spine::{actuate, spine_force, ToggleEvent};
pub use suite::{experiment_suite, run_case, SuiteCase, SuiteRow, SuiteSummary};
