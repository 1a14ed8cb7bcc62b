//! Buckling and energy model of a single HCM ribbon.
//!
//! A ribbon of half length `l`, width `h` and thickness `t` is pinned with a
//! locking displacement `D`. The lateral-torsional buckling mode is
//!
//! ```text
//! φ(z) = √(l − z) · A1 · J_{1/4}( ½ √(P² / (EI·C)) · (l − z)² )
//! ```
//!
//! with critical load `P = k / l² · √(EI·C)` where `k` is twice the first
//! zero of `J_{1/4}`. The amplitude `A1` is fixed by equating the strain
//! energy of the mode to the locking work `P·D`.

mod buckling;
mod landscape;
mod section;

pub use buckling::{
    amplitude_closure, buckling_constant, critical_load, energy_barrier, mode_shape, snap_timescale, solve, tip_angle,
    BucklingModel, BucklingSolution, StrainEnergy, TABULATED_BUCKLING_CONSTANT,
};
pub use landscape::{build_landscape, EnergyLandscape};
pub use section::{section_properties, Material, RibbonGeometry, SectionConvention, SectionProperties};
