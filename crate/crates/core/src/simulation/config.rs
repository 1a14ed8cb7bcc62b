use crate::error::positive;
use crate::mechanics::EnergyLandscape;
use crate::{Error, Result};

use super::friction::SubstrateFriction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum GaitMode {
    /// Both HCMs snap together.
    #[default]
    SymmetricGallop,
    /// Only the rear HCM is driven; the fore HCM stays locked.
    RearOnly,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Actuation {
    /// Servo square-wave frequency (Hz).
    pub frequency: f64,
    pub mode: GaitMode,
}

/// Ground contact law: `N = max(0, −k·y − c·ẏ)` while `y < 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContactModel {
    /// Ground stiffness (N/m).
    pub stiffness: f64,
    pub damping_ratio: f64,
}

impl Default for ContactModel {
    fn default() -> Self {
        Self { stiffness: 1e4, damping_ratio: 1.0 }
    }
}

/// Everything needed to simulate one crawler run.
#[derive(Debug, Clone, PartialEq)]
pub struct RobotConfig {
    /// kg
    pub total_mass: f64,
    /// Share of the mass carried by the fore body, in (0, 1).
    pub fore_fraction: f64,
    /// Extended body length `L` (m).
    pub body_length: f64,
    /// Flexed body length `L_f` (m).
    pub flexion_length: f64,
    pub fore_landscape: EnergyLandscape,
    pub rear_landscape: EnergyLandscape,
    /// Axial spine damping (N·s/m).
    pub spine_damping: f64,
    /// Snap timescale `t*` (s); bounds the servo drive and the step size.
    pub snap_time: f64,
    pub substrate: SubstrateFriction,
    pub actuation: Actuation,
    /// Largest energy the servo can deliver per stroke (J).
    pub servo_energy_limit: Option<f64>,
    pub contact: ContactModel,
    /// Friction regularization velocity (m/s).
    pub stiction_velocity: f64,
    /// Upward ground reaction per unit body mass and unit flexion rate (1/s),
    /// applied to grounded lifted bodies while the spine flexes.
    pub lift_gain: f64,
    /// Downward push per unit body mass and unit extension rate (1/s),
    /// applied to the lifted bodies while the spine extends.
    pub press_gain: f64,
}

/// Servo force as a multiple of the landscape's peak slope.
pub(crate) const SERVO_FORCE_FACTOR: f64 = 2.0;
/// The servo lets go once the spine has travelled this fraction of the
/// stroke toward its target well.
pub(crate) const SERVO_RELEASE_FRACTION: f64 = 0.6;

impl RobotConfig {
    /// The untethered robot: 72 g, L = 200.6 mm, L_f = 176.5 mm, the measured
    /// 43.4 mJ chassis barrier split evenly over the two HCMs, 2 Hz gallop on
    /// wood.
    pub fn untethered() -> Self {
        let stroke = 0.2006 - 0.1765;
        let hcm = EnergyLandscape { barrier: 0.0217, stroke };
        Self {
            total_mass: 0.072,
            fore_fraction: 0.5,
            body_length: 0.2006,
            flexion_length: 0.1765,
            fore_landscape: hcm,
            rear_landscape: hcm,
            spine_damping: 6.0,
            snap_time: 0.15,
            substrate: SubstrateFriction::wood(),
            actuation: Actuation { frequency: 2.0, mode: GaitMode::SymmetricGallop },
            servo_energy_limit: None,
            contact: ContactModel::default(),
            stiction_velocity: 1e-3,
            lift_gain: 1000.0,
            press_gain: 60.0,
        }
    }

    /// The 41 g tethered variant with the battery and controller removed.
    pub fn tethered() -> Self {
        Self { total_mass: 0.041, ..Self::untethered() }
    }

    pub fn stroke(&self) -> f64 {
        self.body_length - self.flexion_length
    }

    pub fn fore_mass(&self) -> f64 {
        self.total_mass * self.fore_fraction
    }

    pub fn hind_mass(&self) -> f64 {
        self.total_mass - self.fore_mass()
    }

    pub fn validate(&self) -> Result<()> {
        positive("total_mass", self.total_mass)?;
        if !(self.fore_fraction > 0.0 && self.fore_fraction < 1.0) {
            return Err(Error::Validation { field: "fore_fraction", reason: "must lie in (0, 1)" });
        }
        positive("body_length", self.body_length)?;
        positive("flexion_length", self.flexion_length)?;
        if self.flexion_length >= self.body_length {
            return Err(Error::Validation { field: "flexion_length", reason: "must be shorter than the body length" });
        }
        for (field, l) in [("fore_landscape", &self.fore_landscape), ("rear_landscape", &self.rear_landscape)] {
            if !(l.barrier > 0.0 && l.stroke > 0.0) {
                return Err(Error::Validation { field, reason: "barrier and stroke must be positive" });
            }
        }
        let stroke = self.stroke();
        let tol = 1e-9 * stroke;
        match self.actuation.mode {
            GaitMode::SymmetricGallop => {
                if libm::fabs(self.fore_landscape.stroke - stroke) > tol
                    || libm::fabs(self.rear_landscape.stroke - stroke) > tol
                {
                    return Err(Error::Validation {
                        field: "landscape.stroke",
                        reason: "must equal L - L_f in the symmetric gallop",
                    });
                }
            }
            GaitMode::RearOnly => {
                if self.rear_landscape.stroke > stroke + tol {
                    return Err(Error::Validation { field: "rear_landscape.stroke", reason: "cannot exceed L - L_f" });
                }
            }
        }
        if !(self.spine_damping >= 0.0 && self.spine_damping.is_finite()) {
            return Err(Error::Validation { field: "spine_damping", reason: "must be non-negative" });
        }
        positive("snap_time", self.snap_time)?;
        self.substrate.validate()?;
        positive("frequency", self.actuation.frequency)?;
        if let Some(limit) = self.servo_energy_limit {
            positive("servo_energy_limit", limit)?;
        }
        positive("contact.stiffness", self.contact.stiffness)?;
        if !(self.contact.damping_ratio >= 0.0) {
            return Err(Error::Validation { field: "contact.damping_ratio", reason: "must be non-negative" });
        }
        positive("stiction_velocity", self.stiction_velocity)?;
        if !(self.lift_gain >= 0.0 && self.lift_gain.is_finite()) {
            return Err(Error::Validation { field: "lift_gain", reason: "must be non-negative" });
        }
        if !(self.press_gain >= 0.0 && self.press_gain.is_finite()) {
            return Err(Error::Validation { field: "press_gain", reason: "must be non-negative" });
        }
        Ok(())
    }

    /// Barrier of the landscape the servo has to overcome.
    pub fn active_barrier(&self) -> f64 {
        match self.actuation.mode {
            GaitMode::SymmetricGallop => self.fore_landscape.barrier + self.rear_landscape.barrier,
            GaitMode::RearOnly => self.rear_landscape.barrier,
        }
    }

    pub fn active_stroke(&self) -> f64 {
        match self.actuation.mode {
            GaitMode::SymmetricGallop => self.stroke(),
            GaitMode::RearOnly => self.rear_landscape.stroke,
        }
    }

    /// Constant servo force (N) along the spine coordinate.
    pub fn servo_force(&self) -> f64 {
        let spine = EnergyLandscape { barrier: self.active_barrier(), stroke: self.active_stroke() };
        let nominal = SERVO_FORCE_FACTOR * spine.peak_slope();
        let reach = SERVO_RELEASE_FRACTION * spine.stroke;
        match self.servo_energy_limit {
            Some(limit) => nominal.min(limit / reach),
            None => nominal,
        }
    }

    pub fn period(&self) -> f64 {
        1.0 / self.actuation.frequency
    }
}
