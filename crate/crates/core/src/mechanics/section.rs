use crate::error::positive;
use crate::{Error, Result};

/// Elastic sheet material.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Material {
    /// Young's modulus (Pa).
    pub youngs_modulus: f64,
    pub poisson_ratio: f64,
    /// Shear modulus (Pa).
    pub shear_modulus: f64,
    /// Density (kg/m³).
    pub density: f64,
}

impl Material {
    /// Isotropic material with `G = E / (2(1 + ν))`.
    pub fn isotropic(youngs_modulus: f64, poisson_ratio: f64, density: f64) -> Result<Self> {
        let m = Self {
            youngs_modulus,
            poisson_ratio,
            shear_modulus: youngs_modulus / (2.0 * (1.0 + poisson_ratio)),
            density,
        };
        m.validate()?;
        Ok(m)
    }

    /// PETG sheet: E = 1730 MPa, ν = 0.40, ρ = 1270 kg/m³.
    pub fn petg() -> Self {
        Self { youngs_modulus: 1730e6, poisson_ratio: 0.40, shear_modulus: 1730e6 / 2.8, density: 1270.0 }
    }

    pub fn validate(&self) -> Result<()> {
        positive("youngs_modulus", self.youngs_modulus)?;
        positive("shear_modulus", self.shear_modulus)?;
        positive("density", self.density)?;
        if !(self.poisson_ratio > 0.0 && self.poisson_ratio < 0.5) {
            return Err(Error::Validation { field: "poisson_ratio", reason: "must lie in (0, 0.5)" });
        }
        Ok(())
    }
}

/// Ribbon dimensions, all in metres.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RibbonGeometry {
    /// Half ribbon length `l`.
    pub half_length: f64,
    /// Locking displacement `D`.
    pub locking_displacement: f64,
    /// Ribbon width `h`.
    pub width: f64,
    /// Sheet thickness `t`.
    pub thickness: f64,
}

impl RibbonGeometry {
    /// The dual-HCM chassis: l = 129.1 mm, D = 16 mm, h = 15 mm, t = 0.381 mm.
    pub fn reference() -> Self {
        Self { half_length: 0.1291, locking_displacement: 0.016, width: 0.015, thickness: 0.000381 }
    }

    pub fn with_design(self, half_length: f64, locking_displacement: f64) -> Self {
        Self { half_length, locking_displacement, ..self }
    }

    /// Thin-ribbon regime: every dimension positive and `t < h < 2l`.
    pub fn validate(&self) -> Result<()> {
        positive("half_length", self.half_length)?;
        positive("locking_displacement", self.locking_displacement)?;
        positive("width", self.width)?;
        positive("thickness", self.thickness)?;
        if self.thickness >= self.width {
            return Err(Error::Validation { field: "thickness", reason: "must be smaller than the width" });
        }
        if self.width >= 2.0 * self.half_length {
            return Err(Error::Validation { field: "width", reason: "must be smaller than the ribbon length 2l" });
        }
        Ok(())
    }
}

/// Which section moment enters the buckling model as `EI_η`.
///
/// The two conventions differ only in which dimension is cubed; the torsional
/// rigidity `C = G·h·t³/3` is shared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SectionConvention {
    /// `EI_η = E·h³·t/12`.
    #[default]
    WidthCubed,
    /// `EI_η = E·h·t³/12`, the textbook weak-axis moment.
    WeakAxis,
}

impl SectionConvention {
    pub fn name(self) -> &'static str {
        match self {
            SectionConvention::WidthCubed => "width-cubed",
            SectionConvention::WeakAxis => "weak-axis",
        }
    }
}

/// Derived stiffnesses of one ribbon cross-section.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectionProperties {
    /// `EI_η` (N·m²).
    pub bending_stiffness: f64,
    /// `C` (N·m²).
    pub torsional_rigidity: f64,
    pub convention: SectionConvention,
}

pub fn section_properties(
    material: &Material,
    geometry: &RibbonGeometry,
    convention: SectionConvention,
) -> Result<SectionProperties> {
    material.validate()?;
    geometry.validate()?;
    let (h, t) = (geometry.width, geometry.thickness);
    let bending_stiffness = match convention {
        SectionConvention::WidthCubed => material.youngs_modulus * h * h * h * t / 12.0,
        SectionConvention::WeakAxis => material.youngs_modulus * h * t * t * t / 12.0,
    };
    let torsional_rigidity = material.shear_modulus * h * t * t * t / 3.0;
    Ok(SectionProperties { bending_stiffness, torsional_rigidity, convention })
}
