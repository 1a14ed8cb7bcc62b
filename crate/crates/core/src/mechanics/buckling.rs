use crate::error::positive;
use crate::quadrature::{integrate, Tolerance};
use crate::special::{bessel_j, first_zero_j_quarter};
use crate::{Error, Result};

use super::section::{section_properties, Material, RibbonGeometry, SectionConvention, SectionProperties};

/// Four-digit tabulated value of the critical-load constant.
pub const TABULATED_BUCKLING_CONSTANT: f64 = 5.5618;

/// `2 · j₁`, where `j₁` is the first positive zero of `J_{1/4}`.
pub fn buckling_constant() -> Result<f64> {
    Ok(2.0 * first_zero_j_quarter()?)
}

/// Evaluation context for the buckling model: the computed critical-load
/// constant and the quadrature tolerance used for `A1` and `ψ_l`.
#[derive(Debug, Clone, Copy)]
pub struct BucklingModel {
    constant: f64,
    tolerance: Tolerance,
}

impl BucklingModel {
    /// Computes the constant once and checks it against
    /// [`TABULATED_BUCKLING_CONSTANT`] (1e-3 relative).
    pub fn new() -> Result<Self> {
        let constant = buckling_constant()?;
        if libm::fabs(constant - TABULATED_BUCKLING_CONSTANT) > 1e-3 * TABULATED_BUCKLING_CONSTANT {
            return Err(Error::Domain { what: "critical-load constant", value: constant });
        }
        Ok(Self { constant, tolerance: Tolerance::default() })
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }

    /// `P_cr = k / l² · √(EI_η · C)`.
    pub fn critical_load(&self, section: &SectionProperties, geometry: &RibbonGeometry) -> Result<f64> {
        geometry.validate()?;
        positive("bending_stiffness", section.bending_stiffness)?;
        positive("torsional_rigidity", section.torsional_rigidity)?;
        let l = geometry.half_length;
        Ok(self.constant / (l * l) * libm::sqrt(section.bending_stiffness * section.torsional_rigidity))
    }

    /// Strain energy of the unit-amplitude mode (`A1 = 1`).
    pub fn unit_strain_energy(&self, section: &SectionProperties, geometry: &RibbonGeometry) -> Result<StrainEnergy> {
        let p = self.critical_load(section, geometry)?;
        let mode = Mode::new(p, 1.0, section, geometry);
        let l = geometry.half_length;
        let ei = section.bending_stiffness;
        let c = section.torsional_rigidity;
        // lateral curvature of the buckled ribbon: κ = (P/EI)(l − z) φ
        let bending = 0.5
            * integrate(
                |z| {
                    let kappa = p / ei * (l - z) * mode.angle(z);
                    ei * kappa * kappa
                },
                0.0,
                l,
                self.tolerance,
            )?;
        let torsion = 0.5
            * integrate(
                |z| {
                    let twist = mode.slope(z);
                    c * twist * twist
                },
                0.0,
                l,
                self.tolerance,
            )?;
        Ok(StrainEnergy { bending, torsion })
    }

    /// Amplitude `A1` such that the strain energy of the mode equals the
    /// locking work `P_cr · D`.
    pub fn amplitude(&self, section: &SectionProperties, geometry: &RibbonGeometry) -> Result<f64> {
        let p = self.critical_load(section, geometry)?;
        let unit = self.unit_strain_energy(section, geometry)?.total();
        if !(unit > 0.0) {
            return Err(Error::Quadrature { estimate: unit, error: f64::NAN });
        }
        Ok(libm::sqrt(p * geometry.locking_displacement / unit))
    }

    /// `ψ_l = (P_cr / EI_η) ∫₀ˡ φ(z) (l − z) dz`.
    pub fn tip_angle(&self, solution: &BucklingSolution) -> Result<f64> {
        let mode = solution.mode();
        let l = solution.geometry.half_length;
        let integral = integrate(|z| mode.angle(z) * (l - z), 0.0, l, self.tolerance)?;
        Ok(solution.critical_load / solution.section.bending_stiffness * integral)
    }

    pub fn solve(
        &self,
        material: &Material,
        geometry: &RibbonGeometry,
        convention: SectionConvention,
    ) -> Result<BucklingSolution> {
        let section = section_properties(material, geometry, convention)?;
        let critical_load = self.critical_load(&section, geometry)?;
        let amplitude = self.amplitude(&section, geometry)?;
        let mut solution = BucklingSolution { critical_load, amplitude, tip_angle: 0.0, geometry: *geometry, section };
        solution.tip_angle = self.tip_angle(&solution)?;
        Ok(solution)
    }
}

/// Bending and torsion parts of the strain energy of a buckled mode (J).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrainEnergy {
    pub bending: f64,
    pub torsion: f64,
}

impl StrainEnergy {
    pub fn total(&self) -> f64 {
        self.bending + self.torsion
    }
}

/// A solved HCM ribbon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BucklingSolution {
    /// `P_cr` (N).
    pub critical_load: f64,
    /// `A1` (rad·m^-1/2).
    pub amplitude: f64,
    /// `ψ_l` (rad).
    pub tip_angle: f64,
    pub geometry: RibbonGeometry,
    pub section: SectionProperties,
}

impl BucklingSolution {
    /// The same solution with a different amplitude; the tip angle is left
    /// untouched.
    pub fn with_amplitude(self, amplitude: f64) -> Self {
        Self { amplitude, ..self }
    }

    fn mode(&self) -> Mode {
        Mode::new(self.critical_load, self.amplitude, &self.section, &self.geometry)
    }

    /// `φ(z)` on `[0, l)`.
    pub fn mode_shape(&self, z: f64) -> Result<f64> {
        let l = self.geometry.half_length;
        if !(z >= 0.0 && z < l) {
            return Err(Error::Domain { what: "mode-shape position", value: z });
        }
        Ok(self.mode().angle(z))
    }

    /// `dφ/dz` on `[0, l]`.
    pub fn mode_slope(&self, z: f64) -> Result<f64> {
        let l = self.geometry.half_length;
        if !(z >= 0.0 && z <= l) {
            return Err(Error::Domain { what: "mode-slope position", value: z });
        }
        Ok(self.mode().slope(z))
    }
}

#[derive(Debug, Clone, Copy)]
struct Mode {
    amplitude: f64,
    half_length: f64,
    /// `β = ½ √(P² / (EI·C))`, so the Bessel argument is `β (l − z)²`.
    beta: f64,
}

impl Mode {
    fn new(p: f64, amplitude: f64, section: &SectionProperties, geometry: &RibbonGeometry) -> Self {
        let beta = 0.5 * p / libm::sqrt(section.bending_stiffness * section.torsional_rigidity);
        Self { amplitude, half_length: geometry.half_length, beta }
    }

    fn angle(&self, z: f64) -> f64 {
        let u = self.half_length - z;
        if u <= 0.0 {
            return 0.0;
        }
        let x = self.beta * u * u;
        // x never exceeds k/2 ≈ 2.78 on [0, l], well inside the series branch
        self.amplitude * libm::sqrt(u) * bessel_j(0.25, x).unwrap_or(f64::NAN)
    }

    /// With `u = l − z`: `dφ/du = A1 [u^-½ J_{1/4}(x) − 2β u^{3/2} J_{5/4}(x)]`.
    fn slope(&self, z: f64) -> f64 {
        let u = self.half_length - z;
        let d_du = if u <= 0.0 {
            // u^-½ J_{1/4}(β u²) → (β/2)^¼ / Γ(5/4)
            libm::pow(0.5 * self.beta, 0.25) / libm::tgamma(1.25)
        } else {
            let x = self.beta * u * u;
            let ju = bessel_j(0.25, x).unwrap_or(f64::NAN);
            let jn = bessel_j(1.25, x).unwrap_or(f64::NAN);
            ju / libm::sqrt(u) - 2.0 * self.beta * u * libm::sqrt(u) * jn
        };
        -self.amplitude * d_du
    }
}

fn model() -> Result<BucklingModel> {
    BucklingModel::new()
}

/// `P_cr` for a section and geometry.
pub fn critical_load(section: &SectionProperties, geometry: &RibbonGeometry) -> Result<f64> {
    model()?.critical_load(section, geometry)
}

/// `A1` from the strain-energy closure.
pub fn amplitude_closure(section: &SectionProperties, geometry: &RibbonGeometry) -> Result<f64> {
    model()?.amplitude(section, geometry)
}

/// `φ(z)` of a solved ribbon.
pub fn mode_shape(solution: &BucklingSolution, z: f64) -> Result<f64> {
    solution.mode_shape(z)
}

/// `ψ_l` of a solved ribbon, recomputed by quadrature from its amplitude.
pub fn tip_angle(solution: &BucklingSolution) -> Result<f64> {
    model()?.tip_angle(solution)
}

/// Critical load, amplitude and tip angle in one pass.
pub fn solve(
    material: &Material,
    geometry: &RibbonGeometry,
    convention: SectionConvention,
) -> Result<BucklingSolution> {
    model()?.solve(material, geometry, convention)
}

/// `U_barr = 3 · P_cr · D` (J).
pub fn energy_barrier(critical_load: f64, locking_displacement: f64) -> Result<f64> {
    positive("critical_load", critical_load)?;
    positive("locking_displacement", locking_displacement)?;
    Ok(3.0 * critical_load * locking_displacement)
}

/// Snap-through timescale `t* = (2l)² / (t · √(E/ρ_s))` (s).
pub fn snap_timescale(geometry: &RibbonGeometry, material: &Material) -> Result<f64> {
    geometry.validate()?;
    material.validate()?;
    let span = 2.0 * geometry.half_length;
    let wave_speed = libm::sqrt(material.youngs_modulus / material.density);
    Ok(span * span / (geometry.thickness * wave_speed))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    fn reference(convention: SectionConvention) -> BucklingSolution {
        solve(&Material::petg(), &RibbonGeometry::reference(), convention).unwrap()
    }

    #[test]
    fn constant_matches_tabulated_value() {
        let k = buckling_constant().unwrap();
        assert!(rel(k, TABULATED_BUCKLING_CONSTANT) < 1e-3);
        assert!((k - 5.561775447989955).abs() < 1e-12);
    }

    #[test]
    fn reference_critical_load() {
        // independent evaluation: 5.561775447989955 / 0.1291² · √(0.1853803125 · 1.708570891607143e-4)
        let p = reference(SectionConvention::WidthCubed).critical_load;
        assert!(rel(p, 1.878059176980099) < 1e-12, "{p}");
        assert!((p - 1.88).abs() < 0.005);
        let p = reference(SectionConvention::WeakAxis).critical_load;
        assert!(rel(p, 0.04770270309529452) < 1e-12, "{p}");
    }

    #[test]
    fn critical_load_scales_with_inverse_square_length() {
        let m = BucklingModel::new().unwrap();
        let geo = RibbonGeometry::reference();
        let long = geo.with_design(2.0 * geo.half_length, geo.locking_displacement);
        let s = section_properties(&Material::petg(), &geo, SectionConvention::WidthCubed).unwrap();
        let a = m.critical_load(&s, &geo).unwrap();
        let b = m.critical_load(&s, &long).unwrap();
        assert!(rel(b, a / 4.0) < 1e-15);
    }

    #[test]
    fn reference_amplitude_and_tip_angle() {
        // frozen from an independent 30-digit evaluation of the same closure
        let lit = reference(SectionConvention::WidthCubed);
        assert!(rel(lit.amplitude, 9.915064391182731) < 1e-7, "{}", lit.amplitude);
        assert!(rel(lit.tip_angle, 0.1187255400313475) < 1e-7, "{}", lit.tip_angle);
        let weak = reference(SectionConvention::WeakAxis);
        assert!(rel(weak.amplitude, 1.580201236483827) < 1e-7, "{}", weak.amplitude);
        assert!(rel(weak.tip_angle, 0.744_950_293_108_318) < 1e-7, "{}", weak.tip_angle);
        assert!(lit.amplitude != 0.0 && weak.amplitude != 0.0);
    }

    #[test]
    fn bending_and_torsion_energies_balance() {
        // integrating the mode equation by parts with φ(0) = φ(l) = 0 makes the two halves equal
        let m = BucklingModel::new().unwrap();
        let geo = RibbonGeometry::reference();
        for conv in [SectionConvention::WidthCubed, SectionConvention::WeakAxis] {
            let s = section_properties(&Material::petg(), &geo, conv).unwrap();
            let e = m.unit_strain_energy(&s, &geo).unwrap();
            assert!(rel(e.bending, e.torsion) < 1e-7, "{e:?}");
        }
    }

    #[test]
    fn amplitude_scales_with_root_of_locking_displacement() {
        let m = BucklingModel::new().unwrap();
        let geo = RibbonGeometry::reference();
        let doubled = geo.with_design(geo.half_length, 2.0 * geo.locking_displacement);
        let s = section_properties(&Material::petg(), &geo, SectionConvention::WidthCubed).unwrap();
        let a = m.amplitude(&s, &geo).unwrap();
        let b = m.amplitude(&s, &doubled).unwrap();
        assert!(rel(b, a * core::f64::consts::SQRT_2) < 1e-9);
    }

    #[test]
    fn tip_angle_is_linear_in_amplitude() {
        let sol = reference(SectionConvention::WidthCubed);
        let scaled = sol.with_amplitude(3.0 * sol.amplitude);
        let t = tip_angle(&scaled).unwrap();
        assert!(rel(t, 3.0 * sol.tip_angle) < 1e-9);
        assert!(sol.tip_angle > 0.0);
    }

    #[test]
    fn tip_angle_decreases_with_length() {
        let mat = Material::petg();
        let short = RibbonGeometry::reference().with_design(0.100, 0.016);
        let long = RibbonGeometry::reference().with_design(0.150, 0.016);
        for conv in [SectionConvention::WidthCubed, SectionConvention::WeakAxis] {
            let a = solve(&mat, &short, conv).unwrap().tip_angle;
            let b = solve(&mat, &long, conv).unwrap().tip_angle;
            assert!(a > b);
        }
    }

    #[test]
    fn mode_shape_vanishes_at_both_ends() {
        let sol = reference(SectionConvention::WidthCubed);
        let l = sol.geometry.half_length;
        // φ(0) = 0 is the boundary condition that fixes the constant
        assert!(sol.mode_shape(0.0).unwrap().abs() < 1e-12);
        let near = sol.mode_shape(l * (1.0 - 1e-9)).unwrap();
        assert!(near.abs() < 1e-7);
        assert!(sol.mode_shape(l).is_err());
        assert!(sol.mode_shape(-1e-6).is_err());
        assert!(sol.mode_shape(0.5 * l).unwrap() > 0.0);
    }

    #[test]
    fn mode_shape_is_linear_in_amplitude() {
        let sol = reference(SectionConvention::WeakAxis);
        let k = -2.5;
        let scaled = sol.with_amplitude(k * sol.amplitude);
        for i in 0..20 {
            let z = sol.geometry.half_length * f64::from(i) / 20.0;
            let a = sol.mode_shape(z).unwrap();
            let b = scaled.mode_shape(z).unwrap();
            assert!((b - k * a).abs() <= 1e-14 * (1.0 + a.abs()));
        }
    }

    #[test]
    fn slope_matches_finite_difference() {
        let sol = reference(SectionConvention::WidthCubed);
        let l = sol.geometry.half_length;
        let h = 1e-6 * l;
        for i in 1..20 {
            let z = l * f64::from(i) / 20.0;
            let fd = (sol.mode_shape(z + h).unwrap() - sol.mode_shape(z - h).unwrap()) / (2.0 * h);
            let an = sol.mode_slope(z).unwrap();
            assert!((fd - an).abs() < 1e-6 * an.abs().max(1.0), "z = {z}: {fd} vs {an}");
        }
    }

    #[test]
    fn energy_barrier_values() {
        assert!((energy_barrier(0.5875, 0.016).unwrap() - 0.0282).abs() < 1e-12);
        let a = energy_barrier(1.3, 0.01).unwrap();
        let b = energy_barrier(1.3, 0.02).unwrap();
        assert_eq!(b, 2.0 * a);
        assert!(energy_barrier(0.0, 0.01).is_err());
    }

    #[test]
    fn snap_timescale_reference_and_scaling() {
        let mat = Material::petg();
        let geo = RibbonGeometry::reference();
        let t = snap_timescale(&geo, &mat).unwrap();
        // (0.2582)² / (0.381e-3 · √(1730e6 / 1270))
        assert!(rel(t, 0.1499223251555971) < 1e-12, "{t}");
        let thick = RibbonGeometry { thickness: 2.0 * geo.thickness, ..geo };
        assert!(rel(snap_timescale(&thick, &mat).unwrap(), t / 2.0) < 1e-15);
        let other = RibbonGeometry { locking_displacement: 0.03, width: 0.02, ..geo };
        assert_eq!(snap_timescale(&other, &mat).unwrap(), t);
    }
}
