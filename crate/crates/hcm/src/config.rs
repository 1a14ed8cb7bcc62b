//! The tool configuration file.
//!
//! A JSON document whose field names carry their units (`l_mm`, `E_MPa`, ...).
//! Every block is optional and falls back to the reference design or the
//! untethered robot. Inside the `material` and `geometry` blocks every field
//! is required; the `robot`, `actuation` and `simulation` blocks are
//! overrides on top of a preset, so any subset of their fields may be given.
//! Unknown keys are rejected everywhere.

use std::path::Path;

use hcm_core::design::{AxisRange, DesignGrid, DesignObjective, Target};
use hcm_core::mechanics::{build_landscape, Material, RibbonGeometry, SectionConvention};
use hcm_core::simulation::{GaitMode, RobotConfig, SubstrateFriction};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[allow(non_snake_case)]
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToolConfig {
    pub material: Option<MaterialBlock>,
    pub geometry: Option<GeometryBlock>,
    pub convention: Option<ConventionName>,
    /// Measured bending stiffnesses (N/mm) whose static deflections
    /// `analyze` reports.
    pub stiffness_N_mm: Option<Vec<f64>>,
    pub design: Option<DesignBlock>,
    pub robot: Option<RobotBlock>,
    pub actuation: Option<ActuationBlock>,
    pub simulation: Option<SimulationBlock>,
    pub output: Option<OutputBlock>,
}

#[allow(non_snake_case)]
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialBlock {
    pub E_MPa: f64,
    pub nu: f64,
    pub rho_kg_m3: f64,
}

#[allow(non_snake_case)]
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryBlock {
    pub l_mm: f64,
    pub D_mm: f64,
    pub h_mm: f64,
    pub t_mm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ConventionName {
    WidthCubed,
    WeakAxis,
}

impl From<ConventionName> for SectionConvention {
    fn from(c: ConventionName) -> Self {
        match c {
            ConventionName::WidthCubed => SectionConvention::WidthCubed,
            ConventionName::WeakAxis => SectionConvention::WeakAxis,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RangeMm {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

#[allow(non_snake_case)]
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignBlock {
    pub l_mm: Option<RangeMm>,
    pub D_mm: Option<RangeMm>,
    pub objective: Option<ObjectiveBlock>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TargetName {
    MaxTipAngle,
    MaxBarrier,
    Weighted,
}

#[allow(non_snake_case)]
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectiveBlock {
    pub target: TargetName,
    /// Weight of `ψ_l` in rad (weighted target only).
    pub w_psi: Option<f64>,
    /// Weight of `U_barr` in mJ (weighted target only).
    pub w_U: Option<f64>,
    /// Barrier budget; omitted means unlimited.
    pub budget_mJ: Option<f64>,
    pub l_bounds_mm: Option<[f64; 2]>,
    pub D_bounds_mm: Option<[f64; 2]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RobotPreset {
    Untethered,
    Tethered,
}

#[allow(non_snake_case)]
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RobotBlock {
    pub preset: Option<RobotPreset>,
    pub mass_g: Option<f64>,
    pub fore_fraction: Option<f64>,
    pub L_mm: Option<f64>,
    pub Lf_mm: Option<f64>,
    pub fore_barrier_mJ: Option<f64>,
    pub rear_barrier_mJ: Option<f64>,
    pub damping_N_s_m: Option<f64>,
    pub snap_time_ms: Option<f64>,
    pub servo_energy_limit_mJ: Option<f64>,
    /// `wood`, `glass`, `marble` or `concrete`.
    pub substrate: Option<String>,
    pub mu_plastic: Option<f64>,
    pub mu_rubber: Option<f64>,
    pub lift_gain_per_s: Option<f64>,
    pub press_gain_per_s: Option<f64>,
    pub stiction_velocity_mm_s: Option<f64>,
    pub contact_stiffness_N_m: Option<f64>,
    pub contact_damping_ratio: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeName {
    Gallop,
    RearOnly,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActuationBlock {
    pub frequency_hz: Option<f64>,
    pub mode: Option<ModeName>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationBlock {
    pub dt_s: Option<f64>,
    pub duration_s: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputBlock {
    /// Directory for written tables, relative to the working directory.
    pub dir: Option<String>,
    pub plot_data: Option<bool>,
}

/// Step size and duration of a simulation run (s).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunSettings {
    pub dt: f64,
    pub duration: f64,
}

pub const DEFAULT_DT: f64 = 1e-4;
pub const DEFAULT_DURATION: f64 = 5.0;

/// Parses a configuration document, reporting the path of the offending
/// field on failure.
pub fn parse_config(text: &str) -> CliResult<ToolConfig> {
    parse_json(text)
}

pub fn load_config(path: &Path) -> CliResult<ToolConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_config(&text).map_err(|e| e.in_file(path))
}

pub(crate) fn parse_json<T: serde::de::DeserializeOwned>(text: &str) -> CliResult<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let path = if path == "." { String::new() } else { path };
        CliError::Config { file: None, path, message: e.into_inner().to_string() }
    })
}

fn invalid(path: &str, message: impl Into<String>) -> CliError {
    CliError::Config { file: None, path: path.into(), message: message.into() }
}

impl ToolConfig {
    pub fn material(&self) -> CliResult<Material> {
        match self.material {
            None => Ok(Material::petg()),
            Some(m) => {
                Material::isotropic(m.E_MPa * 1e6, m.nu, m.rho_kg_m3).map_err(|e| invalid("material", e.to_string()))
            }
        }
    }

    pub fn geometry(&self) -> CliResult<RibbonGeometry> {
        let g = match self.geometry {
            None => return Ok(RibbonGeometry::reference()),
            Some(g) => RibbonGeometry {
                half_length: g.l_mm / 1e3,
                locking_displacement: g.D_mm / 1e3,
                width: g.h_mm / 1e3,
                thickness: g.t_mm / 1e3,
            },
        };
        g.validate().map_err(|e| invalid("geometry", e.to_string()))?;
        Ok(g)
    }

    pub fn convention(&self) -> SectionConvention {
        self.convention.map(Into::into).unwrap_or_default()
    }

    pub fn design_grid(&self) -> CliResult<DesignGrid> {
        let g = self.geometry()?;
        let mut grid = DesignGrid::standard(self.material()?, g.width, g.thickness, self.convention());
        if let Some(d) = &self.design {
            if let Some(r) = d.l_mm {
                grid.half_length = axis(r).map_err(|e| invalid("design.l_mm", e))?;
            }
            if let Some(r) = d.D_mm {
                grid.locking_displacement = axis(r).map_err(|e| invalid("design.D_mm", e))?;
            }
        }
        Ok(grid)
    }

    pub fn objective(&self) -> CliResult<DesignObjective> {
        let Some(o) = self.design.as_ref().and_then(|d| d.objective.as_ref()) else {
            return Ok(DesignObjective::new(Target::MaximizeTipAngle, f64::INFINITY));
        };
        let target = match o.target {
            TargetName::MaxTipAngle => Target::MaximizeTipAngle,
            TargetName::MaxBarrier => Target::MaximizeBarrier,
            TargetName::Weighted => Target::WeightedSum {
                tip_angle: o.w_psi.ok_or_else(|| invalid("design.objective", "missing field `w_psi`"))?,
                barrier: o.w_U.ok_or_else(|| invalid("design.objective", "missing field `w_U`"))?,
            },
        };
        let budget = o.budget_mJ.map_or(f64::INFINITY, |b| b / 1e3);
        let objective = DesignObjective {
            target,
            budget,
            half_length_bounds: o.l_bounds_mm.map(|[a, b]| (a / 1e3, b / 1e3)),
            locking_displacement_bounds: o.D_bounds_mm.map(|[a, b]| (a / 1e3, b / 1e3)),
        };
        objective.validate().map_err(|e| invalid("design.objective", e.to_string()))?;
        Ok(objective)
    }

    /// The robot preset with every override of the `robot` and `actuation`
    /// blocks applied.
    pub fn robot(&self) -> CliResult<RobotConfig> {
        let mut r = match self.robot.as_ref().and_then(|r| r.preset) {
            Some(RobotPreset::Tethered) => RobotConfig::tethered(),
            _ => RobotConfig::untethered(),
        };
        if let Some(b) = &self.robot {
            apply_robot(&mut r, b)?;
        }
        if let Some(a) = self.actuation {
            if let Some(f) = a.frequency_hz {
                r.actuation.frequency = f;
            }
            if let Some(m) = a.mode {
                r.actuation.mode = match m {
                    ModeName::Gallop => GaitMode::SymmetricGallop,
                    ModeName::RearOnly => GaitMode::RearOnly,
                };
            }
        }
        r.validate().map_err(|e| invalid("robot", e.to_string()))?;
        Ok(r)
    }

    pub fn run_settings(&self) -> RunSettings {
        let s = self.simulation.unwrap_or_default();
        RunSettings { dt: s.dt_s.unwrap_or(DEFAULT_DT), duration: s.duration_s.unwrap_or(DEFAULT_DURATION) }
    }

    pub fn output_dir(&self) -> Option<&str> {
        self.output.as_ref().and_then(|o| o.dir.as_deref())
    }

    pub fn plot_data(&self) -> bool {
        self.output.as_ref().and_then(|o| o.plot_data).unwrap_or(false)
    }

    /// This configuration with the simulation-related blocks of `case`
    /// merged on top, field by field.
    pub fn merged(
        &self,
        robot: Option<&RobotBlock>,
        actuation: Option<&ActuationBlock>,
        simulation: Option<&SimulationBlock>,
    ) -> Self {
        let mut out = self.clone();
        if let Some(b) = robot {
            let base = out.robot.take().unwrap_or_default();
            out.robot = Some(merge_robot(base, b));
        }
        if let Some(a) = actuation {
            let base = out.actuation.unwrap_or_default();
            out.actuation =
                Some(ActuationBlock { frequency_hz: a.frequency_hz.or(base.frequency_hz), mode: a.mode.or(base.mode) });
        }
        if let Some(s) = simulation {
            let base = out.simulation.unwrap_or_default();
            out.simulation =
                Some(SimulationBlock { dt_s: s.dt_s.or(base.dt_s), duration_s: s.duration_s.or(base.duration_s) });
        }
        out
    }
}

fn axis(r: RangeMm) -> Result<AxisRange, String> {
    AxisRange::new(r.min / 1e3, r.max / 1e3, r.step / 1e3).map_err(|e| e.to_string())
}

fn merge_robot(base: RobotBlock, over: &RobotBlock) -> RobotBlock {
    RobotBlock {
        preset: over.preset.or(base.preset),
        mass_g: over.mass_g.or(base.mass_g),
        fore_fraction: over.fore_fraction.or(base.fore_fraction),
        L_mm: over.L_mm.or(base.L_mm),
        Lf_mm: over.Lf_mm.or(base.Lf_mm),
        fore_barrier_mJ: over.fore_barrier_mJ.or(base.fore_barrier_mJ),
        rear_barrier_mJ: over.rear_barrier_mJ.or(base.rear_barrier_mJ),
        damping_N_s_m: over.damping_N_s_m.or(base.damping_N_s_m),
        snap_time_ms: over.snap_time_ms.or(base.snap_time_ms),
        servo_energy_limit_mJ: over.servo_energy_limit_mJ.or(base.servo_energy_limit_mJ),
        substrate: over.substrate.clone().or(base.substrate),
        mu_plastic: over.mu_plastic.or(base.mu_plastic),
        mu_rubber: over.mu_rubber.or(base.mu_rubber),
        lift_gain_per_s: over.lift_gain_per_s.or(base.lift_gain_per_s),
        press_gain_per_s: over.press_gain_per_s.or(base.press_gain_per_s),
        stiction_velocity_mm_s: over.stiction_velocity_mm_s.or(base.stiction_velocity_mm_s),
        contact_stiffness_N_m: over.contact_stiffness_N_m.or(base.contact_stiffness_N_m),
        contact_damping_ratio: over.contact_damping_ratio.or(base.contact_damping_ratio),
    }
}

fn apply_robot(r: &mut RobotConfig, b: &RobotBlock) -> CliResult<()> {
    if let Some(v) = b.mass_g {
        r.total_mass = v / 1e3;
    }
    if let Some(v) = b.fore_fraction {
        r.fore_fraction = v;
    }
    if let Some(v) = b.L_mm {
        r.body_length = v / 1e3;
    }
    if let Some(v) = b.Lf_mm {
        r.flexion_length = v / 1e3;
    }
    // the landscapes span the extension-to-flexion stroke
    let stroke = r.stroke();
    let landscape =
        |barrier: f64, field: &str| build_landscape(barrier, stroke).map_err(|e| invalid(field, e.to_string()));
    r.fore_landscape =
        landscape(b.fore_barrier_mJ.map_or(r.fore_landscape.barrier, |v| v / 1e3), "robot.fore_barrier_mJ")?;
    r.rear_landscape =
        landscape(b.rear_barrier_mJ.map_or(r.rear_landscape.barrier, |v| v / 1e3), "robot.rear_barrier_mJ")?;
    if let Some(v) = b.damping_N_s_m {
        r.spine_damping = v;
    }
    if let Some(v) = b.snap_time_ms {
        r.snap_time = v / 1e3;
    }
    if let Some(v) = b.servo_energy_limit_mJ {
        r.servo_energy_limit = Some(v / 1e3);
    }
    if let Some(name) = &b.substrate {
        r.substrate = SubstrateFriction::preset(name).ok_or_else(|| {
            invalid("robot.substrate", format!("unknown substrate `{name}` (expected wood, glass, marble or concrete)"))
        })?;
    }
    if b.mu_plastic.is_some() || b.mu_rubber.is_some() {
        let name = if b.substrate.is_some() { r.substrate.name.clone() } else { "custom".into() };
        r.substrate = SubstrateFriction::new(
            name,
            b.mu_plastic.unwrap_or(r.substrate.mu_plastic),
            b.mu_rubber.unwrap_or(r.substrate.mu_rubber),
        )
        .map_err(|e| invalid("robot", e.to_string()))?;
    }
    if let Some(v) = b.lift_gain_per_s {
        r.lift_gain = v;
    }
    if let Some(v) = b.press_gain_per_s {
        r.press_gain = v;
    }
    if let Some(v) = b.stiction_velocity_mm_s {
        r.stiction_velocity = v / 1e3;
    }
    if let Some(v) = b.contact_stiffness_N_m {
        r.contact.stiffness = v;
    }
    if let Some(v) = b.contact_damping_ratio {
        r.contact.damping_ratio = v;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_is_the_reference_design() {
        let c = parse_config("{}").unwrap();
        assert_eq!(c.material().unwrap(), Material::petg());
        assert_eq!(c.geometry().unwrap(), RibbonGeometry::reference());
        assert_eq!(c.robot().unwrap(), RobotConfig::untethered());
        assert_eq!(c.convention(), SectionConvention::WidthCubed);
    }

    #[test]
    fn missing_field_names_its_block() {
        let err = parse_config(r#"{"geometry": {"l_mm": 129.1, "h_mm": 15, "t_mm": 0.381}}"#).unwrap_err();
        let text = err.to_string();
        assert!(text.contains("geometry") && text.contains("D_mm"), "{text}");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn unknown_keys_are_rejected_with_their_path() {
        let err = parse_config(r#"{"robot": {"mass_kg": 1}}"#).unwrap_err();
        let text = err.to_string();
        assert!(text.contains("robot") && text.contains("mass_kg"), "{text}");
    }

    #[test]
    fn robot_overrides_apply_on_top_of_the_preset() {
        let c = parse_config(
            r#"{"robot": {"preset": "tethered", "substrate": "concrete", "L_mm": 210, "Lf_mm": 180},
            "actuation": {"frequency_hz": 1.5, "mode": "rear-only"}}"#,
        )
        .unwrap();
        let r = c.robot().unwrap();
        assert_eq!(r.total_mass, 0.041);
        assert_eq!(r.substrate, SubstrateFriction::concrete());
        assert!((r.fore_landscape.stroke - 0.030).abs() < 1e-15);
        assert_eq!(r.actuation.frequency, 1.5);
        assert_eq!(r.actuation.mode, GaitMode::RearOnly);
    }

    #[test]
    fn friction_overrides_replace_single_coefficients() {
        let c = parse_config(r#"{"robot": {"mu_plastic": 0.5, "mu_rubber": 0.5}}"#).unwrap();
        assert_eq!(c.robot().unwrap().substrate.anisotropy(), 1.0);
    }

    #[test]
    fn invalid_values_are_config_errors() {
        let c = parse_config(r#"{"robot": {"substrate": "ice"}}"#).unwrap();
        assert_eq!(c.robot().unwrap_err().exit_code(), 2);
        let c = parse_config(r#"{"design": {"l_mm": {"min": 100, "max": 80, "step": 5}}}"#).unwrap();
        assert_eq!(c.design_grid().unwrap_err().exit_code(), 2);
    }

    #[test]
    fn merging_keeps_unset_fields() {
        let base = parse_config(r#"{"robot": {"substrate": "glass"}, "actuation": {"frequency_hz": 3}}"#).unwrap();
        let over = ActuationBlock { frequency_hz: None, mode: Some(ModeName::RearOnly) };
        let merged = base.merged(None, Some(&over), None);
        let r = merged.robot().unwrap();
        assert_eq!(r.actuation.frequency, 3.0);
        assert_eq!(r.actuation.mode, GaitMode::RearOnly);
        assert_eq!(r.substrate.name, "glass");
    }
}
