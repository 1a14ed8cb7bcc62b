//! The subcommands. Each returns a [`Report`]: a JSON document, its text
//! rendering, and the tables and plot files it wants written.

use std::path::Path;

use hcm_core::analysis::{
    barrier_from_curve, fit_stiffness, gait_metrics, jump_metrics, static_deflection, GaitTrace, AIR_THRESHOLD,
};
use hcm_core::design::{evaluate, grid_nodes, optimize, DesignGrid, DesignPoint, SweepEntry, Target};
use hcm_core::mechanics::{build_landscape, energy_barrier, section_properties, snap_timescale, BucklingModel};
use hcm_core::simulation::{run_case, run_gait, GaitMode, SuiteCase, SuiteRow};
use serde::{Deserialize, Serialize};

use crate::config::{parse_json, ActuationBlock, RobotBlock, SimulationBlock, ToolConfig};
use crate::error::{CliError, CliResult};
use crate::formats::{read_bending_csv, read_trace_csv, sig6, suite_csv, sweep_csv, trajectory_csv};
use crate::parallel::par_map;

/// A finished command.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    /// Pretty-printed JSON report, newline-terminated.
    pub json: String,
    pub text: String,
    /// `(file name, contents)` of the tables the command produced.
    pub tables: Vec<(String, String)>,
    /// `(file name, contents)` of whitespace-separated plot columns.
    pub plots: Vec<(String, String)>,
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

/// Text report built from `name  value unit` lines.
#[derive(Default)]
struct Text(String);

impl Text {
    fn title(&mut self, s: &str) {
        self.0.push_str(s);
        self.0.push('\n');
    }

    fn row(&mut self, name: &str, value: impl std::fmt::Display, unit: &str) {
        let line = format!("  {name:<28} {value} {unit}");
        self.0.push_str(line.trim_end());
        self.0.push('\n');
    }

    fn opt(&mut self, name: &str, value: Option<f64>, unit: &str) {
        match value {
            Some(v) => self.row(name, sig6(v), unit),
            None => self.row(name, "n/a", ""),
        }
    }
}

// ---------------------------------------------------------------- analyze

#[allow(non_snake_case)]
#[derive(Debug, Serialize, Deserialize)]
pub struct AnalyzeReport {
    pub command: String,
    pub convention: String,
    pub EI_N_m2: f64,
    pub C_N_m2: f64,
    pub buckling_constant: f64,
    pub P_cr_N: f64,
    pub A1_rad_m_half: f64,
    pub psi_l_rad: f64,
    pub psi_l_deg: f64,
    pub U_barr_mJ: f64,
    pub t_star_ms: f64,
    pub landscape: LandscapeSummary,
    pub static_deflections: Vec<Deflection>,
}

#[allow(non_snake_case)]
#[derive(Debug, Serialize, Deserialize)]
pub struct LandscapeSummary {
    pub barrier_mJ: f64,
    pub stroke_mm: f64,
    pub barrier_position_mm: f64,
    pub peak_force_N: f64,
}

#[allow(non_snake_case)]
#[derive(Debug, Serialize, Deserialize)]
pub struct Deflection {
    pub K_N_mm: f64,
    pub mass_g: f64,
    pub deflection_mm: f64,
}

pub fn analyze(config: &ToolConfig) -> CliResult<Report> {
    let material = config.material()?;
    let geometry = config.geometry()?;
    let convention = config.convention();
    let robot = config.robot()?;
    let model = BucklingModel::new()?;
    let section = section_properties(&material, &geometry, convention)?;
    let solution = model.solve(&material, &geometry, convention)?;
    let barrier = energy_barrier(solution.critical_load, geometry.locking_displacement)?;
    let t_star = snap_timescale(&geometry, &material)?;
    let landscape = build_landscape(barrier, robot.stroke())?;
    let static_deflections = config
        .stiffness_N_mm
        .clone()
        .unwrap_or_default()
        .into_iter()
        .map(|k| {
            let d = static_deflection(robot.total_mass, k)?;
            Ok(Deflection { K_N_mm: k, mass_g: robot.total_mass * 1e3, deflection_mm: d })
        })
        .collect::<Result<Vec<_>, hcm_core::Error>>()?;

    let report = AnalyzeReport {
        command: "analyze".into(),
        convention: convention.name().into(),
        EI_N_m2: section.bending_stiffness,
        C_N_m2: section.torsional_rigidity,
        buckling_constant: model.constant(),
        P_cr_N: solution.critical_load,
        A1_rad_m_half: solution.amplitude,
        psi_l_rad: solution.tip_angle,
        psi_l_deg: solution.tip_angle.to_degrees(),
        U_barr_mJ: barrier * 1e3,
        t_star_ms: t_star * 1e3,
        landscape: LandscapeSummary {
            barrier_mJ: landscape.barrier * 1e3,
            stroke_mm: landscape.stroke * 1e3,
            barrier_position_mm: landscape.barrier_position() * 1e3,
            peak_force_N: landscape.peak_slope(),
        },
        static_deflections,
    };

    let mut t = Text::default();
    t.title(&format!("HCM ribbon analysis (section convention: {})", report.convention));
    t.row(
        "l / D / h / t",
        format!(
            "{} / {} / {} / {}",
            sig6(geometry.half_length * 1e3),
            sig6(geometry.locking_displacement * 1e3),
            sig6(geometry.width * 1e3),
            sig6(geometry.thickness * 1e3)
        ),
        "mm",
    );
    t.row("EI_eta", sig6(report.EI_N_m2), "N m^2");
    t.row("C", sig6(report.C_N_m2), "N m^2");
    t.row("buckling constant", sig6(report.buckling_constant), "");
    t.row("P_cr", sig6(report.P_cr_N), "N");
    t.row("A1", sig6(report.A1_rad_m_half), "rad m^-1/2");
    t.row("psi_l", sig6(report.psi_l_rad), "rad");
    t.row("psi_l", sig6(report.psi_l_deg), "deg");
    t.row("U_barr", sig6(report.U_barr_mJ), "mJ");
    t.row("t*", sig6(report.t_star_ms), "ms");
    t.title("landscape");
    t.row("barrier", sig6(report.landscape.barrier_mJ), "mJ");
    t.row("stroke", sig6(report.landscape.stroke_mm), "mm");
    t.row("barrier position", sig6(report.landscape.barrier_position_mm), "mm");
    t.row("peak restoring force", sig6(report.landscape.peak_force_N), "N");
    if !report.static_deflections.is_empty() {
        t.title("static deflections");
        for d in &report.static_deflections {
            t.row(&format!("K = {} N/mm, m = {} g", sig6(d.K_N_mm), sig6(d.mass_g)), sig6(d.deflection_mm), "mm");
        }
    }

    let mut plot = String::from("# z_mm phi_rad\n");
    let l = geometry.half_length;
    for i in 0..100 {
        let z = l * i as f64 / 100.0;
        plot.push_str(&format!("{} {}\n", z * 1e3, solution.mode_shape(z)?));
    }
    Ok(Report { json: to_json(&report), text: t.0, tables: vec![], plots: vec![("mode_shape.dat".into(), plot)] })
}

// ------------------------------------------------------------------ sweep

#[allow(non_snake_case)]
#[derive(Debug, Serialize, Deserialize)]
pub struct FailedNode {
    pub l_mm: f64,
    pub D_mm: f64,
    pub error: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SweepReport {
    pub command: String,
    pub convention: String,
    pub nodes: usize,
    pub rows: usize,
    pub failed: Vec<FailedNode>,
    pub table: String,
}

/// The sweep of `grid` evaluated on `workers` threads; identical to the
/// sequential [`hcm_core::design::sweep`].
pub fn parallel_sweep(grid: &DesignGrid, workers: usize) -> CliResult<Vec<SweepEntry>> {
    grid.validate()?;
    let model = BucklingModel::new()?;
    let nodes = grid_nodes(grid);
    Ok(par_map(&nodes, workers, |&(l, d)| SweepEntry {
        half_length: l,
        locking_displacement: d,
        outcome: evaluate(&model, grid, l, d),
    }))
}

pub fn sweep(config: &ToolConfig, workers: usize) -> CliResult<Report> {
    let grid = config.design_grid()?;
    let entries = parallel_sweep(&grid, workers)?;
    let failed: Vec<FailedNode> = entries
        .iter()
        .filter_map(|e| {
            e.outcome.as_ref().err().map(|err| FailedNode {
                l_mm: e.half_length * 1e3,
                D_mm: e.locking_displacement * 1e3,
                error: err.to_string(),
            })
        })
        .collect();
    let report = SweepReport {
        command: "sweep".into(),
        convention: grid.convention.name().into(),
        nodes: entries.len(),
        rows: entries.len() - failed.len(),
        failed,
        table: "sweep.csv".into(),
    };

    let mut t = Text::default();
    t.title(&format!("design sweep (section convention: {})", report.convention));
    t.row(
        "l range",
        format!(
            "{}..{} step {}",
            sig6(grid.half_length.min * 1e3),
            sig6(grid.half_length.max * 1e3),
            sig6(grid.half_length.step * 1e3)
        ),
        "mm",
    );
    t.row(
        "D range",
        format!(
            "{}..{} step {}",
            sig6(grid.locking_displacement.min * 1e3),
            sig6(grid.locking_displacement.max * 1e3),
            sig6(grid.locking_displacement.step * 1e3)
        ),
        "mm",
    );
    t.row("nodes", report.nodes, "");
    t.row("rows written", report.rows, "");
    for f in &report.failed {
        t.row(&format!("failed l = {} mm, D = {} mm", sig6(f.l_mm), sig6(f.D_mm)), &f.error, "");
    }

    let mut plot = String::from("# l_mm D_mm psi_l_rad U_barr_mJ\n");
    let mut last_l = None;
    for p in entries.iter().filter_map(|e| e.outcome.as_ref().ok()) {
        if last_l.is_some_and(|l| l != p.half_length) {
            plot.push('\n');
        }
        last_l = Some(p.half_length);
        plot.push_str(&format!(
            "{} {} {} {}\n",
            sig6(p.half_length * 1e3),
            sig6(p.locking_displacement * 1e3),
            sig6(p.tip_angle),
            sig6(p.barrier * 1e3)
        ));
    }
    Ok(Report {
        json: to_json(&report),
        text: t.0,
        tables: vec![("sweep.csv".into(), sweep_csv(&entries))],
        plots: vec![("sweep.dat".into(), plot)],
    })
}

// --------------------------------------------------------------- optimize

#[allow(non_snake_case)]
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PointJson {
    pub l_mm: f64,
    pub D_mm: f64,
    pub psi_l_rad: f64,
    pub U_barr_mJ: f64,
    pub P_cr_N: f64,
    pub t_star_ms: f64,
}

impl From<&DesignPoint> for PointJson {
    fn from(p: &DesignPoint) -> Self {
        Self {
            l_mm: p.half_length * 1e3,
            D_mm: p.locking_displacement * 1e3,
            psi_l_rad: p.tip_angle,
            U_barr_mJ: p.barrier * 1e3,
            P_cr_N: p.critical_load,
            t_star_ms: p.snap_time * 1e3,
        }
    }
}

#[allow(non_snake_case)]
#[derive(Debug, Serialize, Deserialize)]
pub struct OptimizeReport {
    pub command: String,
    pub convention: String,
    pub target: String,
    pub budget_mJ: Option<f64>,
    pub point: PointJson,
    pub coarse_best: PointJson,
    pub refinement_levels: usize,
    /// Constraints the optimum sits on: `budget`, `l_min`, `l_max`,
    /// `D_min`, `D_max`.
    pub active_constraints: Vec<String>,
}

pub fn optimize_cmd(config: &ToolConfig) -> CliResult<Report> {
    let grid = config.design_grid()?;
    let objective = config.objective()?;
    let optimum = optimize(&objective, &grid)?;
    let p = optimum.point;

    let span = |range: &hcm_core::design::AxisRange, bounds: Option<(f64, f64)>| {
        let (lo, hi) = bounds.unwrap_or((f64::NEG_INFINITY, f64::INFINITY));
        (range.min.max(lo), range.max.min(hi))
    };
    let on = |a: f64, b: f64| (a - b).abs() <= 1e-9 * b.abs().max(1e-12);
    let (l_lo, l_hi) = span(&grid.half_length, objective.half_length_bounds);
    let (d_lo, d_hi) = span(&grid.locking_displacement, objective.locking_displacement_bounds);
    let mut active = Vec::new();
    if optimum.budget_active {
        active.push("budget".to_string());
    }
    for (hit, name) in [
        (on(p.half_length, l_lo), "l_min"),
        (on(p.half_length, l_hi), "l_max"),
        (on(p.locking_displacement, d_lo), "D_min"),
        (on(p.locking_displacement, d_hi), "D_max"),
    ] {
        if hit {
            active.push(name.to_string());
        }
    }
    let target = match objective.target {
        Target::MaximizeTipAngle => "max-tip-angle".to_string(),
        Target::MaximizeBarrier => "max-barrier".to_string(),
        Target::WeightedSum { tip_angle, barrier } => format!("weighted (w_psi = {tip_angle}, w_U = {barrier})"),
    };
    let report = OptimizeReport {
        command: "optimize".into(),
        convention: grid.convention.name().into(),
        target,
        budget_mJ: objective.budget.is_finite().then_some(objective.budget * 1e3),
        point: (&p).into(),
        coarse_best: (&optimum.coarse_best).into(),
        refinement_levels: optimum.boxes.len(),
        active_constraints: active,
    };

    let mut t = Text::default();
    t.title(&format!("design optimum (section convention: {})", report.convention));
    t.row("target", &report.target, "");
    t.opt("budget", report.budget_mJ, "mJ");
    for (name, q) in [("optimum", report.point), ("best coarse node", report.coarse_best)] {
        t.title(name);
        t.row("l", sig6(q.l_mm), "mm");
        t.row("D", sig6(q.D_mm), "mm");
        t.row("psi_l", sig6(q.psi_l_rad), "rad");
        t.row("U_barr", sig6(q.U_barr_mJ), "mJ");
        t.row("P_cr", sig6(q.P_cr_N), "N");
        t.row("t*", sig6(q.t_star_ms), "ms");
    }
    let constraints =
        if report.active_constraints.is_empty() { "none".to_string() } else { report.active_constraints.join(", ") };
    t.row("active constraints", constraints, "");
    Ok(Report { json: to_json(&report), text: t.0, tables: vec![], plots: vec![] })
}

// --------------------------------------------------------------- simulate

#[allow(non_snake_case)]
#[derive(Debug, Serialize, Deserialize)]
pub struct SimulateReport {
    pub command: String,
    pub substrate: String,
    pub freq_hz: f64,
    pub mode: String,
    pub mass_g: f64,
    pub duration_s: f64,
    pub dt_s: f64,
    pub displacement_mm: f64,
    pub speed_mm_s: f64,
    pub speed_bl_s: f64,
    pub stride_mm: Option<f64>,
    pub air_frac: f64,
    pub jump_air_time_ms: f64,
    pub jump_apex_mm: f64,
    pub energy_mJ: f64,
    pub energy_audit_max_rel: f64,
    pub table: String,
}

fn mode_name(mode: GaitMode) -> &'static str {
    match mode {
        GaitMode::SymmetricGallop => "gallop",
        GaitMode::RearOnly => "rear-only",
    }
}

pub fn simulate(config: &ToolConfig) -> CliResult<Report> {
    let robot = config.robot()?;
    let settings = config.run_settings();
    let run = run_gait(&robot, settings.duration, settings.dt)?;
    let trace = GaitTrace::from_trajectory(&run.trajectory);
    let metrics = gait_metrics(&trace, robot.body_length)?;
    let jump = jump_metrics(&trace, AIR_THRESHOLD)?;
    let report = SimulateReport {
        command: "simulate".into(),
        substrate: robot.substrate.name.clone(),
        freq_hz: robot.actuation.frequency,
        mode: mode_name(robot.actuation.mode).into(),
        mass_g: robot.total_mass * 1e3,
        duration_s: settings.duration,
        dt_s: settings.dt,
        displacement_mm: run.trajectory.net_displacement() * 1e3,
        speed_mm_s: metrics.mean_speed,
        speed_bl_s: metrics.speed_bl.unwrap_or(f64::NAN),
        stride_mm: metrics.stride_length,
        air_frac: metrics.air_time_fraction.unwrap_or(0.0),
        jump_air_time_ms: jump.air_time * 1e3,
        jump_apex_mm: jump.apex_height * 1e3,
        energy_mJ: run.injected_energy() * 1e3,
        energy_audit_max_rel: run.trajectory.max_audit_error(),
        table: "trajectory.csv".into(),
    };

    let mut t = Text::default();
    t.title(&format!("gait simulation ({} on {}, {} Hz)", report.mode, report.substrate, sig6(report.freq_hz)));
    t.row("mass", sig6(report.mass_g), "g");
    t.row("duration / dt", format!("{} / {}", report.duration_s, report.dt_s), "s");
    t.row("net displacement", sig6(report.displacement_mm), "mm");
    t.row("mean speed", sig6(report.speed_mm_s), "mm/s");
    t.row("speed", sig6(report.speed_bl_s), "BL/s");
    t.opt("stride", report.stride_mm, "mm");
    t.row("air-time fraction", sig6(report.air_frac), "");
    t.row("longest hop", format!("{} ms, apex {} mm", sig6(report.jump_air_time_ms), sig6(report.jump_apex_mm)), "");
    t.row("servo energy", sig6(report.energy_mJ), "mJ");
    t.row("energy audit (max rel.)", format!("{:.3e}", report.energy_audit_max_rel), "");

    let mut plot = String::from("# t_s x_mid_mm y_mid_mm s_mm\n");
    for s in &run.trajectory.samples {
        plot.push_str(&format!(
            "{} {} {} {}\n",
            s.t,
            0.5 * (s.x_fore + s.x_hind) * 1e3,
            0.5 * (s.y_fore + s.y_hind) * 1e3,
            s.s * 1e3
        ));
    }
    Ok(Report {
        json: to_json(&report),
        text: t.0,
        tables: vec![("trajectory.csv".into(), trajectory_csv(&run.trajectory))],
        plots: vec![("trajectory.dat".into(), plot)],
    })
}

/// An experiment-suite file: a list of labelled overrides applied to the
/// main configuration.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteFile {
    pub cases: Vec<SuiteFileCase>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteFileCase {
    pub label: String,
    pub robot: Option<RobotBlock>,
    pub actuation: Option<ActuationBlock>,
    pub simulation: Option<SimulationBlock>,
}

/// Resolves every case of a suite file against `config`.
pub fn suite_cases(config: &ToolConfig, path: &Path) -> CliResult<Vec<SuiteCase>> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let file: SuiteFile = parse_json(&text).map_err(|e| e.in_file(path))?;
    if file.cases.is_empty() {
        return Err(CliError::Config {
            file: Some(path.into()),
            path: "cases".into(),
            message: "need at least one case".into(),
        });
    }
    file.cases
        .iter()
        .enumerate()
        .map(|(i, case)| {
            let merged = config.merged(case.robot.as_ref(), case.actuation.as_ref(), case.simulation.as_ref());
            let robot = merged.robot().map_err(|e| match e {
                CliError::Config { message, .. } => {
                    CliError::Config { file: Some(path.into()), path: format!("cases[{i}]"), message }
                }
                other => other,
            })?;
            let settings = merged.run_settings();
            Ok(SuiteCase { label: case.label.clone(), config: robot, duration: settings.duration, dt: settings.dt })
        })
        .collect()
}

/// [`hcm_core::simulation::experiment_suite`] on `workers` threads.
pub fn parallel_suite(cases: &[SuiteCase], workers: usize) -> Vec<SuiteRow> {
    par_map(cases, workers, |case| SuiteRow {
        label: case.label.clone(),
        frequency: case.config.actuation.frequency,
        substrate: case.config.substrate.name.clone(),
        outcome: run_case(case),
    })
}

/// Coefficient of determination of the least-squares line through `(x, y)`.
pub fn r_squared(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 3 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0 && syy > 0.0).then(|| sxy * sxy / (sxx * syy))
}

#[allow(non_snake_case)]
#[derive(Debug, Serialize, Deserialize)]
pub struct SuiteRowJson {
    pub label: String,
    pub freq_hz: f64,
    pub substrate: String,
    pub speed_mm_s: Option<f64>,
    pub speed_bl_s: Option<f64>,
    pub air_frac: Option<f64>,
    pub energy_mJ: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SuiteReport {
    pub command: String,
    pub rows: Vec<SuiteRowJson>,
    /// R² of speed against frequency over the successful rows.
    pub speed_frequency_r2: Option<f64>,
    pub table: String,
}

pub fn simulate_suite(config: &ToolConfig, suite: &Path, workers: usize) -> CliResult<Report> {
    let cases = suite_cases(config, suite)?;
    let rows = parallel_suite(&cases, workers);
    let points: Vec<(f64, f64)> =
        rows.iter().filter_map(|r| r.outcome.as_ref().ok().map(|s| (r.frequency, s.speed_mm_s))).collect();
    let report = SuiteReport {
        command: "suite".into(),
        rows: rows
            .iter()
            .map(|r| {
                let ok = r.outcome.as_ref().ok();
                SuiteRowJson {
                    label: r.label.clone(),
                    freq_hz: r.frequency,
                    substrate: r.substrate.clone(),
                    speed_mm_s: ok.map(|s| s.speed_mm_s),
                    speed_bl_s: ok.map(|s| s.speed_bl_s),
                    air_frac: ok.map(|s| s.air_fraction),
                    energy_mJ: ok.map(|s| s.energy_mj),
                    error: r.outcome.as_ref().err().map(ToString::to_string),
                }
            })
            .collect(),
        speed_frequency_r2: r_squared(&points),
        table: "suite.csv".into(),
    };

    let mut t = Text::default();
    t.title(&format!("experiment suite ({} runs)", report.rows.len()));
    for r in &report.rows {
        match (&r.error, r.speed_mm_s) {
            (None, Some(v)) => {
                t.row(&r.label, format!("{} mm/s ({} Hz, {})", sig6(v), sig6(r.freq_hz), r.substrate), "")
            }
            (e, _) => t.row(&r.label, format!("failed: {}", e.as_deref().unwrap_or("unknown")), ""),
        }
    }
    t.opt("speed-frequency fit R^2", report.speed_frequency_r2, "");

    let mut plot = String::from("# freq_hz speed_mm_s\n");
    for (f, v) in &points {
        plot.push_str(&format!("{} {}\n", sig6(*f), sig6(*v)));
    }
    Ok(Report {
        json: to_json(&report),
        text: t.0,
        tables: vec![("suite.csv".into(), suite_csv(&rows))],
        plots: vec![("suite.dat".into(), plot)],
    })
}

// ------------------------------------------------------------ fit-bending

#[allow(non_snake_case)]
#[derive(Debug, Serialize, Deserialize)]
pub struct BendingReport {
    pub command: String,
    pub K_N_mm: f64,
    pub K_err_N_mm: f64,
    pub intercept_N: f64,
    pub samples_used: usize,
    pub region_mm: [f64; 2],
    pub span_mm: f64,
    pub barrier_mJ: f64,
    pub mass_g: f64,
    pub static_deflection_mm: f64,
}

/// Options of `fit-bending`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BendingOptions {
    pub span_mm: f64,
    pub region_mm: Option<(f64, f64)>,
    /// Overrides the robot mass for the static deflection.
    pub mass_g: Option<f64>,
}

pub fn fit_bending(config: &ToolConfig, file: &Path, options: BendingOptions) -> CliResult<Report> {
    let input = std::fs::File::open(file).map_err(|e| CliError::io(file, e))?;
    let record = read_bending_csv(input, file, options.span_mm)?;
    let fit = fit_stiffness(&record, options.region_mm)?;
    let mass = match options.mass_g {
        Some(m) => m / 1e3,
        None => config.robot()?.total_mass,
    };
    let report = BendingReport {
        command: "fit-bending".into(),
        K_N_mm: fit.slope,
        K_err_N_mm: fit.slope_error,
        intercept_N: fit.intercept,
        samples_used: fit.samples_used,
        region_mm: [fit.region.0, fit.region.1],
        span_mm: record.span,
        barrier_mJ: barrier_from_curve(&record),
        mass_g: mass * 1e3,
        static_deflection_mm: static_deflection(mass, fit.slope)?,
    };

    let mut t = Text::default();
    t.title("three-point bending fit");
    t.row("K", format!("{} +/- {}", sig6(report.K_N_mm), sig6(report.K_err_N_mm)), "N/mm");
    t.row("intercept", sig6(report.intercept_N), "N");
    t.row(
        "fit region",
        format!("{}..{} ({} samples)", sig6(report.region_mm[0]), sig6(report.region_mm[1]), report.samples_used),
        "mm",
    );
    t.row("curve area", sig6(report.barrier_mJ), "mJ");
    t.row(&format!("static deflection at {} g", sig6(report.mass_g)), sig6(report.static_deflection_mm), "mm");

    let mut plot = String::from("# disp_mm load_N fit_N\n");
    for &(d, f) in record.samples() {
        plot.push_str(&format!("{d} {f} {}\n", fit.intercept + fit.slope * d));
    }
    Ok(Report { json: to_json(&report), text: t.0, tables: vec![], plots: vec![("bending.dat".into(), plot)] })
}

// ---------------------------------------------------------------- metrics

#[derive(Debug, Serialize, Deserialize)]
pub struct MetricsReport {
    pub command: String,
    pub speed_mm_s: f64,
    pub speed_bl_s: Option<f64>,
    pub stride_mm: Option<f64>,
    pub air_frac: Option<f64>,
    pub peak_tip_angular_velocity_deg_s: Option<f64>,
    pub jump_air_time_ms: Option<f64>,
    pub jump_apex_mm: Option<f64>,
    pub missing: Vec<String>,
}

/// Options of `metrics`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricsOptions {
    /// Overrides the robot body length.
    pub body_length_mm: Option<f64>,
    pub period_s: Option<f64>,
    pub threshold_mm: f64,
}

pub fn metrics(config: &ToolConfig, file: &Path, options: MetricsOptions) -> CliResult<Report> {
    let input = std::fs::File::open(file).map_err(|e| CliError::io(file, e))?;
    let mut trace = read_trace_csv(input, file)?;
    trace.period = options.period_s;
    let body_length = match options.body_length_mm {
        Some(l) => l / 1e3,
        None => config.robot()?.body_length,
    };
    let m = gait_metrics(&trace, body_length)?;
    let threshold = options.threshold_mm / 1e3;
    let jump = if trace.y.is_some() { Some(jump_metrics(&trace, threshold)?) } else { None };
    let mut missing: Vec<String> = m.missing.iter().map(|s| s.to_string()).collect();
    if jump.is_none() {
        missing.push("jump".into());
    }
    let report = MetricsReport {
        command: "metrics".into(),
        speed_mm_s: m.mean_speed,
        speed_bl_s: m.speed_bl,
        stride_mm: m.stride_length,
        air_frac: m.air_time_fraction,
        peak_tip_angular_velocity_deg_s: m.peak_tip_angular_velocity,
        jump_air_time_ms: jump.map(|j| j.air_time * 1e3),
        jump_apex_mm: jump.map(|j| j.apex_height * 1e3),
        missing,
    };

    let mut t = Text::default();
    t.title("gait metrics");
    t.row("mean speed", sig6(report.speed_mm_s), "mm/s");
    t.opt("speed", report.speed_bl_s, "BL/s");
    t.opt("stride", report.stride_mm, "mm");
    t.opt("air-time fraction", report.air_frac, "");
    t.opt("peak tip angular velocity", report.peak_tip_angular_velocity_deg_s, "deg/s");
    t.opt("longest hop", report.jump_air_time_ms, "ms");
    t.opt("hop apex", report.jump_apex_mm, "mm");
    Ok(Report { json: to_json(&report), text: t.0, tables: vec![], plots: vec![] })
}
