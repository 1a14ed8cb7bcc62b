use alloc::string::String;
use alloc::vec::Vec;

use crate::analysis::{gait_metrics, GaitTrace};
use crate::Result;

use super::config::RobotConfig;
use super::integrator::run_gait;

/// One labelled run of an experiment suite.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteCase {
    pub label: String,
    pub config: RobotConfig,
    /// s
    pub duration: f64,
    /// s
    pub dt: f64,
}

/// Scalar summary of one run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteSummary {
    pub speed_mm_s: f64,
    pub speed_bl_s: f64,
    pub air_fraction: f64,
    pub energy_mj: f64,
    /// Net midpoint displacement (m).
    pub displacement: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteRow {
    pub label: String,
    pub frequency: f64,
    pub substrate: String,
    pub outcome: Result<SuiteSummary>,
}

/// Runs one case and summarizes it.
pub fn run_case(case: &SuiteCase) -> Result<SuiteSummary> {
    let run = run_gait(&case.config, case.duration, case.dt)?;
    let trace = GaitTrace::from_trajectory(&run.trajectory);
    let metrics = gait_metrics(&trace, case.config.body_length)?;
    Ok(SuiteSummary {
        speed_mm_s: metrics.mean_speed,
        speed_bl_s: metrics.speed_bl.unwrap_or(f64::NAN),
        air_fraction: metrics.air_time_fraction.unwrap_or(0.0),
        energy_mj: run.injected_energy() * 1e3,
        displacement: run.trajectory.net_displacement(),
    })
}

/// Runs every case in order; a failing case yields an error row and the
/// suite carries on.
pub fn experiment_suite(cases: &[SuiteCase]) -> Vec<SuiteRow> {
    cases
        .iter()
        .map(|case| SuiteRow {
            label: case.label.clone(),
            frequency: case.config.actuation.frequency,
            substrate: case.config.substrate.name.clone(),
            outcome: run_case(case),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulation::SubstrateFriction;

    fn case(label: &str, config: RobotConfig) -> SuiteCase {
        SuiteCase { label: label.into(), config, duration: 1.5, dt: 1e-4 }
    }

    #[test]
    fn rows_follow_case_order_and_failures_stay_local() {
        let mut cases = Vec::new();
        for name in ["wood", "glass", "marble", "concrete"] {
            let mut config = RobotConfig::untethered();
            config.substrate = SubstrateFriction::preset(name).unwrap();
            cases.push(case(name, config));
        }
        let mut broken = RobotConfig::untethered();
        broken.total_mass = -1.0;
        cases.push(case("broken", broken));
        let rows = experiment_suite(&cases);
        let labels: Vec<_> = rows.iter().map(|r| r.label.as_str()).collect();
        assert_eq!(labels, ["wood", "glass", "marble", "concrete", "broken"]);
        assert!(rows[..4].iter().all(|r| r.outcome.is_ok()));
        assert!(rows[4].outcome.is_err());
    }

    #[test]
    fn duplicate_cases_give_identical_rows() {
        let rows = experiment_suite(&[case("a", RobotConfig::untethered()), case("a", RobotConfig::untethered())]);
        assert_eq!(rows[0], rows[1]);
    }

    #[test]
    fn tethered_and_untethered_both_complete() {
        for config in [RobotConfig::tethered(), RobotConfig::untethered()] {
            let summary = run_case(&case("x", config)).unwrap();
            assert!(summary.speed_mm_s.is_finite() && summary.air_fraction >= 0.0);
        }
    }
}
