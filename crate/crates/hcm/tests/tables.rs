use std::path::Path;

use hcm::commands::{parallel_suite, parallel_sweep};
use hcm::formats::{read_suite_csv, read_sweep_csv, read_trajectory_csv, sig6, suite_csv, sweep_csv, trajectory_csv};
use hcm_core::design::{sweep, AxisRange, DesignGrid};
use hcm_core::mechanics::{Material, SectionConvention};
use hcm_core::simulation::{experiment_suite, run_gait, RobotConfig, SubstrateFriction, SuiteCase};
use proptest::prelude::*;

fn grid(convention: SectionConvention) -> DesignGrid {
    DesignGrid::standard(Material::petg(), 0.015, 0.000381, convention)
}

fn cases() -> Vec<SuiteCase> {
    let mut out = Vec::new();
    for (i, f) in [1.0, 2.0, 3.0].into_iter().enumerate() {
        let mut config = RobotConfig::untethered();
        config.actuation.frequency = f;
        if i == 1 {
            config.substrate = SubstrateFriction::concrete();
        }
        out.push(SuiteCase { label: format!("case {i}"), config, duration: 3.0, dt: 1e-4 });
    }
    let mut weak = RobotConfig::untethered();
    weak.servo_energy_limit = Some(0.01);
    out.push(SuiteCase { label: "weak, \"servo\"".into(), config: weak, duration: 3.0, dt: 1e-4 });
    out
}

#[test]
fn parallel_sweep_matches_the_sequential_one() {
    for convention in [SectionConvention::WidthCubed, SectionConvention::WeakAxis] {
        let g = grid(convention);
        let sequential = sweep(&g).unwrap();
        for workers in [1, 3, 8] {
            assert_eq!(parallel_sweep(&g, workers).unwrap(), sequential);
        }
    }
}

#[test]
fn parallel_suite_matches_the_sequential_one() {
    let cases = cases();
    let sequential = experiment_suite(&cases);
    assert!(sequential[3].outcome.is_err());
    for workers in [1, 2, 4] {
        assert_eq!(parallel_suite(&cases, workers), sequential);
    }
}

#[test]
fn sweep_table_reads_back() {
    let entries = sweep(&grid(SectionConvention::WidthCubed)).unwrap();
    let text = sweep_csv(&entries);
    let rows = read_sweep_csv(text.as_bytes(), Path::new("sweep.csv")).unwrap();
    assert_eq!(rows.len(), entries.len());
    for (row, entry) in rows.iter().zip(&entries) {
        let p = entry.outcome.as_ref().unwrap();
        assert_eq!(row.l_mm.to_string(), sig6(p.half_length * 1e3));
        assert_eq!(row.psi_l_rad.to_string(), sig6(p.tip_angle));
        assert_eq!(row.U_barr_mJ.to_string(), sig6(p.barrier * 1e3));
        assert_eq!(row.t_star_ms.to_string(), sig6(p.snap_time * 1e3));
    }
}

#[test]
fn zero_width_ranges_give_a_single_row() {
    let mut g = grid(SectionConvention::WidthCubed);
    g.half_length = AxisRange::new(0.15, 0.15, 0.005).unwrap();
    g.locking_displacement = AxisRange::new(0.02, 0.02, 0.001).unwrap();
    let rows = read_sweep_csv(sweep_csv(&sweep(&g).unwrap()).as_bytes(), Path::new("s.csv")).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!((rows[0].l_mm, rows[0].D_mm), (150.0, 20.0));
}

#[test]
fn trajectory_table_reads_back_exactly() {
    let config = RobotConfig::untethered();
    let run = run_gait(&config, 3.0 * config.period(), 1e-4).unwrap();
    let rows = read_trajectory_csv(trajectory_csv(&run.trajectory).as_bytes(), Path::new("t.csv")).unwrap();
    assert_eq!(rows.len(), run.trajectory.samples.len());
    for (row, s) in rows.iter().zip(&run.trajectory.samples) {
        assert_eq!((row.t_s, row.x_fore_m, row.y_fore_m), (s.t, s.x_fore, s.y_fore));
        assert_eq!((row.x_hind_m, row.y_hind_m, row.s_m), (s.x_hind, s.y_hind, s.s));
        assert_eq!((row.contact_fore == 1, row.contact_hind == 1), (s.contact_fore, s.contact_hind));
    }
}

#[test]
fn suite_table_reads_back() {
    let rows = experiment_suite(&cases());
    let table = read_suite_csv(suite_csv(&rows).as_bytes(), Path::new("suite.csv")).unwrap();
    assert_eq!(table.len(), rows.len());
    for (csv_row, row) in table.iter().zip(&rows) {
        assert_eq!(csv_row.label, row.label);
        assert_eq!(csv_row.substrate, row.substrate);
        assert_eq!(csv_row.freq_hz, row.frequency);
        match &row.outcome {
            Ok(s) => assert_eq!(csv_row.speed_mm_s.unwrap().to_string(), sig6(s.speed_mm_s)),
            Err(_) => assert_eq!(csv_row.speed_mm_s, None),
        }
    }
}

#[test]
fn readers_reject_foreign_headers() {
    let f = Path::new("x.csv");
    assert!(read_sweep_csv("l_mm,D_mm\n1,2\n".as_bytes(), f).is_err());
    assert!(read_trajectory_csv("t_s\n0\n".as_bytes(), f).is_err());
    assert!(read_suite_csv("".as_bytes(), f).is_err());
}

proptest! {
    #[test]
    fn six_digits_are_stable_and_close(x in -1e12f64..1e12) {
        let s = sig6(x);
        let back: f64 = s.parse().unwrap();
        prop_assert_eq!(sig6(back), s);
        prop_assert!((back - x).abs() <= 5e-6 * x.abs());
    }
}
