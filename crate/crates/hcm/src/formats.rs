//! CSV tables written and read by the tool.
//!
//! Writers produce the exact bytes of a file so callers can write them
//! atomically; readers report the 1-based line of the first bad record.

use std::io::Read;
use std::path::Path;

use hcm_core::analysis::{BendingRecord, GaitTrace};
use hcm_core::design::SweepEntry;
use hcm_core::simulation::{SuiteRow, Trajectory};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const SWEEP_HEADER: &str = "l_mm,D_mm,psi_l_rad,U_barr_mJ,P_cr_N,t_star_ms";
pub const TRAJECTORY_HEADER: &str = "t_s,x_fore_m,y_fore_m,x_hind_m,y_hind_m,s_m,contact_fore,contact_hind";
pub const SUITE_HEADER: &str = "label,freq_hz,substrate,speed_mm_s,speed_bl_s,air_frac,energy_mJ";

/// `x` rounded to six significant digits, printed in its shortest form.
pub fn sig6(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.5e}").parse().expect("formatted float parses");
    rounded.to_string()
}

#[allow(non_snake_case)]
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub l_mm: f64,
    pub D_mm: f64,
    pub psi_l_rad: f64,
    pub U_barr_mJ: f64,
    pub P_cr_N: f64,
    pub t_star_ms: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRow {
    pub t_s: f64,
    pub x_fore_m: f64,
    pub y_fore_m: f64,
    pub x_hind_m: f64,
    pub y_hind_m: f64,
    pub s_m: f64,
    pub contact_fore: u8,
    pub contact_hind: u8,
}

/// A suite row; the numeric cells are empty when the run failed.
#[allow(non_snake_case)]
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteCsvRow {
    pub label: String,
    pub freq_hz: f64,
    pub substrate: String,
    pub speed_mm_s: Option<f64>,
    pub speed_bl_s: Option<f64>,
    pub air_frac: Option<f64>,
    pub energy_mJ: Option<f64>,
}

/// Successful sweep nodes, row-major, six significant digits. Failed nodes
/// are left out of the table (the command reports them separately).
pub fn sweep_csv(entries: &[SweepEntry]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for p in entries.iter().filter_map(|e| e.outcome.as_ref().ok()) {
        let cells = [
            p.half_length * 1e3,
            p.locking_displacement * 1e3,
            p.tip_angle,
            p.barrier * 1e3,
            p.critical_load,
            p.snap_time * 1e3,
        ];
        out.push_str(&cells.map(sig6).join(","));
        out.push('\n');
    }
    out
}

/// Every sample at full precision, so the table reads back exactly.
pub fn trajectory_csv(trajectory: &Trajectory) -> String {
    let mut out = String::from(TRAJECTORY_HEADER);
    out.push('\n');
    for s in &trajectory.samples {
        let line = format!(
            "{},{},{},{},{},{},{},{}\n",
            s.t,
            s.x_fore,
            s.y_fore,
            s.x_hind,
            s.y_hind,
            s.s,
            u8::from(s.contact_fore),
            u8::from(s.contact_hind)
        );
        out.push_str(&line);
    }
    out
}

pub fn suite_csv(rows: &[SuiteRow]) -> String {
    let mut out = String::from(SUITE_HEADER);
    out.push('\n');
    for row in rows {
        let numbers = match &row.outcome {
            Ok(s) => [s.speed_mm_s, s.speed_bl_s, s.air_fraction, s.energy_mj].map(sig6).join(","),
            Err(_) => ",,,".into(),
        };
        out.push_str(&format!("{},{},{},{}\n", quote(&row.label), sig6(row.frequency), quote(&row.substrate), numbers));
    }
    out
}

fn quote(field: &str) -> String {
    if field.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

fn reader<R: Read>(input: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new().trim(csv::Trim::All).comment(Some(b'#')).from_reader(input)
}

fn csv_error(file: &Path, err: &csv::Error) -> CliError {
    let line = err.position().map_or(1, |p| p.line());
    let message = match err.kind() {
        csv::ErrorKind::Deserialize { err, .. } => err.to_string(),
        _ => err.to_string(),
    };
    CliError::Csv { file: file.to_path_buf(), line, message }
}

fn at_line(file: &Path, line: u64, message: impl Into<String>) -> CliError {
    CliError::Csv { file: file.to_path_buf(), line, message: message.into() }
}

/// Reads a whole table of `T`, checking the header is exactly `expected`.
fn read_table<T: serde::de::DeserializeOwned, R: Read>(input: R, file: &Path, expected: &str) -> CliResult<Vec<T>> {
    let mut rdr = reader(input);
    let header = rdr.headers().map_err(|e| csv_error(file, &e))?.clone();
    let header_line = header.position().map_or(1, |p| p.line());
    if header.is_empty() {
        return Err(at_line(file, 1, "empty file"));
    }
    let got: Vec<&str> = header.iter().collect();
    if got.join(",") != expected {
        return Err(at_line(file, header_line, format!("expected header `{expected}`, found `{}`", got.join(","))));
    }
    rdr.deserialize().map(|r| r.map_err(|e| csv_error(file, &e))).collect()
}

pub fn read_sweep_csv<R: Read>(input: R, file: &Path) -> CliResult<Vec<SweepRow>> {
    read_table(input, file, SWEEP_HEADER)
}

pub fn read_trajectory_csv<R: Read>(input: R, file: &Path) -> CliResult<Vec<TrajectoryRow>> {
    read_table(input, file, TRAJECTORY_HEADER)
}

pub fn read_suite_csv<R: Read>(input: R, file: &Path) -> CliResult<Vec<SuiteCsvRow>> {
    read_table(input, file, SUITE_HEADER)
}

/// `disp_mm,load_N` pairs of a three-point bending test.
pub fn read_bending_csv<R: Read>(input: R, file: &Path, span_mm: f64) -> CliResult<BendingRecord> {
    let mut rdr = reader(input);
    let header = rdr.headers().map_err(|e| csv_error(file, &e))?.clone();
    let header_line = header.position().map_or(1, |p| p.line());
    if header.is_empty() {
        return Err(at_line(file, 1, "empty file"));
    }
    if header.iter().collect::<Vec<_>>() != ["disp_mm", "load_N"] {
        return Err(at_line(file, header_line, "expected header `disp_mm,load_N`"));
    }
    let mut samples: Vec<(f64, f64)> = Vec::new();
    let mut last_line = header_line;
    for record in rdr.records() {
        let record = record.map_err(|e| csv_error(file, &e))?;
        last_line = record.position().map_or(last_line + 1, |p| p.line());
        let disp = number(&record, &header, 0, file, last_line)?;
        let load = number(&record, &header, 1, file, last_line)?;
        if samples.last().is_some_and(|&(d, _)| disp < d) {
            return Err(at_line(file, last_line, "displacement decreases"));
        }
        samples.push((disp, load));
    }
    BendingRecord::with_span(samples, span_mm).map_err(|e| at_line(file, last_line, e.to_string()))
}

/// Cell `i` of `record` as a finite number.
fn number(record: &csv::StringRecord, header: &csv::StringRecord, i: usize, file: &Path, line: u64) -> CliResult<f64> {
    let text = record.get(i).unwrap_or("");
    text.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| at_line(file, line, format!("column `{}`: `{text}` is not a number", &header[i])))
}

/// `t_s,x_mm[,y_mm][,psi1_deg,psi2_deg]`; columns are matched by name.
pub fn read_trace_csv<R: Read>(input: R, file: &Path) -> CliResult<GaitTrace> {
    let mut rdr = reader(input);
    let header = rdr.headers().map_err(|e| csv_error(file, &e))?.clone();
    let header_line = header.position().map_or(1, |p| p.line());
    if header.is_empty() {
        return Err(at_line(file, 1, "empty file"));
    }
    let column = |name: &str| header.iter().position(|h| h == name);
    let known = ["t_s", "x_mm", "y_mm", "psi1_deg", "psi2_deg"];
    if let Some(h) = header.iter().find(|h| !known.contains(h)) {
        return Err(at_line(file, header_line, format!("unknown column `{h}`")));
    }
    let (Some(ti), Some(xi)) = (column("t_s"), column("x_mm")) else {
        return Err(at_line(file, header_line, "header must contain t_s and x_mm"));
    };
    let yi = column("y_mm");
    let psi = match (column("psi1_deg"), column("psi2_deg")) {
        (Some(a), Some(b)) => Some((a, b)),
        (None, None) => None,
        _ => return Err(at_line(file, header_line, "psi1_deg and psi2_deg must appear together")),
    };

    let mut trace = GaitTrace::default();
    let mut y = Vec::new();
    let (mut p1, mut p2) = (Vec::new(), Vec::new());
    for record in rdr.records() {
        let record = record.map_err(|e| csv_error(file, &e))?;
        let line = record.position().map_or(0, |p| p.line());
        let cell = |i: usize| number(&record, &header, i, file, line);
        let t = cell(ti)?;
        if let Some(&last) = trace.t.last() {
            if t <= last {
                return Err(at_line(file, line, "time must be strictly increasing"));
            }
        }
        trace.t.push(t);
        trace.x.push(cell(xi)? / 1e3);
        if let Some(i) = yi {
            y.push(cell(i)? / 1e3);
        }
        if let Some((a, b)) = psi {
            p1.push(cell(a)?);
            p2.push(cell(b)?);
        }
    }
    if trace.t.len() < 2 {
        return Err(at_line(file, header_line + trace.t.len() as u64, "need at least 2 samples"));
    }
    trace.y = yi.map(|_| y);
    trace.tip_angles = psi.map(|_| (p1, p2));
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_significant_digits() {
        assert_eq!(sig6(0.1187255400313475), "0.118726");
        assert_eq!(sig6(90.12345678), "90.1235");
        assert_eq!(sig6(80.0), "80");
        assert_eq!(sig6(149.9223251555971), "149.922");
        assert_eq!(sig6(-2.5e-7), "-0.00000025");
    }

    #[test]
    fn bending_errors_carry_line_numbers() {
        let f = Path::new("k.csv");
        let err = read_bending_csv("disp_mm,load_N\n0,0\n1,0.2\nx,0.4\n".as_bytes(), f, 180.0).unwrap_err();
        assert!(matches!(err, CliError::Csv { line: 4, .. }), "{err}");
        let err = read_bending_csv("disp_mm,load_N\n0,0\n2,0.2\n1,0.4\n3,1\n4,1\n".as_bytes(), f, 180.0).unwrap_err();
        assert!(matches!(err, CliError::Csv { line: 4, .. }), "{err}");
        let err = read_bending_csv("".as_bytes(), f, 180.0).unwrap_err();
        assert!(matches!(err, CliError::Csv { line: 1, .. }), "{err}");
        let err = read_bending_csv("load_N,disp_mm\n".as_bytes(), f, 180.0).unwrap_err();
        assert!(matches!(err, CliError::Csv { line: 1, .. }), "{err}");
    }

    #[test]
    fn trace_columns_are_optional() {
        let f = Path::new("t.csv");
        let trace = read_trace_csv("t_s,x_mm\n0,0\n1,313\n".as_bytes(), f).unwrap();
        assert_eq!(trace.x, vec![0.0, 0.313]);
        assert!(trace.y.is_none() && trace.tip_angles.is_none());
        let trace = read_trace_csv("t_s,x_mm,y_mm,psi1_deg,psi2_deg\n0,0,0,1,2\n1,1,1,3,4\n".as_bytes(), f).unwrap();
        assert_eq!(trace.tip_angles, Some((vec![1.0, 3.0], vec![2.0, 4.0])));
        let err = read_trace_csv("t_s,x_mm\n0,0\n0,1\n".as_bytes(), f).unwrap_err();
        assert!(matches!(err, CliError::Csv { line: 3, .. }), "{err}");
        let err = read_trace_csv("t_s,x_mm,psi1_deg\n0,0,0\n1,1,1\n".as_bytes(), f).unwrap_err();
        assert!(matches!(err, CliError::Csv { line: 1, .. }), "{err}");
    }

    #[test]
    fn labels_with_commas_survive_a_round_trip() {
        use hcm_core::simulation::SuiteSummary;
        let rows = vec![SuiteRow {
            label: "wood, 2 Hz".into(),
            frequency: 2.0,
            substrate: "wood".into(),
            outcome: Ok(SuiteSummary {
                speed_mm_s: 1.0,
                speed_bl_s: 0.005,
                air_fraction: 0.1,
                energy_mj: 3.0,
                displacement: 0.0,
            }),
        }];
        let back = read_suite_csv(suite_csv(&rows).as_bytes(), Path::new("s.csv")).unwrap();
        assert_eq!(back[0].label, "wood, 2 Hz");
        assert_eq!(back[0].speed_bl_s, Some(0.005));
    }
}
