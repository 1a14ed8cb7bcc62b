use alloc::vec::Vec;

use crate::error::positive;
use crate::{Error, Result, GRAVITY};

/// Load–displacement curve from a three-point bending test.
#[derive(Debug, Clone, PartialEq)]
pub struct BendingRecord {
    /// `(displacement mm, load N)`, displacement non-decreasing.
    samples: Vec<(f64, f64)>,
    /// Support span (mm).
    pub span: f64,
}

/// Support span of the bending rig (mm).
pub const DEFAULT_SPAN_MM: f64 = 180.0;

impl BendingRecord {
    pub fn new(samples: Vec<(f64, f64)>) -> Result<Self> {
        Self::with_span(samples, DEFAULT_SPAN_MM)
    }

    pub fn with_span(samples: Vec<(f64, f64)>, span: f64) -> Result<Self> {
        positive("span", span)?;
        if samples.len() < 5 {
            return Err(Error::Validation { field: "samples", reason: "need at least 5 samples" });
        }
        if samples.iter().any(|(d, f)| !(d.is_finite() && f.is_finite())) {
            return Err(Error::Validation { field: "samples", reason: "values must be finite" });
        }
        if samples.windows(2).any(|w| w[1].0 < w[0].0) {
            return Err(Error::Validation { field: "samples", reason: "displacements must be non-decreasing" });
        }
        Ok(Self { samples, span })
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    /// Central half of the displacement range.
    pub fn default_region(&self) -> (f64, f64) {
        let lo = self.samples[0].0;
        let hi = self.samples[self.samples.len() - 1].0;
        let quarter = 0.25 * (hi - lo);
        (lo + quarter, hi - quarter)
    }
}

/// Least-squares line `load = slope·disp + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StiffnessFit {
    /// N/mm
    pub slope: f64,
    /// Standard error of the slope (N/mm).
    pub slope_error: f64,
    /// N
    pub intercept: f64,
    pub samples_used: usize,
    pub region: (f64, f64),
}

/// Fits the slope over samples whose displacement lies in `region`
/// (inclusive), or over [`BendingRecord::default_region`] when `None`.
pub fn fit_stiffness(record: &BendingRecord, region: Option<(f64, f64)>) -> Result<StiffnessFit> {
    let region = region.unwrap_or_else(|| record.default_region());
    let pts: Vec<(f64, f64)> =
        record.samples.iter().copied().filter(|(d, _)| *d >= region.0 && *d <= region.1).collect();
    let n = pts.len();
    if n < 3 {
        return Err(Error::Validation { field: "region", reason: "needs at least 3 samples" });
    }
    let nf = n as f64;
    let mean_d = pts.iter().map(|p| p.0).sum::<f64>() / nf;
    let mean_f = pts.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mean_d) * (p.0 - mean_d)).sum();
    if !(sxx > 0.0) {
        return Err(Error::Validation { field: "region", reason: "displacements have zero variance" });
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mean_d) * (p.1 - mean_f)).sum();
    let slope = sxy / sxx;
    let intercept = mean_f - slope * mean_d;
    let ssr: f64 = pts
        .iter()
        .map(|p| {
            let r = p.1 - (intercept + slope * p.0);
            r * r
        })
        .sum();
    let slope_error = libm::sqrt(ssr / (nf - 2.0) / sxx);
    Ok(StiffnessFit { slope, slope_error, intercept, samples_used: n, region })
}

/// Area under the load–displacement curve by the trapezoid rule (mJ).
pub fn barrier_from_curve(record: &BendingRecord) -> f64 {
    record.samples.windows(2).map(|w| (w[1].0 - w[0].0) * 0.5 * (w[0].1 + w[1].1)).sum()
}

/// Sag of a body of `mass` kg on a support of stiffness `k` N/mm (mm).
pub fn static_deflection(mass: f64, k: f64) -> Result<f64> {
    positive("stiffness", k)?;
    if !(mass >= 0.0 && mass.is_finite()) {
        return Err(Error::Validation { field: "mass", reason: "must be non-negative" });
    }
    Ok(mass * GRAVITY / k)
}
