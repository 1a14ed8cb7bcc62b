use alloc::vec::Vec;

use crate::error::positive;
use crate::simulation::Trajectory;
use crate::{Error, Result};

/// Height above the resting baseline that counts as off the ground for
/// traces without contact flags (m).
pub const AIR_THRESHOLD: f64 = 1e-3;

/// A motion trace, either simulated or digitized from video.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GaitTrace {
    /// s, strictly increasing
    pub t: Vec<f64>,
    /// Horizontal position (m).
    pub x: Vec<f64>,
    /// Vertical position (m).
    pub y: Option<Vec<f64>>,
    /// `true` while at least one foot touches the ground. Takes precedence
    /// over `y` for air-phase detection.
    pub grounded: Option<Vec<bool>>,
    /// Tip angles of the two spine ends (deg).
    pub tip_angles: Option<(Vec<f64>, Vec<f64>)>,
    /// Actuation period (s), enables stride segmentation.
    pub period: Option<f64>,
}

impl GaitTrace {
    pub fn new(t: Vec<f64>, x: Vec<f64>) -> Self {
        Self { t, x, ..Self::default() }
    }

    /// Midpoint of the two bodies, grounded unless both feet are airborne.
    pub fn from_trajectory(traj: &Trajectory) -> Self {
        let s = &traj.samples;
        Self {
            t: s.iter().map(|p| p.t).collect(),
            x: s.iter().map(|p| 0.5 * (p.x_fore + p.x_hind)).collect(),
            y: Some(s.iter().map(|p| 0.5 * (p.y_fore + p.y_hind)).collect()),
            grounded: Some(s.iter().map(|p| p.contact_fore || p.contact_hind).collect()),
            tip_angles: None,
            period: Some(traj.config.period()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.t.len();
        if n < 2 {
            return Err(Error::Validation { field: "t", reason: "need at least 2 samples" });
        }
        if self.t.windows(2).any(|w| !(w[1] > w[0])) || self.t.iter().any(|v| !v.is_finite()) {
            return Err(Error::Validation { field: "t", reason: "timestamps must be finite and strictly increasing" });
        }
        let same = |len: usize| len == n;
        if !same(self.x.len())
            || !self.y.as_ref().is_none_or(|v| same(v.len()))
            || !self.grounded.as_ref().is_none_or(|v| same(v.len()))
            || !self.tip_angles.as_ref().is_none_or(|(a, b)| same(a.len()) && same(b.len()))
        {
            return Err(Error::Validation { field: "channels", reason: "every channel needs one value per timestamp" });
        }
        if let Some(p) = self.period {
            positive("period", p)?;
        }
        Ok(())
    }

    pub fn duration(&self) -> f64 {
        self.t[self.t.len() - 1] - self.t[0]
    }

    fn baseline(&self) -> Option<f64> {
        self.y.as_ref().map(|y| y.iter().copied().fold(f64::INFINITY, f64::min))
    }
}

/// Scalar gait summary. Optional metrics are `None` when the trace lacks the
/// channel they need; `missing` lists them.
#[derive(Debug, Clone, PartialEq)]
pub struct GaitMetrics {
    /// mm/s
    pub mean_speed: f64,
    /// Body lengths per second.
    pub speed_bl: Option<f64>,
    /// Mean advance per actuation period (mm).
    pub stride_length: Option<f64>,
    pub air_time_fraction: Option<f64>,
    /// Largest tip angular speed over both ends (deg/s).
    pub peak_tip_angular_velocity: Option<f64>,
    pub missing: Vec<&'static str>,
}

/// Off-ground intervals `(start, end)` in seconds.
///
/// With contact flags an interval spans the first to the last airborne
/// sample. From heights alone, a sample is airborne when it is more than
/// `threshold` above the lowest point of the trace, and each interval is
/// widened to the linearly interpolated threshold crossings on either side.
pub fn air_intervals(trace: &GaitTrace, threshold: f64) -> Option<Vec<(f64, f64)>> {
    let t = &trace.t;
    let mut out = Vec::new();
    if let Some(flags) = &trace.grounded {
        let mut i = 0;
        while i < flags.len() {
            if flags[i] {
                i += 1;
                continue;
            }
            let start = i;
            while i + 1 < flags.len() && !flags[i + 1] {
                i += 1;
            }
            out.push((t[start], t[i]));
            i += 1;
        }
        return Some(out);
    }
    let y = trace.y.as_ref()?;
    let level = trace.baseline()? + threshold;
    let crossing = |a: usize, b: usize| {
        let frac = (level - y[a]) / (y[b] - y[a]);
        t[a] + frac * (t[b] - t[a])
    };
    let mut i = 0;
    while i < y.len() {
        if y[i] <= level {
            i += 1;
            continue;
        }
        let first = i;
        while i + 1 < y.len() && y[i + 1] > level {
            i += 1;
        }
        let start = if first > 0 { crossing(first - 1, first) } else { t[first] };
        let end = if i + 1 < y.len() { crossing(i, i + 1) } else { t[i] };
        out.push((start, end));
        i += 1;
    }
    Some(out)
}

/// Angular velocity by central differences, one-sided at the ends.
pub fn angular_velocity(t: &[f64], angle: &[f64]) -> Vec<f64> {
    let n = t.len();
    (0..n)
        .map(|i| {
            let (a, b) = if i == 0 {
                (0, 1.min(n - 1))
            } else if i + 1 == n {
                (i - 1, i)
            } else {
                (i - 1, i + 1)
            };
            (angle[b] - angle[a]) / (t[b] - t[a])
        })
        .collect()
}

fn interpolate(t: &[f64], v: &[f64], at: f64) -> f64 {
    let j = t.partition_point(|&ti| ti <= at);
    if j == 0 {
        return v[0];
    }
    if j >= t.len() {
        return v[t.len() - 1];
    }
    let (a, b) = (j - 1, j);
    v[a] + (v[b] - v[a]) * (at - t[a]) / (t[b] - t[a])
}

/// Speed, stride, air time and tip angular velocity of a trace.
/// `body_length` is in metres.
pub fn gait_metrics(trace: &GaitTrace, body_length: f64) -> Result<GaitMetrics> {
    trace.validate()?;
    positive("body_length", body_length)?;
    let n = trace.t.len();
    let duration = trace.duration();
    let mean_speed = (trace.x[n - 1] - trace.x[0]) / duration * 1e3;
    let mut missing = Vec::new();

    let stride_length = match trace.period {
        Some(p) => {
            let periods = libm::floor(duration / p * (1.0 + 1e-12));
            if periods >= 1.0 {
                let end = trace.t[0] + periods * p;
                Some((interpolate(&trace.t, &trace.x, end) - trace.x[0]) / periods * 1e3)
            } else {
                missing.push("stride_length");
                None
            }
        }
        None => {
            missing.push("stride_length");
            None
        }
    };

    let air_time_fraction = match air_intervals(trace, AIR_THRESHOLD) {
        Some(iv) => Some((iv.iter().map(|(a, b)| b - a).sum::<f64>() / duration).clamp(0.0, 1.0)),
        None => {
            missing.push("air_time_fraction");
            None
        }
    };

    let peak_tip_angular_velocity = match &trace.tip_angles {
        Some((a, b)) => Some(
            angular_velocity(&trace.t, a)
                .into_iter()
                .chain(angular_velocity(&trace.t, b))
                .map(libm::fabs)
                .fold(0.0, f64::max),
        ),
        None => {
            missing.push("peak_tip_angular_velocity");
            None
        }
    };

    Ok(GaitMetrics {
        mean_speed,
        speed_bl: Some(mean_speed / (body_length * 1e3)),
        stride_length,
        air_time_fraction,
        peak_tip_angular_velocity,
        missing,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpMetrics {
    /// Longest off-ground interval (s).
    pub air_time: f64,
    /// Highest point of that interval above the resting baseline (m).
    pub apex_height: f64,
}

/// Longest hop of a trace; `threshold` (m) as in [`air_intervals`].
pub fn jump_metrics(trace: &GaitTrace, threshold: f64) -> Result<JumpMetrics> {
    trace.validate()?;
    let y = trace.y.as_ref().ok_or(Error::Validation { field: "y", reason: "jump metrics need a height channel" })?;
    let intervals = air_intervals(trace, threshold).unwrap_or_default();
    let baseline = trace.baseline().unwrap_or(0.0);
    let mut best = JumpMetrics { air_time: 0.0, apex_height: 0.0 };
    for (a, b) in intervals {
        let dur = b - a;
        if dur > best.air_time {
            let apex =
                trace.t.iter().zip(y).filter(|(t, _)| **t >= a && **t <= b).map(|(_, y)| *y).fold(baseline, f64::max);
            best = JumpMetrics { air_time: dur, apex_height: apex - baseline };
        }
    }
    Ok(best)
}
