use alloc::vec::Vec;

use crate::error::positive;
use crate::{Error, Result};

use super::config::{GaitMode, RobotConfig};
use super::integrator::Well;

/// Stiffness of the end stops outside `[0, Δ]`, relative to the well
/// curvature `32·U_barr/Δ²`.
const WALL_STIFFNESS_FACTOR: f64 = 10.0;

fn wall_stiffness(config: &RobotConfig) -> f64 {
    let stroke = config.active_stroke();
    WALL_STIFFNESS_FACTOR * 32.0 * config.active_barrier() / (stroke * stroke)
}

fn wall_excess(config: &RobotConfig, s: f64) -> f64 {
    let stroke = config.active_stroke();
    if s < 0.0 {
        s
    } else if s > stroke {
        s - stroke
    } else {
        0.0
    }
}

/// Potential energy stored in the spine at coordinate `s` (J).
pub(crate) fn spine_energy(config: &RobotConfig, s: f64) -> f64 {
    let wells = match config.actuation.mode {
        GaitMode::SymmetricGallop => config.fore_landscape.energy(s) + config.rear_landscape.energy(s),
        GaitMode::RearOnly => config.rear_landscape.energy(s),
    };
    let e = wall_excess(config, s);
    wells + 0.5 * wall_stiffness(config) * e * e
}

fn spine_slope(config: &RobotConfig, s: f64) -> f64 {
    let wells = match config.actuation.mode {
        GaitMode::SymmetricGallop => config.fore_landscape.derivative(s) + config.rear_landscape.derivative(s),
        GaitMode::RearOnly => config.rear_landscape.derivative(s),
    };
    wells + wall_stiffness(config) * wall_excess(config, s)
}

/// Axial spine force `−dU/ds − c·ṡ` (N), positive toward flexion.
///
/// Outside `[0, Δ]` a stiff end stop adds a restoring term.
pub fn spine_force(config: &RobotConfig, s: f64, s_rate: f64) -> f64 {
    -spine_slope(config, s) - config.spine_damping * s_rate
}

/// A servo command: drive the spine toward `target` starting at `time`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToggleEvent {
    pub time: f64,
    pub target: Well,
}

/// Square-wave servo schedule over `[0, duration)`.
///
/// Commands alternate between flexion and extension every `1/(2f)`,
/// starting with flexion at `t = 0` (the robot rests in extension).
pub fn actuate(config: &RobotConfig, duration: f64) -> Result<Vec<ToggleEvent>> {
    positive("frequency", config.actuation.frequency)?;
    positive("duration", duration)?;
    if let Some(limit) = config.servo_energy_limit {
        let barrier = config.active_barrier();
        if limit < barrier {
            return Err(Error::ServoTooWeak { limit, barrier });
        }
    }
    let half = 0.5 / config.actuation.frequency;
    let mut events = Vec::new();
    let mut k = 0u32;
    loop {
        let time = half * f64::from(k);
        if time >= duration {
            break;
        }
        let target = if k.is_multiple_of(2) { Well::Flexion } else { Well::Extension };
        events.push(ToggleEvent { time, target });
        k += 1;
    }
    Ok(events)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate, Tolerance};

    #[test]
    fn stationary_points_carry_no_force() {
        let c = RobotConfig::untethered();
        let d = c.stroke();
        assert_eq!(spine_force(&c, 0.0, 0.0), 0.0);
        assert_eq!(spine_force(&c, d, 0.0), 0.0);
        assert!(spine_force(&c, 0.5 * d, 0.0).abs() < 1e-12);
    }

    #[test]
    fn damping_opposes_rate() {
        let c = RobotConfig::untethered();
        assert!(spine_force(&c, 0.0, 0.1) < 0.0);
        assert_eq!(spine_force(&c, 0.0, 0.1), -c.spine_damping * 0.1);
    }

    #[test]
    fn work_audit_over_the_stroke() {
        let c = RobotConfig::untethered();
        let d = c.stroke();
        let tol = Tolerance { relative: 1e-12, ..Tolerance::default() };
        let full = integrate(|s| spine_force(&c, s, 0.0), 0.0, d, tol).unwrap();
        let half = integrate(|s| spine_force(&c, s, 0.0), 0.0, 0.5 * d, tol).unwrap();
        assert!(full.abs() < 1e-14);
        assert!((half + c.active_barrier()).abs() < 1e-12 * c.active_barrier());
    }

    #[test]
    fn end_stops_push_back() {
        let c = RobotConfig::untethered();
        assert!(spine_force(&c, -1e-3, 0.0) > 0.0);
        assert!(spine_force(&c, c.stroke() + 1e-3, 0.0) < 0.0);
    }

    #[test]
    fn two_hertz_schedule() {
        let c = RobotConfig::untethered();
        let ev = actuate(&c, 1.0).unwrap();
        let times: Vec<f64> = ev.iter().map(|e| e.time).collect();
        assert_eq!(times, [0.0, 0.25, 0.5, 0.75]);
        assert_eq!(ev[0].target, Well::Flexion);
        assert_eq!(ev[1].target, Well::Extension);
    }

    #[test]
    fn half_hertz_toggles_once_per_second() {
        let mut c = RobotConfig::untethered();
        c.actuation.frequency = 0.5;
        assert_eq!(actuate(&c, 4.0).unwrap().len(), 4);
    }

    #[test]
    fn weak_servo_rejected() {
        let mut c = RobotConfig::untethered();
        c.servo_energy_limit = Some(0.5 * c.active_barrier());
        assert!(matches!(actuate(&c, 1.0), Err(Error::ServoTooWeak { .. })));
        c.servo_energy_limit = Some(c.active_barrier());
        assert!(actuate(&c, 1.0).is_ok());
    }
}
