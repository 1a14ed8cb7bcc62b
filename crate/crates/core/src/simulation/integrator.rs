use alloc::vec::Vec;

use crate::error::positive;
use crate::{Error, Result, GRAVITY};

use super::config::{GaitMode, RobotConfig, SERVO_RELEASE_FRACTION};
use super::friction::{friction_force, implicit_slip};
use super::spine::{actuate, spine_energy, spine_force};

/// The two stable spine states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Well {
    Extension,
    Flexion,
}

/// One point body. Horizontal position is `anchor + offset`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BodyState {
    /// Starting x position (m).
    pub anchor: f64,
    /// Horizontal displacement from `anchor` (m).
    pub offset: f64,
    /// Height of the foot above the ground (m); negative while the ground
    /// spring is compressed.
    pub y: f64,
    pub vx: f64,
    pub vy: f64,
}

impl BodyState {
    pub fn x(&self) -> f64 {
        self.anchor + self.offset
    }

    pub fn in_contact(&self) -> bool {
        self.y < 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ServoState {
    pub target: Well,
    /// True while the servo is still pushing the spine toward `target`.
    pub driving: bool,
    pub engaged_at: f64,
}

/// Running work totals (J). Works done on the system are positive.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EnergyLedger {
    /// Mechanical energy (kinetic + spine + gravity) at the start.
    pub initial: f64,
    pub servo_work: f64,
    pub lift_work: f64,
    pub friction_work: f64,
    pub damping_work: f64,
    /// Work of the ground normal force, spring and damper together.
    pub contact_work: f64,
}

impl EnergyLedger {
    pub fn injected(&self) -> f64 {
        self.servo_work + self.lift_work
    }

    /// Friction, spine damping and ground contact losses (positive).
    pub fn dissipated(&self) -> f64 {
        -(self.friction_work + self.damping_work + self.contact_work)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimState {
    pub time: f64,
    pub fore: BodyState,
    pub hind: BodyState,
    pub servo: ServoState,
    pub ledger: EnergyLedger,
}

impl SimState {
    /// Both feet resting on the ground spring with the spine in extension.
    pub fn at_rest(config: &RobotConfig) -> Self {
        let k = config.contact.stiffness;
        let body = |anchor: f64, mass: f64| BodyState { anchor, offset: 0.0, y: -mass * GRAVITY / k, vx: 0.0, vy: 0.0 };
        let mut state = Self {
            time: 0.0,
            fore: body(config.body_length, config.fore_mass()),
            hind: body(0.0, config.hind_mass()),
            servo: ServoState { target: Well::Extension, driving: false, engaged_at: 0.0 },
            ledger: EnergyLedger::default(),
        };
        state.ledger.initial = state.mechanical_energy(config);
        state
    }

    /// Spine coordinate `s`, with `x_fore − x_hind = L − s` when the anchors
    /// are `L` apart.
    pub fn spine(&self) -> f64 {
        self.hind.offset - self.fore.offset
    }

    pub fn spine_rate(&self) -> f64 {
        self.hind.vx - self.fore.vx
    }

    /// Midpoint of the two bodies' displacements (m).
    pub fn center_offset(&self) -> f64 {
        0.5 * (self.fore.offset + self.hind.offset)
    }

    pub fn kinetic_energy(&self, config: &RobotConfig) -> f64 {
        let ke = |b: &BodyState, m: f64| 0.5 * m * (b.vx * b.vx + b.vy * b.vy);
        ke(&self.fore, config.fore_mass()) + ke(&self.hind, config.hind_mass())
    }

    /// Spine plus gravitational potential energy. The ground spring is
    /// accounted through `contact_work`.
    pub fn potential_energy(&self, config: &RobotConfig) -> f64 {
        spine_energy(config, self.spine())
            + GRAVITY * (config.fore_mass() * self.fore.y + config.hind_mass() * self.hind.y)
    }

    pub fn mechanical_energy(&self, config: &RobotConfig) -> f64 {
        self.kinetic_energy(config) + self.potential_energy(config)
    }

    /// `E_now − E_initial − (all work done)`; zero for exact bookkeeping.
    pub fn audit_residual(&self, config: &RobotConfig) -> f64 {
        let l = &self.ledger;
        self.mechanical_energy(config) - l.initial - (l.injected() - l.dissipated())
    }

    /// Starts driving the spine toward `target`.
    pub fn toggle(&mut self, target: Well) {
        self.servo = ServoState { target, driving: true, engaged_at: self.time };
    }
}

fn normal_force(config: &RobotConfig, body: &BodyState, mass: f64) -> f64 {
    if !body.in_contact() {
        return 0.0;
    }
    let k = config.contact.stiffness;
    let c = 2.0 * config.contact.damping_ratio * libm::sqrt(k * mass);
    (-k * body.y - c * body.vy).max(0.0)
}

struct BodyUpdate {
    body: BodyState,
    friction_work: f64,
    contact_work: f64,
    lift_work: f64,
}

fn advance_body(config: &RobotConfig, body: &BodyState, mass: f64, push: f64, lift: f64, dt: f64) -> BodyUpdate {
    let normal = normal_force(config, body, mass);
    // the spine can only push off the ground, but presses down at any height
    let lift = if body.in_contact() || lift < 0.0 { lift } else { 0.0 };
    let vy = body.vy + (normal + lift - mass * GRAVITY) / mass * dt;
    let free = body.vx + push / mass * dt;
    let sub = &config.substrate;
    let vx = implicit_slip(free, sub.mu_plastic, sub.mu_rubber, normal, dt / mass, config.stiction_velocity);
    let friction = friction_force(normal, sub, vx, config.stiction_velocity);
    // Work uses the mean of the old and new velocities: that is the exact
    // power delivered by the velocity update, so the ledger matches the
    // kinetic energy change step by step.
    let mean_vx = 0.5 * (body.vx + vx) * dt;
    let mean_vy = 0.5 * (body.vy + vy) * dt;
    BodyUpdate {
        body: BodyState { anchor: body.anchor, offset: body.offset + vx * dt, y: body.y + vy * dt, vx, vy },
        friction_work: friction * mean_vx,
        contact_work: normal * mean_vy,
        lift_work: lift * mean_vy,
    }
}

/// Advances the state by one semi-implicit Euler step.
///
/// Velocities are updated first from forces at the current positions (with
/// friction treated implicitly), then positions from the new velocities.
pub fn step(state: &SimState, config: &RobotConfig, dt: f64) -> Result<SimState> {
    positive("dt", dt)?;
    if dt > config.snap_time / 20.0 {
        return Err(Error::Validation { field: "dt", reason: "must resolve the snap: dt <= t*/20" });
    }
    let s = state.spine();
    let s_rate = state.spine_rate();
    let stroke = config.active_stroke();

    let mut servo = state.servo;
    if servo.driving {
        let reached = match servo.target {
            Well::Flexion => s >= SERVO_RELEASE_FRACTION * stroke,
            Well::Extension => s <= (1.0 - SERVO_RELEASE_FRACTION) * stroke,
        };
        if reached || state.time - servo.engaged_at >= config.snap_time {
            servo.driving = false;
        }
    }
    let servo_force = if servo.driving {
        match servo.target {
            Well::Flexion => config.servo_force(),
            Well::Extension => -config.servo_force(),
        }
    } else {
        0.0
    };
    let axial = spine_force(config, s, s_rate) + servo_force;

    let flexing = s_rate * if s_rate > 0.0 { config.lift_gain } else { config.press_gain };
    let (fore_lift, hind_lift) = match config.actuation.mode {
        GaitMode::SymmetricGallop => (flexing * config.fore_mass(), flexing * config.hind_mass()),
        GaitMode::RearOnly => (0.0, flexing * config.hind_mass()),
    };

    // positive axial force shortens the spine: fore body pushed back, hind forward
    let fore = advance_body(config, &state.fore, config.fore_mass(), -axial, fore_lift, dt);
    let hind = advance_body(config, &state.hind, config.hind_mass(), axial, hind_lift, dt);

    let ds = 0.5 * (s_rate + (hind.body.vx - fore.body.vx)) * dt;
    let mut ledger = state.ledger;
    ledger.servo_work += servo_force * ds;
    ledger.damping_work += -config.spine_damping * s_rate * ds;
    ledger.friction_work += fore.friction_work + hind.friction_work;
    ledger.contact_work += fore.contact_work + hind.contact_work;
    ledger.lift_work += fore.lift_work + hind.lift_work;

    let next = SimState { time: state.time + dt, fore: fore.body, hind: hind.body, servo, ledger };
    let gain = next.mechanical_energy(config) - ledger.initial;
    let floor = 1e-9 + 1e-6 * libm::fabs(ledger.initial);
    if !gain.is_finite() || gain > 2.0 * ledger.injected() + floor {
        return Err(Error::Instability { time: next.time, energy_gain: gain, injected: ledger.injected() });
    }
    Ok(next)
}

/// One decimated output sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub x_fore: f64,
    pub y_fore: f64,
    pub x_hind: f64,
    pub y_hind: f64,
    pub s: f64,
    pub contact_fore: bool,
    pub contact_hind: bool,
    /// Midpoint displacement since the start (m).
    pub center_offset: f64,
    /// Energy bookkeeping residual at this sample (J).
    pub audit_residual: f64,
    /// Energy injected so far (J).
    pub injected: f64,
}

impl Sample {
    fn of(state: &SimState, config: &RobotConfig) -> Self {
        Self {
            t: state.time,
            x_fore: state.fore.x(),
            y_fore: state.fore.y,
            x_hind: state.hind.x(),
            y_hind: state.hind.y,
            s: state.spine(),
            contact_fore: state.fore.in_contact(),
            contact_hind: state.hind.in_contact(),
            center_offset: state.center_offset(),
            audit_residual: state.audit_residual(config),
            injected: state.ledger.injected(),
        }
    }
}

/// Uniformly sampled simulation output.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    /// Time between samples (s): the step size times the decimation factor.
    pub sample_period: f64,
    pub config: RobotConfig,
}

impl Trajectory {
    /// Net midpoint displacement over the run (m).
    pub fn net_displacement(&self) -> f64 {
        match (self.samples.first(), self.samples.last()) {
            (Some(a), Some(b)) => b.center_offset - a.center_offset,
            _ => 0.0,
        }
    }

    pub fn duration(&self) -> f64 {
        match (self.samples.first(), self.samples.last()) {
            (Some(a), Some(b)) => b.t - a.t,
            _ => 0.0,
        }
    }

    /// Largest relative energy-audit residual over all samples.
    ///
    /// The crawler starts at rest in a well, so its initial energy is zero and
    /// cannot serve as the scale. Each residual is divided instead by the
    /// energy injected so far, floored at the active snap barrier so the first
    /// few milliseconds of a stroke are not judged against a vanishing scale.
    pub fn max_audit_error(&self) -> f64 {
        let floor = self.config.active_barrier();
        self.samples.iter().map(|s| libm::fabs(s.audit_residual) / s.injected.max(floor)).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaitRun {
    pub trajectory: Trajectory,
    pub final_state: SimState,
}

impl GaitRun {
    pub fn injected_energy(&self) -> f64 {
        self.final_state.ledger.injected()
    }
}

/// Output sample rate of [`run_gait`] (Hz).
pub const OUTPUT_RATE: f64 = 1000.0;

/// Integrates the crawler from the extension rest state for `duration`
/// seconds with the servo schedule of [`actuate`].
pub fn run_gait(config: &RobotConfig, duration: f64, dt: f64) -> Result<GaitRun> {
    config.validate()?;
    positive("dt", dt)?;
    if dt > config.snap_time / 20.0 {
        return Err(Error::Validation { field: "dt", reason: "must resolve the snap: dt <= t*/20" });
    }
    if !(duration >= 3.0 * config.period() * (1.0 - 1e-12)) {
        return Err(Error::Validation { field: "duration", reason: "must cover at least three actuation periods" });
    }
    let events = actuate(config, duration)?;
    let steps = libm::round(duration / dt) as u64;
    let decimation = (libm::round(1.0 / (OUTPUT_RATE * dt)) as u64).max(1);

    let mut state = SimState::at_rest(config);
    let mut samples = Vec::with_capacity((steps / decimation) as usize + 1);
    samples.push(Sample::of(&state, config));
    let mut next_event = 0;
    for i in 0..steps {
        let t = dt * i as f64;
        while next_event < events.len() && events[next_event].time <= t + 0.5 * dt {
            state.toggle(events[next_event].target);
            next_event += 1;
        }
        state = step(&state, config, dt)?;
        state.time = dt * (i + 1) as f64;
        if (i + 1) % decimation == 0 {
            samples.push(Sample::of(&state, config));
        }
    }
    Ok(GaitRun {
        trajectory: Trajectory { samples, sample_period: dt * decimation as f64, config: config.clone() },
        final_state: state,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulation::SubstrateFriction;

    #[test]
    fn rest_state_is_an_equilibrium() {
        let config = RobotConfig::untethered();
        let start = SimState::at_rest(&config);
        let mut state = start;
        for _ in 0..1000 {
            state = step(&state, &config, 1e-4).unwrap();
        }
        for (a, b) in [(start.fore, state.fore), (start.hind, state.hind)] {
            assert!((a.x() - b.x()).abs() < 1e-12);
            assert!((a.y - b.y).abs() < 1e-12);
            assert!(b.vx.abs() < 1e-12 && b.vy.abs() < 1e-12);
        }
    }

    #[test]
    fn airborne_bodies_follow_a_parabola() {
        let config = RobotConfig::untethered();
        let mut state = SimState::at_rest(&config);
        let (y0, v0) = (0.05, 1.2);
        for body in [&mut state.fore, &mut state.hind] {
            body.y = y0;
            body.vy = v0;
        }
        state.ledger.initial = state.mechanical_energy(&config);
        let mut apex = y0;
        while state.fore.vy > 0.0 {
            state = step(&state, &config, 1e-4).unwrap();
            apex = apex.max(state.fore.y);
        }
        let expected = v0 * v0 / (2.0 * GRAVITY);
        assert!(((apex - y0) - expected).abs() / expected < 0.01);
        assert_eq!(state.fore.offset, 0.0);
    }

    #[test]
    fn isotropic_friction_goes_nowhere() {
        let mut config = RobotConfig::untethered();
        config.substrate = SubstrateFriction::new("iso", 0.5, 0.5).unwrap();
        let run = run_gait(&config, 10.0 * config.period(), 1e-4).unwrap();
        assert!(run.trajectory.net_displacement().abs() < 1e-3);
    }

    #[test]
    fn swapped_friction_mirrors_the_run() {
        let config = RobotConfig::untethered();
        let mut mirrored = config.clone();
        mirrored.substrate = config.substrate.swapped();
        let a = run_gait(&config, 1.5, 1e-4).unwrap().trajectory.net_displacement();
        let b = run_gait(&mirrored, 1.5, 1e-4).unwrap().trajectory.net_displacement();
        assert!(a > 0.0);
        assert_eq!(a, -b);
    }

    #[test]
    fn energy_is_accounted_for() {
        let run = run_gait(&RobotConfig::untethered(), 1.5, 1e-4).unwrap();
        assert!(run.trajectory.max_audit_error() < 0.01);
        assert!(run.injected_energy() > 0.0);
        let ledger = run.final_state.ledger;
        assert!(ledger.dissipated() > 0.0);
    }

    #[test]
    fn runaway_energy_is_reported() {
        let config = RobotConfig::untethered();
        let mut state = SimState::at_rest(&config);
        state.ledger.initial -= 1.0;
        assert!(matches!(step(&state, &config, 1e-4), Err(Error::Instability { .. })));
    }

    #[test]
    fn runs_are_deterministic() {
        let config = RobotConfig::tethered();
        let a = run_gait(&config, 1.5, 1e-4).unwrap();
        let b = run_gait(&config, 1.5, 1e-4).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.trajectory.samples.len(), 1501);
        assert!((a.trajectory.sample_period - 1e-3).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_inputs() {
        let config = RobotConfig::untethered();
        assert!(run_gait(&config, 1.0, 1e-4).is_err());
        assert!(run_gait(&config, 2.0, 0.02).is_err());
        assert!(run_gait(&config, 2.0, -1e-4).is_err());
    }
}
