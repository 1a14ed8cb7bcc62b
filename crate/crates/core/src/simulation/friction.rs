use alloc::string::String;

use crate::error::positive;
use crate::Result;

/// Kinetic friction coefficients of the two foot materials on one substrate.
#[derive(Debug, Clone, PartialEq)]
pub struct SubstrateFriction {
    pub name: String,
    /// Coefficient when the foot slides forward (plastic side leading).
    pub mu_plastic: f64,
    /// Coefficient when the foot slides backward (rubber pad engaged).
    pub mu_rubber: f64,
}

impl SubstrateFriction {
    pub fn new(name: impl Into<String>, mu_plastic: f64, mu_rubber: f64) -> Result<Self> {
        let s = Self { name: name.into(), mu_plastic, mu_rubber };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        positive("mu_plastic", self.mu_plastic)?;
        positive("mu_rubber", self.mu_rubber)?;
        Ok(())
    }

    /// `mu_rubber / mu_plastic`.
    pub fn anisotropy(&self) -> f64 {
        self.mu_rubber / self.mu_plastic
    }

    pub fn wood() -> Self {
        Self { name: "wood".into(), mu_plastic: 0.25, mu_rubber: 0.80 }
    }

    pub fn glass() -> Self {
        Self { name: "glass".into(), mu_plastic: 0.20, mu_rubber: 0.65 }
    }

    pub fn marble() -> Self {
        Self { name: "marble".into(), mu_plastic: 0.30, mu_rubber: 0.75 }
    }

    /// Rough substrate on which the plastic side grips harder than the pad.
    pub fn concrete() -> Self {
        Self { name: "concrete".into(), mu_plastic: 0.60, mu_rubber: 0.55 }
    }

    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "wood" => Some(Self::wood()),
            "glass" => Some(Self::glass()),
            "marble" => Some(Self::marble()),
            "concrete" => Some(Self::concrete()),
            _ => None,
        }
    }

    /// Same substrate with the two coefficients exchanged.
    pub fn swapped(&self) -> Self {
        Self { name: self.name.clone(), mu_plastic: self.mu_rubber, mu_rubber: self.mu_plastic }
    }

    /// Coefficient for a foot sliding with velocity `slip` (m/s, +x forward).
    pub fn coefficient(&self, slip: f64) -> f64 {
        if slip > 0.0 {
            self.mu_plastic
        } else {
            self.mu_rubber
        }
    }
}

/// Regularized Coulomb friction on one foot.
///
/// `F = −μ(v)·N·tanh(v / v_eps)`, with `μ` chosen by the slip direction.
pub fn friction_force(normal: f64, substrate: &SubstrateFriction, slip_velocity: f64, v_eps: f64) -> f64 {
    if !(normal > 0.0) || slip_velocity == 0.0 {
        return 0.0;
    }
    -substrate.coefficient(slip_velocity) * normal * libm::tanh(slip_velocity / v_eps)
}

/// Velocity after one implicit friction update.
///
/// Solves `v = v_free − (dt/m)·μ N tanh(v/v_eps)` for `v`. The problem is
/// solved for a non-negative free velocity and mirrored otherwise, so a
/// mirrored input gives a bit-exactly mirrored output.
pub(crate) fn implicit_slip(
    v_free: f64,
    mu_forward: f64,
    mu_backward: f64,
    normal: f64,
    dt_over_mass: f64,
    v_eps: f64,
) -> f64 {
    if !(normal > 0.0) || v_free == 0.0 {
        return v_free;
    }
    if v_free < 0.0 {
        return -implicit_slip(-v_free, mu_backward, mu_forward, normal, dt_over_mass, v_eps);
    }
    // root of g(v) = v − v_free + a·tanh(v/v_eps) lies in (0, v_free]
    let a = dt_over_mass * mu_forward * normal;
    let g = |v: f64| v - v_free + a * libm::tanh(v / v_eps);
    let (mut lo, mut hi) = (0.0, v_free);
    let mut v = v_free.min(v_eps);
    for _ in 0..100 {
        let gv = g(v);
        if gv == 0.0 {
            return v;
        }
        if gv > 0.0 {
            hi = v;
        } else {
            lo = v;
        }
        let th = libm::tanh(v / v_eps);
        let dg = 1.0 + a * (1.0 - th * th) / v_eps;
        let mut next = v - gv / dg;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if libm::fabs(next - v) <= 1e-15 * v_free.max(v_eps) {
            return next;
        }
        v = next;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    const EPS: f64 = 1e-3;

    #[test]
    fn unloaded_foot_has_no_friction() {
        assert_eq!(friction_force(0.0, &SubstrateFriction::wood(), 0.3, EPS), 0.0);
    }

    #[test]
    fn isotropic_friction_is_odd() {
        let s = SubstrateFriction::new("iso", 0.4, 0.4).unwrap();
        for v in [1e-4, 1e-3, 0.02, 1.0] {
            assert_eq!(friction_force(2.0, &s, v, EPS), -friction_force(2.0, &s, -v, EPS));
        }
    }

    #[test]
    fn coulomb_ratio_at_high_slip() {
        let s = SubstrateFriction::wood();
        let fwd = friction_force(1.0, &s, 0.5, EPS);
        let back = friction_force(1.0, &s, -0.5, EPS);
        assert!(fwd < 0.0 && back > 0.0);
        assert!((back.abs() / fwd.abs() - s.mu_rubber / s.mu_plastic).abs() < 1e-12);
    }

    #[test]
    fn presets_are_anisotropic_except_concrete() {
        for s in [SubstrateFriction::wood(), SubstrateFriction::glass(), SubstrateFriction::marble()] {
            assert!(s.anisotropy() > 1.0);
        }
        assert!(SubstrateFriction::concrete().anisotropy() < 1.0);
        assert!(SubstrateFriction::new("bad", 0.0, 1.0).is_err());
    }

    #[test]
    fn implicit_update_satisfies_its_equation() {
        let (mu_f, mu_b, n, k) = (0.25, 0.8, 0.35, 1e-4 / 0.036);
        for v_free in [1e-6, 5e-4, 0.01, 0.3, -0.002, -0.4] {
            let v = implicit_slip(v_free, mu_f, mu_b, n, k, EPS);
            let mu = if v_free > 0.0 { mu_f } else { mu_b };
            let resid = v - v_free + k * mu * n * libm::tanh(v / EPS);
            assert!(resid.abs() < 1e-15, "{v_free}: {resid}");
            assert!(v.abs() <= v_free.abs() && v * v_free >= 0.0);
        }
    }

    #[test]
    fn implicit_update_is_mirror_exact() {
        for v_free in [3e-7, 0.0013, 0.21] {
            let a = implicit_slip(v_free, 0.25, 0.8, 0.4, 0.003, EPS);
            let b = implicit_slip(-v_free, 0.8, 0.25, 0.4, 0.003, EPS);
            assert_eq!(a, -b);
        }
    }
}
