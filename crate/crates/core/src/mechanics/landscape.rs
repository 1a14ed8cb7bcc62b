use crate::error::positive;
use crate::Result;

/// Symmetric double-well potential of the spine.
///
/// `U(s) = 16·U_barr·s²(s − Δ)²/Δ⁴` on `s ∈ [0, Δ]`: the extension well sits
/// at `s = 0`, the flexion well at `s = Δ` and the barrier top at `Δ/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyLandscape {
    /// `U_barr` (J).
    pub barrier: f64,
    /// Flexion–extension length change `Δ` (m).
    pub stroke: f64,
}

pub fn build_landscape(barrier: f64, stroke: f64) -> Result<EnergyLandscape> {
    positive("barrier", barrier)?;
    positive("stroke", stroke)?;
    Ok(EnergyLandscape { barrier, stroke })
}

impl EnergyLandscape {
    pub fn extension_well(&self) -> f64 {
        0.0
    }

    pub fn flexion_well(&self) -> f64 {
        self.stroke
    }

    pub fn barrier_position(&self) -> f64 {
        0.5 * self.stroke
    }

    fn scale(&self) -> f64 {
        let d2 = self.stroke * self.stroke;
        16.0 * self.barrier / (d2 * d2)
    }

    pub fn energy(&self, s: f64) -> f64 {
        let w = s * (s - self.stroke);
        self.scale() * w * w
    }

    /// `dU/ds = 32·U_barr·s(s − Δ)(s − Δ/2)/Δ⁴`.
    pub fn derivative(&self, s: f64) -> f64 {
        self.scale() * 2.0 * s * (s - self.stroke) * (2.0 * s - self.stroke)
    }

    /// Restoring force `−dU/ds`.
    pub fn force(&self, s: f64) -> f64 {
        -self.derivative(s)
    }

    /// Largest `|dU/ds|` inside the wells, `32·U_barr/(6√3·Δ)`.
    pub fn peak_slope(&self) -> f64 {
        32.0 * self.barrier / (6.0 * libm::sqrt(3.0) * self.stroke)
    }
}
