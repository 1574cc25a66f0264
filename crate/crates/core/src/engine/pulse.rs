use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Gaussian Rabi envelope Ω(t) = A/(√(2π)σ) · exp(−(t − t_c)²/(2σ²)).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseEnvelope {
    /// Pulse area A in radians.
    pub area: f64,
    /// Standard deviation σ in ps.
    pub width: f64,
    /// Centre t_c in ps.
    pub center: f64,
}

/// Half-width of the window over which the envelope is resolved, in σ.
pub const WINDOW_SIGMAS: f64 = 4.0;
/// Maximum integration step inside the window, in σ.
pub const STEPS_PER_SIGMA: f64 = 50.0;

impl PulseEnvelope {
    /// Pulse centred at 3σ.
    pub fn new(area: f64, width: f64) -> Result<Self> {
        if !(width > 0.0 && width.is_finite()) {
            return Err(Error::domain(format!("pulse width must be positive, got {width}")));
        }
        if !area.is_finite() {
            return Err(Error::domain("pulse area must be finite"));
        }
        Ok(PulseEnvelope {
            area,
            width,
            center: 3.0 * width,
        })
    }

    pub fn from_fwhm(area: f64, fwhm: f64) -> Result<Self> {
        Self::new(area, fwhm / fwhm_per_sigma())
    }

    pub fn with_center(self, center: f64) -> Self {
        PulseEnvelope { center, ..self }
    }

    pub fn fwhm(&self) -> f64 {
        self.width * fwhm_per_sigma()
    }

    pub fn peak(&self) -> f64 {
        self.area / ((2.0 * std::f64::consts::PI).sqrt() * self.width)
    }

    pub fn eval(&self, t: f64) -> f64 {
        let x = (t - self.center) / self.width;
        self.peak() * (-0.5 * x * x).exp()
    }

    /// [t_c − 4σ, t_c + 4σ]
    pub fn window(&self) -> (f64, f64) {
        let half = WINDOW_SIGMAS * self.width;
        (self.center - half, self.center + half)
    }

    pub fn max_step_in_window(&self) -> f64 {
        self.width / STEPS_PER_SIGMA
    }
}

/// √(8 ln 2)
pub fn fwhm_per_sigma() -> f64 {
    (8.0 * std::f64::consts::LN_2).sqrt()
}
