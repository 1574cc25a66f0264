//! Physical constants and unit conversions.
//!
//! Internally time is measured in ps, rates and angular frequencies in ps⁻¹
//! and ħ = 1. Temperatures only ever enter as k_B T / ħ.

/// Reduced Planck constant in J·s.
pub const HBAR_SI: f64 = 1.054_571_817e-34;
/// Boltzmann constant in J/K.
pub const KB_SI: f64 = 1.380_649e-23;
/// One electron volt in J.
pub const EV_SI: f64 = 1.602_176_634e-19;
/// Seconds per picosecond.
pub const PS: f64 = 1e-12;

/// k_B T / ħ in ps⁻¹.
pub fn thermal_frequency(temperature_k: f64) -> f64 {
    KB_SI * temperature_k / HBAR_SI * PS
}

/// Converts an angular frequency in ps⁻¹ to an energy in meV.
pub fn per_ps_to_mev(omega: f64) -> f64 {
    omega / PS * HBAR_SI / EV_SI * 1e3
}
