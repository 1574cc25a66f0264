//! Sudden (δ-like) optical excitation of the bare electronic ladder.
//!
//! A pulse much shorter than the phonon memory rotates the electronic state
//! while the lattice stays frozen, after which the closed-form electronic
//! dynamics apply. Populations never couple to the coherences between
//! excitation manifolds, so the response is the population-weighted sum of
//! the |Ψ_S⟩ and |XX⟩ solutions.

use super::{
    doubly_excited_decay, doubly_excited_number_series, excitation_number_series,
    single_excitation_decay, DickePopulations, ExpSum, Frame, InitialMix,
};
use crate::bath::BathProfile;
use crate::error::Result;

/// Populations after rotating |GG⟩ by exp(−iA(σ_S⁺ + σ_S⁻)/2).
///
/// On the three-level ladder GG ↔ Ψ_S ↔ XX this gives amplitudes
/// (1 + cos θ)/2, −i sin θ/√2 and (cos θ − 1)/2 with θ = A/√2.
pub fn delta_pulse_populations(area: f64) -> DickePopulations {
    let theta = area / std::f64::consts::SQRT_2;
    let (s, c) = theta.sin_cos();
    DickePopulations {
        p_gg: 0.25 * (1.0 + c) * (1.0 + c),
        p_sym: 0.5 * s * s,
        p_asym: 0.0,
        p_xx: 0.25 * (1.0 - c) * (1.0 - c),
    }
}

/// Electronic populations a time `t` after a δ pulse of area `area`.
pub fn short_pulse_response(profile: &BathProfile, area: f64, t: f64) -> Result<DickePopulations> {
    let start = delta_pulse_populations(area);
    let ground = DickePopulations::GROUND.scaled(start.p_gg);
    let single = single_excitation_decay(profile, t)?.scaled(start.p_sym);
    let double = doubly_excited_decay(profile, t, Frame::Electronic)?.scaled(start.p_xx);
    Ok(ground.plus(&single).plus(&double))
}

/// Excitation number after a δ pulse of area `area`.
pub fn short_pulse_number_series(profile: &BathProfile, area: f64) -> ExpSum {
    let start = delta_pulse_populations(area);
    excitation_number_series(&InitialMix::SYMMETRIC, profile, Frame::Electronic)
        .scaled(start.p_sym)
        .plus(&doubly_excited_number_series(profile).scaled(start.p_xx))
}
