use num_complex::Complex64;

use super::SingleEmitterState;
use crate::bath::BathProfile;
use crate::error::{Error, Result};

/// Bare electronic state of one emitter at time `t` after preparation in
/// `init` with the phonons in equilibrium.
///
/// Populations decay with the unrenormalised rate γ; the coherence picks up
/// the independent-boson factor κ² e^{Φ(t)*}, equal to one at t = 0 and
/// settling at κ² once the phonon memory is gone.
pub fn single_tls_evolution(
    init: &SingleEmitterState,
    profile: &BathProfile,
    t: f64,
) -> Result<SingleEmitterState> {
    if !(t >= 0.0) {
        return Err(Error::domain(format!("t must be non-negative, got {t}")));
    }
    let decay = (-profile.gamma * t).exp();
    let pop_excited = init.pop_excited * decay;
    let dressing = profile.kappa_sq() * profile.phi_at(t).conj().exp();
    let coherence: Complex64 = init.coherence * dressing * (-0.5 * profile.gamma * t).exp();
    Ok(SingleEmitterState {
        pop_excited,
        pop_ground: 1.0 - pop_excited,
        coherence,
    })
}
