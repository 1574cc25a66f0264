//! Polaron-frame Lindblad propagation of one and two emitters with optional
//! Gaussian driving.
//!
//! States live in the collective basis (GG, Ψ_S, Ψ_A, XX). The dissipator
//! uses the phonon-renormalized collective rates of a [`BathProfile`], so the
//! propagated populations are polaronic.
//!
//! [`BathProfile`]: crate::bath::BathProfile

mod fit;
mod integrator;
mod operators;
mod propagate;
mod pulse;

use nalgebra::{Matrix4, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::{intensity_sampled, DickePopulations};
use crate::error::{Error, Result};

pub use fit::{fit_biexponential, fit_exponential, BiexpFit, ExpFit};
pub use integrator::{integrate, IntegratorConfig, Method};
pub use operators::{drive_operator, sigma_asym, sigma_sym, ASYM, GG, SYM, XX};
pub use propagate::{
    drive_then_decay, lindblad_rhs, propagate, propagate_single, DrivenRun,
};
pub use pulse::{fwhm_per_sigma, PulseEnvelope, STEPS_PER_SIGMA, WINDOW_SIGMAS};

/// Tolerance on Hermiticity and trace of an initial state.
pub const STATE_TOL: f64 = 1e-9;
/// Negative eigenvalues above this are attributed to round-off.
pub const POSITIVITY_TOL: f64 = 1e-9;

/// Density matrix of two emitters in the basis (GG, Ψ_S, Ψ_A, XX).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoEmitterState(Matrix4<Complex64>);

impl TwoEmitterState {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(rho: Matrix4<Complex64>) -> Result<Self> {
        let state = TwoEmitterState(rho);
        if state.hermiticity_error() > STATE_TOL {
            return Err(Error::domain("density matrix is not Hermitian"));
        }
        if (state.trace() - 1.0).abs() > STATE_TOL {
            return Err(Error::domain(format!("density matrix trace is {}", state.trace())));
        }
        if state.min_eigenvalue() < -POSITIVITY_TOL {
            return Err(Error::domain("density matrix is not positive semidefinite"));
        }
        Ok(state)
    }

    pub(crate) fn from_matrix_unchecked(rho: Matrix4<Complex64>) -> Self {
        TwoEmitterState(rho)
    }

    fn basis(i: usize) -> Self {
        let mut m = Matrix4::zeros();
        m[(i, i)] = Complex64::new(1.0, 0.0);
        TwoEmitterState(m)
    }

    pub fn ground() -> Self {
        Self::basis(GG)
    }

    pub fn symmetric() -> Self {
        Self::basis(SYM)
    }

    pub fn antisymmetric() -> Self {
        Self::basis(ASYM)
    }

    pub fn doubly_excited() -> Self {
        Self::basis(XX)
    }

    /// Diagonal state with the given populations.
    pub fn from_populations(p: &DickePopulations) -> Result<Self> {
        if !p.is_valid() {
            return Err(Error::domain("populations must be a probability vector"));
        }
        let d = p.as_array().map(|x| Complex64::new(x, 0.0));
        Ok(TwoEmitterState(Matrix4::from_diagonal(&d.into())))
    }

    pub fn matrix(&self) -> &Matrix4<Complex64> {
        &self.0
    }

    pub fn populations(&self) -> DickePopulations {
        let m = &self.0;
        DickePopulations {
            p_gg: m[(GG, GG)].re,
            p_sym: m[(SYM, SYM)].re,
            p_asym: m[(ASYM, ASYM)].re,
            p_xx: m[(XX, XX)].re,
        }
    }

    pub fn excitation_number(&self) -> f64 {
        self.populations().excitation_number()
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    /// max |ρ − ρ†| over entries.
    pub fn hermiticity_error(&self) -> f64 {
        (self.0 - self.0.adjoint()).iter().fold(0.0_f64, |m, z| m.max(z.norm()))
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        let h = (self.0 + self.0.adjoint()) * Complex64::new(0.5, 0.0);
        SymmetricEigen::new(h).eigenvalues.min()
    }
}

/// Gaussian pulse driving the symmetric transition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Drive {
    pub pulse: PulseEnvelope,
    /// Multiply the Rabi frequency by κ, as the polaron transformation does
    /// for the dipole operator.
    pub renormalize: bool,
}

/// Per-sample consistency checks of a propagated state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepDiagnostics {
    /// |tr ρ − 1|
    pub trace_error: f64,
    pub hermiticity_error: f64,
    pub min_eigenvalue: f64,
}

impl StepDiagnostics {
    pub fn of(state: &TwoEmitterState) -> Self {
        StepDiagnostics {
            trace_error: (state.trace() - 1.0).abs(),
            hermiticity_error: state.hermiticity_error(),
            min_eigenvalue: state.min_eigenvalue(),
        }
    }
}

/// Sampled two-emitter dynamics.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    /// Reported populations; round-off negatives are clamped to zero and the
    /// vector renormalized. The propagated state is never modified.
    pub populations: Vec<DickePopulations>,
    /// n = p_S + p_A + 2 p_XX from the raw diagonal.
    pub excitation: Vec<f64>,
    pub diagnostics: Vec<StepDiagnostics>,
    pub final_state: TwoEmitterState,
}

impl Trajectory {
    pub(crate) fn from_states(times: Vec<f64>, states: &[TwoEmitterState]) -> Self {
        let populations = states.iter().map(|s| reported_populations(&s.populations())).collect();
        let excitation = states.iter().map(TwoEmitterState::excitation_number).collect();
        let diagnostics = states.iter().map(StepDiagnostics::of).collect();
        Trajectory {
            times,
            populations,
            excitation,
            diagnostics,
            final_state: *states.last().expect("trajectory has at least one sample"),
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// I(t) = −dn/dt by finite differences on the (uniform) time grid.
    pub fn intensity(&self) -> Result<Vec<f64>> {
        intensity_sampled(&self.times, &self.excitation)
    }

    pub fn max_trace_error(&self) -> f64 {
        self.diagnostics.iter().fold(0.0, |m, d| m.max(d.trace_error))
    }

    pub fn max_hermiticity_error(&self) -> f64 {
        self.diagnostics.iter().fold(0.0, |m, d| m.max(d.hermiticity_error))
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.diagnostics.iter().fold(f64::INFINITY, |m, d| m.min(d.min_eigenvalue))
    }
}

fn reported_populations(p: &DickePopulations) -> DickePopulations {
    let clamp = |x: f64| if (-POSITIVITY_TOL..0.0).contains(&x) { 0.0 } else { x };
    let c = DickePopulations {
        p_gg: clamp(p.p_gg),
        p_sym: clamp(p.p_sym),
        p_asym: clamp(p.p_asym),
        p_xx: clamp(p.p_xx),
    };
    if c == *p {
        return c;
    }
    c.scaled(1.0 / c.total())
}
