//! Closed-form dynamics of one and two phonon-dressed emitters.
//!
//! Two-emitter states are expressed in the collective basis
//! {|GG⟩, |Ψ_S⟩, |Ψ_A⟩, |XX⟩}. Results labelled electronic refer to bare
//! electronic states (the observable frame after a sudden excitation);
//! polaronic results are populations of polaron-dressed states.

mod collective;
mod expsum;
mod intensity;
mod lifetime;
mod pulsed;
mod single;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use collective::{
    decay_kernels, decoherence_mixing, doubly_excited_decay, doubly_excited_number,
    doubly_excited_number_series, excitation_number, excitation_number_series,
    free_decoherence, inter_emitter_coherence_factor, long_pulse_number,
    single_excitation_decay,
};
pub use expsum::{ExpSum, ExpTerm};
pub use intensity::intensity_sampled;
pub use lifetime::{lifetime, lifetime_of_series, lifetime_sweep, LifetimeRow};
pub use pulsed::{delta_pulse_populations, short_pulse_number_series, short_pulse_response};
pub use single::single_tls_evolution;

/// Tolerance used when validating probability vectors.
pub const PROBABILITY_TOL: f64 = 1e-9;

/// Frame in which a two-emitter state is prepared or observed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Frame {
    Electronic,
    Polaronic,
}

/// Reduced state of a single two-level emitter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleEmitterState {
    pub pop_excited: f64,
    pub pop_ground: f64,
    /// ⟨G|ρ|X⟩
    pub coherence: Complex64,
}

impl SingleEmitterState {
    pub fn new(pop_excited: f64, pop_ground: f64, coherence: Complex64) -> Result<Self> {
        let s = SingleEmitterState {
            pop_excited,
            pop_ground,
            coherence,
        };
        if pop_excited < -PROBABILITY_TOL || pop_ground < -PROBABILITY_TOL {
            return Err(Error::domain("populations must be non-negative"));
        }
        if (pop_excited + pop_ground - 1.0).abs() > PROBABILITY_TOL {
            return Err(Error::domain("populations must sum to one"));
        }
        if coherence.norm_sqr() > pop_excited * pop_ground + PROBABILITY_TOL {
            return Err(Error::domain("coherence exceeds the positivity bound"));
        }
        Ok(s)
    }

    /// (|X⟩ + |G⟩)/√2
    pub fn superposition() -> Self {
        SingleEmitterState {
            pop_excited: 0.5,
            pop_ground: 0.5,
            coherence: Complex64::new(0.5, 0.0),
        }
    }

    pub fn excited() -> Self {
        SingleEmitterState {
            pop_excited: 1.0,
            pop_ground: 0.0,
            coherence: Complex64::new(0.0, 0.0),
        }
    }
}

/// Occupations of the collective basis states.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct DickePopulations {
    pub p_gg: f64,
    pub p_sym: f64,
    pub p_asym: f64,
    pub p_xx: f64,
}

impl DickePopulations {
    pub const GROUND: DickePopulations = DickePopulations {
        p_gg: 1.0,
        p_sym: 0.0,
        p_asym: 0.0,
        p_xx: 0.0,
    };

    pub fn total(&self) -> f64 {
        self.p_gg + self.p_sym + self.p_asym + self.p_xx
    }

    /// Mean excitation number p_S + p_A + 2 p_XX.
    pub fn excitation_number(&self) -> f64 {
        self.p_sym + self.p_asym + 2.0 * self.p_xx
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.p_gg, self.p_sym, self.p_asym, self.p_xx]
    }

    pub fn scaled(&self, w: f64) -> Self {
        DickePopulations {
            p_gg: self.p_gg * w,
            p_sym: self.p_sym * w,
            p_asym: self.p_asym * w,
            p_xx: self.p_xx * w,
        }
    }

    pub fn plus(&self, o: &Self) -> Self {
        DickePopulations {
            p_gg: self.p_gg + o.p_gg,
            p_sym: self.p_sym + o.p_sym,
            p_asym: self.p_asym + o.p_asym,
            p_xx: self.p_xx + o.p_xx,
        }
    }

    pub fn max_abs_diff(&self, o: &Self) -> f64 {
        self.as_array()
            .iter()
            .zip(o.as_array())
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()))
    }

    pub fn is_valid(&self) -> bool {
        self.as_array().iter().all(|&p| p >= -PROBABILITY_TOL && p <= 1.0 + PROBABILITY_TOL)
            && (self.total() - 1.0).abs() <= PROBABILITY_TOL
    }
}

/// Time-dependent weights of the sudden-excitation solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayKernels {
    pub a_plus: f64,
    pub a_minus: f64,
    pub e_pp: f64,
    pub e_pm: f64,
    pub e_mp: f64,
    pub e_mm: f64,
    pub e_zero: f64,
}

/// Incoherent mixture of the symmetric and antisymmetric Dicke states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitialMix {
    pub w_sym: f64,
    pub w_asym: f64,
}

impl InitialMix {
    pub fn new(w_sym: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&w_sym) {
            return Err(Error::domain(format!("w_sym must lie in [0, 1], got {w_sym}")));
        }
        Ok(InitialMix {
            w_sym,
            w_asym: 1.0 - w_sym,
        })
    }

    pub const SYMMETRIC: InitialMix = InitialMix {
        w_sym: 1.0,
        w_asym: 0.0,
    };
    pub const ANTISYMMETRIC: InitialMix = InitialMix {
        w_sym: 0.0,
        w_asym: 1.0,
    };
}
