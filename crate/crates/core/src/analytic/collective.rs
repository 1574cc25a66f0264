use super::{DecayKernels, DickePopulations, ExpSum, Frame, InitialMix};
use crate::bath::BathProfile;
use crate::error::{Error, Result};

/// Below this fraction of γ the antisymmetric rate is treated as zero in
/// closed forms that divide by it.
const DARK_RATE_EPS: f64 = 1e-9;

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("t must be non-negative, got {t}")))
    }
}

// κ⁴ e^{2 Re Φ(t)}, which starts at one and relaxes to κ⁴.
fn coherence_survival(profile: &BathProfile, t: f64) -> f64 {
    let k2 = profile.kappa_sq();
    k2 * k2 * (2.0 * profile.phi_at(t).re).exp()
}

/// Mixing weights (a₊, a₋) of the bare symmetric and antisymmetric states
/// caused by polaron formation alone.
pub fn decoherence_mixing(profile: &BathProfile, t: f64) -> Result<(f64, f64)> {
    check_time(t)?;
    let c = coherence_survival(profile, t);
    Ok((0.5 * (1.0 + c), 0.5 * (1.0 - c)))
}

/// Factor multiplying the inter-emitter coherence ρ₁₂, (κ² e^{Re Φ(t)})².
/// Equal to the square of the single-emitter dressing modulus.
pub fn inter_emitter_coherence_factor(profile: &BathProfile, t: f64) -> Result<f64> {
    check_time(t)?;
    Ok(coherence_survival(profile, t))
}

/// Populations of an initial S/A mixture under phonon coupling only (γ = 0).
pub fn free_decoherence(init: &InitialMix, profile: &BathProfile, t: f64) -> Result<DickePopulations> {
    let (a_plus, a_minus) = decoherence_mixing(profile, t)?;
    Ok(DickePopulations {
        p_gg: 0.0,
        p_sym: a_plus * init.w_sym + a_minus * init.w_asym,
        p_asym: a_minus * init.w_sym + a_plus * init.w_asym,
        p_xx: 0.0,
    })
}

/// Kernels E_{s₁s₂}(t) and E₀(t) of the sudden-excitation solution together
/// with the free-decoherence weights a±(t).
pub fn decay_kernels(profile: &BathProfile, t: f64) -> Result<DecayKernels> {
    check_time(t)?;
    let phi = profile.phi_at(t);
    let k2 = profile.kappa_sq();
    let k4 = k2 * k2;
    let (a_plus, a_minus) = decoherence_mixing(profile, t)?;
    let ch = k4 * (2.0 * phi.re).cosh();
    let cs = k2 * (2.0 * phi.im).cos();
    let e = |s1: f64, s2: f64| 0.25 * (1.0 + s1 * k2 + s2 * (ch + s1 * cs));
    Ok(DecayKernels {
        a_plus,
        a_minus,
        e_pp: e(1.0, 1.0),
        e_pm: e(1.0, -1.0),
        e_mp: e(-1.0, 1.0),
        e_mm: e(-1.0, -1.0),
        e_zero: 0.5 * k4 * (2.0 * phi.re).sinh(),
    })
}

/// Bare electronic populations after sudden preparation of |Ψ_S⟩.
///
/// The E₀ term enters ρ_SS with a plus sign and ρ_AA with a minus sign;
/// this is the only assignment for which ρ_SS(0) = 1, ρ_AA(0) = 0 and the
/// populations reproduce [`excitation_number`].
pub fn single_excitation_decay(profile: &BathProfile, t: f64) -> Result<DickePopulations> {
    let k = decay_kernels(profile, t)?;
    let es = (-profile.rate_sym * t).exp();
    let ea = (-profile.rate_asym * t).exp();
    let eg = (-profile.gamma * t).exp();
    let p_sym = es * k.e_pp + ea * k.e_mp + eg * k.e_zero;
    let p_asym = es * k.e_pm + ea * k.e_mm - eg * k.e_zero;
    Ok(DickePopulations {
        p_gg: 1.0 - p_sym - p_asym,
        p_sym,
        p_asym,
        p_xx: 0.0,
    })
}

/// Excitation number n(t) of an S/A mixture prepared in `frame`, as an
/// exponential sum.
pub fn excitation_number_series(init: &InitialMix, profile: &BathProfile, frame: Frame) -> ExpSum {
    let (gs, ga) = (profile.rate_sym, profile.rate_asym);
    match frame {
        Frame::Polaronic => ExpSum::exp(init.w_sym, gs).plus(&ExpSum::exp(init.w_asym, ga)),
        Frame::Electronic => {
            let k2 = profile.kappa_sq();
            let bright = 0.5 * (init.w_sym * (1.0 + k2) + init.w_asym * (1.0 - k2));
            let dark = 0.5 * (init.w_sym * (1.0 - k2) + init.w_asym * (1.0 + k2));
            ExpSum::exp(bright, gs).plus(&ExpSum::exp(dark, ga))
        }
    }
}

/// Mean excitation number of a bare electronic S/A mixture.
pub fn excitation_number(init: &InitialMix, profile: &BathProfile, t: f64) -> Result<f64> {
    check_time(t)?;
    Ok(excitation_number_series(init, profile, Frame::Electronic).eval(t))
}

/// Excitation number after adiabatic (long-pulse) preparation of the
/// polaronic bright state: e^{−Γ_S t}.
pub fn long_pulse_number(profile: &BathProfile, t: f64) -> Result<f64> {
    check_time(t)?;
    Ok((-profile.rate_sym * t).exp())
}

// (1 − e^{−rt})/r, continuous at r = 0.
fn growth(rate: f64, t: f64) -> f64 {
    if rate == 0.0 {
        t
    } else {
        -(-rate * t).exp_m1() / rate
    }
}

/// Populations after preparing |XX⟩.
///
/// |XX⟩ carries no inter-emitter coherence, so p_xx, p_gg and n(t) are the
/// same in both frames. The singly excited pair differs: the polaronic
/// populations follow the bare cascade, the electronic ones mix it with
/// weights ½(1 ± κ²).
pub fn doubly_excited_decay(profile: &BathProfile, t: f64, frame: Frame) -> Result<DickePopulations> {
    check_time(t)?;
    let (gs, ga) = (profile.rate_sym, profile.rate_asym);
    let p_xx = (-2.0 * profile.gamma * t).exp();
    let bright = gs * growth(ga, t) * (-gs * t).exp();
    let dark = ga * growth(gs, t) * (-ga * t).exp();
    let p_gg = 1.0 - p_xx - bright - dark;
    let (p_sym, p_asym) = match frame {
        Frame::Polaronic => (bright, dark),
        Frame::Electronic => {
            let k2 = profile.kappa_sq();
            let (plus, minus) = (0.5 * (1.0 + k2), 0.5 * (1.0 - k2));
            (plus * bright + minus * dark, minus * bright + plus * dark)
        }
    };
    Ok(DickePopulations {
        p_gg,
        p_sym,
        p_asym,
        p_xx,
    })
}

/// n(t) after preparing |XX⟩ as an exponential sum.
pub fn doubly_excited_number_series(profile: &BathProfile) -> ExpSum {
    let (gs, ga) = (profile.rate_sym, profile.rate_asym);
    let g2 = 2.0 * profile.gamma;
    let xx = ExpSum::exp(2.0, g2);
    let dark = ExpSum::exp(ga / gs, ga).with(-ga / gs, 0, g2);
    let bright = if ga < DARK_RATE_EPS * profile.gamma {
        // (Γ_S/Γ_A)(1 − e^{−Γ_A t}) → Γ_S t (1 − Γ_A t/2)
        ExpSum::new().with(gs, 1, gs).with(-0.5 * gs * ga, 2, gs)
    } else {
        ExpSum::exp(gs / ga, gs).with(-gs / ga, 0, g2)
    };
    xx.plus(&dark).plus(&bright)
}

/// Mean excitation number after preparing |XX⟩; n(0) = 2.
pub fn doubly_excited_number(profile: &BathProfile, t: f64) -> Result<f64> {
    let p = doubly_excited_decay(profile, t, Frame::Polaronic)?;
    Ok(p.excitation_number())
}
