//! Identities of the closed-form dynamics.

mod common;

use common::{linspace, profile_4k, profile_77k, GAMMA};
use polaron_dicke_core::analytic::{
    decay_kernels, doubly_excited_decay, excitation_number, excitation_number_series,
    free_decoherence, lifetime, lifetime_sweep, short_pulse_response, single_excitation_decay,
    single_tls_evolution, DickePopulations, Frame, InitialMix, SingleEmitterState,
};
use polaron_dicke_core::bath::{collective_rates, BathProfile};
use polaron_dicke_core::engine::{fit_biexponential, fit_exponential};
use proptest::prelude::*;

#[test]
fn single_emitter_population_decays_at_gamma_for_every_temperature() {
    for prof in [common::profile(0.0), profile_4k().clone(), profile_77k().clone()] {
        let times = linspace(0.0, 5.0 / GAMMA, 201);
        let pops: Vec<f64> = times
            .iter()
            .map(|&t| single_tls_evolution(&SingleEmitterState::excited(), &prof, t).unwrap().pop_excited)
            .collect();
        let fit = fit_exponential(&times, &pops, (0.0, 5.0 / GAMMA)).unwrap();
        assert!((fit.rate - GAMMA).abs() < 1e-10 * GAMMA, "T={}: {}", prof.temperature, fit.rate);
    }
}

#[test]
fn coherence_settles_at_kappa_squared() {
    let prof = profile_4k();
    let s = single_tls_evolution(&SingleEmitterState::superposition(), prof, 50.0).unwrap();
    let expected = 0.5 * prof.kappa_sq() * (-0.5 * GAMMA * 50.0f64).exp();
    assert!((s.coherence.norm() - expected).abs() < 1e-9);
}

#[test]
fn sum_rule_is_exact() {
    for k in [0.0, 0.2, 0.5, 0.746, 0.9, 1.0] {
        for g in [1e-4, 0.005, 0.3, 7.0] {
            let (s, a) = collective_rates(g, k).unwrap();
            assert_eq!(s + a, 2.0 * g);
        }
    }
}

#[test]
fn sudden_excitation_starts_in_bright_state() {
    for k in [0.2, 0.5, 0.9] {
        let prof = profile_4k().with_kappa(k).unwrap();
        let p = single_excitation_decay(&prof, 0.0).unwrap();
        let target = DickePopulations { p_gg: 0.0, p_sym: 1.0, p_asym: 0.0, p_xx: 0.0 };
        assert!(p.max_abs_diff(&target) < 1e-9, "{p:?}");
        assert_eq!(excitation_number(&InitialMix::SYMMETRIC, &prof, 0.0).unwrap(), 1.0);
    }
}

#[test]
fn decoherence_plateau_and_temperature_ordering() {
    let mut plateaus = Vec::new();
    for prof in [profile_4k(), profile_77k()] {
        let p = free_decoherence(&InitialMix::SYMMETRIC, prof, 1000.0).unwrap();
        let k4 = prof.kappa_sq() * prof.kappa_sq();
        assert!((p.p_asym - 0.5 * (1.0 - k4)).abs() < 1e-9);
        plateaus.push(p.p_asym);
    }
    assert!(plateaus[1] > plateaus[0]);
}

#[test]
fn two_window_fits_recover_both_rates() {
    let prof = profile_4k();
    let times = linspace(0.0, 3000.0, 30001);
    let n: Vec<f64> = times
        .iter()
        .map(|&t| excitation_number(&InitialMix::SYMMETRIC, prof, t).unwrap())
        .collect();
    let fit = fit_biexponential(&times, &n, (10.0, 150.0), (1500.0, 3000.0)).unwrap();
    assert!((fit.fast.rate / prof.rate_sym - 1.0).abs() < 0.01, "{}", fit.fast.rate);
    assert!((fit.slow.rate / prof.rate_asym - 1.0).abs() < 0.01, "{}", fit.slow.rate);
    let late = fit_exponential(&times, &n, (2000.0, 3000.0)).unwrap();
    assert!((late.rate / prof.rate_asym - 1.0).abs() < 0.01);
}

#[test]
fn lifetimes_at_four_kelvin() {
    let prof = profile_4k();
    let te = lifetime(&InitialMix::SYMMETRIC, prof, Frame::Electronic).unwrap();
    let tp = lifetime(&InitialMix::SYMMETRIC, prof, Frame::Polaronic).unwrap();
    assert!((tp - 1.0 / prof.rate_sym).abs() < 1e-8 * tp);
    assert!(((tp - te) / tp).abs() > 0.01);
    // The electronic state carries dark amplitude, so it lives longer.
    assert!(te > tp);
    let rows = lifetime_sweep(prof, 101).unwrap();
    assert_eq!(rows.len(), 101);
    assert!(rows.iter().all(|r| r.tau_polaronic.is_finite() && r.tau_electronic.is_finite()));
}

#[test]
fn lifetime_gap_vanishes_without_phonons() {
    let prof = BathProfile::uncoupled(4.0, GAMMA).unwrap();
    let rows = lifetime_sweep(&prof, 11).unwrap();
    assert_eq!(rows[0].tau_polaronic, f64::INFINITY);
    for r in &rows {
        assert!(r.relative_gap().abs() < 1e-12, "{r:?}");
    }
}

#[test]
fn doubly_excited_populations_agree_in_frames_where_required() {
    let prof = profile_4k();
    for t in [0.0, 10.0, 150.0, 900.0] {
        let e = doubly_excited_decay(prof, t, Frame::Electronic).unwrap();
        let p = doubly_excited_decay(prof, t, Frame::Polaronic).unwrap();
        assert_eq!(e.p_xx, p.p_xx);
        assert_eq!(e.p_gg, p.p_gg);
        assert!((e.excitation_number() - p.excitation_number()).abs() < 1e-15);
    }
}

#[test]
fn short_pulse_response_conserves_probability() {
    let prof = profile_4k();
    for a in [0.1, 1.0, std::f64::consts::PI, 6.0] {
        for t in [0.0, 1.0, 50.0, 600.0] {
            assert!(short_pulse_response(prof, a, t).unwrap().is_valid());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kernels_sum_to_mixing_weights(t in 0.0f64..60.0, k in 0.05f64..1.0) {
        let prof = profile_4k().with_kappa(k).unwrap();
        let d = decay_kernels(&prof, t).unwrap();
        prop_assert!((d.e_pp + d.e_pm + d.e_mp + d.e_mm - 1.0).abs() < 1e-12);
        prop_assert!((d.a_plus + d.a_minus - 1.0).abs() < 1e-15);
        // Without radiative decay the kernels reduce to a±.
        prop_assert!((d.e_pp + d.e_mp + d.e_zero - d.a_plus).abs() < 1e-12);
        prop_assert!((d.e_pm + d.e_mm - d.e_zero - d.a_minus).abs() < 1e-12);
    }

    #[test]
    fn populations_form_probability_vectors(t in 0.0f64..2000.0, k in 0.05f64..1.0) {
        let prof = profile_4k().with_kappa(k).unwrap();
        prop_assert!(single_excitation_decay(&prof, t).unwrap().is_valid());
        prop_assert!(doubly_excited_decay(&prof, t, Frame::Electronic).unwrap().is_valid());
        prop_assert!(doubly_excited_decay(&prof, t, Frame::Polaronic).unwrap().is_valid());
    }

    #[test]
    fn electronic_number_matches_population_sum(t in 0.0f64..2000.0) {
        let prof = profile_4k();
        let p = single_excitation_decay(prof, t).unwrap();
        let n = excitation_number(&InitialMix::SYMMETRIC, prof, t).unwrap();
        prop_assert!((p.excitation_number() - n).abs() < 1e-9);
    }

    #[test]
    fn adiabatic_preparation_decays_fastest(t in 1.0f64..3000.0, w in 0.5f64..=1.0) {
        let prof = profile_4k();
        let mix = InitialMix::new(w).unwrap();
        let pol = excitation_number_series(&mix, prof, Frame::Polaronic).eval(t);
        let ele = excitation_number_series(&mix, prof, Frame::Electronic).eval(t);
        prop_assert!(pol < ele);
    }

    #[test]
    fn single_emitter_rate_is_phonon_invariant(t in 0.0f64..2000.0, scale in 0.0f64..3.0) {
        let prof = profile_4k().with_coupling_scale(scale).unwrap();
        let s = single_tls_evolution(&SingleEmitterState::excited(), &prof, t).unwrap();
        prop_assert!((s.pop_excited - (-GAMMA * t).exp()).abs() < 1e-15);
    }
}
