use std::f64::consts::PI;
use std::sync::Arc;

use polaron_dicke_core::analytic::{
    free_decoherence, inter_emitter_coherence_factor, lifetime_sweep, short_pulse_number_series,
    short_pulse_response, single_tls_evolution, ExpSum, InitialMix, SingleEmitterState,
};
use polaron_dicke_core::bath::{eval_spectral_density, BathProfile};
use polaron_dicke_core::engine::{fit_exponential, DrivenRun};
use rayon::prelude::*;

use super::{drive, linear_grid, log_grid, long_pulse_run, Output, Profiles};
use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::Table;

/// Temperatures of the decoherence figure, K.
pub const FIG3_TEMPERATURES: [f64; 2] = [4.0, 77.0];
/// Temperatures of the intensity figure, K.
pub const FIG7_TEMPERATURES: [f64; 3] = [4.0, 20.0, 77.0];
/// Pulse areas of the area comparison, with file labels.
pub const FIG6_AREAS: [(f64, &str); 4] = [
    (PI / 8.0, "pi_8"),
    (PI / 4.0, "pi_4"),
    (PI / 2.0, "pi_2"),
    (PI, "pi"),
];
/// Nominal FWHM of the short-pulse branch, ps. Pulses this short act as a
/// sudden excitation, which is how the branch is computed.
pub const SHORT_PULSE_FWHM: f64 = 0.1;

fn temperature_label(t: f64) -> String {
    if t.fract() == 0.0 {
        format!("T{}K", t as i64)
    } else {
        format!("T{}K", t.to_string().replace('.', "p"))
    }
}

/// Spectral density, Φ(t) table and profile constants.
pub fn bath(cfg: &RunConfig, profiles: &Profiles) -> Result<Vec<Output>, CliError> {
    let profile = profiles.base()?;
    let params = cfg.material.params();
    let w_max = params.omega_max(&cfg.quadrature())?;

    let mut j = Table::new("bath_spectral_density", &["omega_per_ps", "J_per_ps"]);
    for w in linear_grid(w_max, cfg.grid.n_points) {
        j.push(&[w, eval_spectral_density(&params, w)?]);
    }
    j.meta("omega_max_per_ps", w_max);

    let mut phi = Table::new("bath_phi", &["t_ps", "phi_re", "phi_im"]);
    for (t, v) in profile.phi.times().iter().zip(profile.phi.values()) {
        phi.push(&[*t, v.re, v.im]);
    }

    let mut c = Table::new(
        "bath_constants",
        &[
            "temperature_k",
            "phi0",
            "kappa",
            "reorg_energy_per_ps",
            "gamma_per_ps",
            "rate_sym_per_ps",
            "rate_asym_per_ps",
        ],
    );
    c.push(&[
        profile.temperature,
        profile.phi0,
        profile.kappa,
        profile.reorg_energy,
        profile.gamma,
        profile.rate_sym,
        profile.rate_asym,
    ]);
    Ok(vec![Output::new(j, &profile), Output::new(phi, &profile), Output::new(c, &profile)])
}

/// One emitter prepared in (|X⟩ + |G⟩)/√2, on a logarithmic time axis.
pub fn fig2(cfg: &RunConfig, profiles: &Profiles) -> Result<Vec<Output>, CliError> {
    let profile = profiles.base()?;
    let init = SingleEmitterState::superposition();
    let mut t = Table::new(
        "fig2_superposition",
        &[
            "t_ps",
            "pop_excited",
            "pop_ground",
            "coherence_re",
            "coherence_im",
            "coherence_abs",
            "coherence_abs_uncoupled",
        ],
    );
    for time in log_grid(cfg.grid.log_t_min_ps, cfg.grid.t_max_ps, cfg.grid.n_points) {
        let s = single_tls_evolution(&init, &profile, time)?;
        let bare = init.coherence.norm() * (-0.5 * profile.gamma * time).exp();
        t.push(&[time, s.pop_excited, s.pop_ground, s.coherence.re, s.coherence.im, s.coherence.norm(), bare]);
    }
    Ok(vec![Output::new(t, &profile)])
}

/// Phonon-induced transfer from |Ψ_S⟩ to |Ψ_A⟩ without radiative decay.
pub fn fig3(cfg: &RunConfig, profiles: &Profiles) -> Result<Vec<Output>, CliError> {
    FIG3_TEMPERATURES
        .iter()
        .map(|&temp| {
            let profile = profiles.at(temp)?;
            Ok(Output::new(decoherence_table(cfg, &profile, format!("fig3_{}", temperature_label(temp)))?, &profile))
        })
        .collect()
}

pub(super) fn decoherence_table(cfg: &RunConfig, profile: &BathProfile, name: String) -> Result<Table, CliError> {
    let mut t = Table::new(name, &["t_ps", "p_sym", "p_asym", "coherence_factor"]);
    let end = profile.phi.end().max(10.0 * cfg.grid.log_t_min_ps);
    for time in log_grid(cfg.grid.log_t_min_ps, end, cfg.grid.n_points) {
        let p = free_decoherence(&InitialMix::SYMMETRIC, profile, time)?;
        t.push(&[time, p.p_sym, p.p_asym, inter_emitter_coherence_factor(profile, time)?]);
    }
    let k4 = profile.kappa_sq() * profile.kappa_sq();
    t.meta("p_asym_plateau", 0.5 * (1.0 - k4));
    Ok(t)
}

fn short_branch_table(name: String, profile: &BathProfile, area: f64, times: &[f64]) -> Result<(Table, ExpSum), CliError> {
    let series = short_pulse_number_series(profile, area);
    let n0 = series.eval(0.0);
    let mut t = Table::new(name, &["t_ps", "n", "n_norm", "p_gg", "p_sym", "p_asym", "p_xx"]);
    for &time in times {
        let p = short_pulse_response(profile, area, time)?;
        let n = series.eval(time);
        t.push(&[time, n, n / n0, p.p_gg, p.p_sym, p.p_asym, p.p_xx]);
    }
    t.meta("area_rad", area).meta("fwhm_ps", SHORT_PULSE_FWHM).meta("n_max", n0);
    Ok((t, series))
}

fn long_branch_table(name: String, run: &DrivenRun, area: f64, fwhm: f64) -> Table {
    let tr = &run.trajectory;
    let center = run.pulse.center;
    let mut t = Table::new(
        name,
        &["t_ps", "t_abs_ps", "n", "n_norm", "p_gg", "p_sym", "p_asym", "p_xx", "trace_error", "min_eigenvalue"],
    );
    for i in 0..tr.len() {
        let p = &tr.populations[i];
        let d = &tr.diagnostics[i];
        t.push(&[
            tr.times[i] - center,
            tr.times[i],
            tr.excitation[i],
            run.normalized[i],
            p.p_gg,
            p.p_sym,
            p.p_asym,
            p.p_xx,
            d.trace_error,
            d.min_eigenvalue,
        ]);
    }
    t.meta("area_rad", area)
        .meta("fwhm_ps", fwhm)
        .meta("pulse_center_ps", center)
        .meta("n_max", run.n_max)
        .meta("t_at_max_ps", run.t_at_max - center)
        .meta("max_trace_error", tr.max_trace_error())
        .meta("min_eigenvalue", tr.min_eigenvalue());
    t
}

/// Largest difference between the normalized long-pulse excitation number
/// and the normalized sudden-excitation curve, over samples at least
/// `from` after the pulse centre.
pub fn normalized_gap(short: &ExpSum, run: &DrivenRun, from: f64) -> f64 {
    let n0 = short.eval(0.0);
    let center = run.pulse.center;
    run.trajectory
        .times
        .iter()
        .zip(&run.normalized)
        .filter(|(t, _)| **t - center >= from)
        .fold(0.0, |m, (t, n)| m.max((n - short.eval(t - center) / n0).abs()))
}

/// Rate of a single exponential fitted to n(t) after the pulse window.
fn post_pulse_rate(run: &DrivenRun) -> Result<f64, CliError> {
    let (t, n) = run.post_pulse();
    let end = *t.last().unwrap_or(&run.pulse_end);
    Ok(fit_exponential(t, n, (run.pulse_end, end))?.rate)
}

/// Sudden versus adiabatic excitation of the bright state.
pub fn fig4(cfg: &RunConfig, profiles: &Profiles) -> Result<Vec<Output>, CliError> {
    let profile = profiles.base()?;
    let area = cfg.pulse.area;
    let times = linear_grid(cfg.grid.t_max_ps, cfg.grid.n_points);
    let (mut short, _) = short_branch_table("fig4_short".into(), &profile, area, &times)?;
    let run = long_pulse_run(&profile, cfg, &drive(cfg, area, cfg.pulse.fwhm_ps)?)?;
    let mut long = long_branch_table("fig4_long".into(), &run, area, cfg.pulse.fwhm_ps);
    let rate = post_pulse_rate(&run)?;
    long.meta("post_pulse_rate_per_ps", rate)
        .meta("post_pulse_rate_over_rate_sym", rate / profile.rate_sym);
    short.meta("n0_long", run.n_max);
    Ok(vec![Output::new(short, &profile), Output::new(long, &profile)])
}

/// 1/e lifetimes of S/A mixtures prepared in either frame.
pub fn fig5(_cfg: &RunConfig, profiles: &Profiles) -> Result<Vec<Output>, CliError> {
    const POINTS: usize = 101;
    let profile = profiles.base()?;
    let mut t = Table::new(
        "fig5_lifetimes",
        &[
            "w_sym",
            "tau_electronic_ps",
            "tau_polaronic_ps",
            "tau_electronic_gamma",
            "tau_polaronic_gamma",
            "relative_gap",
        ],
    );
    let g = profile.gamma;
    for r in lifetime_sweep(&profile, POINTS)? {
        t.push(&[
            r.w_sym,
            r.tau_electronic,
            r.tau_polaronic,
            r.tau_electronic * g,
            r.tau_polaronic * g,
            r.relative_gap(),
        ]);
    }
    Ok(vec![Output::new(t, &profile)])
}

/// Normalized excitation number for several pulse areas and both pulse
/// lengths.
pub fn fig6(cfg: &RunConfig, profiles: &Profiles) -> Result<Vec<Output>, CliError> {
    let profile = profiles.base()?;
    let times = linear_grid(cfg.grid.t_max_ps, cfg.grid.n_points);
    let runs: Vec<DrivenRun> = FIG6_AREAS
        .par_iter()
        .map(|&(area, _)| long_pulse_run(&profile, cfg, &drive(cfg, area, cfg.pulse.fwhm_ps)?))
        .collect::<Result<_, CliError>>()?;

    let mut out = Vec::new();
    let mut summary = Table::new("fig6_summary", &["area_rad", "n_max_short", "n_max_long", "normalized_gap"]);
    for (&(area, label), run) in FIG6_AREAS.iter().zip(&runs) {
        let (short, series) = short_branch_table(format!("fig6_{label}_short"), &profile, area, &times)?;
        let gap = normalized_gap(&series, run, WINDOW_FROM_SIGMAS * run.pulse.width);
        summary.push(&[area, series.eval(0.0), run.n_max, gap]);
        out.push(Output::new(short, &profile));
        out.push(Output::new(long_branch_table(format!("fig6_{label}_long"), run, area, cfg.pulse.fwhm_ps), &profile));
    }
    summary.meta("gap_from_sigmas", WINDOW_FROM_SIGMAS);
    out.push(Output::new(summary, &profile));
    Ok(out)
}

/// Start of the comparison window of the area figure, in standard
/// deviations of the long pulse after its centre.
pub const WINDOW_FROM_SIGMAS: f64 = 4.0;

/// Normalized emission intensity I = −dn/dt at several temperatures.
pub fn fig7(cfg: &RunConfig, profiles: &Profiles) -> Result<Vec<Output>, CliError> {
    let area = cfg.pulse.area;
    let built: Vec<Arc<BathProfile>> = FIG7_TEMPERATURES
        .iter()
        .map(|&t| profiles.at(t))
        .collect::<Result<_, _>>()?;
    let runs: Vec<DrivenRun> = built
        .par_iter()
        .map(|p| long_pulse_run(p, cfg, &drive(cfg, area, cfg.pulse.fwhm_ps)?))
        .collect::<Result<_, CliError>>()?;
    let times = linear_grid(cfg.grid.t_max_ps, cfg.grid.n_points);

    let mut out = Vec::new();
    for ((&temp, profile), run) in FIG7_TEMPERATURES.iter().zip(&built).zip(&runs) {
        let label = temperature_label(temp);
        let series = short_pulse_number_series(profile, area);
        let i_short: Vec<f64> = times.iter().map(|&t| series.neg_derivative(t)).collect();
        let i0 = i_short.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut short = Table::new(format!("fig7_{label}_short"), &["t_ps", "I_per_ps", "I_norm", "n"]);
        for (&t, &i) in times.iter().zip(&i_short) {
            short.push(&[t, i, i / i0, series.eval(t)]);
        }
        short.meta("area_rad", area).meta("fwhm_ps", SHORT_PULSE_FWHM).meta("I_max_per_ps", i0);
        out.push(Output::new(short, profile));

        let tr = &run.trajectory;
        let i_long = tr.intensity()?;
        let i0 = i_long.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut long = Table::new(format!("fig7_{label}_long"), &["t_ps", "I_per_ps", "I_norm", "n"]);
        for k in 0..tr.len() {
            long.push(&[tr.times[k] - run.pulse.center, i_long[k], i_long[k] / i0, tr.excitation[k]]);
        }
        long.meta("area_rad", area).meta("fwhm_ps", cfg.pulse.fwhm_ps).meta("I_max_per_ps", i0);
        out.push(Output::new(long, profile));
    }
    Ok(out)
}
