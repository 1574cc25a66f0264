//! Acceptance gate: one test per criterion, each printing a PASS/FAIL line
//! with the measured values (visible with `--nocapture`).

use std::f64::consts::PI;
use std::path::Path;
use std::process::Command;
use std::sync::OnceLock;
use std::time::Instant;

use polaron_dicke::commands::{fig6, Profiles};
use polaron_dicke::RunConfig;
use polaron_dicke_core::analytic::{
    doubly_excited_decay, excitation_number, free_decoherence, lifetime, lifetime_sweep,
    single_excitation_decay, single_tls_evolution, DickePopulations, Frame, InitialMix,
    SingleEmitterState,
};
use polaron_dicke_core::bath::{build_profile, default_phonon_grid, BathProfile, SpectralDensityParams};
use polaron_dicke_core::engine::{
    drive_then_decay, fit_biexponential, fit_exponential, propagate, Drive, DrivenRun,
    IntegratorConfig, PulseEnvelope, Trajectory, TwoEmitterState,
};
use polaron_dicke_core::quadrature::QuadratureConfig;

const GAMMA: f64 = 1.0 / 200.0;

fn profile(temperature: f64) -> BathProfile {
    let params = SpectralDensityParams::default();
    build_profile(&params, temperature, GAMMA, &default_phonon_grid(&params), &QuadratureConfig::default()).unwrap()
}

fn profile_4k() -> &'static BathProfile {
    static P: OnceLock<BathProfile> = OnceLock::new();
    P.get_or_init(|| profile(4.0))
}

fn linspace(end: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| end * i as f64 / (n - 1) as f64).collect()
}

fn verdict(criterion: u32, title: &str, pass: bool, detail: String) {
    println!("{} criterion {criterion:>2} ({title}): {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {criterion} ({title}) failed: {detail}");
}

fn weak_long_pulse() -> DrivenRun {
    let drive = Drive {
        pulse: PulseEnvelope::from_fwhm(PI / 8.0, 20.0).unwrap(),
        renormalize: true,
    };
    drive_then_decay(profile_4k(), &drive, 1500.0, 1501, &IntegratorConfig::default()).unwrap()
}

#[test]
fn criterion_01_single_emitter_rate_is_phonon_invariant() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for temp in [0.0, 4.0, 77.0] {
        let prof = profile(temp);
        let times = linspace(5.0 / GAMMA, 501);
        let pops: Vec<f64> = times
            .iter()
            .map(|&t| single_tls_evolution(&SingleEmitterState::superposition(), &prof, t).unwrap().pop_excited)
            .collect();
        let fit = fit_exponential(&times, &pops, (0.0, 5.0 / GAMMA)).unwrap();
        worst = worst.max((fit.rate / GAMMA - 1.0).abs());
    }
    let elapsed = start.elapsed().as_secs_f64();
    verdict(
        1,
        "single-emitter decay rate",
        worst < 1e-10 && elapsed < 1.0,
        format!("max |rate/γ − 1| = {worst:.2e}, runtime {elapsed:.3} s"),
    );
}

#[test]
fn criterion_02_dicke_limit() {
    let prof = BathProfile::uncoupled(4.0, GAMMA).unwrap();
    let grid = linspace(10.0 / GAMMA, 401);
    let cfg = IntegratorConfig::default();
    let bright = propagate(&TwoEmitterState::symmetric(), &prof, None, &grid, &cfg).unwrap();
    let mut dev = 0.0f64;
    for (t, n) in grid.iter().zip(&bright.excitation) {
        let exact = (-2.0 * GAMMA * t).exp();
        let analytic = excitation_number(&InitialMix::SYMMETRIC, &prof, *t).unwrap();
        dev = dev.max((n - exact).abs()).max((analytic - exact).abs());
    }
    let dark = propagate(&TwoEmitterState::antisymmetric(), &prof, None, &grid, &cfg).unwrap();
    let drift = (dark.final_state.matrix() - TwoEmitterState::antisymmetric().matrix()).norm();
    let analytic_dark = grid
        .iter()
        .map(|&t| (excitation_number(&InitialMix::ANTISYMMETRIC, &prof, t).unwrap() - 1.0).abs())
        .fold(0.0, f64::max);
    verdict(
        2,
        "Dicke limit",
        dev < 1e-6 && drift == 0.0 && analytic_dark == 0.0,
        format!("bright max deviation {dev:.2e}; dark drift engine {drift:.1e}, analytic {analytic_dark:.1e}"),
    );
}

#[test]
fn criterion_03_sum_rule_and_kappa_ordering() {
    let temps = [0.0, 4.0, 20.0, 77.0];
    let profs: Vec<BathProfile> = temps.iter().map(|&t| profile(t)).collect();
    let exact = profs.iter().all(|p| p.rate_sym + p.rate_asym == 2.0 * p.gamma);
    let in_range = profs.iter().all(|p| p.kappa > 0.0 && p.kappa <= 1.0);
    let decreasing = profs.windows(2).all(|w| w[1].kappa < w[0].kappa);
    let ks: Vec<String> = profs.iter().map(|p| format!("{:.4e}", p.kappa)).collect();
    verdict(
        3,
        "sum rule and κ",
        exact && in_range && decreasing,
        format!("Γ_S + Γ_A == 2γ: {exact}; κ(0, 4, 20, 77 K) = [{}]", ks.join(", ")),
    );
}

#[test]
fn criterion_04_initial_value_consistency() {
    let mut worst = 0.0f64;
    let mut n_exact = true;
    for k in [0.2, 0.5, 0.9] {
        let prof = profile_4k().with_kappa(k).unwrap();
        let p = single_excitation_decay(&prof, 0.0).unwrap();
        let target = DickePopulations { p_gg: 0.0, p_sym: 1.0, p_asym: 0.0, p_xx: 0.0 };
        worst = worst.max(p.max_abs_diff(&target));
        n_exact &= excitation_number(&InitialMix::SYMMETRIC, &prof, 0.0).unwrap() == 1.0;
    }
    verdict(
        4,
        "t = 0 consistency",
        worst < 1e-9 && n_exact,
        format!("max population deviation {worst:.2e}; n(0) == 1: {n_exact}"),
    );
}

#[test]
fn criterion_05_decoherence_plateau() {
    let start = Instant::now();
    let mut plateaus = Vec::new();
    let mut worst = 0.0f64;
    for temp in [4.0, 77.0] {
        let prof = profile(temp);
        let late = 2.0 * prof.phi.end();
        let p = free_decoherence(&InitialMix::SYMMETRIC, &prof, late).unwrap();
        let k4 = prof.kappa_sq() * prof.kappa_sq();
        worst = worst.max((p.p_asym - 0.5 * (1.0 - k4)).abs());
        plateaus.push(p.p_asym);
    }
    let elapsed = start.elapsed().as_secs_f64();
    verdict(
        5,
        "decoherence plateau",
        worst < 1e-9 && plateaus[1] > plateaus[0] && elapsed < 5.0,
        format!(
            "p_asym(∞) 4 K {:.6}, 77 K {:.6}; max deviation from ½(1−κ⁴) {worst:.1e}; runtime {elapsed:.2} s",
            plateaus[0], plateaus[1]
        ),
    );
}

#[test]
fn criterion_06_weak_driving_bound() {
    let run = weak_long_pulse();
    let worst = run
        .trajectory
        .populations
        .iter()
        .filter(|p| p.p_sym + p.p_asym > 0.0)
        .map(|p| p.p_xx / (p.p_sym + p.p_asym))
        .fold(0.0, f64::max);
    let zero_ok = run
        .trajectory
        .populations
        .iter()
        .all(|p| p.p_sym + p.p_asym > 0.0 || p.p_xx == 0.0);
    verdict(
        6,
        "weak-driving bound",
        worst < 0.01 && zero_ok,
        format!("max p_xx/(p_sym + p_asym) = {worst:.4}"),
    );
}

#[test]
fn criterion_07_long_pulse_decay_rate() {
    let run = weak_long_pulse();
    let (t, n) = run.post_pulse();
    let fit = fit_exponential(t, n, (run.pulse_end, 1500.0)).unwrap();
    let ratio = fit.rate / profile_4k().rate_sym;
    verdict(
        7,
        "long-pulse mono-exponential decay",
        (ratio - 1.0).abs() < 0.05,
        format!("post-pulse rate / Γ_S = {ratio:.4}"),
    );
}

#[test]
fn criterion_08_short_pulse_biexponential_decay() {
    let prof = profile_4k();
    let times = linspace(3000.0, 30001);
    let n: Vec<f64> = times
        .iter()
        .map(|&t| excitation_number(&InitialMix::SYMMETRIC, prof, t).unwrap())
        .collect();
    let fit = fit_biexponential(&times, &n, (10.0, 150.0), (1500.0, 3000.0)).unwrap();
    let early = fit.fast.rate / prof.rate_sym;
    let late = fit.slow.rate / prof.rate_asym;
    verdict(
        8,
        "short-pulse biexponential decay",
        (early - 1.0).abs() < 0.01 && (late - 1.0).abs() < 0.01,
        format!("early rate / Γ_S = {early:.5}, late rate / Γ_A = {late:.5}"),
    );
}

#[test]
fn criterion_09_lifetime_gap() {
    let prof = profile_4k();
    let te = lifetime(&InitialMix::SYMMETRIC, prof, Frame::Electronic).unwrap();
    let tp = lifetime(&InitialMix::SYMMETRIC, prof, Frame::Polaronic).unwrap();
    let gap = (tp - te).abs() / tp;
    let start = Instant::now();
    let rows = lifetime_sweep(prof, 101).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    verdict(
        9,
        "lifetime gap",
        gap > 0.01 && te < tp && rows.len() == 101 && elapsed < 2.0,
        format!(
            "|Δτ|/τ_P = {gap:.4}; τ_E γ = {:.4}, τ_P γ = {:.4} (τ_E < τ_P: {}); sweep runtime {elapsed:.3} s",
            te * GAMMA,
            tp * GAMMA,
            te < tp
        ),
    );
}

#[test]
fn criterion_10_doubly_excited_frame_independence() {
    let prof = profile_4k();
    let grid = linspace(10.0 / GAMMA, 401);
    let tr = propagate(&TwoEmitterState::doubly_excited(), prof, None, &grid, &IntegratorConfig::default()).unwrap();
    let k2 = prof.kappa_sq();
    let (plus, minus) = (0.5 * (1.0 + k2), 0.5 * (1.0 - k2));
    let (mut pol, mut ele) = (0.0f64, 0.0f64);
    for (t, p) in grid.iter().zip(&tr.populations) {
        pol = pol.max(p.max_abs_diff(&doubly_excited_decay(prof, *t, Frame::Polaronic).unwrap()));
        let mapped = DickePopulations {
            p_sym: plus * p.p_sym + minus * p.p_asym,
            p_asym: minus * p.p_sym + plus * p.p_asym,
            ..*p
        };
        ele = ele.max(mapped.max_abs_diff(&doubly_excited_decay(prof, *t, Frame::Electronic).unwrap()));
    }

    let cfg = RunConfig::default();
    let profiles = Profiles::new(&cfg);
    let summary = fig6(&cfg, &profiles)
        .unwrap()
        .into_iter()
        .find(|o| o.table.name == "fig6_summary")
        .unwrap()
        .table;
    let areas = summary.column("area_rad").unwrap();
    let gaps = summary.column("normalized_gap").unwrap();
    let pick = |a: f64| gaps[areas.iter().position(|&x| (x - a).abs() < 1e-12).unwrap()];
    let trend = [pick(PI / 8.0), pick(PI / 2.0), pick(PI)];
    let shrinking = trend[0] > trend[1] && trend[1] > trend[2];
    verdict(
        10,
        "doubly excited frame independence",
        pol < 1e-6 && ele < 1e-6 && shrinking,
        format!(
            "engine vs closed form {pol:.2e} (polaronic), {ele:.2e} (electronic); normalized gap π/8, π/2, π = {:.4}, {:.4}, {:.4}",
            trend[0], trend[1], trend[2]
        ),
    );
}

#[test]
fn criterion_11_numerical_robustness() {
    let prof = profile_4k();
    let cfg = IntegratorConfig::default();
    let grid = linspace(10.0 / GAMMA, 201);
    let mut trajectories: Vec<Trajectory> = [
        TwoEmitterState::symmetric(),
        TwoEmitterState::antisymmetric(),
        TwoEmitterState::doubly_excited(),
    ]
    .iter()
    .map(|s| propagate(s, prof, None, &grid, &cfg).unwrap())
    .collect();
    let mut shift = 0.0f64;
    for (area, fwhm) in [(PI / 8.0, 20.0), (PI / 2.0, 20.0), (PI, 20.0), (PI, 0.1), (2.0 * PI, 0.1)] {
        let drive = Drive {
            pulse: PulseEnvelope::from_fwhm(area, fwhm).unwrap(),
            renormalize: true,
        };
        let a = drive_then_decay(prof, &drive, 600.0, 301, &cfg).unwrap();
        let b = drive_then_decay(prof, &drive, 600.0, 301, &cfg.scaled_tolerances(0.5)).unwrap();
        let pa = a.trajectory.populations.last().unwrap();
        let pb = b.trajectory.populations.last().unwrap();
        shift = shift.max(pa.max_abs_diff(pb));
        trajectories.push(a.trajectory);
        trajectories.push(b.trajectory);
    }
    let trace = trajectories.iter().map(Trajectory::max_trace_error).fold(0.0, f64::max);
    let eig = trajectories.iter().map(Trajectory::min_eigenvalue).fold(f64::INFINITY, f64::min);
    verdict(
        11,
        "numerical robustness",
        trace < 1e-9 && eig >= -1e-9 && shift < 1e-6,
        format!("max trace error {trace:.1e}, min eigenvalue {eig:.1e}, tolerance-halving shift {shift:.1e}"),
    );
}

fn files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
        })
        .collect();
    v.sort();
    v
}

#[test]
fn criterion_12_deterministic_output() {
    let bin = env!("CARGO_BIN_EXE_polaron-dicke");
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    let start = Instant::now();
    for d in &dirs {
        let status = Command::new(bin)
            .args(["all", "--out"])
            .arg(d.path())
            .stderr(std::process::Stdio::null())
            .stdout(std::process::Stdio::null())
            .status()
            .unwrap();
        assert!(status.success());
    }
    let elapsed = start.elapsed().as_secs_f64() / 2.0;
    let (a, b) = (files(dirs[0].path()), files(dirs[1].path()));
    let identical = !a.is_empty() && a == b;
    verdict(
        12,
        "determinism",
        identical && elapsed < 60.0,
        format!("{} files byte-identical: {identical}; all figures in {elapsed:.1} s", a.len()),
    );
}
