use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;

use super::integrator::{integrate, IntegratorConfig};
use super::operators::{drive_operator, sigma_asym, sigma_sym};
use super::{Drive, PulseEnvelope, TwoEmitterState, Trajectory, WINDOW_SIGMAS};
use crate::analytic::SingleEmitterState;
use crate::bath::BathProfile;
use crate::error::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

// O ρ O† − ½{O†O, ρ}
fn dissipator(o: &Matrix4<Complex64>, od: &Matrix4<Complex64>, odo: &Matrix4<Complex64>, rho: &Matrix4<Complex64>) -> Matrix4<Complex64> {
    o * rho * od - (odo * rho + rho * odo) * re(0.5)
}

struct Generator {
    s: Matrix4<Complex64>,
    sd: Matrix4<Complex64>,
    sds: Matrix4<Complex64>,
    a: Matrix4<Complex64>,
    ad: Matrix4<Complex64>,
    ada: Matrix4<Complex64>,
    drive_op: Matrix4<Complex64>,
    rate_sym: f64,
    rate_asym: f64,
    rabi_scale: f64,
    drive: Option<Drive>,
}

impl Generator {
    fn new(profile: &BathProfile, drive: Option<&Drive>) -> Self {
        let (s, a) = (sigma_sym(), sigma_asym());
        let rabi_scale = match drive {
            Some(d) if d.renormalize => profile.kappa,
            _ => 1.0,
        };
        Generator {
            sd: s.adjoint(),
            sds: s.adjoint() * s,
            ad: a.adjoint(),
            ada: a.adjoint() * a,
            s,
            a,
            drive_op: drive_operator(),
            rate_sym: profile.rate_sym,
            rate_asym: profile.rate_asym,
            rabi_scale,
            drive: drive.copied(),
        }
    }

    fn rhs(&self, t: f64, rho: &Matrix4<Complex64>) -> Matrix4<Complex64> {
        let mut d = dissipator(&self.s, &self.sd, &self.sds, rho) * re(self.rate_sym);
        if self.rate_asym != 0.0 {
            d += dissipator(&self.a, &self.ad, &self.ada, rho) * re(self.rate_asym);
        }
        if let Some(drive) = &self.drive {
            let omega = self.rabi_scale * drive.pulse.eval(t);
            if omega != 0.0 {
                let h = self.drive_op * re(0.5 * omega);
                d -= (h * rho - rho * h) * I;
            }
        }
        d
    }
}

/// Right-hand side of the polaron-frame master equation,
/// dρ/dt = −i[H_pulse(t), ρ] + Γ_S L[σ_S]ρ + Γ_A L[σ_A]ρ,
/// with H_pulse = Ω(t)/2 (σ_S⁺ + σ_S⁻).
pub fn lindblad_rhs(
    state: &Matrix4<Complex64>,
    t: f64,
    profile: &BathProfile,
    drive: Option<&Drive>,
) -> Matrix4<Complex64> {
    Generator::new(profile, drive).rhs(t, state)
}

// Largest step that may start at t: σ/50 inside the pulse window, and no
// step that jumps from before the window past its first resolved step.
fn pulse_step_cap(drive: Option<&Drive>) -> impl Fn(f64) -> f64 {
    let window = drive.map(|d| (d.pulse.window(), d.pulse.max_step_in_window()));
    move |t| match window {
        None => f64::INFINITY,
        Some(((start, end), h)) => {
            if t < start {
                (start - t).max(h)
            } else if t < end {
                h
            } else {
                f64::INFINITY
            }
        }
    }
}

/// Propagates `init` and samples the state on `t_grid`.
pub fn propagate(
    init: &TwoEmitterState,
    profile: &BathProfile,
    drive: Option<&Drive>,
    t_grid: &[f64],
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    let init = TwoEmitterState::new(*init.matrix())?;
    let generator = Generator::new(profile, drive);
    let states = integrate(
        |t, rho| generator.rhs(t, rho),
        *init.matrix(),
        t_grid,
        cfg,
        pulse_step_cap(drive),
    )?;
    let states: Vec<TwoEmitterState> = states.into_iter().map(TwoEmitterState::from_matrix_unchecked).collect();
    Ok(Trajectory::from_states(t_grid.to_vec(), &states))
}

/// A driven run starting from |GG⟩.
#[derive(Debug, Clone, PartialEq)]
pub struct DrivenRun {
    pub trajectory: Trajectory,
    pub n_max: f64,
    pub t_at_max: f64,
    /// n(t)/n_max over the whole trajectory.
    pub normalized: Vec<f64>,
    /// End of the pulse window, t_c + 4σ.
    pub pulse_end: f64,
    pub pulse: PulseEnvelope,
}

impl DrivenRun {
    /// Samples at or after the end of the pulse window.
    pub fn post_pulse(&self) -> (&[f64], &[f64]) {
        let i = self.trajectory.times.partition_point(|&t| t < self.pulse_end);
        (&self.trajectory.times[i..], &self.trajectory.excitation[i..])
    }
}

/// Drives |GG⟩ with `drive` and follows the decay up to `horizon` on a
/// uniform grid of `n_points` samples.
pub fn drive_then_decay(
    profile: &BathProfile,
    drive: &Drive,
    horizon: f64,
    n_points: usize,
    cfg: &IntegratorConfig,
) -> Result<DrivenRun> {
    let pulse_end = drive.pulse.center + WINDOW_SIGMAS * drive.pulse.width;
    if !(horizon > pulse_end && horizon.is_finite()) {
        return Err(Error::domain(format!(
            "horizon {horizon} ps must exceed the end of the pulse window at {pulse_end} ps"
        )));
    }
    if n_points < 2 {
        return Err(Error::domain("at least two samples are required"));
    }
    let grid: Vec<f64> = (0..n_points).map(|i| horizon * i as f64 / (n_points - 1) as f64).collect();
    let trajectory = propagate(&TwoEmitterState::ground(), profile, Some(drive), &grid, cfg)?;
    let (i_max, n_max) = trajectory
        .excitation
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, n)| if n > best.1 { (i, n) } else { best });
    if !(n_max > 0.0) {
        return Err(Error::domain("the pulse leaves the emitters unexcited"));
    }
    let normalized = trajectory.excitation.iter().map(|n| n / n_max).collect();
    Ok(DrivenRun {
        t_at_max: trajectory.times[i_max],
        trajectory,
        n_max,
        normalized,
        pulse_end,
        pulse: drive.pulse,
    })
}

/// Polaron-frame decay of one emitter, dρ/dt = γ L[σ⁻]ρ, sampled on `t_grid`.
/// The coherence returned is that of the dressed state.
pub fn propagate_single(
    init: &SingleEmitterState,
    gamma: f64,
    t_grid: &[f64],
    cfg: &IntegratorConfig,
) -> Result<Vec<SingleEmitterState>> {
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(Error::domain(format!("gamma must be non-negative, got {gamma}")));
    }
    // Basis (G, X); σ⁻ = |G⟩⟨X|.
    let mut lower = Matrix2::zeros();
    lower[(0, 1)] = re(1.0);
    let (ld, ldl) = (lower.adjoint(), lower.adjoint() * lower);
    let mut rho0 = Matrix2::zeros();
    rho0[(0, 0)] = re(init.pop_ground);
    rho0[(1, 1)] = re(init.pop_excited);
    rho0[(0, 1)] = init.coherence;
    rho0[(1, 0)] = init.coherence.conj();
    let rhs = |_: f64, rho: &Matrix2<Complex64>| (lower * rho * ld - (ldl * rho + rho * ldl) * re(0.5)) * re(gamma);
    let states = integrate(rhs, rho0, t_grid, cfg, |_| f64::INFINITY)?;
    Ok(states
        .iter()
        .map(|m| SingleEmitterState {
            pop_excited: m[(1, 1)].re,
            pop_ground: m[(0, 0)].re,
            coherence: m[(0, 1)],
        })
        .collect())
}
