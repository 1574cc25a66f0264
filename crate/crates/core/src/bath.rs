//! Phonon spectral density, bath correlation function and the polaron
//! constants derived from them.
//!
//! The bath is the deformation-potential coupling of a quantum-dot exciton to
//! longitudinal-acoustic phonons,
//!
//! ```text
//! J(ω) = ω³ / (2 μ ħ c_s⁵) · (D_e e^{-ω²/ω_e²} − D_h e^{-ω²/ω_h²})²
//! ```
//!
//! and all frequency integrals run over `[0, omega_max]`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate, FixedRule, QuadratureConfig};
use crate::units::{thermal_frequency, EV_SI, HBAR_SI, PS};

/// Material constants of the phonon bath.
///
/// Units: `mass_density` kg/m³, `sound_speed` m/s, deformation potentials in
/// eV, cutoffs in ps⁻¹.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralDensityParams {
    pub mass_density: f64,
    pub sound_speed: f64,
    pub deform_e: f64,
    pub deform_h: f64,
    pub cutoff_e: f64,
    pub cutoff_h: f64,
}

/// Dot radius used for the default cutoffs, in m.
pub const DEFAULT_DOT_RADIUS: f64 = 4e-9;

impl Default for SpectralDensityParams {
    /// InGaAs/GaAs-like dot of roughly 4 nm radius.
    fn default() -> Self {
        let sound_speed = 5110.0;
        let cutoff = std::f64::consts::SQRT_2 * sound_speed / DEFAULT_DOT_RADIUS * PS;
        SpectralDensityParams {
            mass_density: 5370.0,
            sound_speed,
            deform_e: 7.0,
            deform_h: -3.5,
            cutoff_e: cutoff,
            cutoff_h: cutoff,
        }
    }
}

impl SpectralDensityParams {
    pub fn new(
        mass_density: f64,
        sound_speed: f64,
        deform_e: f64,
        deform_h: f64,
        cutoff_e: f64,
        cutoff_h: f64,
    ) -> Result<Self> {
        let p = SpectralDensityParams {
            mass_density,
            sound_speed,
            deform_e,
            deform_h,
            cutoff_e,
            cutoff_h,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("mass_density", self.mass_density),
            ("sound_speed", self.sound_speed),
            ("cutoff_e", self.cutoff_e),
            ("cutoff_h", self.cutoff_h),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::domain(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.deform_e.is_finite() && self.deform_h.is_finite()) {
            return Err(Error::domain("deformation potentials must be finite"));
        }
        Ok(())
    }

    /// Same material with the exciton–phonon coupling switched off.
    pub fn uncoupled() -> Self {
        SpectralDensityParams {
            deform_e: 0.0,
            deform_h: 0.0,
            ..Default::default()
        }
    }

    /// Scales J(ω) by `factor` (both deformation potentials by √factor).
    pub fn with_coupling_scale(&self, factor: f64) -> Self {
        let s = factor.sqrt();
        SpectralDensityParams {
            deform_e: self.deform_e * s,
            deform_h: self.deform_h * s,
            ..*self
        }
    }

    pub fn is_uncoupled(&self) -> bool {
        self.deform_e == 0.0 && self.deform_h == 0.0
    }

    pub fn max_cutoff(&self) -> f64 {
        self.cutoff_e.max(self.cutoff_h)
    }

    pub fn min_cutoff(&self) -> f64 {
        self.cutoff_e.min(self.cutoff_h)
    }

    // ω³ prefactor in ps units: ω enters in ps⁻¹, J leaves in ps⁻¹.
    fn prefactor(&self) -> f64 {
        let si = EV_SI * EV_SI / (2.0 * self.mass_density * HBAR_SI * self.sound_speed.powi(5));
        // (ω/PS)³ · si · PS
        si / (PS * PS)
    }

    #[inline]
    fn density(&self, omega: f64) -> f64 {
        let x2 = omega * omega;
        let bracket = self.deform_e * (-x2 / (self.cutoff_e * self.cutoff_e)).exp()
            - self.deform_h * (-x2 / (self.cutoff_h * self.cutoff_h)).exp();
        self.prefactor() * omega * x2 * bracket * bracket
    }

    /// Upper integration limit for the given quadrature settings.
    pub fn omega_max(&self, quad: &QuadratureConfig) -> Result<f64> {
        let w = quad.omega_max.unwrap_or(10.0 * self.max_cutoff());
        if w <= self.max_cutoff() {
            return Err(Error::domain(format!(
                "omega_max = {w} must exceed both cutoffs ({}, {})",
                self.cutoff_e, self.cutoff_h
            )));
        }
        Ok(w)
    }
}

/// J(ω) in ps⁻¹ for ω in ps⁻¹.
pub fn eval_spectral_density(params: &SpectralDensityParams, omega: f64) -> Result<f64> {
    if !(omega >= 0.0) {
        return Err(Error::domain(format!("omega must be non-negative, got {omega}")));
    }
    Ok(params.density(omega))
}

/// Reorganisation energy ω_R = ∫ J(ω)/ω dω, in ps⁻¹.
pub fn reorg_energy(params: &SpectralDensityParams, quad: &QuadratureConfig) -> Result<f64> {
    params.validate()?;
    quad.validate()?;
    if params.is_uncoupled() {
        return Ok(0.0);
    }
    let w_max = params.omega_max(quad)?;
    let [v] = integrate(|w| [params.density(w) / w], 0.0, w_max, 8, quad)?;
    Ok(v)
}

#[inline]
fn coth_weight(omega: f64, thermal: f64) -> f64 {
    if thermal == 0.0 {
        return 1.0;
    }
    let x = omega / (2.0 * thermal);
    if x > 40.0 {
        1.0
    } else {
        1.0 / x.tanh()
    }
}

fn check_temperature(temperature: f64) -> Result<f64> {
    if !(temperature >= 0.0 && temperature.is_finite()) {
        return Err(Error::domain(format!(
            "temperature must be non-negative, got {temperature} K"
        )));
    }
    Ok(thermal_frequency(temperature))
}

// [Re Φ, Im Φ, Re Φ', Im Φ'] at t ≥ 0.
fn phi_and_derivative(
    params: &SpectralDensityParams,
    thermal: f64,
    t: f64,
    w_max: f64,
    quad: &QuadratureConfig,
) -> Result<[f64; 4]> {
    if params.is_uncoupled() {
        return Ok([0.0; 4]);
    }
    let panels = ((w_max * t / std::f64::consts::PI).ceil() as usize).max(8);
    integrate(
        |w| {
            let g = params.density(w) / (w * w);
            let c = coth_weight(w, thermal);
            let (s, co) = (w * t).sin_cos();
            [g * c * co, -g * s, -g * c * w * s, -g * w * co]
        },
        0.0,
        w_max,
        panels,
        quad,
    )
}

// Times per parallel work unit; phase factors are recomputed exactly at the
// start of each block and advanced by rotation inside it.
const PHASE_BLOCK: usize = 64;

// [Re Φ, Im Φ, Re Φ', Im Φ'] on a whole time grid. All times share one
// composite Gauss–Kronrod rule fine enough for the longest time; any time
// whose Kronrod–Gauss error estimate misses the tolerance falls back to
// adaptive integration.
fn tabulate_phi(
    params: &SpectralDensityParams,
    thermal: f64,
    times: &[f64],
    w_max: f64,
    quad: &QuadratureConfig,
) -> Result<Vec<[f64; 4]>> {
    if params.is_uncoupled() {
        return Ok(vec![[0.0; 4]; times.len()]);
    }
    let t_end = times.iter().fold(0.0_f64, |m, t| m.max(t.abs()));
    let panels = ((2.0 * w_max * t_end / std::f64::consts::PI).ceil() as usize).max(8);
    let rule = FixedRule::composite(0.0, w_max, panels);
    let n = rule.nodes.len();
    // Weighted integrand pieces: cos part g·coth, sin part g, per rule.
    let mut kc = Vec::with_capacity(n);
    let mut ks = Vec::with_capacity(n);
    let mut gc = Vec::with_capacity(n);
    let mut gs = Vec::with_capacity(n);
    for i in 0..n {
        let w = rule.nodes[i];
        let g = params.density(w) / (w * w);
        let c = coth_weight(w, thermal);
        kc.push(rule.kronrod[i] * g * c);
        ks.push(rule.kronrod[i] * g);
        gc.push(rule.gauss[i] * g * c);
        gs.push(rule.gauss[i] * g);
    }
    let uniform = times.len() > 2 && {
        let h = times[1] - times[0];
        times.windows(2).all(|w| ((w[1] - w[0]) - h).abs() <= 1e-12 * h.abs().max(1e-300))
    };
    let step = if uniform { times[1] - times[0] } else { 0.0 };
    let rotation: Vec<Complex64> = rule.nodes.iter().map(|&w| Complex64::from_polar(1.0, w * step)).collect();
    let per_panel = FixedRule::NODES_PER_PANEL;

    let blocks: Vec<Vec<[f64; 4]>> = times
        .par_chunks(PHASE_BLOCK)
        .map(|block| {
            let mut phase: Vec<Complex64> = rule.nodes.iter().map(|&w| Complex64::from_polar(1.0, w * block[0])).collect();
            let mut out = Vec::with_capacity(block.len());
            for (j, &t) in block.iter().enumerate() {
                if j > 0 {
                    if uniform {
                        for (z, r) in phase.iter_mut().zip(&rotation) {
                            *z *= r;
                        }
                    } else {
                        for (z, &w) in phase.iter_mut().zip(&rule.nodes) {
                            *z = Complex64::from_polar(1.0, w * t);
                        }
                    }
                }
                let mut total = [0.0; 4];
                let mut err = 0.0;
                for p in 0..rule.panels() {
                    let mut kr = [0.0; 4];
                    let mut ga = [0.0; 4];
                    for i in p * per_panel..(p + 1) * per_panel {
                        let (co, si) = (phase[i].re, phase[i].im);
                        let w = rule.nodes[i];
                        kr[0] += kc[i] * co;
                        kr[1] -= ks[i] * si;
                        kr[2] -= kc[i] * w * si;
                        kr[3] -= ks[i] * w * co;
                        ga[0] += gc[i] * co;
                        ga[1] -= gs[i] * si;
                        ga[2] -= gc[i] * w * si;
                        ga[3] -= gs[i] * w * co;
                    }
                    let mut e = 0.0_f64;
                    for k in 0..4 {
                        total[k] += kr[k];
                        e = e.max((kr[k] - ga[k]).abs());
                    }
                    err += e;
                }
                let magnitude = total.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
                if err <= quad.abs_tol.max(quad.rel_tol * magnitude) {
                    out.push(Ok(total));
                } else {
                    out.push(phi_and_derivative(params, thermal, t.abs(), w_max, quad));
                }
            }
            out.into_iter().collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    Ok(blocks.into_iter().flatten().collect())
}

/// Bath correlation function
/// Φ(t) = ∫ J(ω)/ω² [coth(ħω/2k_BT) cos ωt − i sin ωt] dω.
///
/// Negative times use Φ(−t) = Φ(t)*.
pub fn phi(
    params: &SpectralDensityParams,
    temperature: f64,
    t: f64,
    quad: &QuadratureConfig,
) -> Result<Complex64> {
    params.validate()?;
    quad.validate()?;
    let thermal = check_temperature(temperature)?;
    let w_max = params.omega_max(quad)?;
    let v = phi_and_derivative(params, thermal, t.abs(), w_max, quad)?;
    let z = Complex64::new(v[0], v[1]);
    Ok(if t < 0.0 { z.conj() } else { z })
}

/// Thermal expectation of the displacement operator, κ = exp(−Φ(0)/2).
pub fn kappa(params: &SpectralDensityParams, temperature: f64, quad: &QuadratureConfig) -> Result<f64> {
    let phi0 = phi(params, temperature, 0.0, quad)?.re;
    Ok((-0.5 * phi0).exp())
}

/// Polaron-frame Dicke rates Γ_S = (1+κ²)γ and Γ_A = (1−κ²)γ.
pub fn collective_rates(gamma: f64, kappa: f64) -> Result<(f64, f64)> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::domain(format!("gamma must be positive, got {gamma}")));
    }
    if !(0.0..=1.0).contains(&kappa) {
        return Err(Error::domain(format!("kappa must lie in [0, 1], got {kappa}")));
    }
    let rate_sym = (1.0 + kappa * kappa) * gamma;
    // Γ_S ∈ [γ, 2γ], so the subtraction is exact and Γ_S + Γ_A == 2γ bitwise.
    Ok((rate_sym, 2.0 * gamma - rate_sym))
}

/// Φ(t) tabulated together with its derivative, interpolated by cubic
/// Hermite segments. Outside the table Φ is taken to have decayed to zero.
#[derive(Debug, Clone, PartialEq)]
pub struct PhiTable {
    times: Vec<f64>,
    values: Vec<Complex64>,
    derivatives: Vec<Complex64>,
}

impl PhiTable {
    pub fn zero(times: Vec<f64>) -> Self {
        let n = times.len();
        PhiTable {
            times,
            values: vec![Complex64::new(0.0, 0.0); n],
            derivatives: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn end(&self) -> f64 {
        *self.times.last().unwrap_or(&0.0)
    }

    fn scaled(&self, factor: f64) -> Self {
        PhiTable {
            times: self.times.clone(),
            values: self.values.iter().map(|v| v * factor).collect(),
            derivatives: self.derivatives.iter().map(|v| v * factor).collect(),
        }
    }

    /// Interpolated Φ(t); conjugate-symmetric for t < 0.
    pub fn eval(&self, t: f64) -> Complex64 {
        let z = self.eval_nonneg(t.abs());
        if t < 0.0 {
            z.conj()
        } else {
            z
        }
    }

    fn eval_nonneg(&self, t: f64) -> Complex64 {
        let n = self.times.len();
        if n == 0 || t > self.end() {
            return Complex64::new(0.0, 0.0);
        }
        if n == 1 {
            return self.values[0];
        }
        let i = match self.times.binary_search_by(|x| x.total_cmp(&t)) {
            Ok(i) => return self.values[i],
            Err(i) => i.clamp(1, n - 1) - 1,
        };
        let (t0, t1) = (self.times[i], self.times[i + 1]);
        let h = t1 - t0;
        let s = (t - t0) / h;
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        self.values[i] * h00
            + self.derivatives[i] * (h10 * h)
            + self.values[i + 1] * h01
            + self.derivatives[i + 1] * (h11 * h)
    }
}

/// Everything the closed-form and propagated dynamics need to know about
/// the phonon bath at one temperature.
#[derive(Debug, Clone, PartialEq)]
pub struct BathProfile {
    pub temperature: f64,
    /// Φ(0), real.
    pub phi0: f64,
    pub kappa: f64,
    pub reorg_energy: f64,
    /// Single-emitter radiative rate γ, ps⁻¹.
    pub gamma: f64,
    pub rate_sym: f64,
    pub rate_asym: f64,
    pub phi: PhiTable,
}

impl BathProfile {
    /// Profile of an emitter without phonon coupling: κ = 1, Φ ≡ 0.
    pub fn uncoupled(temperature: f64, gamma: f64) -> Result<Self> {
        let (rate_sym, rate_asym) = collective_rates(gamma, 1.0)?;
        Ok(BathProfile {
            temperature,
            phi0: 0.0,
            kappa: 1.0,
            reorg_energy: 0.0,
            gamma,
            rate_sym,
            rate_asym,
            phi: PhiTable::zero(vec![0.0]),
        })
    }

    /// Interpolated Φ(t).
    pub fn phi_at(&self, t: f64) -> Complex64 {
        self.phi.eval(t)
    }

    pub fn kappa_sq(&self) -> f64 {
        self.kappa * self.kappa
    }

    /// The profile obtained by scaling J(ω) by `factor`. Φ and ω_R are
    /// linear in J, so this is exact and needs no further quadrature.
    pub fn with_coupling_scale(&self, factor: f64) -> Result<Self> {
        if !(factor >= 0.0 && factor.is_finite()) {
            return Err(Error::domain(format!("coupling scale must be non-negative, got {factor}")));
        }
        let phi0 = self.phi0 * factor;
        let kappa = (-0.5 * phi0).exp();
        let (rate_sym, rate_asym) = collective_rates(self.gamma, kappa)?;
        Ok(BathProfile {
            phi0,
            kappa,
            reorg_energy: self.reorg_energy * factor,
            rate_sym,
            rate_asym,
            phi: self.phi.scaled(factor),
            ..self.clone()
        })
    }

    /// Rescales the coupling so that κ takes the requested value.
    pub fn with_kappa(&self, kappa: f64) -> Result<Self> {
        if !(kappa > 0.0 && kappa <= 1.0) {
            return Err(Error::domain(format!("kappa must lie in (0, 1], got {kappa}")));
        }
        if self.phi0 == 0.0 {
            return if kappa == 1.0 {
                Ok(self.clone())
            } else {
                Err(Error::domain("cannot rescale an uncoupled profile to kappa < 1"))
            };
        }
        let profile = self.with_coupling_scale(-2.0 * kappa.ln() / self.phi0)?;
        Ok(BathProfile { kappa, ..profile })
    }

    /// Same bath with a different radiative rate.
    pub fn with_gamma(&self, gamma: f64) -> Result<Self> {
        let (rate_sym, rate_asym) = collective_rates(gamma, self.kappa)?;
        Ok(BathProfile {
            gamma,
            rate_sym,
            rate_asym,
            ..self.clone()
        })
    }
}

/// Uniform grid covering the phonon memory, `[0, 100/min(ω_e, ω_h)]`, with
/// about fifty points per cutoff period.
pub fn default_phonon_grid(params: &SpectralDensityParams) -> Vec<f64> {
    let t_end = 100.0 / params.min_cutoff();
    let dt = 0.02 / params.max_cutoff();
    let n = (t_end / dt).ceil() as usize;
    (0..=n).map(|i| t_end * i as f64 / n as f64).collect()
}

/// Tabulates Φ on `time_grid` and derives κ, ω_R and the collective rates.
pub fn build_profile(
    params: &SpectralDensityParams,
    temperature: f64,
    gamma: f64,
    time_grid: &[f64],
    quad: &QuadratureConfig,
) -> Result<BathProfile> {
    params.validate()?;
    quad.validate()?;
    let thermal = check_temperature(temperature)?;
    match time_grid.first() {
        Some(&t0) if t0 == 0.0 => {}
        _ => return Err(Error::domain("time grid must start at 0")),
    }
    if time_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::domain("time grid must be strictly increasing"));
    }
    let w_max = params.omega_max(quad)?;
    let rows = tabulate_phi(params, thermal, time_grid, w_max, quad)?;
    let values: Vec<Complex64> = rows.iter().map(|r| Complex64::new(r[0], r[1])).collect();
    let derivatives = rows.iter().map(|r| Complex64::new(r[2], r[3])).collect();
    let phi0 = values[0].re;
    let kappa = (-0.5 * phi0).exp();
    let (rate_sym, rate_asym) = collective_rates(gamma, kappa)?;
    Ok(BathProfile {
        temperature,
        phi0,
        kappa,
        reorg_energy: reorg_energy(params, quad)?,
        gamma,
        rate_sym,
        rate_asym,
        phi: PhiTable {
            times: time_grid.to_vec(),
            values,
            derivatives,
        },
    })
}
