//! Figure and sweep commands. Each command computes a set of tables and
//! writes them through a [`Sink`].

mod figures;
mod sweep;

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use polaron_dicke_core::bath::{build_profile, BathProfile};
use polaron_dicke_core::engine::{drive_then_decay, Drive, DrivenRun, PulseEnvelope};
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{Sink, Table};

pub use figures::{
    bath, fig2, fig3, fig4, fig5, fig6, fig7, normalized_gap, FIG3_TEMPERATURES, FIG6_AREAS,
    FIG7_TEMPERATURES, SHORT_PULSE_FWHM,
};
pub use sweep::{run_sweep, SweepAxis, SweepReport};

/// A command together with its arguments, as recorded in sidecar files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Task {
    Bath,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    /// The bath tables and every figure.
    All,
    Sweep { axis: SweepAxis, values: Vec<f64> },
}

impl Task {
    pub fn label(&self) -> String {
        match self {
            Task::Bath => "bath".into(),
            Task::Fig2 => "fig2".into(),
            Task::Fig3 => "fig3".into(),
            Task::Fig4 => "fig4".into(),
            Task::Fig5 => "fig5".into(),
            Task::Fig6 => "fig6".into(),
            Task::Fig7 => "fig7".into(),
            Task::All => "all".into(),
            Task::Sweep { axis, .. } => format!("sweep-{}", axis.name()),
        }
    }
}

/// A computed table and the bath profile whose constants it reports.
#[derive(Debug, Clone)]
pub struct Output {
    pub table: Table,
    pub profile: Option<Arc<BathProfile>>,
}

impl Output {
    fn new(table: Table, profile: &Arc<BathProfile>) -> Self {
        Output {
            table,
            profile: Some(profile.clone()),
        }
    }
}

/// Bath profiles by temperature, built on first use.
#[derive(Debug)]
pub struct Profiles<'a> {
    cfg: &'a RunConfig,
    cache: Mutex<BTreeMap<u64, Arc<BathProfile>>>,
}

impl<'a> Profiles<'a> {
    pub fn new(cfg: &'a RunConfig) -> Self {
        Profiles {
            cfg,
            cache: Mutex::new(BTreeMap::new()),
        }
    }

    pub fn at(&self, temperature: f64) -> Result<Arc<BathProfile>, CliError> {
        let key = temperature.to_bits();
        if let Some(p) = self.cache.lock().expect("profile cache").get(&key) {
            return Ok(p.clone());
        }
        let p = Arc::new(build_profile(
            &self.cfg.material.params(),
            temperature,
            self.cfg.bath.gamma_per_ps,
            &self.cfg.phonon_grid(),
            &self.cfg.quadrature(),
        )?);
        self.cache.lock().expect("profile cache").insert(key, p.clone());
        Ok(p)
    }

    pub fn base(&self) -> Result<Arc<BathProfile>, CliError> {
        self.at(self.cfg.bath.temperature_k)
    }
}

/// Uniform grid of `n` points on [0, end].
pub fn linear_grid(end: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| end * i as f64 / (n - 1) as f64).collect()
}

/// Logarithmic grid of `n` points on [start, end].
pub fn log_grid(start: f64, end: f64, n: usize) -> Vec<f64> {
    let (a, b) = (start.ln(), end.ln());
    (0..n)
        .map(|i| {
            if i == n - 1 {
                end
            } else {
                (a + (b - a) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

pub fn drive(cfg: &RunConfig, area: f64, fwhm: f64) -> Result<Drive, CliError> {
    let mut pulse = PulseEnvelope::from_fwhm(area, fwhm)?;
    if let Some(c) = cfg.pulse.center_ps {
        pulse = pulse.with_center(c);
    }
    Ok(Drive {
        pulse,
        renormalize: cfg.pulse.drive_renorm,
    })
}

/// Driven run whose samples, measured from the pulse centre, continue the
/// configured radiative grid spacing up to `t_max_ps` after the centre.
pub fn long_pulse_run(profile: &BathProfile, cfg: &RunConfig, drive: &Drive) -> Result<DrivenRun, CliError> {
    let dt = cfg.grid.t_max_ps / (cfg.grid.n_points - 1) as f64;
    let span = drive.pulse.center.max(0.0) + cfg.grid.t_max_ps;
    let n = (span / dt).round() as usize + 1;
    let horizon = (n - 1) as f64 * dt;
    Ok(drive_then_decay(profile, drive, horizon, n, &cfg.integrator())?)
}

/// Computes the tables of a figure-style task.
pub fn compute(task: &Task, cfg: &RunConfig, profiles: &Profiles) -> Result<Vec<Output>, CliError> {
    match task {
        Task::Bath => bath(cfg, profiles),
        Task::Fig2 => fig2(cfg, profiles),
        Task::Fig3 => fig3(cfg, profiles),
        Task::Fig4 => fig4(cfg, profiles),
        Task::Fig5 => fig5(cfg, profiles),
        Task::Fig6 => fig6(cfg, profiles),
        Task::Fig7 => fig7(cfg, profiles),
        Task::All => {
            let mut out = Vec::new();
            for t in [Task::Bath, Task::Fig2, Task::Fig3, Task::Fig4, Task::Fig5, Task::Fig6, Task::Fig7] {
                out.extend(compute(&t, cfg, profiles)?);
            }
            Ok(out)
        }
        Task::Sweep { .. } => Err(CliError::Usage("sweeps are run with run_task".into())),
    }
}

/// Runs `task` and writes its files into `dir`. Returns the paths written.
pub fn run_task(task: &Task, cfg: &RunConfig, dir: &std::path::Path) -> Result<Vec<std::path::PathBuf>, CliError> {
    let sink = Sink::new(dir, cfg, task.clone())?;
    let profiles = Profiles::new(cfg);
    if let Task::Sweep { axis, values } = task {
        let report = run_sweep(&sink, &profiles, *axis, values)?;
        if report.failed > 0 {
            return Err(CliError::SweepFailed {
                failed: report.failed,
                total: values.len(),
            });
        }
        return Ok(report.written);
    }
    let mut written = Vec::new();
    for o in compute(task, cfg, &profiles)? {
        written.extend(sink.write(&o.table, o.profile.as_deref())?);
    }
    Ok(written)
}
