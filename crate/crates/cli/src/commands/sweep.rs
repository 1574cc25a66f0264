use std::path::PathBuf;

use polaron_dicke_core::analytic::{excitation_number_series, lifetime, Frame, InitialMix};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::figures::decoherence_table;
use super::{drive, linear_grid, long_pulse_run, Profiles};
use crate::error::CliError;
use crate::output::{fmt_num, Sink, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    /// Bath temperature, K: profile constants and free decoherence.
    Temperature,
    /// Pulse area, rad: driven run.
    Area,
    /// Pulse FWHM, ps: driven run.
    Fwhm,
    /// Symmetric weight of an S/A mixture: n(t) in both frames.
    #[value(name = "w_sym")]
    WSym,
}

impl SweepAxis {
    pub fn name(&self) -> &'static str {
        match self {
            SweepAxis::Temperature => "temperature",
            SweepAxis::Area => "area",
            SweepAxis::Fwhm => "fwhm",
            SweepAxis::WSym => "w_sym",
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct SweepReport {
    pub written: Vec<PathBuf>,
    pub failed: usize,
}

// Tables of one sweep point and the summary value for the index.
fn point(sink: &Sink, profiles: &Profiles, axis: SweepAxis, idx: usize, value: f64) -> Result<(f64, Vec<PathBuf>), CliError> {
    let cfg = &sink.config;
    let stem = format!("sweep_{}_{idx:03}", axis.name());
    let mut written = Vec::new();
    let summary = match axis {
        SweepAxis::Temperature => {
            if !(value >= 0.0 && value.is_finite()) {
                return Err(CliError::Config(format!("temperature must be >= 0 K, got {value}")));
            }
            let profile = profiles.at(value)?;
            let mut t = decoherence_table(cfg, &profile, stem)?;
            t.meta("value", value);
            written.extend(sink.write(&t, Some(&profile))?);
            profile.kappa
        }
        SweepAxis::Area | SweepAxis::Fwhm => {
            let profile = profiles.base()?;
            let (area, fwhm) = match axis {
                SweepAxis::Area => (value, cfg.pulse.fwhm_ps),
                _ => (cfg.pulse.area, value),
            };
            let run = long_pulse_run(&profile, cfg, &drive(cfg, area, fwhm)?)?;
            let tr = &run.trajectory;
            let mut t = Table::new(stem, &["t_ps", "n", "n_norm", "p_gg", "p_sym", "p_asym", "p_xx"]);
            for i in 0..tr.len() {
                let p = &tr.populations[i];
                t.push(&[tr.times[i] - run.pulse.center, tr.excitation[i], run.normalized[i], p.p_gg, p.p_sym, p.p_asym, p.p_xx]);
            }
            t.meta("value", value).meta("area_rad", area).meta("fwhm_ps", fwhm).meta("n_max", run.n_max);
            written.extend(sink.write(&t, Some(&profile))?);
            run.n_max
        }
        SweepAxis::WSym => {
            let profile = profiles.base()?;
            let mix = InitialMix::new(value)?;
            let ne = excitation_number_series(&mix, &profile, Frame::Electronic);
            let np = excitation_number_series(&mix, &profile, Frame::Polaronic);
            let mut t = Table::new(stem, &["t_ps", "n_electronic", "n_polaronic"]);
            for time in linear_grid(cfg.grid.t_max_ps, cfg.grid.n_points) {
                t.push(&[time, ne.eval(time), np.eval(time)]);
            }
            let te = lifetime(&mix, &profile, Frame::Electronic).unwrap_or(f64::INFINITY);
            let tp = lifetime(&mix, &profile, Frame::Polaronic).unwrap_or(f64::INFINITY);
            t.meta("value", value).meta("tau_electronic_ps", te).meta("tau_polaronic_ps", tp);
            written.extend(sink.write(&t, Some(&profile))?);
            if tp == te { 0.0 } else { (tp - te) / tp }
        }
    };
    Ok((summary, written))
}

/// Runs every value concurrently and writes `sweep_<axis>_index.csv`.
pub fn run_sweep(sink: &Sink, profiles: &Profiles, axis: SweepAxis, values: &[f64]) -> Result<SweepReport, CliError> {
    if values.is_empty() {
        return Err(CliError::Usage("sweep needs at least one value".into()));
    }
    let results: Vec<Result<(f64, Vec<PathBuf>), CliError>> = values
        .par_iter()
        .enumerate()
        .map(|(i, &v)| point(sink, profiles, axis, i, v))
        .collect();

    let summary_name = match axis {
        SweepAxis::Temperature => "kappa",
        SweepAxis::Area | SweepAxis::Fwhm => "n_max",
        SweepAxis::WSym => "relative_lifetime_gap",
    };
    let mut index = Table::new(
        format!("sweep_{}_index", axis.name()),
        &["index", "value", "status", summary_name, "file", "error"],
    );
    let mut report = SweepReport::default();
    for (i, (v, r)) in values.iter().zip(results).enumerate() {
        let row = match r {
            Ok((s, files)) => {
                let csv = files
                    .iter()
                    .find(|p| p.extension().is_some_and(|e| e == "csv"))
                    .or(files.first())
                    .and_then(|p| p.file_name())
                    .map(|n| n.to_string_lossy().into_owned())
                    .unwrap_or_default();
                report.written.extend(files);
                vec![i.to_string(), fmt_num(*v), "ok".into(), fmt_num(s), csv, String::new()]
            }
            Err(e) => {
                report.failed += 1;
                let msg = e.to_string().replace([',', '\n'], ";");
                vec![i.to_string(), fmt_num(*v), "failed".into(), "nan".into(), String::new(), msg]
            }
        };
        index.push_text(row);
    }
    index.meta_text("axis", axis.name());
    report.written.extend(sink.write(&index, None)?);
    Ok(report)
}
