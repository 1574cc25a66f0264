//! Run configuration: a TOML file with optional `--set key=value` overrides.

use std::path::{Path, PathBuf};

use polaron_dicke_core::bath::{default_phonon_grid, SpectralDensityParams};
use polaron_dicke_core::engine::{IntegratorConfig, Method};
use polaron_dicke_core::quadrature::QuadratureConfig;
use serde::{Deserialize, Deserializer, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MaterialConfig {
    pub mass_density_kg_m3: f64,
    pub sound_speed_m_s: f64,
    pub deform_e_ev: f64,
    pub deform_h_ev: f64,
    pub cutoff_e_per_ps: f64,
    pub cutoff_h_per_ps: f64,
}

impl Default for MaterialConfig {
    fn default() -> Self {
        let p = SpectralDensityParams::default();
        MaterialConfig {
            mass_density_kg_m3: p.mass_density,
            sound_speed_m_s: p.sound_speed,
            deform_e_ev: p.deform_e,
            deform_h_ev: p.deform_h,
            cutoff_e_per_ps: p.cutoff_e,
            cutoff_h_per_ps: p.cutoff_h,
        }
    }
}

impl MaterialConfig {
    pub fn params(&self) -> SpectralDensityParams {
        SpectralDensityParams {
            mass_density: self.mass_density_kg_m3,
            sound_speed: self.sound_speed_m_s,
            deform_e: self.deform_e_ev,
            deform_h: self.deform_h_ev,
            cutoff_e: self.cutoff_e_per_ps,
            cutoff_h: self.cutoff_h_per_ps,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BathConfig {
    pub temperature_k: f64,
    pub gamma_per_ps: f64,
}

impl Default for BathConfig {
    fn default() -> Self {
        BathConfig {
            temperature_k: 4.0,
            gamma_per_ps: 1.0 / 200.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PulseConfig {
    /// Radians; accepts numbers or π expressions such as "pi/8".
    #[serde(deserialize_with = "de_area")]
    pub area: f64,
    pub fwhm_ps: f64,
    /// Defaults to three standard deviations.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub center_ps: Option<f64>,
    pub drive_renorm: bool,
}

impl Default for PulseConfig {
    fn default() -> Self {
        PulseConfig {
            area: std::f64::consts::PI / 8.0,
            fwhm_ps: 20.0,
            center_ps: None,
            drive_renorm: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    /// End of the radiative time window.
    pub t_max_ps: f64,
    pub n_points: usize,
    /// First point of logarithmic time axes.
    pub log_t_min_ps: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phonon_t_max_ps: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phonon_dt_ps: Option<f64>,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            t_max_ps: 1500.0,
            n_points: 1501,
            log_t_min_ps: 1e-3,
            phonon_t_max_ps: None,
            phonon_dt_ps: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuadratureSection {
    pub rel_tol: f64,
    pub abs_tol: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_max_per_ps: Option<f64>,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSection {
    fn default() -> Self {
        let q = QuadratureConfig::default();
        QuadratureSection {
            rel_tol: q.rel_tol,
            abs_tol: q.abs_tol,
            omega_max_per_ps: q.omega_max,
            max_subdivisions: q.max_subdivisions,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IntegratorSection {
    pub method: Method,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step_ps: f64,
    pub max_steps: usize,
}

impl Default for IntegratorSection {
    fn default() -> Self {
        let c = IntegratorConfig::default();
        IntegratorSection {
            method: c.method,
            rel_tol: c.rel_tol,
            abs_tol: c.abs_tol,
            max_step_ps: c.max_step,
            max_steps: c.max_steps,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NumericsConfig {
    pub quadrature: QuadratureSection,
    pub integrator: IntegratorSection,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    /// Where files go. Not part of the configuration hash.
    #[serde(skip_serializing)]
    pub directory: PathBuf,
    pub formats: Vec<Format>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            directory: PathBuf::from("out"),
            formats: vec![Format::Csv, Format::Json],
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub material: MaterialConfig,
    pub bath: BathConfig,
    pub pulse: PulseConfig,
    pub grid: GridConfig,
    pub numerics: NumericsConfig,
    pub output: OutputConfig,
}

fn de_area<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Area {
        Number(f64),
        Int(i64),
        Text(String),
    }
    match Area::deserialize(d)? {
        Area::Number(x) => Ok(x),
        Area::Int(x) => Ok(x as f64),
        Area::Text(s) => parse_pi_expr(&s).map_err(serde::de::Error::custom),
    }
}

/// Parses `x`, `pi`, `k*pi`, `kpi`, `pi/n`, `k*pi/n`, `k/n` and similar.
pub fn parse_pi_expr(text: &str) -> Result<f64, String> {
    let bad = || format!("cannot parse pulse area {text:?}; use a number or an expression like \"pi/8\"");
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_lowercase();
    let s = s.replace('π', "pi");
    if s.is_empty() {
        return Err(bad());
    }
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.to_string(), Some(b.to_string())),
        None => (s.clone(), None),
    };
    let mut value = 1.0;
    let factors: Vec<&str> = num.split('*').collect();
    for f in factors {
        let f = f.trim();
        if f.is_empty() {
            return Err(bad());
        }
        if let Some(coef) = f.strip_suffix("pi") {
            value *= std::f64::consts::PI;
            if !coef.is_empty() {
                value *= coef.parse::<f64>().map_err(|_| bad())?;
            }
        } else {
            value *= f.parse::<f64>().map_err(|_| bad())?;
        }
    }
    if let Some(d) = den {
        let d = if d == "pi" { std::f64::consts::PI } else { d.parse::<f64>().map_err(|_| bad())? };
        if d == 0.0 {
            return Err(bad());
        }
        value /= d;
    }
    if value.is_finite() {
        Ok(value)
    } else {
        Err(bad())
    }
}

impl RunConfig {
    /// Reads `path` (an empty file gives all defaults), applies overrides
    /// and validates units.
    pub fn load(path: &Path, overrides: &[String]) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text, overrides).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn from_toml(text: &str, overrides: &[String]) -> Result<Self, CliError> {
        let mut cfg: RunConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        if !overrides.is_empty() {
            let mut table: toml::Table = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
            for o in overrides {
                apply_override(&mut table, o)?;
            }
            cfg = toml::Value::Table(table)
                .try_into()
                .map_err(|e: toml::de::Error| CliError::Config(format!("in --set overrides: {}", e.message())))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let err = |m: String| Err(CliError::Config(m));
        self.material
            .params()
            .validate()
            .map_err(|e| CliError::Config(format!("[material] {e}")))?;
        let b = &self.bath;
        if !(b.temperature_k >= 0.0 && b.temperature_k.is_finite()) {
            return err(format!("[bath] temperature_k must be >= 0 K, got {}", b.temperature_k));
        }
        if !(b.gamma_per_ps > 0.0 && b.gamma_per_ps.is_finite()) {
            return err(format!("[bath] gamma_per_ps must be > 0, got {}", b.gamma_per_ps));
        }
        let p = &self.pulse;
        if !p.area.is_finite() {
            return err("[pulse] area must be finite".into());
        }
        if !(p.fwhm_ps > 0.0 && p.fwhm_ps.is_finite()) {
            return err(format!("[pulse] fwhm_ps must be > 0, got {}", p.fwhm_ps));
        }
        if let Some(c) = p.center_ps {
            if !c.is_finite() {
                return err("[pulse] center_ps must be finite".into());
            }
        }
        let g = &self.grid;
        if !(g.t_max_ps > 0.0 && g.t_max_ps.is_finite()) {
            return err(format!("[grid] t_max_ps must be > 0, got {}", g.t_max_ps));
        }
        if g.n_points < 3 {
            return err(format!("[grid] n_points must be >= 3, got {}", g.n_points));
        }
        if !(g.log_t_min_ps > 0.0 && g.log_t_min_ps < g.t_max_ps) {
            return err("[grid] log_t_min_ps must lie in (0, t_max_ps)".into());
        }
        for (name, v) in [("phonon_t_max_ps", g.phonon_t_max_ps), ("phonon_dt_ps", g.phonon_dt_ps)] {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    return err(format!("[grid] {name} must be > 0, got {v}"));
                }
            }
        }
        if let (Some(end), Some(dt)) = (g.phonon_t_max_ps, g.phonon_dt_ps) {
            if dt >= end {
                return err("[grid] phonon_dt_ps must be smaller than phonon_t_max_ps".into());
            }
        }
        self.quadrature()
            .validate()
            .map_err(|e| CliError::Config(format!("[numerics.quadrature] {e}")))?;
        self.material
            .params()
            .omega_max(&self.quadrature())
            .map_err(|e| CliError::Config(format!("[numerics.quadrature] {e}")))?;
        self.integrator()
            .validate()
            .map_err(|e| CliError::Config(format!("[numerics.integrator] {e}")))?;
        if self.numerics.integrator.max_steps == 0 {
            return err("[numerics.integrator] max_steps must be > 0".into());
        }
        if self.output.formats.is_empty() {
            return err("[output] formats must not be empty".into());
        }
        Ok(())
    }

    pub fn quadrature(&self) -> QuadratureConfig {
        let q = &self.numerics.quadrature;
        QuadratureConfig {
            rel_tol: q.rel_tol,
            abs_tol: q.abs_tol,
            omega_max: q.omega_max_per_ps,
            max_subdivisions: q.max_subdivisions,
        }
    }

    pub fn integrator(&self) -> IntegratorConfig {
        let c = &self.numerics.integrator;
        IntegratorConfig {
            method: c.method,
            rel_tol: c.rel_tol,
            abs_tol: c.abs_tol,
            max_step: c.max_step_ps,
            max_steps: c.max_steps,
        }
    }

    /// Time grid on which Φ(t) is tabulated.
    pub fn phonon_grid(&self) -> Vec<f64> {
        let params = self.material.params();
        let default = default_phonon_grid(&params);
        let end = self.grid.phonon_t_max_ps.unwrap_or(default[default.len() - 1]);
        let dt = self.grid.phonon_dt_ps.unwrap_or(default[1] - default[0]);
        let n = (end / dt).ceil().max(1.0) as usize;
        (0..=n).map(|i| end * i as f64 / n as f64).collect()
    }

    pub fn wants(&self, f: Format) -> bool {
        self.output.formats.contains(&f)
    }

    /// Canonical TOML of everything that influences results.
    pub fn canonical_toml(&self) -> String {
        toml::to_string(self).expect("configuration serializes")
    }

    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_toml().as_bytes()))
    }
}

// `a.b.c=value`; the value is read as a TOML literal, or as a bare string
// if it is not one.
fn apply_override(table: &mut toml::Table, text: &str) -> Result<(), CliError> {
    let (key, raw) = text
        .split_once('=')
        .ok_or_else(|| CliError::Usage(format!("--set expects key=value, got {text:?}")))?;
    let path: Vec<&str> = key.trim().split('.').collect();
    if path.iter().any(|p| p.is_empty()) {
        return Err(CliError::Usage(format!("invalid key {key:?} in --set")));
    }
    let raw = raw.trim();
    let value = match toml::from_str::<toml::Table>(&format!("v = {raw}")) {
        Ok(mut t) => t.remove("v").expect("parsed key"),
        Err(_) => toml::Value::String(raw.to_string()),
    };
    let (last, parents) = path.split_last().expect("non-empty path");
    let mut node = table;
    for p in parents {
        let entry = node
            .entry(p.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        node = entry
            .as_table_mut()
            .ok_or_else(|| CliError::Config(format!("--set {key}: {p} is not a section")))?;
    }
    node.insert(last.to_string(), value);
    Ok(())
}

/// Documentation of every configuration key, shown by `--help`.
pub const KEYS_HELP: &str = "\
CONFIGURATION KEYS (TOML; every key is optional):
  [material]
    mass_density_kg_m3   mass density, kg/m^3                  (5370)
    sound_speed_m_s      longitudinal sound speed, m/s          (5110)
    deform_e_ev          electron deformation potential, eV     (7.0)
    deform_h_ev          hole deformation potential, eV         (-3.5)
    cutoff_e_per_ps      electron cutoff frequency, 1/ps        (sqrt(2) c_s / 4 nm)
    cutoff_h_per_ps      hole cutoff frequency, 1/ps            (sqrt(2) c_s / 4 nm)
  [bath]
    temperature_k        phonon temperature, K                  (4)
    gamma_per_ps         single-emitter radiative rate, 1/ps    (0.005)
  [pulse]
    area                 pulse area, rad; number or \"pi/8\"      (pi/8)
    fwhm_ps              intensity FWHM of the long pulse, ps   (20)
    center_ps            pulse centre, ps                       (3 sigma)
    drive_renorm         scale the Rabi frequency by kappa      (true)
  [grid]
    t_max_ps             end of the time window, ps             (1500)
    n_points             samples per trajectory                 (1501)
    log_t_min_ps         first point of log time axes, ps       (0.001)
    phonon_t_max_ps      length of the Phi(t) table, ps         (100 / min cutoff)
    phonon_dt_ps         spacing of the Phi(t) table, ps        (0.02 / max cutoff)
  [numerics.quadrature]
    rel_tol, abs_tol     frequency-integral tolerances          (1e-11, 1e-13)
    omega_max_per_ps     upper frequency limit, 1/ps            (10 x max cutoff)
    max_subdivisions     panel budget                           (20000)
  [numerics.integrator]
    method               \"rk45-adaptive\" or \"rk4-fixed\"         (rk45-adaptive)
    rel_tol, abs_tol     step-error tolerances                  (1e-9, 1e-12)
    max_step_ps          largest (or fixed) step, ps            (5)
    max_steps            step budget per trajectory             (50000000)
  [output]
    directory            output directory                       (out)
    formats              subset of [\"csv\", \"json\"]              ([\"csv\", \"json\"])

Any key can be overridden with --set section.key=value.
ENVIRONMENT:
  POLARON_DICKE_THREADS  maximum number of worker threads";

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn empty_file_gives_defaults() {
        let cfg = RunConfig::from_toml("", &[]).unwrap();
        assert_eq!(cfg, RunConfig::default());
        assert_eq!(cfg.bath.temperature_k, 4.0);
        assert_eq!(1.0 / cfg.bath.gamma_per_ps, 200.0);
    }

    #[test]
    fn pi_expressions() {
        assert!((parse_pi_expr("pi/8").unwrap() - 0.392_699_081_7).abs() < 1e-10);
        assert_eq!(parse_pi_expr("pi").unwrap(), PI);
        assert_eq!(parse_pi_expr("2pi").unwrap(), 2.0 * PI);
        assert_eq!(parse_pi_expr("2 * pi / 3").unwrap(), 2.0 * PI / 3.0);
        assert_eq!(parse_pi_expr("0.5").unwrap(), 0.5);
        assert!(parse_pi_expr("pie").is_err());
        assert!(parse_pi_expr("pi/0").is_err());
        let cfg = RunConfig::from_toml("[pulse]\narea = \"pi/8\"\n", &[]).unwrap();
        assert_eq!(cfg.pulse.area, PI / 8.0);
        let cfg = RunConfig::from_toml("[pulse]\narea = 1\n", &[]).unwrap();
        assert_eq!(cfg.pulse.area, 1.0);
    }

    #[test]
    fn rejects_negative_temperature() {
        let e = RunConfig::from_toml("[bath]\ntemperature_k = -1\n", &[]).unwrap_err();
        assert!(matches!(e, CliError::Config(m) if m.contains("temperature_k")));
    }

    #[test]
    fn unknown_keys_report_location() {
        let e = RunConfig::from_toml("[bath]\ntemperature_k = 4\ncolour = 3\n", &[]).unwrap_err();
        let CliError::Config(m) = e else { panic!() };
        assert!(m.contains("line 3"), "{m}");
        assert!(m.contains("colour"), "{m}");
    }

    #[test]
    fn overrides_apply_and_validate() {
        let sets = vec!["bath.temperature_k=77".to_string(), "pulse.area=pi/2".to_string()];
        let cfg = RunConfig::from_toml("", &sets).unwrap();
        assert_eq!(cfg.bath.temperature_k, 77.0);
        assert_eq!(cfg.pulse.area, PI / 2.0);
        assert!(RunConfig::from_toml("", &["bath.nope=1".into()]).is_err());
        assert!(matches!(RunConfig::from_toml("", &["novalue".into()]), Err(CliError::Usage(_))));
        let cfg = RunConfig::from_toml("", &["numerics.integrator.method=rk4-fixed".into()]).unwrap();
        assert_eq!(cfg.numerics.integrator.method, Method::Rk4Fixed);
    }

    #[test]
    fn hash_ignores_output_directory() {
        let a = RunConfig::from_toml("[output]\ndirectory = \"a\"\n", &[]).unwrap();
        let b = RunConfig::from_toml("[output]\ndirectory = \"b\"\n", &[]).unwrap();
        assert_eq!(a.hash(), b.hash());
        let c = RunConfig::from_toml("[bath]\ntemperature_k = 5\n", &[]).unwrap();
        assert_ne!(a.hash(), c.hash());
    }

    #[test]
    fn canonical_form_round_trips() {
        let cfg = RunConfig::from_toml("[pulse]\narea = \"pi/3\"\ncenter_ps = 40.0\n", &[]).unwrap();
        let back = RunConfig::from_toml(&cfg.canonical_toml(), &[]).unwrap();
        assert_eq!(back.canonical_toml(), cfg.canonical_toml());
        assert_eq!(back.pulse.area, cfg.pulse.area);
    }
}
