#![allow(dead_code)]

use std::sync::OnceLock;

use polaron_dicke_core::bath::{build_profile, default_phonon_grid, BathProfile, SpectralDensityParams};
use polaron_dicke_core::quadrature::QuadratureConfig;

pub const GAMMA: f64 = 1.0 / 200.0;

pub fn profile(temperature: f64) -> BathProfile {
    let params = SpectralDensityParams::default();
    build_profile(
        &params,
        temperature,
        GAMMA,
        &default_phonon_grid(&params),
        &QuadratureConfig::default(),
    )
    .unwrap()
}

pub fn profile_4k() -> &'static BathProfile {
    static P: OnceLock<BathProfile> = OnceLock::new();
    P.get_or_init(|| profile(4.0))
}

pub fn profile_77k() -> &'static BathProfile {
    static P: OnceLock<BathProfile> = OnceLock::new();
    P.get_or_init(|| profile(77.0))
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}
