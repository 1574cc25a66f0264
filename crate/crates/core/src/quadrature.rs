//! Globally adaptive Gauss–Kronrod (7/15) quadrature over finite intervals.
//!
//! Integrands are vector valued so that several related integrals (real and
//! imaginary parts, derivatives) share one set of function evaluations.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Upper truncation of frequency integrals in ps⁻¹. `None` selects
    /// ten times the largest cutoff.
    pub omega_max: Option<f64>,
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            rel_tol: 1e-11,
            abs_tol: 1e-13,
            omega_max: None,
            max_subdivisions: 20_000,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::domain("quadrature tolerances must be positive"));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::domain("max_subdivisions must be at least 1"));
        }
        if let Some(w) = self.omega_max {
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::domain("omega_max must be positive and finite"));
            }
        }
        Ok(())
    }

    /// Same configuration with both tolerances scaled by `factor`.
    pub fn scaled_tolerances(&self, factor: f64) -> Self {
        QuadratureConfig {
            rel_tol: self.rel_tol * factor,
            abs_tol: self.abs_tol * factor,
            ..*self
        }
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5 and the centre.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

struct Panel<const N: usize> {
    a: f64,
    b: f64,
    value: [f64; N],
    error: f64,
}

impl<const N: usize> PartialEq for Panel<N> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<const N: usize> Eq for Panel<N> {}
impl<const N: usize> PartialOrd for Panel<N> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<const N: usize> Ord for Panel<N> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk15<const N: usize, F>(f: &F, a: f64, b: f64) -> Panel<N>
where
    F: Fn(f64) -> [f64; N],
{
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut kronrod = [0.0; N];
    let mut gauss = [0.0; N];
    for k in 0..N {
        kronrod[k] = WGK[7] * fc[k];
        gauss[k] = WG[3] * fc[k];
    }
    for (j, (&x, &wk)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let f1 = f(centre - half * x);
        let f2 = f(centre + half * x);
        for k in 0..N {
            let s = f1[k] + f2[k];
            kronrod[k] += wk * s;
            if j % 2 == 1 {
                gauss[k] += WG[j / 2] * s;
            }
        }
    }
    let mut error = 0.0_f64;
    let mut value = [0.0; N];
    for k in 0..N {
        value[k] = kronrod[k] * half;
        error = error.max(((kronrod[k] - gauss[k]) * half).abs());
    }
    Panel { a, b, value, error }
}

/// Integrates `f` over `[a, b]`, starting from `initial_panels` equal panels.
///
/// Convergence is declared once the summed error estimate falls below
/// `max(abs_tol, rel_tol * |I|)` in the max norm over components.
pub fn integrate<const N: usize, F>(
    f: F,
    a: f64,
    b: f64,
    initial_panels: usize,
    cfg: &QuadratureConfig,
) -> Result<[f64; N]>
where
    F: Fn(f64) -> [f64; N],
{
    let panels = initial_panels.max(1);
    let width = (b - a) / panels as f64;
    let mut heap = BinaryHeap::with_capacity(panels * 2);
    for i in 0..panels {
        let lo = a + width * i as f64;
        let hi = if i + 1 == panels { b } else { lo + width };
        heap.push(gk15(&f, lo, hi));
    }
    let mut subdivisions = panels;
    loop {
        let mut total = [0.0; N];
        let mut err = 0.0;
        for p in heap.iter() {
            for k in 0..N {
                total[k] += p.value[k];
            }
            err += p.error;
        }
        let magnitude = total.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let target = cfg.abs_tol.max(cfg.rel_tol * magnitude);
        if err <= target {
            return Ok(total);
        }
        if subdivisions >= cfg.max_subdivisions.max(panels) {
            return Err(Error::Quadrature {
                subdivisions,
                residual: err,
                target,
            });
        }
        let worst = heap.pop().expect("non-empty panel set");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval can no longer be split in floating point.
            return Err(Error::Quadrature {
                subdivisions,
                residual: err,
                target,
            });
        }
        heap.push(gk15(&f, worst.a, mid));
        heap.push(gk15(&f, mid, worst.b));
        subdivisions += 1;
    }
}

/// Composite Gauss–Kronrod rule on equal panels, for integrands that are
/// evaluated many times against the same nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedRule {
    /// Nodes, fifteen per panel in panel order.
    pub nodes: Vec<f64>,
    /// Kronrod weights scaled to the panel width.
    pub kronrod: Vec<f64>,
    /// Embedded Gauss weights; zero at Kronrod-only nodes.
    pub gauss: Vec<f64>,
}

impl FixedRule {
    pub const NODES_PER_PANEL: usize = 15;

    pub fn composite(a: f64, b: f64, panels: usize) -> Self {
        let panels = panels.max(1);
        let width = (b - a) / panels as f64;
        let n = panels * Self::NODES_PER_PANEL;
        let mut rule = FixedRule {
            nodes: Vec::with_capacity(n),
            kronrod: Vec::with_capacity(n),
            gauss: Vec::with_capacity(n),
        };
        for i in 0..panels {
            let lo = a + width * i as f64;
            let hi = if i + 1 == panels { b } else { lo + width };
            let (centre, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
            rule.push(centre, half * WGK[7], half * WG[3]);
            for (j, (&x, &wk)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
                let wg = if j % 2 == 1 { WG[j / 2] } else { 0.0 };
                rule.push(centre - half * x, half * wk, half * wg);
                rule.push(centre + half * x, half * wk, half * wg);
            }
        }
        rule
    }

    fn push(&mut self, x: f64, wk: f64, wg: f64) {
        self.nodes.push(x);
        self.kronrod.push(wk);
        self.gauss.push(wg);
    }

    pub fn panels(&self) -> usize {
        self.nodes.len() / Self::NODES_PER_PANEL
    }
}
