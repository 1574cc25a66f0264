use std::f64::consts::E;

use super::{excitation_number_series, ExpSum, Frame, InitialMix};
use crate::bath::BathProfile;
use crate::error::{Error, Result};

const TARGET_TOL: f64 = 1e-10;
const INITIAL_BRACKET_LIFETIMES: f64 = 50.0;

/// Time at which `n` first reaches 1/e, by bisection. `n` must decrease
/// monotonically from n(0) > 1/e. The bracket starts at `[0, 50/gamma]` and
/// is doubled while n is still above 1/e at its upper end.
pub fn lifetime_of_series(n: &ExpSum, gamma: f64) -> Result<f64> {
    let target = 1.0 / E;
    if n.asymptote() >= target {
        return Err(Error::InfiniteLifetime);
    }
    let f = |t: f64| n.eval(t) - target;
    if f(0.0) <= 0.0 {
        return Err(Error::Bracket("n(0) is already at or below 1/e".into()));
    }
    let mut hi = INITIAL_BRACKET_LIFETIMES / gamma;
    let mut doublings = 0;
    while f(hi) > 0.0 {
        if doublings == 40 || n.slowest_rate().is_none() {
            return Err(Error::Bracket(format!("n(t) above 1/e up to t = {hi}")));
        }
        hi *= 2.0;
        doublings += 1;
    }
    let mut lo = 0.0;
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        let v = f(mid);
        if v.abs() < TARGET_TOL && (hi - lo) < 1e-12 * hi.max(1.0) {
            return Ok(mid);
        }
        if v > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if mid == lo && mid == hi {
            break;
        }
    }
    let mid = 0.5 * (lo + hi);
    if f(mid).abs() < TARGET_TOL {
        Ok(mid)
    } else {
        Err(Error::Bracket(format!("bisection stalled at t = {mid}")))
    }
}

/// 1/e lifetime of an S/A mixture prepared in `frame`.
pub fn lifetime(init: &InitialMix, profile: &BathProfile, frame: Frame) -> Result<f64> {
    lifetime_of_series(&excitation_number_series(init, profile, frame), profile.gamma)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LifetimeRow {
    pub w_sym: f64,
    pub tau_electronic: f64,
    pub tau_polaronic: f64,
}

impl LifetimeRow {
    /// (τ_P − τ_E)/τ_P; zero when the lifetimes coincide, including when
    /// both are infinite.
    pub fn relative_gap(&self) -> f64 {
        if self.tau_polaronic == self.tau_electronic {
            return 0.0;
        }
        (self.tau_polaronic - self.tau_electronic) / self.tau_polaronic
    }
}

fn finite_or_infinite(r: Result<f64>) -> Result<f64> {
    match r {
        Err(Error::InfiniteLifetime) => Ok(f64::INFINITY),
        other => other,
    }
}

/// Lifetimes in both frames on `points` equally spaced symmetric weights
/// from 0 to 1. Mixtures that never decay below 1/e get an infinite lifetime.
pub fn lifetime_sweep(profile: &BathProfile, points: usize) -> Result<Vec<LifetimeRow>> {
    if points < 2 {
        return Err(Error::domain("lifetime sweep needs at least two points"));
    }
    (0..points)
        .map(|i| {
            let w_sym = i as f64 / (points - 1) as f64;
            let mix = InitialMix::new(w_sym)?;
            Ok(LifetimeRow {
                w_sym,
                tau_electronic: finite_or_infinite(lifetime(&mix, profile, Frame::Electronic))?,
                tau_polaronic: finite_or_infinite(lifetime(&mix, profile, Frame::Polaronic))?,
            })
        })
        .collect()
}
