//! Radiative decay of one and two phonon-dressed quantum emitters.
//!
//! * [`bath`]: spectral density, phonon correlation function Φ(t), κ and the
//!   collective rates.
//! * [`analytic`]: closed-form electronic and polaronic dynamics after sudden
//!   or adiabatic excitation.
//! * [`engine`]: numerical propagation of the polaron-frame master equation,
//!   including Gaussian-pulse driving.
//!
//! Times are in ps, rates and frequencies in ps⁻¹, with ħ = 1.

pub mod analytic;
pub mod bath;
pub mod engine;
pub mod error;
pub mod quadrature;
pub mod units;

pub use error::{Error, Result};
