use crate::error::{Error, Result};

/// Least-squares fit of log y = log A − r t.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpFit {
    pub rate: f64,
    pub amplitude: f64,
    /// RMS residual of log y.
    pub residual: f64,
    pub points: usize,
}

/// Fits a single exponential to the samples with `window.0 ≤ t ≤ window.1`.
pub fn fit_exponential(times: &[f64], values: &[f64], window: (f64, f64)) -> Result<ExpFit> {
    if times.len() != values.len() {
        return Err(Error::Fit("times and values differ in length".into()));
    }
    let (t0, t1) = window;
    let mut pts = Vec::new();
    for (&t, &y) in times.iter().zip(values) {
        if t < t0 || t > t1 {
            continue;
        }
        if !(y > 0.0) {
            return Err(Error::Fit(format!("non-positive value {y} at t = {t}")));
        }
        pts.push((t, y.ln()));
    }
    if pts.len() < 2 {
        return Err(Error::Fit(format!("fewer than two samples in [{t0}, {t1}]")));
    }
    let n = pts.len() as f64;
    let tm = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let lm = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut stt, mut stl) = (0.0, 0.0);
    for &(t, l) in &pts {
        stt += (t - tm) * (t - tm);
        stl += (t - tm) * (l - lm);
    }
    if stt == 0.0 {
        return Err(Error::Fit("window contains a single time".into()));
    }
    let slope = stl / stt;
    let intercept = lm - slope * tm;
    let ss: f64 = pts.iter().map(|&(t, l)| (l - intercept - slope * t).powi(2)).sum();
    Ok(ExpFit {
        rate: -slope,
        amplitude: intercept.exp(),
        residual: (ss / n).sqrt(),
        points: pts.len(),
    })
}

/// Fast and slow components of y = A_f e^{−r_f t} + A_s e^{−r_s t}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiexpFit {
    pub fast: ExpFit,
    pub slow: ExpFit,
    pub iterations: usize,
}

/// Curve peeling: the slow component is fitted on `late`, subtracted, and
/// the fast component fitted to the remainder on `early`; then the fast
/// component is subtracted from the late window and the slow fit repeated,
/// until both rates settle.
pub fn fit_biexponential(
    times: &[f64],
    values: &[f64],
    early: (f64, f64),
    late: (f64, f64),
) -> Result<BiexpFit> {
    const MAX_ITER: usize = 100;
    let mut slow = fit_exponential(times, values, late)?;
    let mut fast = slow;
    for iter in 1..=MAX_ITER {
        let rest: Vec<f64> = times
            .iter()
            .zip(values)
            .map(|(&t, &y)| y - slow.amplitude * (-slow.rate * t).exp())
            .collect();
        let new_fast = fit_exponential(times, &rest, early)?;
        let rest: Vec<f64> = times
            .iter()
            .zip(values)
            .map(|(&t, &y)| y - new_fast.amplitude * (-new_fast.rate * t).exp())
            .collect();
        let new_slow = fit_exponential(times, &rest, late)?;
        let settled = (new_fast.rate - fast.rate).abs() <= 1e-12 * new_fast.rate.abs()
            && (new_slow.rate - slow.rate).abs() <= 1e-12 * new_slow.rate.abs();
        fast = new_fast;
        slow = new_slow;
        if settled {
            return Ok(BiexpFit {
                fast,
                slow,
                iterations: iter,
            });
        }
    }
    Err(Error::Fit(format!("peeling did not settle in {MAX_ITER} iterations")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize, end: f64) -> Vec<f64> {
        (0..n).map(|i| end * i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn exact_exponential() {
        let t = grid(101, 5.0);
        let y: Vec<f64> = t.iter().map(|t| 3.0 * (-2.0 * t).exp()).collect();
        let f = fit_exponential(&t, &y, (0.0, 5.0)).unwrap();
        assert!((f.rate - 2.0).abs() < 1e-12);
        assert!((f.amplitude - 3.0).abs() < 1e-12);
        assert!(f.residual < 1e-12);
    }

    #[test]
    fn early_biexponential_rate_is_intermediate() {
        let t = grid(201, 10.0);
        let y: Vec<f64> = t.iter().map(|t| (-1.5 * t).exp() + (-0.5 * t).exp()).collect();
        let f = fit_exponential(&t, &y, (0.0, 1.0)).unwrap();
        assert!(f.rate > 0.5 && f.rate < 1.5);
    }

    #[test]
    fn peeling_recovers_both_rates() {
        let t = grid(4001, 400.0);
        let y: Vec<f64> = t.iter().map(|t| 0.8 * (-0.1 * t).exp() + 0.2 * (-0.01 * t).exp()).collect();
        let f = fit_biexponential(&t, &y, (0.0, 20.0), (200.0, 400.0)).unwrap();
        assert!((f.fast.rate - 0.1).abs() < 1e-8);
        assert!((f.slow.rate - 0.01).abs() < 1e-8);
    }

    #[test]
    fn rejects_non_positive_values() {
        let t = [0.0, 1.0, 2.0];
        assert!(fit_exponential(&t, &[1.0, 0.0, 0.5], (0.0, 2.0)).is_err());
        assert!(fit_exponential(&t, &[1.0, 0.5, 0.2], (5.0, 6.0)).is_err());
    }
}
