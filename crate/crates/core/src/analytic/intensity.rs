use crate::error::{Error, Result};

/// I = −dn/dt from samples on a uniform grid: central differences inside,
/// one-sided differences at both ends.
pub fn intensity_sampled(times: &[f64], n: &[f64]) -> Result<Vec<f64>> {
    if times.len() != n.len() {
        return Err(Error::domain("time and value series differ in length"));
    }
    let len = n.len();
    if len < 3 {
        return Err(Error::domain(format!("need at least 3 samples, got {len}")));
    }
    let dt = (times[len - 1] - times[0]) / (len - 1) as f64;
    if !(dt > 0.0) {
        return Err(Error::domain("time grid must be increasing"));
    }
    let uniform = times
        .windows(2)
        .all(|w| ((w[1] - w[0]) - dt).abs() <= 1e-9 * dt.max(times[len - 1].abs() * 1e-6));
    if !uniform {
        return Err(Error::domain("sampled intensity requires a uniform time grid"));
    }
    let mut out = Vec::with_capacity(len);
    out.push(-(n[1] - n[0]) / dt);
    for i in 1..len - 1 {
        out.push(-(n[i + 1] - n[i - 1]) / (2.0 * dt));
    }
    out.push(-(n[len - 1] - n[len - 2]) / dt);
    Ok(out)
}
