/// One term `coeff · t^power · e^{-rate·t}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpTerm {
    pub coeff: f64,
    pub power: u32,
    pub rate: f64,
}

/// A finite sum of (polynomially weighted) exponentials, the form every
/// closed-form excitation number takes. Differentiation is exact.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExpSum {
    pub terms: Vec<ExpTerm>,
}

impl ExpSum {
    pub fn new() -> Self {
        ExpSum { terms: Vec::new() }
    }

    pub fn exp(coeff: f64, rate: f64) -> Self {
        ExpSum::new().with(coeff, 0, rate)
    }

    pub fn with(mut self, coeff: f64, power: u32, rate: f64) -> Self {
        if coeff != 0.0 {
            self.terms.push(ExpTerm { coeff, power, rate });
        }
        self
    }

    pub fn scaled(&self, w: f64) -> Self {
        ExpSum {
            terms: self
                .terms
                .iter()
                .map(|t| ExpTerm { coeff: t.coeff * w, ..*t })
                .filter(|t| t.coeff != 0.0)
                .collect(),
        }
    }

    pub fn plus(&self, other: &ExpSum) -> Self {
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        ExpSum { terms }
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.terms
            .iter()
            .map(|term| term.coeff * t.powi(term.power as i32) * (-term.rate * t).exp())
            .sum()
    }

    /// −d/dt of the sum.
    pub fn neg_derivative(&self, t: f64) -> f64 {
        self.terms
            .iter()
            .map(|term| {
                let e = (-term.rate * t).exp();
                let p = term.power as i32;
                let mut d = -term.rate * t.powi(p) * e;
                if p > 0 {
                    d += p as f64 * t.powi(p - 1) * e;
                }
                -term.coeff * d
            })
            .sum()
    }

    /// Value approached as t → ∞ (non-decaying constant terms).
    pub fn asymptote(&self) -> f64 {
        self.terms
            .iter()
            .filter(|t| t.rate == 0.0 && t.power == 0)
            .map(|t| t.coeff)
            .sum()
    }

    /// Smallest positive decay rate present.
    pub fn slowest_rate(&self) -> Option<f64> {
        self.terms
            .iter()
            .map(|t| t.rate)
            .filter(|&r| r > 0.0)
            .min_by(f64::total_cmp)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_matches_finite_difference() {
        let s = ExpSum::exp(0.7, 2.0).with(0.3, 1, 0.5).with(-0.1, 2, 1.5);
        for &t in &[0.0, 0.3, 1.7, 4.0] {
            let h = 1e-5;
            let fd = -(s.eval(t + h) - s.eval(t - h)) / (2.0 * h);
            assert!((s.neg_derivative(t) - fd).abs() < 1e-8, "t={t}");
        }
    }

    #[test]
    fn pure_exponential_intensity() {
        let s = ExpSum::exp(1.0, 1.3);
        let t = 0.8;
        assert!((s.neg_derivative(t) - 1.3 * (-1.3 * t).exp()).abs() < 1e-15);
    }
}
