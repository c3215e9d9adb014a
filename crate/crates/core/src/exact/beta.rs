use statrs::function::beta::{checked_beta_reg, ln_beta};

use super::ExactError;

/// Beta distribution, the almost-sure limit law of a classical Polya urn's
/// red proportion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaParams {
    pub alpha: f64,
    pub beta: f64,
}

impl BetaParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self, ExactError> {
        if !(alpha > 0.0 && beta > 0.0 && alpha.is_finite() && beta.is_finite()) {
            return Err(ExactError::Domain(format!(
                "Beta({alpha}, {beta}) needs positive finite shapes"
            )));
        }
        Ok(BetaParams { alpha, beta })
    }

    /// `Beta(ρ/δ, (1−ρ)/δ)`; needs `δ > 0`.
    pub fn from_polya(rho: f64, delta: f64) -> Result<Self, ExactError> {
        if !(delta > 0.0) {
            return Err(ExactError::Domain(format!(
                "Beta limit needs delta > 0, got {delta}"
            )));
        }
        Self::new(rho / delta, (1.0 - rho) / delta)
    }

    pub fn pdf(&self, x: f64) -> Result<f64, ExactError> {
        if !(x > 0.0 && x < 1.0) {
            return Err(ExactError::Domain(format!("density needs 0 < x < 1, got {x}")));
        }
        let ln = (self.alpha - 1.0) * x.ln() + (self.beta - 1.0) * (1.0 - x).ln()
            - ln_beta(self.alpha, self.beta);
        Ok(ln.exp())
    }

    /// Regularised incomplete beta function `I_x(α, β)`; defined on `[0, 1]`.
    pub fn cdf(&self, x: f64) -> Result<f64, ExactError> {
        if !(0.0..=1.0).contains(&x) {
            return Err(ExactError::Domain(format!("CDF needs 0 ≤ x ≤ 1, got {x}")));
        }
        checked_beta_reg(self.alpha, self.beta, x).map_err(|e| ExactError::Domain(e.to_string()))
    }

    pub fn mean(&self) -> f64 {
        self.alpha / (self.alpha + self.beta)
    }
}
