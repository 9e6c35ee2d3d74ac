use crate::error::{Error, Result};

/// Problem size, cost coefficients and solver controls.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    /// Largest priority level.
    pub rho: u8,
    /// Largest duration, in decision epochs.
    pub sigma: u8,
    /// Task-cost coefficients `alpha_1..alpha_9`.
    pub alpha: [f64; 9],
    /// Safety-cost coefficients `beta_1..beta_6`.
    pub beta: [f64; 6],
    pub k1: f64,
    pub k2: f64,
    /// Discount factor, strictly inside (0, 1) for a regular model. Zero is accepted and
    /// reduces value iteration to one-step cost minimisation.
    pub gamma: f64,
    /// Sup-norm convergence tolerance.
    pub eta: f64,
    pub max_sweeps: usize,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            rho: 2,
            sigma: 2,
            alpha: [1.0; 9],
            beta: [1.0; 6],
            k1: 1.0,
            k2: 1.0,
            gamma: 0.9,
            eta: 1e-6,
            max_sweeps: 500,
        }
    }
}

impl ModelParams {
    pub fn validate(&self) -> Result<()> {
        if self.rho == 0 {
            return Err(Error::invalid("rho", "must be at least 1"));
        }
        if self.sigma == 0 {
            return Err(Error::invalid("sigma", "must be at least 1"));
        }
        for (i, a) in self.alpha.iter().enumerate() {
            check_nonneg(&format!("alpha[{}]", i + 1), *a)?;
        }
        for (i, b) in self.beta.iter().enumerate() {
            check_nonneg(&format!("beta[{}]", i + 1), *b)?;
        }
        check_nonneg("k1", self.k1)?;
        check_nonneg("k2", self.k2)?;
        if !(0.0..1.0).contains(&self.gamma) {
            return Err(Error::invalid(
                "gamma",
                format!("{} not in [0, 1)", self.gamma),
            ));
        }
        if !(self.eta > 0.0 && self.eta.is_finite()) {
            return Err(Error::invalid(
                "eta",
                format!("{} must be positive", self.eta),
            ));
        }
        if self.max_sweeps == 0 {
            return Err(Error::invalid("max_sweeps", "must be at least 1"));
        }
        Ok(())
    }
}

fn check_nonneg(key: &str, v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(
            key,
            format!("{v} must be a finite nonnegative number"),
        ))
    }
}
