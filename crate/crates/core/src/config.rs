use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Every tunable of the estimators. Defaults are the documented ones and are
/// written into each report bundle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FitConfig {
    /// Outer EM stops once |Δ loglik| falls below this.
    pub tolerance: f64,
    /// 2PL fits additionally require every free score component of the
    /// log-likelihood to fall below this.
    pub score_tolerance: f64,
    pub max_iterations: usize,
    /// Random starts in addition to the deterministic one.
    pub n_random_starts: usize,
    pub seed: u64,
    /// Clamp for LC success probabilities: λ ∈ [ε, 1 − ε].
    pub epsilon: f64,
    /// Significance level of the dimensionality LR tests.
    pub alpha: f64,
    pub gamma_min: f64,
    pub gamma_max: f64,
    pub beta_max: f64,
    pub theta_max: f64,
    /// Newton iterations per block per outer EM iteration.
    pub inner_max_iterations: usize,
    pub inner_tolerance: f64,
    /// Length of the LC pre-fit that seeds 2PL abilities.
    pub prefit_iterations: usize,
    /// Evaluate independent work items on the rayon pool. Has no effect
    /// when the crate is built without the `parallel` feature.
    pub parallel: bool,
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig {
            tolerance: 1e-8,
            score_tolerance: 1e-5,
            max_iterations: 5000,
            n_random_starts: 19,
            seed: 20100101,
            epsilon: 1e-6,
            alpha: 0.05,
            gamma_min: 0.05,
            gamma_max: 20.0,
            beta_max: 10.0,
            theta_max: 20.0,
            inner_max_iterations: 50,
            inner_tolerance: 1e-10,
            prefit_iterations: 30,
            parallel: true,
        }
    }
}

impl FitConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("tolerance", self.tolerance),
            ("score_tolerance", self.score_tolerance),
            ("epsilon", self.epsilon),
            ("gamma_min", self.gamma_min),
            ("gamma_max", self.gamma_max),
            ("beta_max", self.beta_max),
            ("theta_max", self.theta_max),
            ("inner_tolerance", self.inner_tolerance),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidArgument(format!("{name} must be positive, got {v}")));
            }
        }
        if self.epsilon >= 0.5 {
            return Err(Error::InvalidArgument("epsilon must be below 0.5".into()));
        }
        if self.gamma_min >= self.gamma_max {
            return Err(Error::InvalidArgument("gamma_min must be below gamma_max".into()));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "alpha must lie in (0, 1), got {}",
                self.alpha
            )));
        }
        if self.max_iterations == 0 || self.inner_max_iterations == 0 {
            return Err(Error::InvalidArgument("iteration limits must be positive".into()));
        }
        Ok(())
    }

    /// Seed of random start `r` (1-based; start 0 is the deterministic one).
    pub fn start_seed(&self, r: usize) -> u64 {
        self.seed.wrapping_add(r as u64)
    }
}
