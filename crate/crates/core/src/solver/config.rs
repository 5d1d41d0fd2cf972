use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Knobs shared by every equilibrium solver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    /// Iteration budget for mirror descent and gradient ascent.
    pub max_iters: usize,
    /// Step size.
    pub step: f64,
    /// Projected-gradient residual that counts as converged.
    pub tol: f64,
    /// Uniform starting effort.
    pub init: f64,
    /// Cap on gradient component magnitude.
    pub grad_clip: f64,
    /// Margin a deviation must win by to count as an improvement.
    pub tie_eps: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            max_iters: 1000,
            step: 0.05,
            tol: 1e-4,
            init: 0.1,
            grad_clip: 1e6,
            tie_eps: 1e-9,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [self.step, self.tol, self.grad_clip, self.tie_eps];
        if self.max_iters == 0 || positive.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::invalid(format!(
                "solver settings must all be positive: {self:?}"
            )));
        }
        if !(self.init.is_finite() && self.init >= 0.0) {
            return Err(Error::invalid(format!("init must be >= 0, got {}", self.init)));
        }
        Ok(())
    }

    pub fn with_max_iters(mut self, max_iters: usize) -> Self {
        self.max_iters = max_iters;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_step(mut self, step: f64) -> Self {
        self.step = step;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        SolverConfig::default().validate().unwrap();
    }

    #[test]
    fn rejects_bad_settings() {
        assert!(SolverConfig::default().with_step(0.0).validate().is_err());
        assert!(SolverConfig::default().with_max_iters(0).validate().is_err());
        assert!(SolverConfig::default().with_tol(-1e-3).validate().is_err());
        let negative = SolverConfig {
            init: -0.1,
            ..Default::default()
        };
        assert!(negative.validate().is_err());
        let zero = SolverConfig {
            init: 0.0,
            ..Default::default()
        };
        zero.validate().unwrap();
        let nan = SolverConfig {
            grad_clip: f64::NAN,
            ..Default::default()
        };
        assert!(nan.validate().is_err());
    }
}
