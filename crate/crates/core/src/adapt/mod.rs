//! Adaptive damped Newton iteration coupled with hp-adaptive refinement.
//!
//! [`step`] predicts Newton step sizes from the local behaviour of the Newton
//! transform, [`marking`] selects and classifies elements for refinement, and
//! [`driver`] alternates Newton steps and hp-refinements depending on which
//! error source dominates.

pub mod driver;
pub mod marking;
pub mod step;

pub use driver::{run, Action, NewtonState, RunLog, RunOutcome, RunRecord, RunStatus};
pub use marking::{build_refinement_plan, dorfler_mark, smoothness_indicator};
pub use step::{initial_step, predicted_step, StepPrediction, StepRule};

use crate::error::{Error, Result};

/// Lower end of the range of the smoothness indicator, `sqrt(3)/(sqrt(6)+1)`.
pub const SMOOTHNESS_LOWER_BOUND: f64 = 0.502_117_975_910_081_6;

/// Parameters of the adaptive Newton-Galerkin iteration.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NewtonConfig {
    /// Prediction tolerance for the step size.
    pub tau: f64,
    /// Scaling of the finite-difference probe.
    pub gamma: f64,
    /// A step refines when `delta^2 <= theta * sum eta^2`.
    pub theta: f64,
    /// Fraction of the squared estimate captured by the marked elements.
    pub dorfler: f64,
    /// Marked elements with smoothness indicator `>= zeta` are enriched.
    pub zeta: f64,
    /// Refinements that would exceed this many DOFs end the run.
    pub max_dof: usize,
    /// The run stops once the total estimate drops to this value.
    pub residual_tol: f64,
    /// Upper bound on logged steps (Newton steps plus refinements).
    pub max_steps: usize,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        NewtonConfig {
            tau: 0.1,
            gamma: 0.5,
            theta: 0.5,
            dorfler: 0.5,
            zeta: 0.6,
            max_dof: 5000,
            residual_tol: 1e-8,
            max_steps: 2000,
        }
    }
}

impl NewtonConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("tau", self.tau),
            ("gamma", self.gamma),
            ("theta", self.theta),
            ("residual_tol", self.residual_tol),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.dorfler > 0.0 && self.dorfler < 1.0) {
            return Err(Error::invalid(format!(
                "dorfler must lie in (0, 1), got {}",
                self.dorfler
            )));
        }
        if !(self.zeta > SMOOTHNESS_LOWER_BOUND && self.zeta < 1.0) {
            return Err(Error::invalid(format!(
                "zeta must lie in ({SMOOTHNESS_LOWER_BOUND:.4}, 1), got {}",
                self.zeta
            )));
        }
        if self.max_dof == 0 || self.max_steps == 0 {
            return Err(Error::invalid("max_dof and max_steps must be positive"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lower_bound_constant() {
        let exact = 3f64.sqrt() / (6f64.sqrt() + 1.0);
        assert!((SMOOTHNESS_LOWER_BOUND - exact).abs() < 1e-16);
    }

    #[test]
    fn defaults_are_valid() {
        assert!(NewtonConfig::default().validate().is_ok());
    }

    #[test]
    fn rejects_out_of_range() {
        let base = NewtonConfig::default();
        for bad in [
            NewtonConfig { tau: 0.0, ..base },
            NewtonConfig { gamma: -1.0, ..base },
            NewtonConfig { theta: f64::NAN, ..base },
            NewtonConfig { dorfler: 1.0, ..base },
            NewtonConfig { zeta: 0.5, ..base },
            NewtonConfig { zeta: 1.0, ..base },
            NewtonConfig { max_dof: 0, ..base },
            NewtonConfig { residual_tol: 0.0, ..base },
        ] {
            assert!(bad.validate().is_err(), "{bad:?}");
        }
    }
}
