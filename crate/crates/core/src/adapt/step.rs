//! Step-size prediction for the damped Newton iteration.
//!
//! The damped Newton method is the explicit Euler scheme for `u' = N_F(u)`
//! with `N_F(u) = -F'(u)^{-1} F(u)`. The step size is chosen so that the
//! predicted deviation from the continuous trajectory stays below `tau`,
//! using a finite difference of `N_F` along the current direction.

use crate::error::{Error, Result};
use crate::linearized::{energy_norm, newton_transform};
use crate::mesh::FemFunction;
use crate::problem::SemilinearProblem;

use super::NewtonConfig;

/// Difference norms at or below this value count as locally linear
/// dynamics and give a full step.
pub const LINEAR_DYNAMICS_THRESHOLD: f64 = 1e-14;

/// Number of probe-length halvings tried before falling back.
pub const MAX_PROBE_HALVINGS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum StepRule {
    /// First step, from the size of the Newton direction alone.
    Initial,
    /// From the finite-difference probe.
    Predicted,
    /// The probe system was singular; half the previous step.
    Fallback,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepPrediction {
    pub dt: f64,
    pub rule: StepRule,
    /// Probe length `h_n` actually used (after any halving).
    pub probe: Option<f64>,
    /// Energy norm of `N_F(u_n)`.
    pub direction_norm: f64,
}

/// `min(sqrt(2 tau / ||N_F(u_0)||), 1)`; 1 when the norm vanishes.
pub fn initial_step(tau: f64, nrm0: f64) -> f64 {
    if nrm0 <= 0.0 {
        return 1.0;
    }
    (2.0 * tau / nrm0).sqrt().min(1.0)
}

/// `h_n = gamma kappa_n / ||N_F(u_n)||^2`.
pub fn probe_length(gamma: f64, kappa: f64, nrm: f64) -> f64 {
    gamma * kappa / (nrm * nrm)
}

/// `min(sqrt(2 tau h / diff), 1)`, with a full step for vanishing `diff`.
pub fn step_from_difference(tau: f64, h: f64, diff: f64) -> f64 {
    if diff <= LINEAR_DYNAMICS_THRESHOLD {
        return 1.0;
    }
    (2.0 * tau * h / diff).sqrt().min(1.0)
}

/// First step size from `u_0`.
pub fn first_step(
    problem: &SemilinearProblem,
    u0: &FemFunction,
    config: &NewtonConfig,
) -> Result<StepPrediction> {
    let nf = newton_transform(problem, u0.mesh(), u0)?;
    let nrm = energy_norm(u0.mesh(), &nf, problem.epsilon());
    Ok(StepPrediction {
        dt: initial_step(config.tau, nrm),
        rule: StepRule::Initial,
        probe: None,
        direction_norm: nrm,
    })
}

/// Step size at `u_n` given the previous step size `kappa`.
///
/// Evaluates `N_F` at `u_n` and at the probe point `u_n + h_n N_F(u_n)`.
/// If the probe system is singular or not finite (for instance because `f`
/// overflows far from `u_n`) the probe length is halved and the probe
/// repeated. Running out of halvings gives `kappa / 2` with
/// [`StepRule::Fallback`].
pub fn predicted_step(
    problem: &SemilinearProblem,
    u_n: &FemFunction,
    kappa: f64,
    config: &NewtonConfig,
) -> Result<StepPrediction> {
    let mesh = u_n.mesh();
    let eps = problem.epsilon();
    let nf = newton_transform(problem, mesh, u_n)?;
    let nrm = energy_norm(mesh, &nf, eps);
    if nrm == 0.0 {
        return Ok(StepPrediction {
            dt: 1.0,
            rule: StepRule::Predicted,
            probe: None,
            direction_norm: 0.0,
        });
    }
    let fallback = StepPrediction {
        dt: 0.5 * kappa,
        rule: StepRule::Fallback,
        probe: None,
        direction_norm: nrm,
    };
    let mut h = probe_length(config.gamma, kappa, nrm);
    for _ in 0..=MAX_PROBE_HALVINGS {
        let probe = u_n.linear_combination(1.0, &nf, h)?;
        match newton_transform(problem, mesh, &probe) {
            Ok(np) => {
                let diff = energy_norm(mesh, &np.linear_combination(1.0, &nf, -1.0)?, eps);
                if diff.is_finite() {
                    return Ok(StepPrediction {
                        dt: step_from_difference(config.tau, h, diff),
                        rule: StepRule::Predicted,
                        probe: Some(h),
                        direction_norm: nrm,
                    });
                }
            }
            Err(Error::NonFinite(_) | Error::SingularSystem { .. }) => {}
            Err(e) => return Err(e),
        }
        h *= 0.5;
    }
    Ok(fallback)
}
