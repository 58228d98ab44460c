//! The fully adaptive Newton-Galerkin loop.
//!
//! Each pass solves one damped Newton step on the current space and
//! evaluates the estimator. When the discretization error dominates
//! (`delta^2 <= theta sum eta^2`) the space is hp-refined, the new iterate is
//! transferred to it and the next step reuses the same step size. Otherwise
//! the iterate is accepted and the next step size is predicted.

use std::sync::Arc;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::estimator::{estimate, shifted_iterate, EstimatorReport};
use crate::linearized::newton_step;
use crate::mesh::{apply_refinement, transfer, FemFunction, HpMesh, RefineAction};
use crate::problem::SemilinearProblem;

use super::marking::{build_refinement_plan, dorfler_mark};
use super::step::{first_step, predicted_step, StepPrediction, StepRule};
use super::NewtonConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Action {
    /// The step was accepted and the iteration advanced.
    Newton,
    /// The space was refined; the next step starts from the transferred
    /// iterate with the same step size.
    Refine,
    /// The run ended after this step.
    Stop,
}

/// One pass of the driver: a solved step and the decision taken on it.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    /// Position in the log, starting at 0.
    pub step: usize,
    /// Newton iteration index `n`.
    pub newton: usize,
    pub action: Action,
    pub dt: f64,
    pub dt_rule: StepRule,
    /// Dimension of the space the step was solved in.
    pub n_dof: usize,
    pub delta: f64,
    pub sum_eta2: f64,
    pub total: f64,
    /// Elements enriched and bisected (REFINE records only).
    pub n_enrich: usize,
    pub n_bisect: usize,
    /// Seconds since the start of the run.
    pub wall_time: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunLog {
    pub records: Vec<RunRecord>,
}

impl RunLog {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn last(&self) -> Option<&RunRecord> {
        self.records.last()
    }

    pub fn iter(&self) -> impl Iterator<Item = &RunRecord> {
        self.records.iter()
    }

    pub fn count(&self, action: Action) -> usize {
        self.records.iter().filter(|r| r.action == action).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    /// The total estimate reached the tolerance.
    Converged,
    /// A refinement would have exceeded the DOF budget.
    BudgetExceeded,
    /// The step limit was reached.
    StepLimit,
}

/// Iteration state between passes.
#[derive(Debug, Clone)]
pub struct NewtonState {
    /// Newton iteration index.
    pub n: usize,
    /// Step size of the previous accepted step.
    pub kappa: Option<f64>,
    /// Current iterate; its mesh is the current mesh.
    pub u: FemFunction,
}

impl NewtonState {
    pub fn new(u0: FemFunction) -> Self {
        NewtonState {
            n: 0,
            kappa: None,
            u: u0,
        }
    }

    pub fn mesh(&self) -> &Arc<HpMesh> {
        self.u.mesh_arc()
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    /// Shifted iterate of the last step, i.e. the function whose residual
    /// the final estimate bounds.
    pub solution: FemFunction,
    pub log: RunLog,
    pub status: RunStatus,
    pub report: EstimatorReport,
}

impl RunOutcome {
    pub fn mesh(&self) -> &HpMesh {
        self.solution.mesh()
    }

    pub fn converged(&self) -> bool {
        self.status == RunStatus::Converged
    }
}

/// Runs the adaptive iteration from `u0`, whose mesh is the initial mesh.
///
/// `u0` must carry the problem's boundary values as its lift.
pub fn run(problem: &SemilinearProblem, config: &NewtonConfig, u0: FemFunction) -> Result<RunOutcome> {
    config.validate()?;
    if u0.lift() != problem.boundary_values() {
        return Err(Error::invalid(format!(
            "initial guess has boundary values {:?}, problem prescribes {:?}",
            u0.lift(),
            problem.boundary_values()
        )));
    }
    let start = Instant::now();
    let mut log = RunLog::default();
    let mut state = NewtonState::new(u0);
    let mut carried: Option<StepPrediction> = None;

    loop {
        let prediction = match (carried.take(), state.kappa) {
            (Some(prediction), _) => prediction,
            (None, None) => first_step(problem, &state.u, config)?,
            (None, Some(kappa)) => predicted_step(problem, &state.u, kappa, config)?,
        };
        let dt = prediction.dt;
        let mesh = Arc::clone(state.mesh());
        let u_next = newton_step(problem, &mesh, &state.u, dt)?;
        let report = estimate(problem, &mesh, &state.u, &u_next, dt)?;
        let mut record = RunRecord {
            step: log.len(),
            newton: state.n,
            action: Action::Stop,
            dt,
            dt_rule: prediction.rule,
            n_dof: mesh.n_dof(),
            delta: report.delta,
            sum_eta2: report.sum_eta2(),
            total: report.total,
            n_enrich: 0,
            n_bisect: 0,
            wall_time: 0.0,
        };
        let finish = |mut record: RunRecord, mut log: RunLog, status, report| -> Result<RunOutcome> {
            record.wall_time = start.elapsed().as_secs_f64();
            log.records.push(record);
            Ok(RunOutcome {
                solution: shifted_iterate(&state.u, &u_next, dt)?,
                log,
                status,
                report,
            })
        };

        if report.total <= config.residual_tol {
            return finish(record, log, RunStatus::Converged, report);
        }
        if log.len() + 1 >= config.max_steps {
            return finish(record, log, RunStatus::StepLimit, report);
        }

        if report.delta2() <= config.theta * record.sum_eta2 {
            let shifted = shifted_iterate(&state.u, &u_next, dt)?;
            let marked = dorfler_mark(&report.eta2(), config.dorfler);
            let plan = build_refinement_plan(&shifted, &marked, config.zeta);
            let refined = apply_refinement(&mesh, &plan)?;
            if refined.n_dof() > config.max_dof {
                return finish(record, log, RunStatus::BudgetExceeded, report);
            }
            let refined = Arc::new(refined);
            state.u = transfer(&u_next, &mesh, &refined)?;
            state.n += 1;
            state.kappa = Some(dt);
            carried = Some(prediction);
            record.action = Action::Refine;
            record.n_enrich = plan.count(RefineAction::Enrich);
            record.n_bisect = plan.count(RefineAction::Bisect);
        } else {
            state.u = u_next;
            state.n += 1;
            state.kappa = Some(dt);
            record.action = Action::Newton;
        }
        record.wall_time = start.elapsed().as_secs_f64();
        log.records.push(record);
    }
}
