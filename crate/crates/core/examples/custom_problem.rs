//! Solving a user-defined problem:
//! `-eps u'' = u (1 - u^2) + 0.3 sin(2 pi x)`
//! on (0, 2) with `u(0) = -1`, `u(2) = 1`.
//!
//! Any `f(x, u)` with its partial derivative in `u` can be plugged in.
//!
//! Run with `cargo run --release --example custom_problem`.

use std::f64::consts::PI;
use std::sync::Arc;

use hpnewton::adapt::{run, Action, NewtonConfig};
use hpnewton::mesh::{uniform_mesh, FemFunction};
use hpnewton::problem::SemilinearProblem;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let problem = SemilinearProblem::new(
        1e-2,
        0.0,
        2.0,
        |x, u| u * (1.0 - u * u) + 0.3 * (2.0 * PI * x).sin(),
        |_, u| 1.0 - 3.0 * u * u,
    )?
    .with_boundary_values(-1.0, 1.0);
    let mesh = Arc::new(uniform_mesh(0.0, 2.0, 10, 1)?);
    let u0 = FemFunction::interpolate_linear(mesh, |x| x - 1.0);
    let config = NewtonConfig {
        residual_tol: 1e-7,
        ..NewtonConfig::default()
    };
    let out = run(&problem, &config, u0)?;
    println!(
        "{:?} after {} Newton steps and {} refinements, n_dof = {}, estimate = {:.2e}",
        out.status,
        out.log.count(Action::Newton),
        out.log.count(Action::Refine),
        out.mesh().n_dof(),
        out.report.total
    );
    for i in 0..=8 {
        let x = 0.25 * i as f64;
        println!("  u({x:.2}) = {:+.6}", out.solution.value(x).unwrap());
    }
    Ok(())
}
