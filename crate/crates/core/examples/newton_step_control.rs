//! Adaptive step-size control for the damped Newton iteration on a fixed
//! mesh.
//!
//! Each step size comes from the finite-difference probe of the Newton
//! direction; the iteration accepts every step and stops once the
//! linearization indicator is small. A full-step iteration from the same
//! guess is shown for comparison.
//!
//! Run with `cargo run --release --example newton_step_control`.

use std::sync::Arc;

use hpnewton::adapt::step::{first_step, predicted_step};
use hpnewton::adapt::NewtonConfig;
use hpnewton::estimator::estimate;
use hpnewton::linearized::newton_step;
use hpnewton::mesh::{uniform_mesh, FemFunction};
use hpnewton::problem::Builtin;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = NewtonConfig::default();
    let problem = Builtin::GinzburgLandau.problem(1e-2)?;
    let mesh = Arc::new(uniform_mesh(0.0, 1.0, 20, 3)?);
    let shock: Vec<f64> = (0..=20)
        .map(|i| match i {
            0 | 10 | 20 => 0.0,
            i if i < 10 => -1.0,
            _ => 1.0,
        })
        .collect();
    let guess = FemFunction::piecewise_linear(mesh.clone(), &shock)?;

    println!("adaptive step sizes:");
    let mut u = guess.clone();
    let mut kappa = None;
    for n in 0..60 {
        let prediction = match kappa {
            None => first_step(&problem, &u, &config)?,
            Some(k) => predicted_step(&problem, &u, k, &config)?,
        };
        let next = newton_step(&problem, &mesh, &u, prediction.dt)?;
        let report = estimate(&problem, &mesh, &u, &next, prediction.dt)?;
        println!(
            "  n = {n:>2}: dt = {:.4} ({:?}), |N_F(u)| = {:.3e}, delta = {:.3e}",
            prediction.dt, prediction.rule, prediction.direction_norm, report.delta
        );
        u = next;
        kappa = Some(prediction.dt);
        if report.delta < 1e-10 {
            break;
        }
    }
    println!("  u(0.25) = {:.6}, u(0.75) = {:.6}", u.value(0.25).unwrap(), u.value(0.75).unwrap());

    println!("full steps:");
    let mut u = guess;
    for n in 0..12 {
        let next = newton_step(&problem, &mesh, &u, 1.0)?;
        let report = estimate(&problem, &mesh, &u, &next, 1.0)?;
        println!("  n = {n:>2}: delta = {:.3e}, max |u| = {:.3}", report.delta, next.max_coeff());
        u = next;
    }
    Ok(())
}
