//! Fisher-type problem `-eps u'' = u - u^2` with boundary values 1/2.
//!
//! Starts from piecewise linear guesses with one and two bumps on a
//! 20-element mesh and reports the shape of the converged solution: the
//! number of separate regions where `u > 1/2` and its range.
//!
//! Run with `cargo run --release --example fisher_spikes`.

use std::sync::Arc;

use hpnewton::adapt::{run, NewtonConfig};
use hpnewton::cli::InitialGuessSpec;
use hpnewton::mesh::uniform_mesh;
use hpnewton::problem::Builtin;

fn regions_above_half(values: &[f64]) -> usize {
    let above: Vec<bool> = values.iter().map(|&v| v > 0.5).collect();
    let n = above.len();
    let starts = (1..n).filter(|&i| above[i] && !above[i - 1]).count();
    starts - usize::from(above[n - 1] && starts > 0 && above[1..].iter().all(|&a| a))
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let problem = Builtin::Fisher { alpha: 0.5, beta: 0.5 }.problem(2.5e-4)?;
    let mesh = Arc::new(uniform_mesh(0.0, 1.0, 20, 1)?);
    for k in [1, 2] {
        let u0 = InitialGuessSpec::Spikes(k).build(mesh.clone(), &problem)?;
        let out = run(&problem, &NewtonConfig::default(), u0)?;
        let values: Vec<f64> = (0..=2000).map(|i| out.solution.value(i as f64 / 2000.0).unwrap()).collect();
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        println!(
            "{k} bump(s) in the guess: {:?} after {} steps, n_dof = {}, estimate = {:.2e}",
            out.status,
            out.log.len(),
            out.mesh().n_dof(),
            out.report.total
        );
        println!(
            "    regions with u > 1/2: {}, range [{lo:.4}, {hi:.4}]",
            regions_above_half(&values)
        );
    }
    Ok(())
}
