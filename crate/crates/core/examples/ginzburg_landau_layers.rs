//! Ginzburg-Landau problem `-eps u'' = u - u^3` with zero boundary values,
//! started from a piecewise linear shock profile for decreasing `eps`.
//!
//! Prints the convergence history summary and the smallest elements of the
//! final hp-mesh, which cluster at the boundary layers and the interior shock.
//!
//! Run with `cargo run --release --example ginzburg_landau_layers`.

use std::sync::Arc;

use hpnewton::adapt::{run, Action, NewtonConfig};
use hpnewton::mesh::{uniform_mesh, FemFunction};
use hpnewton::problem::Builtin;

fn shock_guess() -> FemFunction {
    let mesh = Arc::new(uniform_mesh(0.0, 1.0, 10, 1).unwrap());
    let nodes = [0.0, -1.0, -1.0, -1.0, -1.0, 0.0, 1.0, 1.0, 1.0, 1.0, 0.0];
    FemFunction::piecewise_linear(mesh, &nodes).unwrap()
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = NewtonConfig {
        residual_tol: 1e-6,
        max_dof: 5000,
        ..NewtonConfig::default()
    };
    for eps in [1e-2, 1e-3, 1e-4, 1e-5] {
        let problem = Builtin::GinzburgLandau.problem(eps)?;
        let out = run(&problem, &config, shock_guess())?;
        let last = out.log.last().expect("at least one step");
        println!(
            "eps = {eps:.0e}: {:?} after {} steps ({} Newton, {} refinements), n_dof = {}, estimate = {:.3e}",
            out.status,
            out.log.len(),
            out.log.count(Action::Newton),
            out.log.count(Action::Refine),
            last.n_dof,
            out.report.total,
        );
        let mesh = out.mesh();
        let mut by_size: Vec<usize> = (0..mesh.num_elements()).collect();
        by_size.sort_by(|&i, &k| mesh.h(i).total_cmp(&mesh.h(k)));
        for &j in by_size.iter().take(3) {
            let (xl, xr) = mesh.element(j);
            println!("    small element ({xl:.6}, {xr:.6}), p = {}", mesh.degree(j));
        }
        for x in [0.25, 0.75] {
            println!("    u({x}) = {:.8}", out.solution.value(x).unwrap());
        }
    }
    Ok(())
}
