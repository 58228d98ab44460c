//! Bratu problem `-u'' = exp(u + 1)` on (0, 1) with zero boundary values.
//!
//! The problem has two solutions. Starting from `u0 = 0` the adaptive
//! iteration finds the lower branch, starting from the bump `10 x (1 - x)` it
//! finds the upper one. Both are compared with the closed form
//! `u(x) = -2 ln(cosh((x - 1/2) theta / 2) / cosh(theta / 4))`.
//!
//! Run with `cargo run --release --example bratu_two_branches`.

use std::sync::Arc;

use hpnewton::adapt::{run, Action, NewtonConfig};
use hpnewton::mesh::{uniform_mesh, FemFunction};
use hpnewton::problem::Builtin;

/// Root of `theta = sqrt(2e) cosh(theta / 4)` in `[lo, hi]` by bisection.
fn theta(lo: f64, hi: f64) -> f64 {
    let g = |t: f64| t - (2.0 * std::f64::consts::E).sqrt() * (t / 4.0).cosh();
    let (mut a, mut b) = (lo, hi);
    for _ in 0..100 {
        let m = 0.5 * (a + b);
        if g(a) * g(m) <= 0.0 {
            b = m;
        } else {
            a = m;
        }
    }
    0.5 * (a + b)
}

fn exact(theta: f64, x: f64) -> f64 {
    -2.0 * (((x - 0.5) * theta / 2.0).cosh() / (theta / 4.0).cosh()).ln()
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let problem = Builtin::Bratu.problem(1.0)?;
    let mesh = Arc::new(uniform_mesh(0.0, 1.0, 10, 1)?);
    let guesses = [
        ("zero", FemFunction::zeros(mesh.clone()), theta(0.0, 4.0)),
        (
            "bump",
            FemFunction::interpolate_linear(mesh, |x| 10.0 * x * (1.0 - x)),
            theta(4.0, 20.0),
        ),
    ];
    for (name, u0, theta) in guesses {
        let out = run(&problem, &NewtonConfig::default(), u0)?;
        let err = (0..=100)
            .map(|i| i as f64 / 100.0)
            .map(|x| (out.solution.value(x).unwrap() - exact(theta, x)).abs())
            .fold(0.0, f64::max);
        println!(
            "u0 = {name}: {:?}, {} Newton steps, {} refinements, n_dof = {}, estimate = {:.2e}",
            out.status,
            out.log.count(Action::Newton),
            out.log.count(Action::Refine),
            out.mesh().n_dof(),
            out.report.total
        );
        println!(
            "    u(1/2) = {:.10} (exact {:.10}), max error {err:.2e}, degrees {:?}",
            out.solution.value(0.5).unwrap(),
            exact(theta, 0.5),
            out.mesh().degrees()
        );
    }
    Ok(())
}
