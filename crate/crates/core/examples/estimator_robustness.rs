//! Robustness of the a posteriori estimate for `-eps u'' = 1 - u` with zero
//! boundary values, whose exact solution has boundary layers of width
//! `sqrt(eps)`.
//!
//! For a single full Newton step the linearization indicator vanishes and
//! the estimate bounds the energy-norm error. The ratio estimate / error is
//! printed for a range of `eps` on a fixed hp-mesh.
//!
//! Run with `cargo run --release --example estimator_robustness`.

use std::sync::Arc;

use hpnewton::estimator::estimate;
use hpnewton::linearized::newton_step;
use hpnewton::mesh::{FemFunction, HpMesh};
use hpnewton::polybasis::gauss_rule;
use hpnewton::problem::SemilinearProblem;

/// Energy error `(eps ||e'||^2 + ||e||^2)^(1/2)` by composite Gauss
/// quadrature on 4000 subintervals of every element.
fn energy_error(u: &FemFunction, eps: f64) -> f64 {
    let s = eps.sqrt();
    let d = 1.0 + (-1.0 / s).exp();
    let exact = |x: f64| 1.0 - ((-x / s).exp() + (-(1.0 - x) / s).exp()) / d;
    let dexact = |x: f64| ((-x / s).exp() - (-(1.0 - x) / s).exp()) / (s * d);
    let rule = gauss_rule(8);
    let mesh = u.mesh();
    let mut sum = 0.0;
    for j in 0..mesh.num_elements() {
        let (xl, xr) = mesh.element(j);
        let n = 4000;
        for i in 0..n {
            let a = xl + (xr - xl) * i as f64 / n as f64;
            let b = xl + (xr - xl) * (i + 1) as f64 / n as f64;
            sum += rule.integrate_on(a, b, |x| {
                let e = u.value(x).unwrap() - exact(x);
                let de = u.derivative_on(j, x) - dexact(x);
                eps * de * de + e * e
            });
        }
    }
    sum.sqrt()
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mesh = Arc::new(HpMesh::new(vec![0.0, 0.05, 0.3, 0.7, 0.95, 1.0], vec![4, 3, 2, 3, 4])?);
    println!("{:>8} {:>12} {:>12} {:>8}", "eps", "estimate", "error", "ratio");
    for eps in [1.0, 1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6] {
        let problem = SemilinearProblem::new(eps, 0.0, 1.0, |_, u| 1.0 - u, |_, _| -1.0)?;
        let u0 = FemFunction::zeros(mesh.clone());
        let u1 = newton_step(&problem, &mesh, &u0, 1.0)?;
        let report = estimate(&problem, &mesh, &u0, &u1, 1.0)?;
        let err = energy_error(&u1, eps);
        println!(
            "{eps:>8.0e} {:>12.4e} {err:>12.4e} {:>8.3}",
            report.total,
            report.total / err
        );
    }
    Ok(())
}
