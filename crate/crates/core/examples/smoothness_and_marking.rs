//! One adaptive refinement by hand: indicators, Dörfler marking, the
//! smoothness test deciding between enrichment and bisection, and the
//! transfer of the iterate to the refined space.
//!
//! Run with `cargo run --example smoothness_and_marking`.

use std::sync::Arc;

use hpnewton::adapt::{build_refinement_plan, dorfler_mark, smoothness_indicator, NewtonConfig};
use hpnewton::estimator::{estimate, shifted_iterate};
use hpnewton::linearized::newton_step;
use hpnewton::mesh::{apply_refinement, transfer, uniform_mesh, FemFunction, RefineAction};
use hpnewton::problem::Builtin;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = NewtonConfig::default();
    let problem = Builtin::GinzburgLandau.problem(1e-3)?;
    let mesh = Arc::new(uniform_mesh(0.0, 1.0, 8, 2)?);
    let nodes = [0.0, -0.9, -0.9, -0.7, 0.0, 0.7, 0.9, 0.9, 0.0];
    let u0 = FemFunction::piecewise_linear(mesh.clone(), &nodes)?;
    let u1 = newton_step(&problem, &mesh, &u0, 1.0)?;
    let report = estimate(&problem, &mesh, &u0, &u1, 1.0)?;
    let eta2 = report.eta2();
    let marked = dorfler_mark(&eta2, config.dorfler);
    let shifted = shifted_iterate(&u0, &u1, 1.0)?;
    println!("delta = {:.3e}, sum eta^2 = {:.3e}", report.delta, report.sum_eta2());
    println!("{:>3} {:>21} {:>11} {:>11} {:>7}", "j", "element", "eta^2", "smoothness", "marked");
    for j in 0..mesh.num_elements() {
        let (xl, xr) = mesh.element(j);
        println!(
            "{j:>3} ({xl:.4}, {xr:.4})     {:>11.3e} {:>11.4} {:>7}",
            eta2[j],
            smoothness_indicator(&shifted, j),
            marked.contains(&j)
        );
    }
    let plan = build_refinement_plan(&shifted, &marked, config.zeta);
    println!(
        "plan: {} enrichments, {} bisections",
        plan.count(RefineAction::Enrich),
        plan.count(RefineAction::Bisect)
    );
    let refined = Arc::new(apply_refinement(&mesh, &plan)?);
    let moved = transfer(&u1, &mesh, &refined)?;
    println!("n_dof {} -> {}, degrees {:?}", mesh.n_dof(), refined.n_dof(), refined.degrees());
    let drift = (0..=200)
        .map(|i| i as f64 / 200.0)
        .map(|x| (moved.value(x).unwrap() - u1.value(x).unwrap()).abs())
        .fold(0.0, f64::max);
    println!("largest change of the iterate under transfer: {drift:.1e}");
    Ok(())
}
