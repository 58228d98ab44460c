//! Shared checkers and reference solutions for the integration tests.
//!
//! Each `check_*` function tests one invariant for one input and returns a
//! description of the violation, so the same check can be driven by
//! proptest strategies and by seeded sample loops.

#![allow(dead_code)]

use std::sync::Arc;

use hpnewton::adapt::step::step_from_difference;
use hpnewton::adapt::{dorfler_mark, initial_step, smoothness_indicator, SMOOTHNESS_LOWER_BOUND};
use hpnewton::estimator::{element_weights, linearization_indicator, node_weight};
use hpnewton::linearized::{newton_step, newton_transform, residual_vector};
use hpnewton::mesh::{
    apply_refinement, transfer, uniform_mesh, FemFunction, HpMesh, RefineAction, RefinementPlan,
};
use hpnewton::polybasis::gauss_rule;
use hpnewton::problem::SemilinearProblem;

pub type Check = Result<(), String>;

/// `2 sqrt(alpha/eps) <= beta <= 3 sqrt(alpha/eps)` for one element, and
/// `min/2 <= gamma <= min` for it paired with a neighbour.
pub fn check_weights(eps: f64, h: f64, p: usize, h2: f64, p2: usize) -> Check {
    let (alpha, beta) = element_weights(eps, h, p);
    let expected_alpha = (h * h / (eps * (p * p) as f64)).min(1.0);
    if (alpha - expected_alpha).abs() > 1e-14 * expected_alpha {
        return Err(format!("alpha {alpha} != {expected_alpha}"));
    }
    let r = (alpha / eps).sqrt();
    if beta < 2.0 * r * (1.0 - 1e-14) || beta > 3.0 * r * (1.0 + 1e-14) {
        return Err(format!("beta {beta} outside [{}, {}]", 2.0 * r, 3.0 * r));
    }
    let (_, beta2) = element_weights(eps, h2, p2);
    let gamma = node_weight(beta, beta2);
    let m = beta.min(beta2);
    if gamma < 0.5 * m * (1.0 - 1e-14) || gamma > m * (1.0 + 1e-14) {
        return Err(format!("gamma {gamma} outside [{}, {m}]", 0.5 * m));
    }
    Ok(())
}

/// The marked set is the shortest prefix of the descending order (ties by
/// index) that reaches `vartheta` of the total.
pub fn check_dorfler(eta2: &[f64], vartheta: f64) -> Check {
    let marked = dorfler_mark(eta2, vartheta);
    let total: f64 = eta2.iter().sum();
    if total <= 0.0 {
        return if marked.is_empty() {
            Ok(())
        } else {
            Err("marked elements with zero total".into())
        };
    }
    let mut order: Vec<usize> = (0..eta2.len()).collect();
    order.sort_by(|&a, &b| eta2[b].partial_cmp(&eta2[a]).unwrap().then(a.cmp(&b)));
    let mut sum = 0.0;
    let mut m = 0;
    while sum < vartheta * total {
        sum += eta2[order[m]];
        m += 1;
    }
    let mut expected: Vec<usize> = order[..m].to_vec();
    expected.sort_unstable();
    if marked != expected {
        return Err(format!("marked {marked:?}, expected {expected:?}"));
    }
    let without_last: f64 = order[..m - 1].iter().map(|&j| eta2[j]).sum();
    if without_last >= vartheta * total {
        return Err("marked set is not minimal".into());
    }
    Ok(())
}

/// Smoothness indicator of the single-element function with the given
/// local coefficients lies in `[SMOOTHNESS_LOWER_BOUND, 1]` up to 1e-12.
pub fn check_smoothness(h: f64, lift: (f64, f64), bubbles: &[f64]) -> Check {
    let p = bubbles.len() + 1;
    let mesh = Arc::new(HpMesh::new(vec![0.0, h], vec![p]).map_err(|e| e.to_string())?);
    let u = FemFunction::from_coeffs(mesh, bubbles.to_vec())
        .map_err(|e| e.to_string())?
        .with_lift(lift.0, lift.1);
    let f = smoothness_indicator(&u, 0);
    if f < SMOOTHNESS_LOWER_BOUND - 1e-12 || f > 1.0 + 1e-12 {
        return Err(format!("indicator {f} for p = {p}"));
    }
    Ok(())
}

/// A random single refinement reproduces the function at 50 points to
/// `1e-12 (1 + max |c|)`.
pub fn check_transfer(
    nodes: Vec<f64>,
    degrees: Vec<usize>,
    coeffs_seed: &[f64],
    element: usize,
    bisect: bool,
) -> Check {
    let mesh = HpMesh::new(nodes, degrees).map_err(|e| e.to_string())?;
    let mesh = Arc::new(mesh);
    let n = mesh.n_dof();
    let coeffs: Vec<f64> = (0..n).map(|i| coeffs_seed[i % coeffs_seed.len()] * (1.0 + i as f64).sqrt()).collect();
    let cmax = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let u = FemFunction::from_coeffs(mesh.clone(), coeffs)
        .map_err(|e| e.to_string())?
        .with_lift(coeffs_seed[0], -coeffs_seed[0]);
    let j = element % mesh.num_elements();
    let action = if bisect { RefineAction::Bisect } else { RefineAction::Enrich };
    let plan = RefinementPlan::from_actions([(j, action)]).map_err(|e| e.to_string())?;
    let fine = Arc::new(apply_refinement(&mesh, &plan).map_err(|e| e.to_string())?);
    let v = transfer(&u, &mesh, &fine).map_err(|e| e.to_string())?;
    for i in 0..50 {
        let x = mesh.a() + (mesh.b() - mesh.a()) * (i as f64 + 0.5) / 50.0;
        let d = (u.value(x).unwrap() - v.value(x).unwrap()).abs();
        if d > 1e-12 * (1.0 + cmax) {
            return Err(format!("transfer error {d:e} at x = {x}"));
        }
    }
    Ok(())
}

/// `n`-point Gauss rule integrates `x^k` exactly for `k <= 2n - 1` and
/// misses some even `x^{2n}`.
pub fn check_quadrature(n: usize) -> Check {
    let rule = gauss_rule(n);
    let exact = |k: usize| if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
    for k in 0..2 * n {
        let q = rule.integrate(|x| x.powi(k as i32));
        if (q - exact(k)).abs() > 1e-13 {
            return Err(format!("n = {n}, k = {k}: {q} vs {}", exact(k)));
        }
    }
    let q = rule.integrate(|x| x.powi(2 * n as i32));
    if (q - exact(2 * n)).abs() <= 1e-13 {
        return Err(format!("n = {n} integrates x^{} exactly", 2 * n));
    }
    Ok(())
}

/// For affine `f = g(x) - c u` and a full step, the linearization indicator
/// vanishes.
pub fn check_affine_delta(nodes: Vec<f64>, degrees: Vec<usize>, coeffs_seed: &[f64], c: f64) -> Check {
    let mesh = Arc::new(HpMesh::new(nodes, degrees).map_err(|e| e.to_string())?);
    let p = SemilinearProblem::new(0.01, 0.0, 1.0, move |x, u| (3.0 * x).sin() - c * u, move |_, _| -c)
        .map_err(|e| e.to_string())?;
    let coeffs: Vec<f64> = (0..mesh.n_dof()).map(|i| coeffs_seed[i % coeffs_seed.len()]).collect();
    let u_n = FemFunction::from_coeffs(mesh.clone(), coeffs).map_err(|e| e.to_string())?;
    let u_np1 = newton_step(&p, &mesh, &u_n, 1.0).map_err(|e| e.to_string())?;
    let delta = linearization_indicator(&p, &mesh, &u_n, &u_np1, 1.0).map_err(|e| e.to_string())?;
    if delta > 1e-12 {
        return Err(format!("delta = {delta:e}"));
    }
    Ok(())
}

/// Step sizes lie in (0, 1] and equal 1 exactly when the unclamped formula
/// reaches 1.
pub fn check_step_clamp(tau: f64, nrm: f64, h: f64, diff: f64) -> Check {
    let s0 = initial_step(tau, nrm);
    let raw0 = if nrm > 0.0 { (2.0 * tau / nrm).sqrt() } else { f64::INFINITY };
    let s1 = step_from_difference(tau, h, diff);
    let raw1 = if diff > 1e-14 { (2.0 * tau * h / diff).sqrt() } else { f64::INFINITY };
    for (s, raw) in [(s0, raw0), (s1, raw1)] {
        if !(s > 0.0 && s <= 1.0) {
            return Err(format!("step {s} outside (0, 1]"));
        }
        if raw >= 1.0 && s != 1.0 {
            return Err(format!("unclamped {raw} >= 1 but step {s}"));
        }
        if raw < 1.0 && s != raw {
            return Err(format!("step {s} differs from formula {raw}"));
        }
    }
    Ok(())
}

/// Sorted random nodes on (0, 1) with the given interior points.
pub fn mesh_nodes(interior: &[f64]) -> Vec<f64> {
    let mut nodes = vec![0.0];
    let mut inner: Vec<f64> = interior.iter().map(|x| x.clamp(0.01, 0.99)).collect();
    inner.sort_by(f64::total_cmp);
    inner.dedup_by(|a, b| (*a - *b).abs() < 1e-3);
    nodes.extend(inner);
    nodes.push(1.0);
    nodes
}

/// Roots of `theta = sqrt(2e) cosh(theta/4)` by bisection on `[lo, hi]`.
pub fn bratu_theta(lo: f64, hi: f64) -> f64 {
    let g = |t: f64| t - (2.0 * std::f64::consts::E).sqrt() * (t / 4.0).cosh();
    let (mut a, mut b) = (lo, hi);
    assert!(g(a) * g(b) < 0.0, "no sign change on [{lo}, {hi}]");
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if g(a) * g(m) <= 0.0 {
            b = m;
        } else {
            a = m;
        }
    }
    0.5 * (a + b)
}

/// Closed-form solution of `-u'' = exp(u + 1)`, `u(0) = u(1) = 0`.
pub fn bratu_exact(theta: f64, x: f64) -> f64 {
    -2.0 * (((x - 0.5) * theta / 2.0).cosh() / (theta / 4.0).cosh()).ln()
}

fn residual_norm(p: &SemilinearProblem, u: &FemFunction) -> f64 {
    residual_vector(p, u).iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Damped Newton on a fixed mesh with backtracking on the Euclidean norm of
/// the residual vector, until that norm drops below `tol`.
pub fn damped_newton(p: &SemilinearProblem, mut u: FemFunction, tol: f64, max_iter: usize) -> Option<FemFunction> {
    for _ in 0..max_iter {
        let r0 = residual_norm(p, &u);
        if r0 <= tol {
            return Some(u);
        }
        let d = newton_transform(p, u.mesh(), &u).ok()?;
        let mut lam = 1.0;
        loop {
            let v = u.linear_combination(1.0, &d, lam).ok()?;
            if residual_norm(p, &v) < (1.0 - 1e-4 * lam) * r0 || lam < 1e-8 {
                u = v;
                break;
            }
            lam *= 0.5;
        }
    }
    (residual_norm(p, &u) <= tol).then_some(u)
}

/// Reference Ginzburg-Landau solutions on a uniform mesh of 2000 quadratic
/// elements, continued in `eps` from 1e-2 down to `eps_min` in steps of
/// `10^{-1/2}` from the interpolated shock guess. Returns `(eps, u)` for
/// every integer power of ten reached.
pub fn ginzburg_landau_references(shock: &FemFunction, eps_min: f64) -> Vec<(f64, FemFunction)> {
    let mesh = Arc::new(uniform_mesh(0.0, 1.0, 2000, 2).unwrap());
    let mut u = FemFunction::interpolate_linear(mesh, |x| shock.value(x).unwrap());
    let mut out = Vec::new();
    let mut k = 0;
    loop {
        let eps = 10f64.powf(-2.0 - 0.5 * k as f64);
        if eps < eps_min * (1.0 - 1e-9) {
            break;
        }
        let p = hpnewton::problem::Builtin::GinzburgLandau.problem(eps).unwrap();
        u = damped_newton(&p, u, 1e-12, 300).expect("reference solve converges");
        if k % 2 == 0 {
            out.push((eps, u.clone()));
        }
        k += 1;
    }
    out
}

/// Least-squares line through `(x, y)`: `(slope, r_squared)`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let syy: f64 = y.iter().map(|b| (b - my) * (b - my)).sum();
    let slope = sxy / sxx;
    let r2 = if syy > 0.0 { sxy * sxy / (sxx * syy) } else { 1.0 };
    (slope, r2)
}

/// Uniform 10-element piecewise linear shock: `-1` left of 1/2, `+1` right
/// of it, zero at both ends and the midpoint.
pub fn shock_guess() -> FemFunction {
    let mesh = Arc::new(uniform_mesh(0.0, 1.0, 10, 1).unwrap());
    let nodes = [0.0, -1.0, -1.0, -1.0, -1.0, 0.0, 1.0, 1.0, 1.0, 1.0, 0.0];
    FemFunction::piecewise_linear(mesh, &nodes).unwrap()
}
