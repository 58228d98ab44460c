//! Residual-based a posteriori estimates for a damped Newton-Galerkin step.
//!
//! For a step `u_n -> u_{n+1}` with step size `dt` the shifted iterate
//! `s = u_{n+1} - (1 - dt) u_n` satisfies `-eps s'' = f_dt` in the Galerkin
//! sense, where `f_dt = dt f(u_n) + f'(u_n)(u_{n+1} - u_n)`. The element
//! indicators measure the residual of that linear equation with weights that
//! stay bounded as `eps -> 0`; the linearization indicator measures how far
//! `f_dt` is from `f(s)`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linearized::{assemble_with, solve_coeffs, PointTerms};
use crate::mesh::{transfer, FemFunction, HpMesh};
use crate::polybasis::quadrature::element_rule_order;
use crate::polybasis::shape::{ShapeCache, ShapeTable};
use crate::problem::SemilinearProblem;

/// Element weights `alpha_j`, `beta_j` and node weights `gamma_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimatorWeights {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    /// One entry per mesh node; both boundary entries are zero.
    pub gamma: Vec<f64>,
}

/// `(alpha, beta)` for one element of length `h` and degree `p`.
pub fn element_weights(epsilon: f64, h: f64, p: usize) -> (f64, f64) {
    let p = p as f64;
    let alpha = (h * h / (epsilon * p * p)).min(1.0);
    let beta = alpha / h + 2.0 * (alpha / epsilon).sqrt();
    (alpha, beta)
}

/// Harmonic-type combination `b0 b1 / (b0 + b1)` of neighbouring weights.
pub fn node_weight(beta_left: f64, beta_right: f64) -> f64 {
    beta_left * beta_right / (beta_left + beta_right)
}

pub fn weights(mesh: &HpMesh, epsilon: f64) -> EstimatorWeights {
    let n = mesh.num_elements();
    let (alpha, beta): (Vec<f64>, Vec<f64>) = (0..n)
        .map(|j| element_weights(epsilon, mesh.h(j), mesh.degree(j)))
        .unzip();
    let mut gamma = vec![0.0; n + 1];
    for i in 1..n {
        gamma[i] = node_weight(beta[i - 1], beta[i]);
    }
    EstimatorWeights { alpha, beta, gamma }
}

/// `u_np1 - (1 - dt) u_n` in the homogeneous coefficients, keeping the
/// common boundary lift.
pub fn shifted_iterate(u_n: &FemFunction, u_np1: &FemFunction, dt: f64) -> Result<FemFunction> {
    if !u_n.same_mesh(u_np1) {
        return Err(Error::MeshMismatch("iterates live on different meshes".into()));
    }
    if u_n.lift() != u_np1.lift() {
        return Err(Error::invalid("iterates carry different boundary values"));
    }
    let (l, r) = u_np1.lift();
    Ok(u_np1
        .homogeneous()
        .linear_combination(1.0, &u_n.homogeneous(), -(1.0 - dt))?
        .with_lift(l, r))
}

/// Indicators of one step together with the weights that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimatorReport {
    pub eta: Vec<f64>,
    pub delta: f64,
    pub total: f64,
    pub weights: EstimatorWeights,
}

impl EstimatorReport {
    pub fn eta2(&self) -> Vec<f64> {
        self.eta.iter().map(|e| e * e).collect()
    }

    pub fn sum_eta2(&self) -> f64 {
        self.eta.iter().map(|e| e * e).sum()
    }

    pub fn delta2(&self) -> f64 {
        self.delta * self.delta
    }
}

/// `(delta^2 + sum eta_j^2)^(1/2)`.
pub fn total_estimate(delta: f64, eta: &[f64]) -> f64 {
    let s: f64 = eta.iter().map(|e| e * e).sum();
    (delta * delta + s).sqrt()
}

/// Per-element integrals of the step: interior residual and linearization
/// defect, both squared.
struct ElementIntegrals {
    residual2: Vec<f64>,
    defect2: Vec<f64>,
}

/// Value, first and second physical derivative of the homogeneous part at
/// quadrature point `q`.
fn eval_at(table: &ShapeTable, local: &[f64], q: usize, h: f64) -> (f64, f64, f64) {
    let s = 2.0 / h;
    let mut v = 0.0;
    let mut d1 = 0.0;
    let mut d2 = 0.0;
    for (k, c) in local.iter().enumerate() {
        v += c * table.values[q][k];
        d1 += c * table.d1[q][k];
        d2 += c * table.d2[q][k];
    }
    (v, s * d1, s * s * d2)
}

fn check_step(mesh: &HpMesh, u_n: &FemFunction, u_np1: &FemFunction, dt: f64) -> Result<()> {
    u_n.check_mesh(mesh)?;
    u_np1.check_mesh(mesh)?;
    if !(dt > 0.0 && dt <= 1.0) {
        return Err(Error::invalid(format!("step size must lie in (0, 1], got {dt}")));
    }
    Ok(())
}

fn element_integrals(
    problem: &SemilinearProblem,
    mesh: &HpMesh,
    u_n: &FemFunction,
    u_np1: &FemFunction,
    dt: f64,
) -> ElementIntegrals {
    let eps = problem.epsilon();
    let n = mesh.num_elements();
    let mut cache = ShapeCache::new();
    let (mut cn, mut cp) = (Vec::new(), Vec::new());
    let mut residual2 = vec![0.0; n];
    let mut defect2 = vec![0.0; n];
    for j in 0..n {
        let p = mesh.degree(j);
        let (xl, xr) = mesh.element(j);
        let h = xr - xl;
        let table = cache.get(p, element_rule_order);
        u_n.local_coeffs_into(j, &mut cn);
        u_np1.local_coeffs_into(j, &mut cp);
        let (ll, lr) = (u_n.lift_value(xl), u_n.lift_value(xr));
        let (mut r2, mut d2) = (0.0, 0.0);
        for q in 0..table.len() {
            let t = table.points[q];
            let lift = 0.5 * (1.0 - t) * ll + 0.5 * (1.0 + t) * lr;
            let x = 0.5 * (xl + xr) + 0.5 * h * t;
            let (wn, _, wn2) = eval_at(table, &cn, q, h);
            let (wp, _, wp2) = eval_at(table, &cp, q, h);
            let un = wn + lift;
            let f_dt = dt * problem.f(x, un) + problem.df(x, un) * (wp - wn);
            let s = wp - (1.0 - dt) * wn + lift;
            let s2 = wp2 - (1.0 - dt) * wn2;
            let w = table.weights[q] * 0.5 * h;
            let res = f_dt + eps * s2;
            let def = f_dt - problem.f(x, s);
            r2 += w * res * res;
            d2 += w * def * def;
        }
        residual2[j] = r2;
        defect2[j] = d2;
    }
    ElementIntegrals { residual2, defect2 }
}

/// Jumps `v'(x_i+) - v'(x_i-)` at all nodes; zero at the boundary.
pub fn derivative_jumps(v: &FemFunction) -> Vec<f64> {
    let mesh = v.mesh();
    let n = mesh.num_elements();
    let mut jumps = vec![0.0; n + 1];
    for i in 1..n {
        let left = v.eval_local(i - 1, 1.0).1;
        let right = v.eval_local(i, -1.0).1;
        jumps[i] = right - left;
    }
    jumps
}

fn assemble_eta(
    eps: f64,
    w: &EstimatorWeights,
    residual2: &[f64],
    jumps: &[f64],
) -> Vec<f64> {
    residual2
        .iter()
        .enumerate()
        .map(|(j, r2)| {
            let jl = jumps[j];
            let jr = jumps[j + 1];
            let e2 = w.alpha[j] * r2
                + 0.5 * eps * eps * w.gamma[j + 1] * jr * jr
                + 0.5 * eps * eps * w.gamma[j] * jl * jl;
            e2.sqrt()
        })
        .collect()
}

/// Element indicators `eta_j` of the step `u_n -> u_np1`.
pub fn element_indicators(
    problem: &SemilinearProblem,
    mesh: &HpMesh,
    u_n: &FemFunction,
    u_np1: &FemFunction,
    dt: f64,
    w: &EstimatorWeights,
) -> Result<Vec<f64>> {
    check_step(mesh, u_n, u_np1, dt)?;
    let ints = element_integrals(problem, mesh, u_n, u_np1, dt);
    let s = shifted_iterate(u_n, u_np1, dt)?;
    Ok(assemble_eta(problem.epsilon(), w, &ints.residual2, &derivative_jumps(&s)))
}

/// Linearization indicator `||f_dt - f(s)||_{L2}`.
pub fn linearization_indicator(
    problem: &SemilinearProblem,
    mesh: &HpMesh,
    u_n: &FemFunction,
    u_np1: &FemFunction,
    dt: f64,
) -> Result<f64> {
    check_step(mesh, u_n, u_np1, dt)?;
    let ints = element_integrals(problem, mesh, u_n, u_np1, dt);
    Ok(ints.defect2.iter().sum::<f64>().sqrt())
}

/// All indicators of one step in a single pass.
pub fn estimate(
    problem: &SemilinearProblem,
    mesh: &HpMesh,
    u_n: &FemFunction,
    u_np1: &FemFunction,
    dt: f64,
) -> Result<EstimatorReport> {
    check_step(mesh, u_n, u_np1, dt)?;
    let w = weights(mesh, problem.epsilon());
    let ints = element_integrals(problem, mesh, u_n, u_np1, dt);
    let s = shifted_iterate(u_n, u_np1, dt)?;
    let eta = assemble_eta(problem.epsilon(), &w, &ints.residual2, &derivative_jumps(&s));
    let delta = ints.defect2.iter().sum::<f64>().sqrt();
    Ok(EstimatorReport {
        total: total_estimate(delta, &eta),
        eta,
        delta,
        weights: w,
    })
}

/// Dual norm of the residual `v -> int eps u' v' - f(u) v`, approximated on
/// the finer space of `mesh_fine` via its Riesz representative in the energy
/// inner product.
///
/// `mesh_fine` must be nested in `u`'s mesh (see [`transfer`]).
pub fn dual_residual_oracle(
    problem: &SemilinearProblem,
    mesh_fine: &Arc<HpMesh>,
    u: &FemFunction,
) -> Result<f64> {
    let v = transfer(u, u.mesh(), mesh_fine)?;
    let eps = problem.epsilon();
    let sys = assemble_with(&v, eps, |pt| PointTerms {
        reaction: 1.0,
        load: -problem.f(pt.x, pt.u),
        flux: eps * pt.du,
    });
    let r = solve_coeffs(&sys)?;
    let s: f64 = r.iter().zip(sys.rhs()).map(|(a, b)| a * b).sum();
    Ok(s.max(0.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linearized::newton_step;
    use crate::mesh::uniform_mesh;
    use crate::polybasis::quadrature::cached_rule;
    use crate::problem::{builtin, Builtin};

    fn reaction_problem(eps: f64) -> SemilinearProblem {
        SemilinearProblem::new(eps, 0.0, 1.0, |_, u| 1.0 - u, |_, _| -1.0).unwrap()
    }

    #[test]
    fn weight_examples() {
        let (a, _) = element_weights(1.0, 1.0, 1);
        assert_eq!(a, 1.0);
        let (a, b) = element_weights(0.01, 0.01, 1);
        assert!((a - 0.01).abs() < 1e-15);
        assert!((b - 3.0).abs() < 1e-12);
        assert_eq!(node_weight(2.5, 2.5), 1.25);
    }

    #[test]
    fn gamma_vanishes_at_boundary() {
        let m = HpMesh::new(vec![0.0, 0.1, 0.5, 1.0], vec![1, 3, 2]).unwrap();
        let w = weights(&m, 1e-3);
        assert_eq!(w.gamma.len(), 4);
        assert_eq!(w.gamma[0], 0.0);
        assert_eq!(w.gamma[3], 0.0);
        assert!(w.gamma[1] > 0.0 && w.gamma[2] > 0.0);
    }

    #[test]
    fn shifted_iterate_examples() {
        let mesh = Arc::new(uniform_mesh(0.0, 1.0, 3, 2).unwrap());
        let a: Vec<f64> = (0..mesh.n_dof()).map(|i| i as f64 + 1.0).collect();
        let b: Vec<f64> = (0..mesh.n_dof()).map(|i| 0.5 - i as f64).collect();
        let un = FemFunction::from_coeffs(mesh.clone(), a).unwrap().with_lift(1.0, 2.0);
        let up = FemFunction::from_coeffs(mesh.clone(), b).unwrap().with_lift(1.0, 2.0);
        assert_eq!(shifted_iterate(&un, &up, 1.0).unwrap(), up);
        let s = shifted_iterate(&un, &un, 0.25).unwrap();
        for (c, d) in s.coeffs().iter().zip(un.coeffs()) {
            assert!((c - 0.25 * d).abs() < 1e-15);
        }
        assert_eq!(s.lift(), (1.0, 2.0));
        let zero_step = shifted_iterate(&un, &un, 0.0).unwrap();
        assert!(zero_step.coeffs().iter().all(|&c| c == 0.0));
        assert!(shifted_iterate(&un, &up.clone().with_lift(0.0, 0.0), 0.5).is_err());
    }

    #[test]
    fn total_examples() {
        assert_eq!(total_estimate(0.0, &[3.0, 4.0]), 5.0);
        assert_eq!(total_estimate(0.0, &[0.0, 0.0]), 0.0);
        assert_eq!(total_estimate(1.0, &[1.0, 1.0, 1.0]), 2.0);
    }

    #[test]
    fn linear_function_without_source_has_zero_indicators() {
        let p = SemilinearProblem::new(0.1, 0.0, 1.0, |_, _| 0.0, |_, _| 0.0)
            .unwrap()
            .with_boundary_values(1.0, 3.0);
        let mesh = Arc::new(uniform_mesh(0.0, 1.0, 4, 3).unwrap());
        let u = FemFunction::zeros(mesh.clone()).with_lift(1.0, 3.0);
        let r = estimate(&p, &mesh, &u, &u, 1.0).unwrap();
        assert!(r.eta.iter().all(|&e| e.abs() < 1e-14), "{:?}", r.eta);
        assert!(r.delta < 1e-14);
    }

    #[test]
    fn single_jump() {
        let p = SemilinearProblem::new(1.0, 0.0, 1.0, |_, _| 0.0, |_, _| 0.0).unwrap();
        let mesh = Arc::new(uniform_mesh(0.0, 1.0, 2, 1).unwrap());
        let u0 = FemFunction::zeros(mesh.clone());
        let u1 = FemFunction::from_coeffs(mesh.clone(), vec![0.25]).unwrap();
        assert!((derivative_jumps(&u1)[1] + 1.0).abs() < 1e-15);
        let w = EstimatorWeights {
            alpha: vec![0.3, 0.7],
            beta: vec![4.0, 4.0],
            gamma: vec![0.0, 2.0, 0.0],
        };
        let eta = element_indicators(&p, &mesh, &u0, &u1, 1.0, &w).unwrap();
        for e in eta {
            assert!((e * e - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn smooth_function_has_no_jumps() {
        let mesh = Arc::new(uniform_mesh(0.0, 1.0, 5, 4).unwrap());
        // a cubic is represented exactly on degree-4 elements
        let target = |x: f64| x * (1.0 - x) * (x + 0.5);
        let fine = Arc::new(uniform_mesh(0.0, 1.0, 1, 4).unwrap());
        let single = {
            let e = crate::polybasis::expansion::legendre_to_basis(
                &cubic_legendre(target),
                4,
            );
            FemFunction::from_coeffs(fine.clone(), e[2..].to_vec()).unwrap()
        };
        let u = transfer(&single, &fine, &mesh).unwrap();
        for x in [0.1, 0.33, 0.9] {
            assert!((u.value(x).unwrap() - target(x)).abs() < 1e-13);
        }
        for jmp in derivative_jumps(&u) {
            assert!(jmp.abs() < 1e-12);
        }
    }

    /// Legendre coefficients on (0, 1) of a cubic, by Gauss projection.
    fn cubic_legendre(g: impl Fn(f64) -> f64) -> Vec<f64> {
        let rule = cached_rule(4);
        let mut c = vec![0.0; 4];
        let mut pv = vec![0.0; 4];
        for (t, w) in rule.iter() {
            crate::polybasis::legendre::legendre_values(t, &mut pv);
            let y = g(0.5 * (1.0 + t));
            for k in 0..4 {
                c[k] += w * y * pv[k] * (2.0 * k as f64 + 1.0) / 2.0;
            }
        }
        c
    }

    #[test]
    fn affine_source_has_no_linearization_defect() {
        let p = reaction_problem(1e-3).with_boundary_values(0.5, -1.0);
        let mesh = Arc::new(HpMesh::new(vec![0.0, 0.3, 0.45, 1.0], vec![2, 5, 3]).unwrap());
        let n = mesh.n_dof();
        let un = FemFunction::from_coeffs(mesh.clone(), (0..n).map(|i| (i as f64).sin()).collect())
            .unwrap()
            .with_lift(0.5, -1.0);
        let up = FemFunction::from_coeffs(mesh.clone(), (0..n).map(|i| (i as f64).cos()).collect())
            .unwrap()
            .with_lift(0.5, -1.0);
        let d = linearization_indicator(&p, &mesh, &un, &up, 1.0).unwrap();
        assert!(d <= 1e-12, "{d}");
    }

    #[test]
    fn fixed_point_has_no_linearization_defect() {
        let p = builtin(Builtin::GinzburgLandau, 0.01).unwrap();
        let mesh = Arc::new(uniform_mesh(0.0, 1.0, 4, 3).unwrap());
        let u = FemFunction::from_coeffs(mesh.clone(), (0..mesh.n_dof()).map(|i| 0.1 * i as f64).collect())
            .unwrap();
        assert_eq!(linearization_indicator(&p, &mesh, &u, &u, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn bratu_defect_matches_refined_quadrature() {
        let p = builtin(Builtin::Bratu, 1.0).unwrap();
        let mesh = Arc::new(uniform_mesh(0.0, 1.0, 10, 1).unwrap());
        let u0 = FemFunction::zeros(mesh.clone());
        let u1 = newton_step(&p, &mesh, &u0, 1.0).unwrap();
        let delta = linearization_indicator(&p, &mesh, &u0, &u1, 1.0).unwrap();
        let mut oracle = 0.0;
        for j in 0..mesh.num_elements() {
            let (xl, xr) = mesh.element(j);
            let rule = cached_rule(3 * element_rule_order(1));
            oracle += rule.integrate_on(xl, xr, |x| {
                let w = u1.value(x).unwrap();
                let d = std::f64::consts::E + std::f64::consts::E * w - (w + 1.0).exp();
                d * d
            });
        }
        let oracle = oracle.sqrt();
        assert!(delta > 0.0);
        assert!((delta - oracle).abs() <= 1e-8 * oracle, "{delta} vs {oracle}");
    }

    #[test]
    fn oracle_vanishes_at_discrete_root() {
        let p = reaction_problem(0.01);
        let mesh = Arc::new(uniform_mesh(0.0, 1.0, 6, 2).unwrap());
        let u = newton_step(&p, &mesh, &FemFunction::zeros(mesh.clone()), 1.0).unwrap();
        assert!(dual_residual_oracle(&p, &mesh, &u).unwrap() < 1e-9);
    }

    #[test]
    fn oracle_matches_energy_error_for_linear_problem() {
        let eps: f64 = 1.0;
        let p = reaction_problem(eps);
        let k = 1.0 / eps.sqrt();
        let exact = move |x: f64| 1.0 - (k * (x - 0.5)).cosh() / (0.5 * k).cosh();
        let dexact = move |x: f64| -k * (k * (x - 0.5)).sinh() / (0.5 * k).cosh();
        let mesh = Arc::new(uniform_mesh(0.0, 1.0, 4, 1).unwrap());
        let u = newton_step(&p, &mesh, &FemFunction::zeros(mesh.clone()), 1.0).unwrap();
        let mut err2 = 0.0;
        let rule = cached_rule(30);
        for j in 0..mesh.num_elements() {
            let (xl, xr) = mesh.element(j);
            err2 += rule.integrate_on(xl, xr, |x| {
                let e = u.value(x).unwrap() - exact(x);
                let de = u.derivative_on(j, x) - dexact(x);
                eps * de * de + e * e
            });
        }
        let fine_nodes: Vec<f64> = (0..=16).map(|i| i as f64 / 16.0).collect();
        let fine = Arc::new(HpMesh::new(fine_nodes, vec![3; 16]).unwrap());
        let o = dual_residual_oracle(&p, &fine, &u).unwrap();
        let e = err2.sqrt();
        assert!(o <= e * (1.0 + 1e-9) && o > 0.5 * e, "{o} vs {e}");
    }
}
