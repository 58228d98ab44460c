//! Galerkin discretization of the Newton-linearized problem.
//!
//! For a linearization point `u` the discrete operator is
//! `A[i][k] = int eps phi_k' phi_i' - df(x, u) phi_k phi_i dx`, assembled over
//! the hp-space of the mesh and solved with a banded direct factorization.

pub mod banded;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::mesh::{DofMap, FemFunction, HpMesh};
use crate::polybasis::quadrature::element_rule_order;
use crate::polybasis::shape::ShapeCache;
use crate::problem::SemilinearProblem;

use banded::BandMatrix;

/// Pivots smaller than this multiple of `||A||_inf` count as zero.
pub const SINGULAR_PIVOT_RATIO: f64 = 1e-14;

/// An assembled linear system in band storage.
///
/// DOFs are permuted element by element (bubbles of element `j`, then the
/// node shared with element `j + 1`), which keeps the bandwidth at
/// `max_j p_j`. Entry and vector accessors use the mesh DOF numbering.
#[derive(Debug, Clone)]
pub struct BandedSystem {
    mesh: Arc<HpMesh>,
    /// `row[dof]` is the band row of a DOF.
    row: Vec<usize>,
    matrix: BandMatrix,
    rhs: Vec<f64>,
}

impl BandedSystem {
    fn new(mesh: Arc<HpMesh>) -> Self {
        let row = band_ordering(mesh.dofs());
        let n = mesh.n_dof();
        let bw = mesh.degrees().iter().copied().max().unwrap_or(1);
        BandedSystem {
            matrix: BandMatrix::zeros(n, bw, bw),
            rhs: vec![0.0; n],
            row,
            mesh,
        }
    }

    pub fn mesh(&self) -> &Arc<HpMesh> {
        &self.mesh
    }

    pub fn dim(&self) -> usize {
        self.rhs.len()
    }

    pub fn bandwidth(&self) -> usize {
        self.matrix.upper_bandwidth()
    }

    /// Matrix entry in DOF numbering.
    pub fn entry(&self, i: usize, k: usize) -> f64 {
        self.matrix.get(self.row[i], self.row[k])
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    /// Dense copy of the matrix in DOF numbering.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        (0..n)
            .map(|i| (0..n).map(|k| self.entry(i, k)).collect())
            .collect()
    }

    /// `A x` in DOF numbering.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let permuted = self.permute(x);
        let y = self.matrix.matvec(&permuted);
        self.unpermute(&y)
    }

    pub fn norm_inf(&self) -> f64 {
        self.matrix.norm_inf()
    }

    fn permute(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; x.len()];
        for (dof, &r) in self.row.iter().enumerate() {
            out[r] = x[dof];
        }
        out
    }

    fn unpermute(&self, y: &[f64]) -> Vec<f64> {
        self.row.iter().map(|&r| y[r]).collect()
    }

    fn add(&mut self, i: usize, k: usize, v: f64) {
        self.matrix.add(self.row[i], self.row[k], v);
    }
}

fn band_ordering(dofs: &DofMap) -> Vec<usize> {
    let mut row = vec![0usize; dofs.n_dof()];
    let mut next = 0;
    for j in 0..dofs.num_elements() {
        let e = dofs.element(j);
        for b in e.bubbles.clone() {
            row[b] = next;
            next += 1;
        }
        if let Some(r) = e.right {
            row[r] = next;
            next += 1;
        }
    }
    debug_assert_eq!(next, dofs.n_dof());
    row
}

/// Data of the linearization point at one quadrature point.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PointData {
    pub x: f64,
    /// Value and derivative of the full function (lift included).
    pub u: f64,
    pub du: f64,
    /// Value and derivative of the homogeneous part.
    pub w: f64,
    pub dw: f64,
}

/// Contribution of one quadrature point: `A += eps phi' phi' + reaction phi
/// phi`, `b += load phi + flux phi'`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PointTerms {
    pub reaction: f64,
    pub load: f64,
    pub flux: f64,
}

/// Assembles `int eps phi_k' phi_i' + c phi_k phi_i` and `int g0 phi_i + g1
/// phi_i'` over the space of `u.mesh()`, with `(c, g0, g1)` supplied per
/// quadrature point from the values of `u`.
pub(crate) fn assemble_with<F>(u: &FemFunction, epsilon: f64, mut terms: F) -> BandedSystem
where
    F: FnMut(&PointData) -> PointTerms,
{
    let mesh = Arc::clone(u.mesh_arc());
    let mut sys = BandedSystem::new(Arc::clone(&mesh));
    let mut cache = ShapeCache::new();
    let mut local = Vec::new();
    let slope = u.lift_slope();
    for j in 0..mesh.num_elements() {
        let p = mesh.degree(j);
        let (xl, xr) = mesh.element(j);
        let h = xr - xl;
        let jac = 0.5 * h;
        let scale = 2.0 / h;
        let (ll, lr) = (u.lift_value(xl), u.lift_value(xr));
        let gl = mesh.dofs().local_to_global(j);
        u.local_coeffs_into(j, &mut local);
        let table = cache.get(p, element_rule_order);

        let mut ke = vec![0.0; (p + 1) * (p + 1)];
        let mut be = vec![0.0; p + 1];
        for q in 0..table.len() {
            let t = table.points[q];
            let wq = table.weights[q] * jac;
            let v = &table.values[q];
            let d = &table.d1[q];
            let w: f64 = local.iter().zip(v).map(|(c, s)| c * s).sum();
            let dw: f64 = scale * local.iter().zip(d).map(|(c, s)| c * s).sum::<f64>();
            let lift = 0.5 * (1.0 - t) * ll + 0.5 * (1.0 + t) * lr;
            let pd = PointData {
                x: 0.5 * (xl + xr) + jac * t,
                u: w + lift,
                du: dw + slope,
                w,
                dw,
            };
            let PointTerms {
                reaction,
                load,
                flux,
            } = terms(&pd);
            let diff = epsilon * scale * scale;
            for a in 0..=p {
                for b in a..=p {
                    ke[a * (p + 1) + b] += wq * (diff * (d[a] * d[b]) + reaction * (v[a] * v[b]));
                }
                be[a] += wq * (load * v[a] + flux * scale * d[a]);
            }
        }
        for a in 0..=p {
            let Some(ia) = gl[a] else { continue };
            sys.rhs[ia] += be[a];
            for b in 0..=p {
                let Some(ib) = gl[b] else { continue };
                let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
                sys.add(ia, ib, ke[lo * (p + 1) + hi]);
            }
        }
    }
    sys
}

fn check_lift(problem: &SemilinearProblem, u: &FemFunction) -> Result<()> {
    if u.lift() != problem.boundary_values() {
        return Err(Error::invalid(format!(
            "boundary values of iterate {:?} differ from problem data {:?}",
            u.lift(),
            problem.boundary_values()
        )));
    }
    Ok(())
}

/// Assembles the damped Newton step from `u_n` with step size `dt`:
/// `a(u_n; u_{n+1}, v) = a(u_n; u_n, v) - dt l(u_n; v)` for all test `v`.
///
/// `u_n` must live on `mesh` and carry the problem's boundary values as its
/// lift (zero for a homogenized problem).
pub fn assemble(
    problem: &SemilinearProblem,
    mesh: &HpMesh,
    u_n: &FemFunction,
    dt: f64,
) -> Result<BandedSystem> {
    u_n.check_mesh(mesh)?;
    check_lift(problem, u_n)?;
    if !(dt > 0.0 && dt <= 1.0) {
        return Err(Error::invalid(format!("step size must lie in (0, 1], got {dt}")));
    }
    let eps = problem.epsilon();
    Ok(assemble_with(u_n, eps, |pt| {
        let f = problem.f(pt.x, pt.u);
        let df = problem.df(pt.x, pt.u);
        PointTerms {
            reaction: -df,
            // a(u_n; w, v) - dt (eps u' v' - f v)
            load: -df * pt.w + dt * f,
            flux: eps * pt.dw - dt * eps * pt.du,
        }
    }))
}

/// Solves the system; the result lives on the system's mesh with zero lift.
pub fn solve(system: &BandedSystem) -> Result<FemFunction> {
    let coeffs = solve_coeffs(system)?;
    FemFunction::from_coeffs(Arc::clone(&system.mesh), coeffs)
}

pub(crate) fn solve_coeffs(system: &BandedSystem) -> Result<Vec<f64>> {
    if system.dim() == 0 {
        return Ok(Vec::new());
    }
    let norm = system.norm_inf();
    if !norm.is_finite() || system.rhs.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite(format!(
            "matrix norm {norm:e} or load vector not finite"
        )));
    }
    let threshold = SINGULAR_PIVOT_RATIO * norm;
    let lu = system.matrix.clone().factorize(threshold)?;
    let x = lu.solve(&system.permute(&system.rhs));
    let x = system.unpermute(&x);
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::SingularSystem {
            row: 0,
            pivot: f64::NAN,
            threshold,
        });
    }
    Ok(x)
}

/// One damped Newton step: solves the assembled system and attaches the
/// lift of `u_n`.
pub fn newton_step(
    problem: &SemilinearProblem,
    mesh: &HpMesh,
    u_n: &FemFunction,
    dt: f64,
) -> Result<FemFunction> {
    let sys = assemble(problem, mesh, u_n, dt)?;
    let (l, r) = u_n.lift();
    Ok(solve(&sys)?.with_lift(l, r))
}

/// Discrete Newton transform `N_F(u) = -F'(u)^{-1} F(u)` on the space of
/// `mesh` (zero lift).
pub fn newton_transform(
    problem: &SemilinearProblem,
    mesh: &HpMesh,
    u: &FemFunction,
) -> Result<FemFunction> {
    u.check_mesh(mesh)?;
    check_lift(problem, u)?;
    let eps = problem.epsilon();
    let sys = assemble_with(u, eps, |pt| PointTerms {
        reaction: -problem.df(pt.x, pt.u),
        load: problem.f(pt.x, pt.u),
        flux: -eps * pt.du,
    });
    solve(&sys)
}

/// `(eps ||u'||^2 + ||u||^2)^(1/2)` over the domain, lift included.
pub fn energy_norm(mesh: &HpMesh, u: &FemFunction, epsilon: f64) -> f64 {
    debug_assert!(u.lives_on(mesh));
    let mut sum = 0.0;
    let mut cache = ShapeCache::new();
    let mut local = Vec::new();
    let slope = u.lift_slope();
    for j in 0..mesh.num_elements() {
        let p = mesh.degree(j);
        let (xl, xr) = mesh.element(j);
        let h = xr - xl;
        let (ll, lr) = (u.lift_value(xl), u.lift_value(xr));
        u.local_coeffs_into(j, &mut local);
        let table = cache.get(p, |p| p + 1);
        for q in 0..table.len() {
            let t = table.points[q];
            let v: f64 = local.iter().zip(&table.values[q]).map(|(c, s)| c * s).sum::<f64>()
                + 0.5 * (1.0 - t) * ll
                + 0.5 * (1.0 + t) * lr;
            let dv: f64 = 2.0 / h * local.iter().zip(&table.d1[q]).map(|(c, s)| c * s).sum::<f64>()
                + slope;
            sum += table.weights[q] * 0.5 * h * (epsilon * dv * dv + v * v);
        }
    }
    sum.sqrt()
}

/// Residual functional `<F(u), phi_i> = int eps u' phi_i' - f(u) phi_i`
/// tested against every basis function of `u.mesh()`.
pub fn residual_vector(problem: &SemilinearProblem, u: &FemFunction) -> Vec<f64> {
    let eps = problem.epsilon();
    let sys = assemble_with(u, eps, |pt| PointTerms {
        reaction: 0.0,
        load: -problem.f(pt.x, pt.u),
        flux: eps * pt.du,
    });
    sys.rhs
}
