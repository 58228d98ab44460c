use std::sync::Arc;

use super::HpMesh;
use crate::error::{Error, Result};
use crate::polybasis::shape::eval_shape_into;

/// A continuous piecewise polynomial on an [`HpMesh`].
///
/// The function is `w + l`, where `w` lies in the homogeneous space (its
/// coefficients follow the mesh's DOF numbering) and `l` is the affine lift
/// with `l(a) = lift.0`, `l(b) = lift.1`.
#[derive(Debug, Clone)]
pub struct FemFunction {
    mesh: Arc<HpMesh>,
    coeffs: Vec<f64>,
    lift: (f64, f64),
}

impl PartialEq for FemFunction {
    fn eq(&self, other: &Self) -> bool {
        self.same_mesh(other) && self.coeffs == other.coeffs && self.lift == other.lift
    }
}

impl FemFunction {
    pub fn zeros(mesh: Arc<HpMesh>) -> Self {
        let n = mesh.n_dof();
        FemFunction {
            mesh,
            coeffs: vec![0.0; n],
            lift: (0.0, 0.0),
        }
    }

    pub fn from_coeffs(mesh: Arc<HpMesh>, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != mesh.n_dof() {
            return Err(Error::MeshMismatch(format!(
                "{} coefficients for a space of dimension {}",
                coeffs.len(),
                mesh.n_dof()
            )));
        }
        Ok(FemFunction {
            mesh,
            coeffs,
            lift: (0.0, 0.0),
        })
    }

    /// Piecewise linear function with the given values at all mesh nodes
    /// (boundary values included). Only meaningful on meshes where the
    /// bubble coefficients are then zero.
    pub fn piecewise_linear(mesh: Arc<HpMesh>, node_values: &[f64]) -> Result<Self> {
        let nodes = mesh.nodes().to_vec();
        if node_values.len() != nodes.len() {
            return Err(Error::invalid(format!(
                "{} node values for a mesh with {} nodes",
                node_values.len(),
                nodes.len()
            )));
        }
        let left = node_values[0];
        let right = node_values[nodes.len() - 1];
        let mut u = FemFunction::zeros(mesh).with_lift(left, right);
        for i in 1..nodes.len() - 1 {
            u.coeffs[i - 1] = node_values[i] - u.lift_value(nodes[i]);
        }
        Ok(u)
    }

    /// Nodal piecewise linear interpolant of `f`.
    pub fn interpolate_linear(mesh: Arc<HpMesh>, f: impl Fn(f64) -> f64) -> Self {
        let values: Vec<f64> = mesh.nodes().iter().map(|&x| f(x)).collect();
        Self::piecewise_linear(mesh, &values).expect("value count matches node count")
    }

    pub fn with_lift(mut self, left: f64, right: f64) -> Self {
        self.lift = (left, right);
        self
    }

    pub fn mesh(&self) -> &HpMesh {
        &self.mesh
    }

    pub fn mesh_arc(&self) -> &Arc<HpMesh> {
        &self.mesh
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    pub fn lift(&self) -> (f64, f64) {
        self.lift
    }

    pub fn has_lift(&self) -> bool {
        self.lift != (0.0, 0.0)
    }

    /// The homogeneous part (lift dropped).
    pub fn homogeneous(&self) -> FemFunction {
        FemFunction {
            mesh: Arc::clone(&self.mesh),
            coeffs: self.coeffs.clone(),
            lift: (0.0, 0.0),
        }
    }

    pub fn same_mesh(&self, other: &FemFunction) -> bool {
        Arc::ptr_eq(&self.mesh, &other.mesh) || *self.mesh == *other.mesh
    }

    pub fn lives_on(&self, mesh: &HpMesh) -> bool {
        std::ptr::eq(&*self.mesh, mesh) || *self.mesh == *mesh
    }

    pub(crate) fn check_mesh(&self, mesh: &HpMesh) -> Result<()> {
        if self.lives_on(mesh) {
            Ok(())
        } else {
            Err(Error::MeshMismatch(
                "function is defined on a different mesh".into(),
            ))
        }
    }

    pub fn lift_slope(&self) -> f64 {
        (self.lift.1 - self.lift.0) / (self.mesh.b() - self.mesh.a())
    }

    pub fn lift_value(&self, x: f64) -> f64 {
        self.lift.0 + self.lift_slope() * (x - self.mesh.a())
    }

    /// Local basis coefficients `[N0, N1, phi_2, ..., phi_p]` of the
    /// homogeneous part on element `j`.
    pub fn local_coeffs(&self, j: usize) -> Vec<f64> {
        let mut out = Vec::new();
        self.local_coeffs_into(j, &mut out);
        out
    }

    pub fn local_coeffs_into(&self, j: usize, out: &mut Vec<f64>) {
        let e = self.mesh.dofs().element(j);
        out.clear();
        out.push(e.left.map_or(0.0, |i| self.coeffs[i]));
        out.push(e.right.map_or(0.0, |i| self.coeffs[i]));
        out.extend(e.bubbles.clone().map(|i| self.coeffs[i]));
    }

    /// Value and physical derivative at reference coordinate `t` of element
    /// `j`, lift included.
    pub fn eval_local(&self, j: usize, t: f64) -> (f64, f64) {
        let p = self.mesh.degree(j);
        let mut val = vec![0.0; p + 1];
        let mut d1 = vec![0.0; p + 1];
        let mut d2 = vec![0.0; p + 1];
        eval_shape_into(p, t, &mut val, &mut d1, &mut d2);
        let c = self.local_coeffs(j);
        let u: f64 = c.iter().zip(&val).map(|(a, b)| a * b).sum();
        let du: f64 = c.iter().zip(&d1).map(|(a, b)| a * b).sum();
        let (xl, xr) = self.mesh.element(j);
        // hat-weighted so that element endpoints reproduce nodal lift values
        let lift = 0.5 * (1.0 - t) * self.lift_value(xl) + 0.5 * (1.0 + t) * self.lift_value(xr);
        let scale = 2.0 / self.mesh.h(j);
        (u + lift, du * scale + self.lift_slope())
    }

    /// Point value; `None` outside the domain.
    pub fn value(&self, x: f64) -> Option<f64> {
        let j = self.mesh.locate(x)?;
        Some(self.eval_local(j, self.mesh.to_reference(j, x)).0)
    }

    /// Derivative from element `j` at physical point `x`.
    pub fn derivative_on(&self, j: usize, x: f64) -> f64 {
        self.eval_local(j, self.mesh.to_reference(j, x)).1
    }

    /// Coefficientwise `alpha * self + beta * other`; lifts combine the same
    /// way.
    pub fn linear_combination(&self, alpha: f64, other: &FemFunction, beta: f64) -> Result<Self> {
        if !self.same_mesh(other) {
            return Err(Error::MeshMismatch(
                "cannot combine functions on different meshes".into(),
            ));
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| alpha * a + beta * b)
            .collect();
        Ok(FemFunction {
            mesh: Arc::clone(&self.mesh),
            coeffs,
            lift: (
                alpha * self.lift.0 + beta * other.lift.0,
                alpha * self.lift.1 + beta * other.lift.1,
            ),
        })
    }

    /// Maximum coefficient magnitude of the homogeneous part.
    pub fn max_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()))
    }
}
