//! One-dimensional hp-meshes, the H^1_0-conforming DOF numbering, and
//! piecewise-polynomial functions living on them.

mod function;
mod refine;

pub use function::FemFunction;
pub use refine::{apply_refinement, transfer, RefineAction, RefinementPlan};

use std::ops::Range;

use crate::error::{Error, Result};

/// A partition `a = x_0 < x_1 < ... < x_N = b` with one polynomial degree
/// `p_j >= 1` per element.
///
/// Immutable once built; the DOF map is derived at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct HpMesh {
    nodes: Vec<f64>,
    degrees: Vec<usize>,
    dofs: DofMap,
}

impl HpMesh {
    pub fn new(nodes: Vec<f64>, degrees: Vec<usize>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::invalid("a mesh needs at least two nodes"));
        }
        if degrees.len() + 1 != nodes.len() {
            return Err(Error::invalid(format!(
                "{} nodes need {} degrees, got {}",
                nodes.len(),
                nodes.len() - 1,
                degrees.len()
            )));
        }
        if nodes.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("mesh nodes must be finite"));
        }
        if let Some(j) = nodes.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::invalid(format!(
                "nodes must be strictly increasing (element {j})"
            )));
        }
        if let Some(j) = degrees.iter().position(|&p| p == 0) {
            return Err(Error::invalid(format!("element {j} has degree 0")));
        }
        let dofs = DofMap::build(&degrees);
        Ok(HpMesh {
            nodes,
            degrees,
            dofs,
        })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn num_elements(&self) -> usize {
        self.degrees.len()
    }

    pub fn degree(&self, j: usize) -> usize {
        self.degrees[j]
    }

    pub fn a(&self) -> f64 {
        self.nodes[0]
    }

    pub fn b(&self) -> f64 {
        self.nodes[self.nodes.len() - 1]
    }

    /// Endpoints of element `j`.
    pub fn element(&self, j: usize) -> (f64, f64) {
        (self.nodes[j], self.nodes[j + 1])
    }

    pub fn h(&self, j: usize) -> f64 {
        self.nodes[j + 1] - self.nodes[j]
    }

    pub fn lengths(&self) -> Vec<f64> {
        self.nodes.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn dofs(&self) -> &DofMap {
        &self.dofs
    }

    pub fn n_dof(&self) -> usize {
        self.dofs.n_dof
    }

    /// Index of the element containing `x` (right-closed at the last element).
    pub fn locate(&self, x: f64) -> Option<usize> {
        if !(self.a()..=self.b()).contains(&x) {
            return None;
        }
        let n = self.num_elements();
        let idx = self.nodes.partition_point(|&xi| xi <= x);
        Some(idx.saturating_sub(1).min(n - 1))
    }

    /// Maps a physical coordinate in element `j` to the reference interval.
    pub fn to_reference(&self, j: usize, x: f64) -> f64 {
        let (xl, xr) = self.element(j);
        if x == xl {
            -1.0
        } else if x == xr {
            1.0
        } else {
            (2.0 * x - xl - xr) / (xr - xl)
        }
    }

    pub fn from_reference(&self, j: usize, t: f64) -> f64 {
        let (xl, xr) = self.element(j);
        0.5 * (xl + xr) + 0.5 * (xr - xl) * t
    }
}

/// `N` equal elements on `(a, b)`, all of degree `p`.
pub fn uniform_mesh(a: f64, b: f64, n: usize, p: usize) -> Result<HpMesh> {
    if !(a < b) {
        return Err(Error::invalid(format!("need a < b, got a={a}, b={b}")));
    }
    if n == 0 {
        return Err(Error::invalid("need at least one element"));
    }
    if p == 0 {
        return Err(Error::invalid("polynomial degree must be >= 1"));
    }
    let mut nodes: Vec<f64> = (0..=n)
        .map(|i| a + (b - a) * (i as f64) / (n as f64))
        .collect();
    nodes[n] = b;
    HpMesh::new(nodes, vec![p; n])
}

/// Smallest `mu >= 1` bounding the ratios of neighbouring element lengths
/// and degrees.
pub fn shape_regularity(mesh: &HpMesh) -> f64 {
    let h = mesh.lengths();
    let p = mesh.degrees();
    let mut mu: f64 = 1.0;
    for j in 0..h.len().saturating_sub(1) {
        let (h0, h1) = (h[j], h[j + 1]);
        let (p0, p1) = (p[j] as f64, p[j + 1] as f64);
        mu = mu.max(h0 / h1).max(h1 / h0).max(p0 / p1).max(p1 / p0);
    }
    mu
}

/// Global numbering of the homogeneous hp-space.
///
/// Interior nodes come first (node `i` gets index `i - 1`), followed by the
/// `p_j - 1` bubbles of each element in ascending element and degree order.
/// Boundary nodes carry no DOF.
#[derive(Debug, Clone, PartialEq)]
pub struct DofMap {
    n_dof: usize,
    elements: Vec<ElementDofs>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ElementDofs {
    pub left: Option<usize>,
    pub right: Option<usize>,
    pub bubbles: Range<usize>,
}

impl DofMap {
    fn build(degrees: &[usize]) -> Self {
        let n = degrees.len();
        let mut next = n - 1;
        let elements = degrees
            .iter()
            .enumerate()
            .map(|(j, &p)| {
                let bubbles = next..next + (p - 1);
                next += p - 1;
                ElementDofs {
                    left: (j > 0).then(|| j - 1),
                    right: (j + 1 < n).then_some(j),
                    bubbles,
                }
            })
            .collect();
        DofMap {
            n_dof: next,
            elements,
        }
    }

    pub fn n_dof(&self) -> usize {
        self.n_dof
    }

    pub fn num_elements(&self) -> usize {
        self.elements.len()
    }

    pub fn element(&self, j: usize) -> &ElementDofs {
        &self.elements[j]
    }

    /// Global indices of the local functions `[N0, N1, phi_2, ..., phi_p]`
    /// of element `j`; `None` for boundary hats.
    pub fn local_to_global(&self, j: usize) -> Vec<Option<usize>> {
        let e = &self.elements[j];
        let mut out = Vec::with_capacity(2 + e.bubbles.len());
        out.push(e.left);
        out.push(e.right);
        out.extend(e.bubbles.clone().map(Some));
        out
    }
}

/// Builds the DOF map of `mesh`.
pub fn build_dof_map(mesh: &HpMesh) -> DofMap {
    DofMap::build(mesh.degrees())
}
