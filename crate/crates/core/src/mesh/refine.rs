use std::collections::BTreeMap;
use std::sync::Arc;

use super::{FemFunction, HpMesh};
use crate::error::{Error, Result};
use crate::polybasis::expansion::{basis_to_legendre, legendre_to_basis};
use crate::polybasis::legendre::{legendre_values, norm_sq};
use crate::polybasis::quadrature::cached_rule;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RefineAction {
    /// Split the element at its midpoint; both halves keep the degree.
    Bisect,
    /// Raise the element degree by one.
    Enrich,
}

/// Per-element refinement actions; each element appears at most once.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RefinementPlan {
    actions: BTreeMap<usize, RefineAction>,
}

impl RefinementPlan {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a plan, rejecting repeated element indices.
    pub fn from_actions(actions: impl IntoIterator<Item = (usize, RefineAction)>) -> Result<Self> {
        let mut plan = Self::new();
        for (j, a) in actions {
            plan.insert(j, a)?;
        }
        Ok(plan)
    }

    pub fn insert(&mut self, element: usize, action: RefineAction) -> Result<()> {
        if self.actions.insert(element, action).is_some() {
            return Err(Error::invalid(format!(
                "element {element} appears twice in refinement plan"
            )));
        }
        Ok(())
    }

    pub fn get(&self, element: usize) -> Option<RefineAction> {
        self.actions.get(&element).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, RefineAction)> + '_ {
        self.actions.iter().map(|(&j, &a)| (j, a))
    }

    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    pub fn count(&self, action: RefineAction) -> usize {
        self.actions.values().filter(|&&a| a == action).count()
    }
}

/// Applies `plan` to `mesh`. Unmarked elements are copied unchanged.
pub fn apply_refinement(mesh: &HpMesh, plan: &RefinementPlan) -> Result<HpMesh> {
    let n = mesh.num_elements();
    if let Some((j, _)) = plan.iter().find(|&(j, _)| j >= n) {
        return Err(Error::invalid(format!(
            "refinement plan references element {j}, mesh has {n}"
        )));
    }
    let mut nodes = Vec::with_capacity(n + 1 + plan.len());
    let mut degrees = Vec::with_capacity(n + plan.len());
    nodes.push(mesh.a());
    for j in 0..n {
        let (xl, xr) = mesh.element(j);
        let p = mesh.degree(j);
        match plan.get(j) {
            None => degrees.push(p),
            Some(RefineAction::Enrich) => degrees.push(p + 1),
            Some(RefineAction::Bisect) => {
                nodes.push(0.5 * (xl + xr));
                degrees.push(p);
                degrees.push(p);
            }
        }
        nodes.push(xr);
    }
    HpMesh::new(nodes, degrees)
}

/// Re-expands `u` (living on `old`) exactly in the space of `new`.
///
/// `new` must be nested in `old`: every new element lies inside one old
/// element and carries at least that element's degree. The old local
/// polynomial is composed with the affine child map and projected onto the
/// Legendre basis with a Gauss rule exact for it, so the result is the same
/// function up to rounding.
pub fn transfer(u: &FemFunction, old: &HpMesh, new: &Arc<HpMesh>) -> Result<FemFunction> {
    u.check_mesh(old)?;
    if old.a() != new.a() || old.b() != new.b() {
        return Err(Error::NotARefinement("domains differ".into()));
    }
    let mut out = FemFunction::zeros(Arc::clone(new)).with_lift(u.lift().0, u.lift().1);
    let dofs = new.dofs();
    let mut parent = 0usize;
    let mut local = Vec::new();
    for jn in 0..new.num_elements() {
        let (xl, xr) = new.element(jn);
        while parent < old.num_elements() && old.element(parent).1 <= xl {
            parent += 1;
        }
        if parent == old.num_elements() {
            return Err(Error::NotARefinement(format!(
                "new element {jn} lies outside the old mesh"
            )));
        }
        let (ol, or) = old.element(parent);
        if xl < ol || xr > or {
            return Err(Error::NotARefinement(format!(
                "new element {jn} = ({xl}, {xr}) straddles old element boundary"
            )));
        }
        let p_old = old.degree(parent);
        let p_new = new.degree(jn);
        if p_new < p_old {
            return Err(Error::NotARefinement(format!(
                "degree of new element {jn} dropped from {p_old} to {p_new}"
            )));
        }

        u.local_coeffs_into(parent, &mut local);
        let old_leg = basis_to_legendre(&local);
        let new_leg = compose_affine(&old_leg, ol, or, xl, xr);
        let c = legendre_to_basis(&new_leg, p_new);

        let e = dofs.element(jn);
        if let Some(i) = e.left {
            out.coeffs_mut()[i] = c[0];
        }
        if let Some(i) = e.right {
            out.coeffs_mut()[i] = c[1];
        }
        for (k, i) in e.bubbles.clone().enumerate() {
            out.coeffs_mut()[i] = c[2 + k];
        }
    }
    // nodal DOFs that coincide with old nodes are copied verbatim
    let old_nodes = old.nodes();
    let mut k = 0;
    for (i, &x) in new.nodes().iter().enumerate().skip(1).take(new.num_elements() - 1) {
        while k < old_nodes.len() && old_nodes[k] < x {
            k += 1;
        }
        if k < old_nodes.len() && old_nodes[k] == x {
            out.coeffs_mut()[i - 1] = u.coeffs()[k - 1];
        }
    }
    Ok(out)
}

/// Legendre coefficients, on the reference interval of `(xl, xr)`, of the
/// polynomial with coefficients `leg` on `(ol, or)`.
fn compose_affine(leg: &[f64], ol: f64, or: f64, xl: f64, xr: f64) -> Vec<f64> {
    if ol == xl && or == xr {
        return leg.to_vec();
    }
    let n = leg.len();
    let rule = cached_rule(n);
    let scale = (xr - xl) / (or - ol);
    let shift = (xl + xr - ol - or) / (or - ol);
    let mut out = vec![0.0; n];
    let mut p_old = vec![0.0; n];
    let mut p_new = vec![0.0; n];
    for (t, w) in rule.iter() {
        legendre_values(shift + scale * t, &mut p_old);
        let g: f64 = leg.iter().zip(&p_old).map(|(a, b)| a * b).sum();
        legendre_values(t, &mut p_new);
        for k in 0..n {
            out[k] += w * g * p_new[k];
        }
    }
    for (k, c) in out.iter_mut().enumerate() {
        *c /= norm_sq(k);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::uniform_mesh;

    #[test]
    fn enrich_single_element() {
        let m = uniform_mesh(0.0, 1.0, 1, 2).unwrap();
        let plan = RefinementPlan::from_actions([(0, RefineAction::Enrich)]).unwrap();
        let r = apply_refinement(&m, &plan).unwrap();
        assert_eq!(r.nodes(), &[0.0, 1.0]);
        assert_eq!(r.degrees(), &[3]);
    }

    #[test]
    fn bisect_single_element() {
        let m = uniform_mesh(0.0, 1.0, 1, 2).unwrap();
        let plan = RefinementPlan::from_actions([(0, RefineAction::Bisect)]).unwrap();
        let r = apply_refinement(&m, &plan).unwrap();
        assert_eq!(r.nodes(), &[0.0, 0.5, 1.0]);
        assert_eq!(r.degrees(), &[2, 2]);
    }

    #[test]
    fn empty_plan_is_identity() {
        let m = HpMesh::new(vec![0.0, 0.2, 1.0], vec![2, 4]).unwrap();
        assert_eq!(apply_refinement(&m, &RefinementPlan::new()).unwrap(), m);
    }

    #[test]
    fn plan_rejects_duplicates_and_bad_indices() {
        assert!(RefinementPlan::from_actions([
            (1, RefineAction::Enrich),
            (1, RefineAction::Bisect)
        ])
        .is_err());
        let m = uniform_mesh(0.0, 1.0, 2, 1).unwrap();
        let plan = RefinementPlan::from_actions([(2, RefineAction::Enrich)]).unwrap();
        assert!(apply_refinement(&m, &plan).is_err());
    }

    #[test]
    fn transfer_zero_stays_zero() {
        let m = Arc::new(uniform_mesh(0.0, 1.0, 3, 2).unwrap());
        let plan = RefinementPlan::from_actions([
            (0, RefineAction::Bisect),
            (2, RefineAction::Enrich),
        ])
        .unwrap();
        let r = Arc::new(apply_refinement(&m, &plan).unwrap());
        let u = transfer(&FemFunction::zeros(m.clone()), &m, &r).unwrap();
        assert!(u.coeffs().iter().all(|&c| c == 0.0));
    }

    #[test]
    fn transfer_linear_under_bisection() {
        let m = Arc::new(uniform_mesh(0.0, 1.0, 1, 1).unwrap());
        let u = FemFunction::zeros(m.clone()).with_lift(0.0, 1.0);
        let plan = RefinementPlan::from_actions([(0, RefineAction::Bisect)]).unwrap();
        let r = Arc::new(apply_refinement(&m, &plan).unwrap());
        let v = transfer(&u, &m, &r).unwrap();
        assert!(v.coeffs()[0].abs() < 1e-15);
        assert!((v.value(0.5).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn transfer_quadratic_bubble_on_enrich() {
        let m = Arc::new(uniform_mesh(0.0, 1.0, 1, 2).unwrap());
        let u = FemFunction::from_coeffs(m.clone(), vec![1.0]).unwrap();
        let plan = RefinementPlan::from_actions([(0, RefineAction::Enrich)]).unwrap();
        let r = Arc::new(apply_refinement(&m, &plan).unwrap());
        let v = transfer(&u, &m, &r).unwrap();
        assert!((v.coeffs()[0] - 1.0).abs() < 1e-14);
        assert!(v.coeffs()[1].abs() < 1e-14);
    }

    #[test]
    fn transfer_rejects_non_nested_meshes() {
        let m = Arc::new(uniform_mesh(0.0, 1.0, 2, 2).unwrap());
        let other = Arc::new(uniform_mesh(0.0, 1.0, 3, 2).unwrap());
        let u = FemFunction::zeros(m.clone());
        assert!(matches!(
            transfer(&u, &m, &other),
            Err(Error::NotARefinement(_))
        ));
        let lower = Arc::new(uniform_mesh(0.0, 1.0, 2, 1).unwrap());
        assert!(transfer(&u, &m, &lower).is_err());
    }
}
