//! Dörfler marking and the smoothness-based choice between h- and
//! p-refinement.

use crate::mesh::{FemFunction, RefineAction, RefinementPlan};
use crate::polybasis::expansion::to_legendre;

/// Smallest set of elements whose squared indicators sum to at least
/// `vartheta` times the total, taking the largest first (ties: lower index
/// first). Returned in ascending element order.
pub fn dorfler_mark(eta2: &[f64], vartheta: f64) -> Vec<usize> {
    let total: f64 = eta2.iter().sum();
    if !(total > 0.0) {
        return Vec::new();
    }
    let mut order: Vec<usize> = (0..eta2.len()).collect();
    order.sort_by(|&i, &k| eta2[k].total_cmp(&eta2[i]).then(i.cmp(&k)));
    let target = vartheta * total;
    let mut sum = 0.0;
    let mut marked = Vec::new();
    for j in order {
        if sum >= target {
            break;
        }
        sum += eta2[j];
        marked.push(j);
    }
    marked.sort_unstable();
    marked
}

/// Ratio of the maximum norm of the `(p-1)`-th derivative of `u` on element
/// `j` to its `H^1`-type bound `h^{-1/2} ||v||_{L2} + (h/2)^{1/2} ||v'||_{L2}`.
///
/// Values near 1 indicate a locally smooth function. Returns 1 when the
/// `(p-1)`-th derivative vanishes identically.
pub fn smoothness_indicator(u: &FemFunction, j: usize) -> f64 {
    let p = u.mesh().degree(j);
    let e = to_legendre(u, j).derivative(p - 1);
    // the (p-1)-th derivative is linear: max at an endpoint
    let c0 = e.coeffs[0];
    let c1 = e.coeffs.get(1).copied().unwrap_or(0.0);
    let linf = (c0 - c1).abs().max((c0 + c1).abs());
    if linf == 0.0 || !linf.is_finite() {
        return 1.0;
    }
    let h = e.h;
    let l2 = (h * (c0 * c0 + c1 * c1 / 3.0)).sqrt();
    let deriv_l2 = (2.0 / h * c1).abs() * h.sqrt();
    linf / (l2 / h.sqrt() + (0.5 * h).sqrt() * deriv_l2)
}

/// ENRICH for marked elements with indicator `>= zeta`, BISECT otherwise.
pub fn build_refinement_plan(u: &FemFunction, marked: &[usize], zeta: f64) -> RefinementPlan {
    let mut plan = RefinementPlan::new();
    for &j in marked {
        let action = if smoothness_indicator(u, j) >= zeta {
            RefineAction::Enrich
        } else {
            RefineAction::Bisect
        };
        plan.insert(j, action).expect("marked elements are distinct");
    }
    plan
}
