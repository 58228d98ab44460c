//! Local Legendre expansions of finite element functions.

use super::legendre::{derivative_coeffs, eval_series, norm_sq};
use super::shape::{bubble_derivative_scale, bubble_scale};
use crate::mesh::FemFunction;

/// The restriction of a function to one element, written as
/// `sum_k c_k P_k(t)` in the reference coordinate `t` of that element.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalExpansion {
    pub element: usize,
    /// Physical length of the element.
    pub h: f64,
    pub coeffs: Vec<f64>,
}

/// L2, L-infinity and derivative-L2 norms over the physical element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalNorms {
    pub l2: f64,
    pub linf: f64,
    pub deriv_l2: f64,
}

impl LocalExpansion {
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, t: f64) -> f64 {
        eval_series(&self.coeffs, t)
    }

    /// Coefficients of the `order`-th derivative with respect to the
    /// physical coordinate.
    pub fn derivative(&self, order: usize) -> LocalExpansion {
        legendre_derivative(self, order)
    }

    pub fn norms(&self) -> LocalNorms {
        local_norms(self)
    }
}

/// Converts local basis coefficients `[N0, N1, phi_2, ..]` to Legendre
/// coefficients of the same degree.
pub fn basis_to_legendre(local: &[f64]) -> Vec<f64> {
    let p = local.len() - 1;
    let mut c = vec![0.0; p + 1];
    c[0] += 0.5 * (local[0] + local[1]);
    if p >= 1 {
        c[1] += 0.5 * (local[1] - local[0]);
    }
    for k in 2..=p {
        let b = local[k] / bubble_scale(k);
        c[k] += b;
        c[k - 2] -= b;
    }
    c
}

/// Converts Legendre coefficients to local basis coefficients of degree `p`
/// (`p` must be at least the polynomial's degree).
pub fn legendre_to_basis(leg: &[f64], p: usize) -> Vec<f64> {
    debug_assert!(leg.len() <= p + 1 || leg[p + 1..].iter().all(|&c| c == 0.0));
    let mut out = vec![0.0; p + 1];
    let (left, right) = leg.iter().enumerate().fold((0.0, 0.0), |(l, r), (k, &c)| {
        (if k % 2 == 0 { l + c } else { l - c }, r + c)
    });
    out[0] = left;
    out[1] = right;
    // phi_k' = s_k P_{k-1}: the bubble part is read off the derivative
    let d = derivative_coeffs(leg);
    for k in 2..=p {
        let dk = d.get(k - 1).copied().unwrap_or(0.0);
        out[k] = dk / bubble_derivative_scale(k);
    }
    out
}

/// Local Legendre expansion of `u` (lift included) on element `j`.
pub fn to_legendre(u: &FemFunction, j: usize) -> LocalExpansion {
    let mesh = u.mesh();
    let mut coeffs = basis_to_legendre(&u.local_coeffs(j));
    let (xl, xr) = mesh.element(j);
    let (ll, lr) = (u.lift_value(xl), u.lift_value(xr));
    coeffs[0] += 0.5 * (ll + lr);
    coeffs[1] += 0.5 * (lr - ll);
    LocalExpansion {
        element: j,
        h: mesh.h(j),
        coeffs,
    }
}

/// Exact Legendre coefficients of the `order`-th physical derivative.
pub fn legendre_derivative(e: &LocalExpansion, order: usize) -> LocalExpansion {
    let mut coeffs = e.coeffs.clone();
    let scale = 2.0 / e.h;
    for _ in 0..order {
        coeffs = derivative_coeffs(&coeffs);
        coeffs.iter_mut().for_each(|c| *c *= scale);
    }
    LocalExpansion {
        element: e.element,
        h: e.h,
        coeffs,
    }
}

/// Norms of a local expansion on its physical element.
///
/// The L2 norms follow from Legendre orthogonality. The maximum norm is
/// exact for polynomials of degree at most one (largest endpoint magnitude)
/// and sampled on a dense grid otherwise.
pub fn local_norms(e: &LocalExpansion) -> LocalNorms {
    let l2 = weighted_l2(&e.coeffs, e.h);
    let deriv = legendre_derivative(e, 1);
    let deriv_l2 = weighted_l2(&deriv.coeffs, e.h);
    let effective_degree = e.coeffs.iter().rposition(|&c| c != 0.0).unwrap_or(0);
    let linf = if effective_degree <= 1 {
        let c0 = e.coeffs[0];
        let c1 = e.coeffs.get(1).copied().unwrap_or(0.0);
        (c0 - c1).abs().max((c0 + c1).abs())
    } else {
        const SAMPLES: usize = 2000;
        (0..=SAMPLES)
            .map(|i| e.eval(-1.0 + 2.0 * i as f64 / SAMPLES as f64).abs())
            .fold(0.0, f64::max)
    };
    LocalNorms { l2, linf, deriv_l2 }
}

fn weighted_l2(coeffs: &[f64], h: f64) -> f64 {
    let s: f64 = coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| c * c * norm_sq(k))
        .sum();
    (0.5 * h * s).sqrt()
}
