//! Hierarchical shape functions on the reference element (-1, 1).
//!
//! Local ordering is `[N0, N1, phi_2, ..., phi_p]`: the two hat functions
//! `N0 = (1 - t)/2`, `N1 = (1 + t)/2`, followed by the integrated-Legendre
//! bubbles `phi_k = (P_k - P_{k-2}) / sqrt(2(2k - 1))`, which vanish at
//! `t = +-1` and satisfy `phi_k' = sqrt((2k - 1)/2) P_{k-1}`.

use super::legendre::legendre_values_and_derivatives;
use super::quadrature::QuadRule;

/// Scale of the `k`-th bubble: `phi_k = (P_k - P_{k-2}) / bubble_scale(k)`.
#[inline]
pub fn bubble_scale(k: usize) -> f64 {
    (2.0 * (2.0 * k as f64 - 1.0)).sqrt()
}

/// Factor in `phi_k' = bubble_derivative_scale(k) * P_{k-1}`.
#[inline]
pub fn bubble_derivative_scale(k: usize) -> f64 {
    ((2.0 * k as f64 - 1.0) / 2.0).sqrt()
}

/// Values and reference derivatives of the `p + 1` local shape functions.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeEval {
    pub values: Vec<f64>,
    pub derivatives: Vec<f64>,
}

/// Evaluates all shape functions of degree `p` at reference coordinate `t`.
pub fn eval_shape(p: usize, t: f64) -> ShapeEval {
    assert!(p >= 1, "degree must be at least 1");
    let mut values = vec![0.0; p + 1];
    let mut derivatives = vec![0.0; p + 1];
    let mut second = vec![0.0; p + 1];
    eval_shape_into(p, t, &mut values, &mut derivatives, &mut second);
    ShapeEval {
        values,
        derivatives,
    }
}

/// Writes values, first and second reference derivatives of the degree-`p`
/// shape functions at `t` into the given slices (each of length `p + 1`).
pub fn eval_shape_into(p: usize, t: f64, val: &mut [f64], d1: &mut [f64], d2: &mut [f64]) {
    let mut leg = vec![0.0; p + 1];
    let mut dleg = vec![0.0; p + 1];
    legendre_values_and_derivatives(t, &mut leg, &mut dleg);
    val[0] = 0.5 * (1.0 - t);
    val[1] = 0.5 * (1.0 + t);
    d1[0] = -0.5;
    d1[1] = 0.5;
    d2[0] = 0.0;
    d2[1] = 0.0;
    for k in 2..=p {
        val[k] = (leg[k] - leg[k - 2]) / bubble_scale(k);
        let s = bubble_derivative_scale(k);
        d1[k] = s * leg[k - 1];
        d2[k] = s * dleg[k - 1];
    }
}

/// Shape functions tabulated at the points of a quadrature rule.
///
/// Row `q` holds the `p + 1` local functions at point `q`.
#[derive(Debug, Clone)]
pub struct ShapeTable {
    pub degree: usize,
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
    pub values: Vec<Vec<f64>>,
    pub d1: Vec<Vec<f64>>,
    pub d2: Vec<Vec<f64>>,
}

impl ShapeTable {
    pub fn new(p: usize, rule: &QuadRule) -> Self {
        let nq = rule.order();
        let mut values = vec![vec![0.0; p + 1]; nq];
        let mut d1 = vec![vec![0.0; p + 1]; nq];
        let mut d2 = vec![vec![0.0; p + 1]; nq];
        for q in 0..nq {
            eval_shape_into(p, rule.points[q], &mut values[q], &mut d1[q], &mut d2[q]);
        }
        ShapeTable {
            degree: p,
            points: rule.points.clone(),
            weights: rule.weights.clone(),
            values,
            d1,
            d2,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Per-degree cache of shape tables for one quadrature-order policy.
#[derive(Debug, Default)]
pub struct ShapeCache {
    tables: Vec<Option<ShapeTable>>,
}

impl ShapeCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// Table for degree `p` with `order(p)` quadrature points.
    pub fn get(&mut self, p: usize, order: impl Fn(usize) -> usize) -> &ShapeTable {
        if self.tables.len() <= p {
            self.tables.resize(p + 1, None);
        }
        self.tables[p].get_or_insert_with(|| {
            ShapeTable::new(p, super::quadrature::cached_rule(order(p)))
        })
    }
}
