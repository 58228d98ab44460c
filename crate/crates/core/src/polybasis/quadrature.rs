//! Gauss-Legendre quadrature on the reference interval (-1, 1).

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

use super::legendre::legendre_with_derivative;

/// An `n`-point Gauss-Legendre rule on (-1, 1).
///
/// Exact for polynomials of degree `<= 2n - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadRule {
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadRule {
    pub fn order(&self) -> usize {
        self.points.len()
    }

    /// Integrates `f` over (-1, 1).
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// Integrates `f` over the physical interval (a, b).
    pub fn integrate_on<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        half * self.integrate(|t| f(mid + half * t))
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.points.iter().copied().zip(self.weights.iter().copied())
    }
}

/// Computes the `n`-point Gauss-Legendre rule.
///
/// Nodes are the roots of `P_n`, found by Newton iteration from the
/// Chebyshev-like initial guess `cos(pi (i - 1/4) / (n + 1/2))`. Nodes are
/// returned in ascending order and are exactly symmetric about zero.
///
/// # Panics
///
/// If `n == 0`.
pub fn gauss_rule(n: usize) -> QuadRule {
    assert!(n >= 1, "a Gauss rule needs at least one point");
    let mut points = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let half = n / 2;
    for i in 0..half {
        // i-th root counted from the right end
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() <= 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        points[n - 1 - i] = x;
        points[i] = -x;
        weights[n - 1 - i] = w;
        weights[i] = w;
    }
    if n % 2 == 1 {
        let (_, dp) = legendre_with_derivative(n, 0.0);
        points[half] = 0.0;
        weights[half] = 2.0 / (dp * dp);
    }
    QuadRule { points, weights }
}

/// Shared, lazily built rule table. Each rule is computed once per process.
pub fn cached_rule(n: usize) -> &'static QuadRule {
    static TABLE: OnceLock<Mutex<HashMap<usize, &'static QuadRule>>> = OnceLock::new();
    let table = TABLE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = table.lock().expect("quadrature table poisoned");
    guard
        .entry(n)
        .or_insert_with(|| Box::leak(Box::new(gauss_rule(n))))
}

/// Number of points used for element integrals involving `f(x, u)` on an
/// element of degree `p`: `max(p + 3, ceil((3p + 1) / 2))`.
pub fn element_rule_order(p: usize) -> usize {
    (p + 3).max((3 * p + 2) / 2)
}
