//! Legendre polynomials and coefficient-space operations on them.

/// Returns `(P_n(x), P_n'(x))` via the three-term recurrence.
pub fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut dp_prev = 0.0;
    if n == 0 {
        return (p_prev, dp_prev);
    }
    let mut p = x;
    let mut dp = 1.0;
    for k in 1..n {
        let kf = k as f64;
        let p_next = ((2.0 * kf + 1.0) * x * p - kf * p_prev) / (kf + 1.0);
        // P'_{k+1} = P'_{k-1} + (2k + 1) P_k
        let dp_next = dp_prev + (2.0 * kf + 1.0) * p;
        p_prev = p;
        p = p_next;
        dp_prev = dp;
        dp = dp_next;
    }
    (p, dp)
}

/// Fills `out[k] = P_k(x)` for `k = 0..out.len()`.
pub fn legendre_values(x: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    out[0] = 1.0;
    if out.len() > 1 {
        out[1] = x;
    }
    for k in 1..out.len().saturating_sub(1) {
        let kf = k as f64;
        out[k + 1] = ((2.0 * kf + 1.0) * x * out[k] - kf * out[k - 1]) / (kf + 1.0);
    }
}

/// Fills `vals[k] = P_k(x)` and `ders[k] = P_k'(x)`.
pub fn legendre_values_and_derivatives(x: f64, vals: &mut [f64], ders: &mut [f64]) {
    debug_assert_eq!(vals.len(), ders.len());
    legendre_values(x, vals);
    if ders.is_empty() {
        return;
    }
    ders[0] = 0.0;
    if ders.len() > 1 {
        ders[1] = 1.0;
    }
    for k in 2..ders.len() {
        ders[k] = ders[k - 2] + (2.0 * k as f64 - 1.0) * vals[k - 1];
    }
}

/// Evaluates `sum_k c_k P_k(x)`.
pub fn eval_series(coeffs: &[f64], x: f64) -> f64 {
    // Clenshaw recurrence for the Legendre family
    let n = coeffs.len();
    if n == 0 {
        return 0.0;
    }
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    for k in (1..n).rev() {
        let kf = k as f64;
        let alpha = (2.0 * kf + 1.0) / (kf + 1.0) * x;
        let beta = (kf + 1.0) / (kf + 2.0);
        let b0 = coeffs[k] + alpha * b1 - beta * b2;
        b2 = b1;
        b1 = b0;
    }
    coeffs[0] + x * b1 - 0.5 * b2
}

/// Legendre coefficients of the derivative (with respect to the reference
/// coordinate) of `sum_k c_k P_k`.
///
/// Uses `d_k = (2k + 1) * sum_{j > k, j - k odd} c_j`. The result has one
/// coefficient fewer than the input (at least one).
pub fn derivative_coeffs(coeffs: &[f64]) -> Vec<f64> {
    let n = coeffs.len();
    if n <= 1 {
        return vec![0.0];
    }
    let mut out = vec![0.0; n - 1];
    // running sums over odd offsets, split by parity of k
    let mut tail = [0.0f64; 2];
    for k in (0..n - 1).rev() {
        tail[k % 2] += coeffs[k + 1];
        out[k] = (2.0 * k as f64 + 1.0) * tail[k % 2];
    }
    out
}

/// Squared L2 norm of `P_k` on (-1, 1).
#[inline]
pub fn norm_sq(k: usize) -> f64 {
    2.0 / (2.0 * k as f64 + 1.0)
}
