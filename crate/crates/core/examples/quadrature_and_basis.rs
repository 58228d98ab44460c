//! The polynomial building blocks: Gauss-Legendre rules and the
//! hierarchical shape functions (two hats plus integrated-Legendre bubbles).
//!
//! Run with `cargo run --example quadrature_and_basis`.

use hpnewton::polybasis::{eval_shape, gauss_rule};

fn main() {
    for n in [1, 2, 3, 5, 8] {
        let rule = gauss_rule(n);
        let exact = 2.0 / (2 * n - 1) as f64;
        let err = (rule.integrate(|x| x.powi(2 * n as i32 - 2)) - exact).abs();
        let miss = (rule.integrate(|x| x.powi(2 * n as i32)) - 2.0 / (2 * n + 1) as f64).abs();
        println!("{n} points: x^{} error {err:.1e}, x^{} error {miss:.1e}", 2 * n - 2, 2 * n);
    }

    let p = 5;
    println!("shape functions of degree {p} (value, derivative):");
    for t in [-1.0, -0.5, 0.0, 0.5, 1.0] {
        let s = eval_shape(p, t);
        let row: Vec<String> = s
            .values
            .iter()
            .zip(&s.derivatives)
            .map(|(v, d)| format!("({v:+.3}, {d:+.3})"))
            .collect();
        println!("  t = {t:+.1}: {}", row.join(" "));
    }

    let rule = gauss_rule(p + 1);
    println!("stiffness of the bubbles (orthonormal derivatives):");
    for k in 2..=p {
        let row: Vec<String> = (2..=p)
            .map(|m| {
                let v = rule.integrate(|t| {
                    let s = eval_shape(p, t);
                    s.derivatives[k] * s.derivatives[m]
                });
                format!("{v:+.3}")
            })
            .collect();
        println!("  {}", row.join(" "));
    }
}
