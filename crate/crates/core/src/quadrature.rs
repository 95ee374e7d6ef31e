//! Gauss-Legendre rules on [-1, 1] and their tensor products.

use std::f64::consts::PI;

/// `n`-point Gauss-Legendre rule on [-1, 1] as (point, weight) pairs,
/// points ascending.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 1, "quadrature needs at least one point");
    let mut rule = Vec::with_capacity(n);
    for i in 0..n {
        // Chebyshev-like initial guess, then Newton on P_n.
        let mut x = -(PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        rule.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    rule.sort_by(|a, b| a.0.total_cmp(&b.0));
    rule
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let n = n as f64;
    (p1, n * (x * p1 - p0) / (x * x - 1.0))
}

/// Tensor-product rule on the reference cube [-1, 1]^3.
pub fn gauss_cube(n: usize) -> Vec<([f64; 3], f64)> {
    let line = gauss_legendre(n);
    let mut rule = Vec::with_capacity(n * n * n);
    for &(z, wz) in &line {
        for &(y, wy) in &line {
            for &(x, wx) in &line {
                rule.push(([x, y, z], wx * wy * wz));
            }
        }
    }
    rule
}
