//! Adaptive Gauss-Legendre quadrature for vector-valued integrands.

use std::sync::OnceLock;

use crate::error::{Error, Result};

const ORDER: usize = 10;
const MAX_DEPTH: u32 = 48;

/// Nodes and weights on [-1, 1] by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else if n == 1 { z } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * pn - pm) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

fn rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(ORDER))
}

fn panel<const D: usize>(f: &impl Fn(f64) -> Result<[f64; D]>, a: f64, b: f64) -> Result<[f64; D]> {
    let (x, w) = rule();
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    let mut acc = [0.0; D];
    for (xi, wi) in x.iter().zip(w) {
        let y = f(c + h * xi)?;
        for k in 0..D {
            acc[k] += wi * h * y[k];
        }
    }
    Ok(acc)
}

fn diff<const D: usize>(a: &[f64; D], b: &[f64; D]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Integrates `f` over `[a, b]` (either orientation) to absolute accuracy
/// `tol * max(1, |I|)` by bisection.
pub fn integrate<const D: usize>(f: impl Fn(f64) -> Result<[f64; D]>, a: f64, b: f64, tol: f64) -> Result<[f64; D]> {
    let mut total = [0.0; D];
    if a == b {
        return Ok(total);
    }
    let whole = panel(&f, a, b)?;
    let scale = whole.iter().fold(1.0_f64, |m, x| m.max(x.abs()));
    let mut stack = vec![(a, b, whole, 0u32, tol)];
    while let Some((lo, hi, coarse, depth, local)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let left = panel(&f, lo, mid)?;
        let right = panel(&f, mid, hi)?;
        let mut fine = [0.0; D];
        for k in 0..D {
            fine[k] = left[k] + right[k];
        }
        let err = diff(&coarse, &fine);
        if err <= local * scale || err <= 4.0 * f64::EPSILON * fine.iter().fold(0.0_f64, |m, x| m.max(x.abs())) {
            for k in 0..D {
                total[k] += fine[k];
            }
        } else if depth >= MAX_DEPTH {
            return Err(Error::Quadrature { lo, hi, estimate: err });
        } else {
            stack.push((lo, mid, left, depth + 1, local * std::f64::consts::FRAC_1_SQRT_2));
            stack.push((mid, hi, right, depth + 1, local * std::f64::consts::FRAC_1_SQRT_2));
        }
    }
    Ok(total)
}
