//! Scalar fields: closed-form expressions or uniform samples with 4-point
//! cubic interpolation.

use crate::error::{Error, Result};
use crate::expr::{parse_expression, Dual2, ExprAst};

#[derive(Clone, Debug, PartialEq)]
pub struct Sampled1D {
    pub t0: f64,
    pub dt: f64,
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ScalarField1D {
    Expr(ExprAst),
    Sampled(Sampled1D),
}

impl ScalarField1D {
    pub fn parse(src: &str, var: &str) -> Result<Self> {
        Ok(ScalarField1D::Expr(parse_expression(src, &[var])?))
    }

    pub fn constant(c: f64) -> Self {
        ScalarField1D::Expr(ExprAst { root: crate::expr::Node::Const(c), vars: vec!["t".into()] })
    }

    pub fn sampled(t0: f64, dt: f64, values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 || !(dt > 0.0) || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidField(format!(
                "need at least 2 finite samples and dt > 0 (got {} samples, dt = {dt})",
                values.len()
            )));
        }
        Ok(ScalarField1D::Sampled(Sampled1D { t0, dt, values }))
    }

    pub fn evaluate(&self, t: f64) -> Result<f64> {
        match self {
            ScalarField1D::Expr(e) => e.eval_f64(&[t]),
            ScalarField1D::Sampled(s) => s.evaluate(t),
        }
    }

    /// Value and first derivative.
    pub fn evaluate_d(&self, t: f64) -> Result<(f64, f64)> {
        match self {
            ScalarField1D::Expr(e) => {
                let d = e.eval(&[Dual2::var(t, 0)])?;
                Ok((d.v, d.d[0]))
            }
            ScalarField1D::Sampled(s) => Ok((s.evaluate(t)?, s.derivative(t)?)),
        }
    }

    /// Source text for closed forms, `None` for samples.
    pub fn source(&self) -> Option<String> {
        match self {
            ScalarField1D::Expr(e) => Some(e.to_string()),
            ScalarField1D::Sampled(_) => None,
        }
    }
}

/// Lagrange weights on nodes 0..n at fractional position `x`.
fn lagrange_weights(n: usize, x: f64) -> [f64; 4] {
    let mut w = [0.0; 4];
    for (i, wi) in w.iter_mut().enumerate().take(n) {
        let mut p = 1.0;
        for j in 0..n {
            if j != i {
                p *= (x - j as f64) / (i as f64 - j as f64);
            }
        }
        *wi = p;
    }
    w
}

/// Stencil start and local coordinate for position `s` (in units of the
/// spacing) on a grid of `len` nodes.
fn stencil(len: usize, s: f64) -> (usize, usize, f64) {
    let n = len.min(4);
    let k = s.floor().max(0.0) as usize;
    let start = k.saturating_sub(1).min(len - n);
    (start, n, s - start as f64)
}

fn check_range(t: f64, lo: f64, hi: f64) -> Result<()> {
    let slack = 1e-12 * (hi - lo).abs().max(1.0);
    if t.is_nan() || t < lo - slack || t > hi + slack {
        return Err(Error::Domain { t, lo, hi });
    }
    Ok(())
}

impl Sampled1D {
    pub fn end(&self) -> f64 {
        self.t0 + self.dt * (self.values.len() - 1) as f64
    }

    fn locate(&self, t: f64) -> Result<(usize, usize, f64)> {
        check_range(t, self.t0, self.end())?;
        let s = ((t - self.t0) / self.dt).clamp(0.0, (self.values.len() - 1) as f64);
        Ok(stencil(self.values.len(), s))
    }

    pub fn evaluate(&self, t: f64) -> Result<f64> {
        let (start, n, x) = self.locate(t)?;
        let w = lagrange_weights(n, x);
        Ok((0..n).map(|i| w[i] * self.values[start + i]).sum())
    }

    /// Derivative of the local interpolant.
    pub fn derivative(&self, t: f64) -> Result<f64> {
        let (start, n, x) = self.locate(t)?;
        let mut acc = 0.0;
        for i in 0..n {
            let mut di = 0.0;
            for m in 0..n {
                if m == i {
                    continue;
                }
                let mut p = 1.0 / (i as f64 - m as f64);
                for j in 0..n {
                    if j != i && j != m {
                        p *= (x - j as f64) / (i as f64 - j as f64);
                    }
                }
                di += p;
            }
            acc += di * self.values[start + i];
        }
        Ok(acc / self.dt)
    }
}

/// Uniform samples over a rectangle, row-major in u: `values[i * nv + j]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Sampled2D {
    pub u0: f64,
    pub du: f64,
    pub nu: usize,
    pub v0: f64,
    pub dv: f64,
    pub nv: usize,
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ScalarField2D {
    Expr(ExprAst),
    Sampled(Box<SampledGrad>),
}

/// Samples together with their node derivatives.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledGrad {
    pub base: Sampled2D,
    pub d_u: Sampled2D,
    pub d_v: Sampled2D,
}

/// 4th-order differences along a line of samples (one-sided at the ends);
/// second order when the line is too short.
pub(crate) fn line_derivative(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    if n < 5 {
        return (0..n)
            .map(|i| {
                let (a, b) = (i.saturating_sub(1), (i + 1).min(n - 1));
                (f[b] - f[a]) / (h * (b - a) as f64)
            })
            .collect();
    }
    (0..n)
        .map(|i| {
            let d = match i {
                0 => -25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4],
                1 => -3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4],
                _ if i == n - 2 => 3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5],
                _ if i == n - 1 => {
                    25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] + 3.0 * f[n - 5]
                }
                _ => f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2],
            };
            d / (12.0 * h)
        })
        .collect()
}

impl ScalarField2D {
    pub fn parse(src: &str) -> Result<Self> {
        Ok(ScalarField2D::Expr(parse_expression(src, &["u", "v"])?))
    }

    pub fn sampled(s: Sampled2D) -> Result<Self> {
        if s.nu < 2 || s.nv < 2 || !(s.du > 0.0) || !(s.dv > 0.0) || s.values.len() != s.nu * s.nv {
            return Err(Error::InvalidField("2D samples need at least 2x2 nodes, positive steps, nu*nv values".into()));
        }
        if s.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidField("non-finite sample".into()));
        }
        let mut d_u = s.clone();
        let mut d_v = s.clone();
        for j in 0..s.nv {
            let line: Vec<f64> = (0..s.nu).map(|i| s.values[i * s.nv + j]).collect();
            for (i, d) in line_derivative(&line, s.du).into_iter().enumerate() {
                d_u.values[i * s.nv + j] = d;
            }
        }
        for i in 0..s.nu {
            let row = &s.values[i * s.nv..(i + 1) * s.nv];
            d_v.values[i * s.nv..(i + 1) * s.nv].copy_from_slice(&line_derivative(row, s.dv));
        }
        Ok(ScalarField2D::Sampled(Box::new(SampledGrad { base: s, d_u, d_v })))
    }

    pub fn evaluate(&self, u: f64, v: f64) -> Result<f64> {
        match self {
            ScalarField2D::Expr(e) => e.eval_f64(&[u, v]),
            ScalarField2D::Sampled(s) => s.base.evaluate(u, v),
        }
    }

    /// Value with `(d/du, d/dv)`. Exact (forward-mode) for closed forms;
    /// for samples, 4th-order node differences interpolated like the values.
    pub fn evaluate_grad(&self, u: f64, v: f64) -> Result<(f64, f64, f64)> {
        match self {
            ScalarField2D::Expr(e) => {
                let d = e.eval(&[Dual2::var(u, 0), Dual2::var(v, 1)])?;
                Ok((d.v, d.d[0], d.d[1]))
            }
            ScalarField2D::Sampled(s) => Ok((s.base.evaluate(u, v)?, s.d_u.evaluate(u, v)?, s.d_v.evaluate(u, v)?)),
        }
    }
}

impl Sampled2D {
    pub fn evaluate(&self, u: f64, v: f64) -> Result<f64> {
        let uend = self.u0 + self.du * (self.nu - 1) as f64;
        let vend = self.v0 + self.dv * (self.nv - 1) as f64;
        check_range(u, self.u0, uend)?;
        check_range(v, self.v0, vend)?;
        let su = ((u - self.u0) / self.du).clamp(0.0, (self.nu - 1) as f64);
        let sv = ((v - self.v0) / self.dv).clamp(0.0, (self.nv - 1) as f64);
        let (iu, nu, xu) = stencil(self.nu, su);
        let (iv, nv, xv) = stencil(self.nv, sv);
        let wu = lagrange_weights(nu, xu);
        let wv = lagrange_weights(nv, xv);
        let mut acc = 0.0;
        for a in 0..nu {
            for b in 0..nv {
                acc += wu[a] * wv[b] * self.values[(iu + a) * self.nv + iv + b];
            }
        }
        Ok(acc)
    }
}
