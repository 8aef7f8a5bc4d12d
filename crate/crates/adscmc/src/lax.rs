//! Surfaces from Gauss-Mainardi-Codazzi data through their Lax systems.
//!
//! Given `(omega, H, Q, R)` with
//! `omega_uv + e^omega (H^2 - 1)/2 - 2 Q R e^-omega = 0`, the frames solve
//! `Phi_u = Phi U`, `Phi_v = Phi V` and `Phi1 Phi2^t` (mu) or
//! `Psi1 Psi2^-1` (nu) is a timelike surface of mean curvature `H`.

use rayon::prelude::*;

use crate::algebra::{GroupElement, Mat2};
use crate::bryant::{rk4_step, FrameCurve, NullLeg};
use crate::error::{Error, Result};
use crate::fields::{line_derivative, ScalarField1D, ScalarField2D};
use crate::minimal::WeierstrassData;
use crate::surface::{Action, Domain, SurfaceGridH31};
use crate::tol::Tolerances;

#[derive(Clone, Debug, PartialEq)]
pub struct GmcData {
    pub omega: ScalarField2D,
    pub h: f64,
    /// Function of `u`.
    pub q: ScalarField1D,
    /// Function of `v`.
    pub r: ScalarField1D,
}

impl GmcData {
    pub fn parse(omega: &str, h: f64, q: &str, r: &str) -> Result<Self> {
        Ok(GmcData {
            omega: ScalarField2D::parse(omega)?,
            h,
            q: ScalarField1D::parse(q, "u")?,
            r: ScalarField1D::parse(r, "v")?,
        })
    }
}

/// 4th-order first derivative with step `h`, one-sided near `[lo, hi]` ends.
fn d4(f: impl Fn(f64) -> Result<f64>, t: f64, h: f64, lo: f64, hi: f64) -> Result<f64> {
    let w: [(f64, f64); 5] = if t - 2.0 * h < lo {
        [(0.0, -25.0), (1.0, 48.0), (2.0, -36.0), (3.0, 16.0), (4.0, -3.0)]
    } else if t + 2.0 * h > hi {
        [(0.0, 25.0), (-1.0, -48.0), (-2.0, 36.0), (-3.0, -16.0), (-4.0, 3.0)]
    } else {
        [(-2.0, 1.0), (-1.0, -8.0), (0.0, 0.0), (1.0, 8.0), (2.0, -1.0)]
    };
    let mut acc = 0.0;
    for (k, c) in w {
        if c != 0.0 {
            acc += c * f(t + k * h)?;
        }
    }
    Ok(acc / (12.0 * h))
}

#[derive(Clone, Debug, PartialEq)]
pub struct GmcResidual {
    pub domain: Domain,
    /// `omega_uv + e^omega (H^2 - 1)/2 - 2 Q R e^-omega` per node.
    pub gauss: Vec<f64>,
    /// Codazzi part; identically zero for constant `H` with `Q(u)`, `R(v)`.
    pub codazzi: Vec<f64>,
}

impl GmcResidual {
    /// Largest `|gauss|` with its node.
    pub fn max(&self) -> (f64, usize, usize) {
        let mut best = (0.0, 0, 0);
        for (k, r) in self.gauss.iter().enumerate() {
            if r.abs() > best.0 || r.is_nan() {
                best = (r.abs(), k / self.domain.nv(), k % self.domain.nv());
            }
        }
        best
    }
}

/// `omega_uv` is the 4th-order difference (step `fd_step`) in `v` of `omega_u`.
pub fn gmc_residual(data: &GmcData, domain: &Domain, tol: &Tolerances) -> Result<GmcResidual> {
    let rows: Vec<Vec<f64>> = (0..domain.nu())
        .into_par_iter()
        .map(|i| {
            (0..domain.nv())
                .map(|j| {
                    let (u, v) = domain.point(i, j);
                    let w = data.omega.evaluate(u, v)?;
                    let w_uv = d4(|t| Ok(data.omega.evaluate_grad(u, t)?.1), v, tol.fd_step, domain.v.lo, domain.v.hi)?;
                    let (q, r) = (data.q.evaluate(u)?, data.r.evaluate(v)?);
                    Ok(w_uv + 0.5 * w.exp() * (data.h * data.h - 1.0) - 2.0 * q * r * (-w).exp())
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok(GmcResidual { domain: *domain, gauss: rows.concat(), codazzi: vec![0.0; domain.len()] })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LaxMatrices {
    pub u1: Mat2,
    pub v1: Mat2,
    pub u2: Mat2,
    pub v2: Mat2,
}

pub fn lax_matrices(data: &GmcData, action: Action, u: f64, v: f64) -> Result<LaxMatrices> {
    let (w, wu, wv) = data.omega.evaluate_grad(u, v)?;
    let (q, r, h) = (data.q.evaluate(u)?, data.r.evaluate(v)?, data.h);
    let (ep, em) = ((0.5 * w).exp(), (-0.5 * w).exp());
    let u1 = Mat2::new(wu / 4.0, 0.5 * ep * (h + 1.0), -em * q, -wu / 4.0);
    let v1 = Mat2::new(-wv / 4.0, em * r, -0.5 * ep * (h - 1.0), wv / 4.0);
    let (u2, v2) = match action {
        Action::Mu => (
            Mat2::new(-wu / 4.0, em * q, -0.5 * ep * (h - 1.0), wu / 4.0),
            Mat2::new(wv / 4.0, 0.5 * ep * (h + 1.0), -em * r, -wv / 4.0),
        ),
        Action::Nu => (
            Mat2::new(wu / 4.0, 0.5 * ep * (h - 1.0), -em * q, -wu / 4.0),
            Mat2::new(-wv / 4.0, em * r, -0.5 * ep * (h + 1.0), wv / 4.0),
        ),
    };
    Ok(LaxMatrices { u1, v1, u2, v2 })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LaxOptions {
    /// Grid node `(i, j)` where the initial frames are imposed.
    pub anchor: (usize, usize),
    pub init1: Mat2,
    pub init2: Mat2,
    /// RK4 steps per grid cell; `None` picks about one per `2.5e-3`.
    pub substeps: Option<usize>,
}

impl Default for LaxOptions {
    fn default() -> Self {
        LaxOptions { anchor: (0, 0), init1: Mat2::new(1.0, 0.0, 0.0, 1.0), init2: Mat2::new(1.0, 0.0, 0.0, 1.0), substeps: None }
    }
}

/// Frames on the grid, both legs at every node.
#[derive(Clone, Debug, PartialEq)]
pub struct LaxFrames {
    pub domain: Domain,
    pub action: Action,
    pub phi1: Vec<GroupElement>,
    pub phi2: Vec<GroupElement>,
    /// Largest entry difference against the transposed sweep.
    pub path_defect: f64,
    /// `path_defect > path_tol`.
    pub path_warning: bool,
}

impl LaxFrames {
    pub fn at(&self, i: usize, j: usize) -> (Mat2, Mat2) {
        let k = self.domain.index(i, j);
        (self.phi1[k].mat(), self.phi2[k].mat())
    }

    /// `Phi1 Phi2^t` or `Psi1 Psi2^-1`.
    pub fn assemble(&self) -> SurfaceGridH31 {
        let points = self
            .phi1
            .iter()
            .zip(&self.phi2)
            .map(|(a, b)| match self.action {
                Action::Mu => a.mat() * b.mat().transpose(),
                Action::Nu => a.mat() * b.inverse(),
            })
            .collect();
        SurfaceGridH31 { domain: self.domain, points, assembly: self.action, mask: vec![false; self.domain.len()] }
    }
}

type Pair = (Mat2, Mat2);

/// March both frames from `t0` to `t1` along `u` (`along_u`) or `v`.
fn march(
    data: &GmcData,
    action: Action,
    y: Pair,
    fixed: f64,
    t0: f64,
    t1: f64,
    steps: usize,
    along_u: bool,
) -> Result<Pair> {
    let h = (t1 - t0) / steps as f64;
    let pick = |t: f64, first: bool| -> Result<Mat2> {
        let m = if along_u { lax_matrices(data, action, t, fixed)? } else { lax_matrices(data, action, fixed, t)? };
        Ok(match (along_u, first) {
            (true, true) => m.u1,
            (true, false) => m.u2,
            (false, true) => m.v1,
            (false, false) => m.v2,
        })
    };
    let (mut a, mut b) = y;
    for k in 0..steps {
        let t = t0 + h * k as f64;
        a = rk4_step(a, t, h, false, &|s| pick(s, true))?;
        b = rk4_step(b, t, h, false, &|s| pick(s, false))?;
    }
    Ok((a, b))
}

/// Integrates along axis `outer` through the anchor, then every line of the
/// other axis outward from it. Returns row-major `(Phi1, Phi2)`.
fn sweep(data: &GmcData, action: Action, domain: &Domain, opts: &LaxOptions, steps: usize, u_first: bool) -> Result<Vec<Pair>> {
    let (ai, aj) = opts.anchor;
    let (first, second) = if u_first { (domain.u, domain.v) } else { (domain.v, domain.u) };
    let (a_first, a_second) = if u_first { (ai, aj) } else { (aj, ai) };
    let fixed0 = second.at(a_second);
    let line = |start: Pair, fixed: f64, axis: crate::surface::Axis, anchor: usize, along_u: bool| -> Result<Vec<Pair>> {
        let mut out = vec![start; axis.n];
        for k in anchor + 1..axis.n {
            out[k] = march(data, action, out[k - 1], fixed, axis.at(k - 1), axis.at(k), steps, along_u)?;
        }
        for k in (0..anchor).rev() {
            out[k] = march(data, action, out[k + 1], fixed, axis.at(k + 1), axis.at(k), steps, along_u)?;
        }
        Ok(out)
    };
    let base = line((opts.init1, opts.init2), fixed0, first, a_first, u_first)?;
    let lines: Vec<Vec<Pair>> = base
        .par_iter()
        .enumerate()
        .map(|(k, start)| line(*start, first.at(k), second, a_second, !u_first))
        .collect::<Result<_>>()?;
    let mut out = vec![(Mat2::ZERO, Mat2::ZERO); domain.len()];
    for (k, l) in lines.into_iter().enumerate() {
        for (m, p) in l.into_iter().enumerate() {
            let (i, j) = if u_first { (k, m) } else { (m, k) };
            out[domain.index(i, j)] = p;
        }
    }
    Ok(out)
}

fn default_substeps(domain: &Domain) -> usize {
    let h = domain.u.step().max(domain.v.step());
    ((h / 2.5e-3).ceil() as usize).max(1)
}

/// Rejects data whose compatibility residual exceeds `compat_tol`, then integrates.
pub fn integrate_lax(data: &GmcData, action: Action, domain: &Domain, opts: &LaxOptions, tol: &Tolerances) -> Result<LaxFrames> {
    let res = gmc_residual(data, domain, tol)?;
    let (worst, i, j) = res.max();
    if !(worst <= tol.compat_tol) {
        let (u, v) = domain.point(i, j);
        return Err(Error::Compatibility { residual: worst, u, v, tol: tol.compat_tol });
    }
    integrate_lax_unchecked(data, action, domain, opts, tol)
}

/// Integration without the compatibility gate; the defect then measures the violation.
pub fn integrate_lax_unchecked(
    data: &GmcData,
    action: Action,
    domain: &Domain,
    opts: &LaxOptions,
    tol: &Tolerances,
) -> Result<LaxFrames> {
    let (ai, aj) = opts.anchor;
    if ai >= domain.nu() || aj >= domain.nv() {
        return Err(Error::Grid(format!("anchor ({ai}, {aj}) outside {}x{} grid", domain.nu(), domain.nv())));
    }
    for m in [opts.init1, opts.init2] {
        GroupElement::new(m, tol)?;
    }
    let steps = opts.substeps.unwrap_or_else(|| default_substeps(domain)).max(1);
    let main = sweep(data, action, domain, opts, steps, true)?;
    let alt = sweep(data, action, domain, opts, steps, false)?;
    let path_defect = main
        .iter()
        .zip(&alt)
        .map(|(a, b)| (a.0 - b.0).max_abs().max((a.1 - b.1).max_abs()))
        .fold(0.0, f64::max);
    let mut phi1 = Vec::with_capacity(main.len());
    let mut phi2 = Vec::with_capacity(main.len());
    for (k, (a, b)) in main.into_iter().enumerate() {
        for m in [a, b] {
            let drift = (m.det() - 1.0).abs();
            if !(drift <= tol.det_drift) {
                let (u, _) = domain.point(k / domain.nv(), k % domain.nv());
                return Err(Error::StepFailure { index: k, t: u, drift });
            }
        }
        phi1.push(GroupElement::from_integrator(a));
        phi2.push(GroupElement::from_integrator(b));
    }
    Ok(LaxFrames { domain: *domain, action, phi1, phi2, path_defect, path_warning: path_defect > tol.path_tol })
}

/// Frame logarithmic derivative `F^-1 F'` (or `(F^-1)' F` for the nu leg) at the nodes.
fn log_derivative(curve: &FrameCurve) -> Vec<Mat2> {
    let h = curve.axis.step();
    let n = curve.samples.len();
    let (series, other): (Vec<Mat2>, Vec<Mat2>) = match curve.leg {
        NullLeg::AntiholomorphicNu => (
            curve.samples.iter().map(|g| g.inverse()).collect(),
            curve.samples.iter().map(|g| g.mat()).collect(),
        ),
        _ => (curve.samples.iter().map(|g| g.mat()).collect(), curve.samples.iter().map(|g| g.inverse()).collect()),
    };
    let comp = |k: usize| -> Vec<f64> {
        let line: Vec<f64> = series.iter().map(|m| m.entries()[k]).collect();
        line_derivative(&line, h)
    };
    let d: Vec<Vec<f64>> = (0..4).map(comp).collect();
    (0..n)
        .map(|i| {
            let dm = Mat2::new(d[0][i], d[1][i], d[2][i], d[3][i]);
            match curve.leg {
                NullLeg::AntiholomorphicNu => dm * other[i],
                _ => other[i] * dm,
            }
        })
        .collect()
}

fn extract_leg(curve: &FrameCurve, tol: &Tolerances) -> Result<(ScalarField1D, ScalarField1D)> {
    let logs = log_derivative(curve);
    let mut s = Vec::with_capacity(logs.len());
    let mut w = Vec::with_capacity(logs.len());
    for (i, c) in logs.iter().enumerate() {
        // mu legs: [[s, -s^2], [1, -s]] w; nu leg: [[s, 1], [-s^2, -s]] w
        let (num, den) = match curve.leg {
            NullLeg::AntiholomorphicNu => (c.a, c.b),
            _ => (c.a, c.c),
        };
        if den.abs() < tol.tol_degen {
            return Err(Error::Division { t: curve.axis.at(i), value: den });
        }
        s.push(num / den);
        w.push(den);
    }
    let (t0, dt) = (curve.axis.lo, curve.axis.step());
    Ok((ScalarField1D::sampled(t0, dt, s)?, ScalarField1D::sampled(t0, dt, w)?))
}

/// Sampled `(q, f, r, g)` read off the frames by 4th-order differences.
pub fn extract_weierstrass_data(f1: &FrameCurve, f2: &FrameCurve, tol: &Tolerances) -> Result<WeierstrassData> {
    if f1.leg != NullLeg::Holomorphic {
        return Err(Error::LegMismatch { expected: NullLeg::Holomorphic.name(), found: f1.leg.name() });
    }
    if f2.leg == NullLeg::Holomorphic {
        return Err(Error::LegMismatch { expected: NullLeg::AntiholomorphicMu.name(), found: f2.leg.name() });
    }
    let (q, f) = extract_leg(f1, tol)?;
    let (r, g) = extract_leg(f2, tol)?;
    Ok(WeierstrassData { q, f, r, g })
}

/// Nullity defect `max |det(F^-1 F')|` relative to the coefficient size.
pub fn nullity_defect(curve: &FrameCurve) -> f64 {
    log_derivative(curve).iter().map(|c| c.det().abs() / (1.0 + c.max_abs() * c.max_abs())).fold(0.0, f64::max)
}
