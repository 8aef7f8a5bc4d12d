//! Finite-difference geometry of sampled timelike surfaces.
//!
//! In null coordinates the metric is `e^w du dv` with `e^w = 2<phi_u, phi_v>`,
//! and with unit normal `N`
//!
//! ```text
//! H = 2 e^-w <phi_uv, N>,   Q = <phi_uu, N>,   R = <phi_vv, N>,
//! K = Kbar + H^2 - 4 e^-2w Q R.
//! ```
//!
//! `K` is cross-checked against the shape operator built from differences of
//! the normal field, which does not use the relation above.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::Vec3;
use crate::error::{Error, Result};
use crate::surface::{Domain, SurfaceRef};
use crate::tol::Tolerances;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AmbientKind {
    H31,
    E31,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AmbientSpec {
    pub kind: AmbientKind,
    pub kbar: f64,
}

impl AmbientSpec {
    pub fn h31() -> Self {
        AmbientSpec { kind: AmbientKind::H31, kbar: -1.0 }
    }

    pub fn e31() -> Self {
        AmbientSpec { kind: AmbientKind::E31, kbar: 0.0 }
    }

    fn signature(&self) -> [f64; 4] {
        match self.kind {
            AmbientKind::H31 => [-1.0, -1.0, 1.0, 1.0],
            AmbientKind::E31 => [-1.0, 1.0, 1.0, 0.0],
        }
    }

    pub(crate) fn dot(&self, a: &[f64; 4], b: &[f64; 4]) -> f64 {
        let s = self.signature();
        (0..4).map(|k| s[k] * a[k] * b[k]).sum()
    }
}

/// `Positive` is the orientation giving `H = +1` on the Bryant-type examples.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Positive,
    Negative,
}

impl Orientation {
    pub fn sign(self) -> f64 {
        match self {
            Orientation::Positive => 1.0,
            Orientation::Negative => -1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointData {
    pub i: usize,
    pub j: usize,
    pub u: f64,
    pub v: f64,
    pub omega: f64,
    pub normal: [f64; 4],
    pub h: f64,
    pub q: f64,
    pub r: f64,
    pub k: f64,
    /// `Kbar + det(II I^-1)`; absent on the outermost interior ring.
    pub k_shape: Option<f64>,
    pub conf_u: f64,
    pub conf_v: f64,
    /// `|H^2 - (K_shape - Kbar) - 4 e^-2w Q R|`.
    pub gauss_eq: Option<f64>,
    pub sff: Option<f64>,
}

/// Per-point data on interior nodes `1..nu-1 x 1..nv-1`, row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FundamentalData {
    pub domain: Domain,
    pub ambient: AmbientSpec,
    pub orientation: Orientation,
    pub points: Vec<PointData>,
}

impl FundamentalData {
    fn inner_nv(&self) -> usize {
        self.domain.nv() - 2
    }

    /// Data at grid node `(i, j)`, if interior.
    pub fn get(&self, i: usize, j: usize) -> Option<&PointData> {
        if i == 0 || j == 0 || i + 1 >= self.domain.nu() || j + 1 >= self.domain.nv() {
            return None;
        }
        self.points.get((i - 1) * self.inner_nv() + j - 1)
    }

    fn normal_at(&self, i: usize, j: usize) -> [f64; 4] {
        self.points[(i - 1) * self.inner_nv() + j - 1].normal
    }

    pub fn step(&self) -> f64 {
        self.domain.u.step().max(self.domain.v.step())
    }
}

struct Jet {
    p: [f64; 4],
    pu: [f64; 4],
    pv: [f64; 4],
    puu: [f64; 4],
    pvv: [f64; 4],
    puv: [f64; 4],
}

fn jet(s: &SurfaceRef, i: usize, j: usize) -> Jet {
    let d = s.domain();
    let (hu, hv) = (d.u.step(), d.v.step());
    let c = |a: usize, b: usize| s.coords(a, b);
    let (p, e, w, n, so) = (c(i, j), c(i + 1, j), c(i - 1, j), c(i, j + 1), c(i, j - 1));
    let (ne, nw, se, sw) = (c(i + 1, j + 1), c(i - 1, j + 1), c(i + 1, j - 1), c(i - 1, j - 1));
    let mut out = Jet { p, pu: [0.0; 4], pv: [0.0; 4], puu: [0.0; 4], pvv: [0.0; 4], puv: [0.0; 4] };
    for k in 0..4 {
        out.pu[k] = (e[k] - w[k]) / (2.0 * hu);
        out.pv[k] = (n[k] - so[k]) / (2.0 * hv);
        out.puu[k] = (e[k] - 2.0 * p[k] + w[k]) / (hu * hu);
        out.pvv[k] = (n[k] - 2.0 * p[k] + so[k]) / (hv * hv);
        out.puv[k] = (ne[k] - se[k] - nw[k] + sw[k]) / (4.0 * hu * hv);
    }
    out
}

fn det3(m: [[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn det4(m: [[f64; 4]; 4]) -> f64 {
    (0..4)
        .map(|c| {
            let minor = minor3(&[m[1], m[2], m[3]], c);
            let sign = if c % 2 == 0 { 1.0 } else { -1.0 };
            sign * m[0][c] * det3(minor)
        })
        .sum()
}

fn minor3(rows: &[[f64; 4]; 3], skip: usize) -> [[f64; 3]; 3] {
    let mut m = [[0.0; 3]; 3];
    for (r, row) in rows.iter().enumerate() {
        let mut k = 0;
        for (c, x) in row.iter().enumerate() {
            if c != skip {
                m[r][k] = *x;
                k += 1;
            }
        }
    }
    m
}

fn cross3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn sub(a: &[f64; 4], b: &[f64; 4]) -> [f64; 4] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]]
}

fn add(a: &[f64; 4], b: &[f64; 4]) -> [f64; 4] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
}

/// Unit normal orthogonal to `p, pu, pv` (H31) or `pu, pv` (E31), oriented so
/// that `det[p, p_x, p_y, N] > 0` (resp. `det[p_x, p_y, N] > 0`) with
/// `p_x = p_u - p_v`, `p_y = p_u + p_v`.
pub(crate) fn solve_normal(amb: &AmbientSpec, p: &[f64; 4], pu: &[f64; 4], pv: &[f64; 4]) -> Option<[f64; 4]> {
    let s = amb.signature();
    let lower = |x: &[f64; 4]| [s[0] * x[0], s[1] * x[1], s[2] * x[2], s[3] * x[3]];
    let (px, py) = (sub(pu, pv), add(pu, pv));
    let mut n = match amb.kind {
        AmbientKind::H31 => {
            let rows = [lower(p), lower(pu), lower(pv)];
            let mut n = [0.0; 4];
            for (c, nc) in n.iter_mut().enumerate() {
                let sign = if c % 2 == 0 { 1.0 } else { -1.0 };
                *nc = sign * det3(minor3(&rows, c));
            }
            n
        }
        AmbientKind::E31 => {
            let (a, b) = (lower(pu), lower(pv));
            let c = cross3([a[0], a[1], a[2]], [b[0], b[1], b[2]]);
            [c[0], c[1], c[2], 0.0]
        }
    };
    let norm2 = amb.dot(&n, &n);
    let scale = n.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    if !(norm2 > 1e-14 * scale * scale) || !norm2.is_finite() {
        return None;
    }
    let inv = 1.0 / norm2.sqrt();
    n.iter_mut().for_each(|x| *x *= inv);
    let orient = match amb.kind {
        AmbientKind::H31 => det4([*p, px, py, n]),
        AmbientKind::E31 => det3([[px[0], px[1], px[2]], [py[0], py[1], py[2]], [n[0], n[1], n[2]]]),
    };
    if orient < 0.0 {
        n.iter_mut().for_each(|x| *x = -*x);
    }
    Some(n)
}

/// Oriented unit normal of a timelike plane in Minkowski 3-space.
pub fn normal_e31(pu: Vec3, pv: Vec3) -> Option<Vec3> {
    let amb = AmbientSpec::e31();
    let a = [pu.x1, pu.x2, pu.x3, 0.0];
    let b = [pv.x1, pv.x2, pv.x3, 0.0];
    solve_normal(&amb, &[0.0; 4], &a, &b).map(|n| Vec3::new(n[0], n[1], n[2]))
}

pub fn fundamental_data<'a>(
    surface: impl Into<SurfaceRef<'a>>,
    ambient: &AmbientSpec,
    orientation: Orientation,
) -> Result<FundamentalData> {
    let s: SurfaceRef = surface.into();
    let kind_ok = matches!(
        (&s, ambient.kind),
        (SurfaceRef::H31(_), AmbientKind::H31) | (SurfaceRef::E31(_), AmbientKind::E31)
    );
    if !kind_ok {
        return Err(Error::Usage(format!("surface does not live in the {:?} ambient", ambient.kind)));
    }
    let d = *s.domain();
    if d.nu() < 5 || d.nv() < 5 {
        return Err(Error::Grid(format!("need at least 5x5 nodes, got {}x{}", d.nu(), d.nv())));
    }
    let rows: Vec<Vec<PointData>> = (1..d.nu() - 1)
        .into_par_iter()
        .map(|i| (1..d.nv() - 1).map(|j| local_point(&s, ambient, orientation, i, j)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let mut fd = FundamentalData { domain: d, ambient: *ambient, orientation, points: rows.into_iter().flatten().collect() };
    let shape: Vec<Option<ShapeSample>> = (0..fd.points.len()).into_par_iter().map(|k| shape_sample(&fd, &s, k)).collect();
    for (p, sh) in fd.points.iter_mut().zip(shape) {
        if let Some(sh) = sh {
            let det = sh.det_ii / sh.det_i;
            p.k_shape = Some(ambient.kbar + det);
            p.gauss_eq = Some((p.h * p.h - det - 4.0 * (-2.0 * p.omega).exp() * p.q * p.r).abs());
            p.sff = Some(sff_mismatch(p, &sh));
        }
    }
    Ok(fd)
}

fn local_point(s: &SurfaceRef, amb: &AmbientSpec, orientation: Orientation, i: usize, j: usize) -> Result<PointData> {
    let (u, v) = s.domain().point(i, j);
    let jt = jet(s, i, j);
    let e = 2.0 * amb.dot(&jt.pu, &jt.pv);
    if !(e > 0.0) {
        return Err(Error::DegenerateMetric { u, v, value: e });
    }
    let mut n = solve_normal(amb, &jt.p, &jt.pu, &jt.pv).ok_or(Error::NormalSolve { u, v })?;
    n.iter_mut().for_each(|x| *x *= orientation.sign());
    let omega = e.ln();
    let h = 2.0 / e * amb.dot(&jt.puv, &n);
    let q = amb.dot(&jt.puu, &n);
    let r = amb.dot(&jt.pvv, &n);
    Ok(PointData {
        i,
        j,
        u,
        v,
        omega,
        normal: n,
        h,
        q,
        r,
        k: amb.kbar + h * h - 4.0 * q * r / (e * e),
        k_shape: None,
        conf_u: amb.dot(&jt.pu, &jt.pu).abs(),
        conf_v: amb.dot(&jt.pv, &jt.pv).abs(),
        gauss_eq: None,
        sff: None,
    })
}

/// Second fundamental form `-<d phi, dN>` in null coordinates.
struct ShapeSample {
    ii_uu: f64,
    ii_uv: f64,
    ii_vv: f64,
    det_ii: f64,
    det_i: f64,
}

fn shape_sample(fd: &FundamentalData, s: &SurfaceRef, k: usize) -> Option<ShapeSample> {
    let p = &fd.points[k];
    let (i, j, d) = (p.i, p.j, &fd.domain);
    if i < 2 || j < 2 || i + 2 >= d.nu() || j + 2 >= d.nv() {
        return None;
    }
    let (hu, hv) = (d.u.step(), d.v.step());
    let nu = sub(&fd.normal_at(i + 1, j), &fd.normal_at(i - 1, j)).map(|x| x / (2.0 * hu));
    let nv = sub(&fd.normal_at(i, j + 1), &fd.normal_at(i, j - 1)).map(|x| x / (2.0 * hv));
    let jt = jet(s, i, j);
    let a = &fd.ambient;
    let ii_uu = -a.dot(&jt.pu, &nu);
    let ii_uv = -0.5 * (a.dot(&jt.pu, &nv) + a.dot(&jt.pv, &nu));
    let ii_vv = -a.dot(&jt.pv, &nv);
    let e = p.omega.exp();
    Some(ShapeSample { ii_uu, ii_uv, ii_vv, det_ii: ii_uu * ii_vv - ii_uv * ii_uv, det_i: -0.25 * e * e })
}

/// Local 4th-order geometry at one node.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Local4 {
    pub p: [f64; 4],
    pub pu: [f64; 4],
    pub pv: [f64; 4],
    pub n: [f64; 4],
    pub omega: f64,
    pub h: f64,
    pub q: f64,
    pub r: f64,
    pub k: f64,
}

pub(crate) const D1: [f64; 5] = [1.0, -8.0, 0.0, 8.0, -1.0];
pub(crate) const D2: [f64; 5] = [-1.0, 16.0, -30.0, 16.0, -1.0];

pub(crate) fn combine4(pts: &[[f64; 4]], w: &[f64], scale: f64) -> [f64; 4] {
    let mut out = [0.0; 4];
    for (p, c) in pts.iter().zip(w) {
        for k in 0..4 {
            out[k] += c * p[k];
        }
    }
    out.map(|x| x * scale)
}

fn local4(s: &SurfaceRef, amb: &AmbientSpec, orient: Orientation, i: usize, j: usize) -> Option<Local4> {
    let d = s.domain();
    if i < 2 || j < 2 || i + 2 >= d.nu() || j + 2 >= d.nv() {
        return None;
    }
    for a in i - 2..=i + 2 {
        for b in j - 2..=j + 2 {
            if s.mask()[d.index(a, b)] {
                return None;
            }
        }
    }
    let x = |a: usize, b: usize| s.coords(a, b);
    let (hu, hv) = (d.u.step(), d.v.step());
    let col: Vec<[f64; 4]> = (0..5).map(|k| x(i + k - 2, j)).collect();
    let row: Vec<[f64; 4]> = (0..5).map(|k| x(i, j + k - 2)).collect();
    let p = x(i, j);
    let pu = combine4(&col, &D1, 1.0 / (12.0 * hu));
    let pv = combine4(&row, &D1, 1.0 / (12.0 * hv));
    let puu = combine4(&col, &D2, 1.0 / (12.0 * hu * hu));
    let pvv = combine4(&row, &D2, 1.0 / (12.0 * hv * hv));
    let mut puv = [0.0; 4];
    for a in 0..5 {
        for b in 0..5 {
            let w = D1[a] * D1[b];
            if w != 0.0 {
                let y = x(i + a - 2, j + b - 2);
                for k in 0..4 {
                    puv[k] += w * y[k];
                }
            }
        }
    }
    let puv = puv.map(|t| t / (144.0 * hu * hv));
    let metric = 2.0 * amb.dot(&pu, &pv);
    if !(metric > 0.0) {
        return None;
    }
    let n = solve_normal(amb, &p, &pu, &pv)?.map(|t| t * orient.sign());
    let omega = metric.ln();
    let h = 2.0 * amb.dot(&puv, &n) / metric;
    let (q, r) = (amb.dot(&puu, &n), amb.dot(&pvv, &n));
    let k = amb.kbar + h * h - 4.0 * q * r / (metric * metric);
    Some(Local4 { p, pu, pv, n, omega, h, q, r, k })
}

fn ambient_of(s: &SurfaceRef) -> AmbientSpec {
    match s {
        SurfaceRef::H31(_) => AmbientSpec::h31(),
        SurfaceRef::E31(_) => AmbientSpec::e31(),
    }
}

pub(crate) fn local4_grid<'a>(surface: impl Into<SurfaceRef<'a>>, orient: Orientation) -> Vec<Option<Local4>> {
    let s: SurfaceRef = surface.into();
    let amb = ambient_of(&s);
    let d = *s.domain();
    (0..d.len()).into_par_iter().map(|k| local4(&s, &amb, orient, k / d.nv(), k % d.nv())).collect()
}


/// Independent curvature check with 4th-order stencils: `K` from the Gauss
/// relation against `Kbar + det(II I^-1)` with `II = -<d phi, dN>`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvaturePoint {
    pub i: usize,
    pub j: usize,
    pub u: f64,
    pub v: f64,
    pub k_relation: f64,
    pub k_shape: f64,
    pub residual: f64,
}

/// Nodes at least four from the border; masked stencils are skipped.
pub fn curvature_cross_check<'a>(surface: impl Into<SurfaceRef<'a>>, orientation: Orientation) -> Vec<CurvaturePoint> {
    let s: SurfaceRef = surface.into();
    let amb = ambient_of(&s);
    let d = *s.domain();
    let local = local4_grid(s, orientation);
    let (hu, hv) = (d.u.step(), d.v.step());
    (0..d.len())
        .into_par_iter()
        .filter_map(|k| {
            let (i, j) = (k / d.nv(), k % d.nv());
            if i < 4 || j < 4 || i + 4 >= d.nu() || j + 4 >= d.nv() {
                return None;
            }
            let l = local[k]?;
            let col: Vec<[f64; 4]> = (0..5).map(|a| local[d.index(i + a - 2, j)].map(|x| x.n)).collect::<Option<_>>()?;
            let row: Vec<[f64; 4]> = (0..5).map(|b| local[d.index(i, j + b - 2)].map(|x| x.n)).collect::<Option<_>>()?;
            let nu = combine4(&col, &D1, 1.0 / (12.0 * hu));
            let nv = combine4(&row, &D1, 1.0 / (12.0 * hv));
            let ii_uu = -amb.dot(&l.pu, &nu);
            let ii_uv = -0.5 * (amb.dot(&l.pu, &nv) + amb.dot(&l.pv, &nu));
            let ii_vv = -amb.dot(&l.pv, &nv);
            let e = l.omega.exp();
            let k_shape = amb.kbar + (ii_uu * ii_vv - ii_uv * ii_uv) / (-0.25 * e * e);
            let (u, v) = d.point(i, j);
            Some(CurvaturePoint { i, j, u, v, k_relation: l.k, k_shape, residual: (l.k - k_shape).abs() })
        })
        .collect()
}

/// Max-norm difference between `II` and `Q du^2 + R dv^2 + H I` in the
/// isothermal coordinates `u = x + y`, `v = -x + y`.
fn sff_mismatch(p: &PointData, sh: &ShapeSample) -> f64 {
    let xx = sh.ii_uu - 2.0 * sh.ii_uv + sh.ii_vv;
    let xy = sh.ii_uu - sh.ii_vv;
    let yy = sh.ii_uu + 2.0 * sh.ii_uv + sh.ii_vv;
    let e = p.omega.exp();
    let want = [p.q + p.r - p.h * e, p.q - p.r, p.q + p.r + p.h * e];
    [xx, xy, yy].iter().zip(want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

/// Recomputes the second fundamental form residual from the normals stored
/// in `fd`; `None` where the normal stencil leaves the interior.
pub fn second_form_residual<'a>(fd: &FundamentalData, surface: impl Into<SurfaceRef<'a>>) -> Vec<Option<f64>> {
    let s: SurfaceRef = surface.into();
    (0..fd.points.len())
        .map(|k| shape_sample(fd, &s, k).map(|sh| sff_mismatch(&fd.points[k], &sh)))
        .collect()
}

/// Shape operator `I^-1 II` in isothermal coordinates `(x, y)`.
pub fn shape_operator<'a>(fd: &FundamentalData, surface: impl Into<SurfaceRef<'a>>, i: usize, j: usize) -> Option<[[f64; 2]; 2]> {
    let s: SurfaceRef = surface.into();
    let p = fd.get(i, j)?;
    let k = (i - 1) * fd.inner_nv() + j - 1;
    let sh = shape_sample(fd, &s, k)?;
    let xx = sh.ii_uu - 2.0 * sh.ii_uv + sh.ii_vv;
    let xy = sh.ii_uu - sh.ii_vv;
    let yy = sh.ii_uu + 2.0 * sh.ii_uv + sh.ii_vv;
    let e = p.omega.exp();
    Some([[-xx / e, -xy / e], [xy / e, yy / e]])
}

/// Mask over `fd.points`: `true` where both Hopf coefficients are within `tol`.
pub fn umbilic_detect(fd: &FundamentalData, tol: f64) -> Vec<bool> {
    fd.points.iter().map(|p| p.q.abs() <= tol && p.r.abs() <= tol).collect()
}

/// Shifting the shape operator by `c` moves `(H, Kbar)` to `(H + c, Kbar - 2cH - c^2)`.
pub fn lawson_shift(h: f64, kbar: f64, c: f64) -> (f64, f64) {
    (h + c, kbar - 2.0 * c * h - c * c)
}

/// `S + c 1`.
pub fn shift_shape_operator(s: [[f64; 2]; 2], c: f64) -> [[f64; 2]; 2] {
    [[s[0][0] + c, s[0][1]], [s[1][0], s[1][1] + c]]
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Stat {
    pub max: f64,
    pub mean: f64,
    /// Parameter values where the maximum occurs.
    pub at: (f64, f64),
    pub count: usize,
}

impl Stat {
    fn of(items: impl Iterator<Item = (f64, (f64, f64))>) -> Stat {
        let mut st = Stat::default();
        let mut sum = 0.0;
        for (x, at) in items {
            if st.count == 0 || x > st.max {
                st.max = x;
                st.at = at;
            }
            sum += x;
            st.count += 1;
        }
        if st.count > 0 {
            st.mean = sum / st.count as f64;
        }
        st
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportSummary {
    pub conf_u: Stat,
    pub conf_v: Stat,
    pub gauss_eq: Stat,
    pub sff: Stat,
    pub min_metric: f64,
    pub h_mode: f64,
    pub h_deviation: Stat,
    pub umbilic_fraction: f64,
    pub step: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeometryReport {
    pub summary: ReportSummary,
    pub data: FundamentalData,
}

/// A named residual compared against its threshold.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub at: (f64, f64),
    pub pass: bool,
}

/// Most populated bin of width 1e-3, refined to the median of its members.
fn modal_value(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    let mut bins: Vec<i64> = xs.iter().map(|x| (x * 1e3).round() as i64).collect();
    bins.sort_unstable();
    let (mut best, mut best_n, mut k) = (bins[0], 0, 0);
    while k < bins.len() {
        let mut m = k;
        while m < bins.len() && bins[m] == bins[k] {
            m += 1;
        }
        if m - k > best_n {
            best_n = m - k;
            best = bins[k];
        }
        k = m;
    }
    let mut members: Vec<f64> = xs.iter().copied().filter(|x| (x * 1e3).round() as i64 == best).collect();
    members.sort_by(f64::total_cmp);
    members[members.len() / 2]
}

pub fn geometry_report<'a>(
    surface: impl Into<SurfaceRef<'a>>,
    ambient: &AmbientSpec,
    orientation: Orientation,
    tol: &Tolerances,
) -> Result<GeometryReport> {
    let data = fundamental_data(surface, ambient, orientation)?;
    Ok(GeometryReport::from_data(data, tol))
}

impl GeometryReport {
    pub fn from_data(data: FundamentalData, tol: &Tolerances) -> Self {
        let pts = &data.points;
        let at = |p: &PointData| (p.u, p.v);
        let hs: Vec<f64> = pts.iter().map(|p| p.h).collect();
        let h_mode = modal_value(&hs);
        let umb = umbilic_detect(&data, tol.tol_hol);
        let summary = ReportSummary {
            conf_u: Stat::of(pts.iter().map(|p| (p.conf_u, at(p)))),
            conf_v: Stat::of(pts.iter().map(|p| (p.conf_v, at(p)))),
            gauss_eq: Stat::of(pts.iter().filter_map(|p| p.gauss_eq.map(|g| (g, at(p))))),
            sff: Stat::of(pts.iter().filter_map(|p| p.sff.map(|g| (g, at(p))))),
            min_metric: pts.iter().map(|p| p.omega.exp()).fold(f64::INFINITY, f64::min),
            h_mode,
            h_deviation: Stat::of(pts.iter().map(|p| ((p.h - h_mode).abs(), at(p)))),
            umbilic_fraction: umb.iter().filter(|m| **m).count() as f64 / umb.len().max(1) as f64,
            step: data.step(),
        };
        GeometryReport { summary, data }
    }

    /// Maximal `|H - target|` over interior points.
    pub fn h_error(&self, target: f64) -> Stat {
        Stat::of(self.data.points.iter().map(|p| ((p.h - target).abs(), (p.u, p.v))))
    }

    /// Residual checks; finite-difference thresholds scale with the grid step.
    pub fn checks(&self, target_h: Option<f64>, tol: &Tolerances) -> Vec<Check> {
        let h = self.summary.step;
        let mut out = Vec::new();
        let mut push = |name: &str, st: &Stat, t: f64| {
            out.push(Check { name: name.into(), value: st.max, tolerance: t, at: st.at, pass: st.max <= t });
        };
        if let Some(target) = target_h {
            push("mean curvature", &self.h_error(target), tol.mean_curvature);
        } else {
            push("mean curvature spread", &self.summary.h_deviation, tol.mean_curvature);
        }
        push("conformality u", &self.summary.conf_u, tol.fd_scaled(tol.conformality, h));
        push("conformality v", &self.summary.conf_v, tol.fd_scaled(tol.conformality, h));
        push("gauss equation", &self.summary.gauss_eq, tol.fd_scaled(tol.gauss_eq, h));
        push("second fundamental form", &self.summary.sff, tol.fd_scaled(tol.sff, h));
        out
    }

    /// [`checks`](Self::checks) with the Gauss equation taken from
    /// [`curvature_cross_check`] on `surface`, which must be the one reported on.
    pub fn surface_checks<'a>(&self, surface: impl Into<SurfaceRef<'a>>, target_h: Option<f64>, tol: &Tolerances) -> Vec<Check> {
        let mut out = self.checks(target_h, tol);
        // 2nd-order stencils lose the corners where K blows up
        out.retain(|c| c.name != "gauss equation");
        let t = tol.fd_scaled(tol.gauss_eq, self.summary.step);
        let (mut worst, mut at) = (0.0_f64, (0.0, 0.0));
        for p in curvature_cross_check(surface, self.data.orientation) {
            if p.residual > worst || p.residual.is_nan() {
                worst = p.residual;
                at = (p.u, p.v);
            }
        }
        out.push(Check { name: "gauss equation".into(), value: worst, tolerance: t, at, pass: worst <= t });
        out
    }
}
