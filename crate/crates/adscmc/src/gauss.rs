//! Gauss maps of timelike surfaces in anti-de Sitter 3-space.
//!
//! A null line through the origin of the split quaternions is a rank-one
//! matrix `x y^t`; it is charted by `(x1/x2, y1/y2)`. The hyperbolic Gauss
//! map is the null line `[phi + N]` (plus) or `[phi - N]` (minus).
//!
//! Derivatives here use 4th-order stencils: the maps are compared with each
//! other to `1e-6`, well below what second-order normals resolve at desk-scale
//! grids. Nodes closer than two (conformality: four) to the border are masked.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{Mat2, Vec4};
use crate::bryant::{FrameCurve, NullLeg};
use crate::error::{Error, Result};
use crate::geometry::{combine4, local4_grid, AmbientSpec, Orientation, D1};
use crate::lax::LaxFrames;
use crate::surface::{Action, Domain, Sign, SurfaceGridH31};
use crate::tol::Tolerances;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChartKind {
    /// From `phi +- N`.
    Hyperbolic,
    /// Straight from frame entries.
    Frame,
    /// From the null tangent directions `[phi_u]`, `[phi_v]`.
    Generalized,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussMapGrid {
    pub domain: Domain,
    pub sign: Sign,
    pub chart: ChartKind,
    /// Rank-one representative per node, `None` where not computed.
    pub representative: Vec<Option<Mat2>>,
    /// Chart coordinates; `None` at chart poles too.
    pub coords: Vec<Option<(f64, f64)>>,
}

impl GaussMapGrid {
    pub fn at(&self, i: usize, j: usize) -> Option<(f64, f64)> {
        self.coords[self.domain.index(i, j)]
    }

    pub fn defined(&self) -> usize {
        self.coords.iter().flatten().count()
    }

    /// Largest coordinate range over the defined nodes.
    pub fn spread(&self) -> f64 {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for (a, b) in self.coords.iter().flatten() {
            lo = [lo[0].min(*a), lo[1].min(*b)];
            hi = [hi[0].max(*a), hi[1].max(*b)];
        }
        if lo[0].is_infinite() {
            return 0.0;
        }
        (hi[0] - lo[0]).max(hi[1] - lo[1])
    }

    /// Largest chordal distance per coordinate where both maps are defined,
    /// with the node count. Each coordinate is a point of the projective line,
    /// so near a pole plain differences measure the chart, not the map.
    pub fn max_difference(&self, other: &GaussMapGrid) -> (f64, usize) {
        self.fold_pairs(other, chordal)
    }

    /// Largest plain coordinate difference where both maps are defined.
    pub fn max_abs_difference(&self, other: &GaussMapGrid) -> (f64, usize) {
        self.fold_pairs(other, |a, b| (a - b).abs())
    }

    fn fold_pairs(&self, other: &GaussMapGrid, dist: impl Fn(f64, f64) -> f64) -> (f64, usize) {
        let mut worst: f64 = 0.0;
        let mut count = 0;
        for (a, b) in self.coords.iter().zip(&other.coords) {
            if let (Some(a), Some(b)) = (a, b) {
                worst = worst.max(dist(a.0, b.0)).max(dist(a.1, b.1));
                count += 1;
            }
        }
        (worst, count)
    }

    /// Largest `|det|` of a representative, after scaling it to unit max-entry.
    pub fn max_null_defect(&self) -> f64 {
        self.representative
            .iter()
            .flatten()
            .map(|m| {
                let s = m.max_abs();
                if s > 0.0 {
                    (m.det() / (s * s)).abs()
                } else {
                    0.0
                }
            })
            .fold(0.0, f64::max)
    }
}

/// `|a - b| / (sqrt(1 + a^2) sqrt(1 + b^2))`, the sine of the angle between
/// the lines through `(a, 1)` and `(b, 1)`.
pub fn chordal(a: f64, b: f64) -> f64 {
    (a - b).abs() / ((1.0 + a * a).sqrt() * (1.0 + b * b).sqrt())
}

fn unit2(x: [f64; 2]) -> Option<[f64; 2]> {
    let n = x[0].hypot(x[1]);
    (n > 0.0 && n.is_finite()).then(|| [x[0] / n, x[1] / n])
}

/// Chart of the null line of a rank-one `m = x y^t`: `(x1/x2, y1/y2)`.
pub fn null_chart(m: Mat2, pole: f64) -> Option<(f64, f64)> {
    let (c1, c2) = ([m.a, m.c], [m.b, m.d]);
    let x = unit2(if c1[0].hypot(c1[1]) >= c2[0].hypot(c2[1]) { c1 } else { c2 })?;
    let (r1, r2) = ([m.a, m.b], [m.c, m.d]);
    let y = unit2(if r1[0].hypot(r1[1]) >= r2[0].hypot(r2[1]) { r1 } else { r2 })?;
    if x[1].abs() <= pole || y[1].abs() <= pole {
        return None;
    }
    Some((x[0] / x[1], y[0] / y[1]))
}

fn outer(x: [f64; 2], y: [f64; 2]) -> Mat2 {
    Mat2::new(x[0] * y[0], x[0] * y[1], x[1] * y[0], x[1] * y[1])
}

fn mat_of(x: [f64; 4]) -> Mat2 {
    Vec4::from_array(x).to_mat()
}

/// Null line `[phi + s N]` in the hyperbolic chart.
pub fn hyperbolic_gauss(surface: &SurfaceGridH31, orientation: Orientation, sign: Sign, tol: &Tolerances) -> GaussMapGrid {
    let local = local4_grid(surface, orientation);
    let representative: Vec<Option<Mat2>> = local
        .iter()
        .map(|l| l.map(|l| mat_of(std::array::from_fn(|k| l.p[k] + sign.value() * l.n[k]))))
        .collect();
    let coords = representative.iter().map(|m| m.and_then(|m| null_chart(m, tol.chart_pole))).collect();
    GaussMapGrid { domain: surface.domain, sign, chart: ChartKind::Hyperbolic, representative, coords }
}

/// Frames for [`frame_gauss_coordinates`].
#[derive(Clone, Copy, Debug)]
pub enum FramesRef<'a> {
    Lax(&'a LaxFrames),
    Bryant(&'a FrameCurve, &'a FrameCurve),
}

/// `F1 E F2^t` (mu) or `F1 E F2^-1` (nu) with `E` the diagonal projector
/// picked by `sign`. For mu frames plus reads `(F11/F13, F21/F23)`; for nu
/// frames `(F11/F13, -F24/F22)`.
pub fn frame_gauss_coordinates(frames: FramesRef, sign: Sign, tol: &Tolerances) -> Result<GaussMapGrid> {
    let proj = match sign {
        Sign::Plus => Mat2::new(1.0, 0.0, 0.0, 0.0),
        Sign::Minus => Mat2::new(0.0, 0.0, 0.0, 1.0),
    };
    let rep = |a: Mat2, b: Mat2, action: Action| match action {
        Action::Mu => a * proj * b.transpose(),
        Action::Nu => a * proj * b.adjugate(),
    };
    let (domain, representative): (Domain, Vec<Mat2>) = match frames {
        FramesRef::Lax(l) => (
            l.domain,
            l.phi1.iter().zip(&l.phi2).map(|(a, b)| rep(a.mat(), b.mat(), l.action)).collect(),
        ),
        FramesRef::Bryant(f1, f2) => {
            if f1.leg != NullLeg::Holomorphic {
                return Err(Error::LegMismatch { expected: NullLeg::Holomorphic.name(), found: f1.leg.name() });
            }
            let action = match f2.leg {
                NullLeg::AntiholomorphicMu => Action::Mu,
                NullLeg::AntiholomorphicNu => Action::Nu,
                NullLeg::Holomorphic => {
                    return Err(Error::LegMismatch { expected: NullLeg::AntiholomorphicMu.name(), found: f2.leg.name() })
                }
            };
            let domain = Domain { u: f1.axis, v: f2.axis };
            let mut reps = Vec::with_capacity(domain.len());
            for a in &f1.samples {
                for b in &f2.samples {
                    reps.push(rep(a.mat(), b.mat(), action));
                }
            }
            (domain, reps)
        }
    };
    let coords = representative.iter().map(|m| null_chart(*m, tol.chart_pole)).collect();
    Ok(GaussMapGrid {
        domain,
        sign,
        chart: ChartKind::Frame,
        representative: representative.into_iter().map(Some).collect(),
        coords,
    })
}

fn dominant_column(m: Mat2) -> [f64; 2] {
    if m.a.hypot(m.c) >= m.b.hypot(m.d) {
        [m.a, m.c]
    } else {
        [m.b, m.d]
    }
}

fn dominant_row(m: Mat2) -> [f64; 2] {
    if m.a.hypot(m.b) >= m.c.hypot(m.d) {
        [m.a, m.b]
    } else {
        [m.c, m.d]
    }
}

/// The pair `([phi_u]` columns x `[phi_v]` rows, `[phi_v]` columns x `[phi_u]` rows`)`
/// as plus and minus maps.
pub fn generalized_gauss(surface: &SurfaceGridH31, tol: &Tolerances) -> (GaussMapGrid, GaussMapGrid) {
    let local = local4_grid(surface, Orientation::Positive);
    let build = |sign: Sign| {
        let representative: Vec<Option<Mat2>> = local
            .iter()
            .map(|l| {
                l.map(|l| {
                    let (mu, mv) = (mat_of(l.pu), mat_of(l.pv));
                    match sign {
                        Sign::Plus => outer(dominant_column(mu), dominant_row(mv)),
                        Sign::Minus => outer(dominant_column(mv), dominant_row(mu)),
                    }
                })
            })
            .collect();
        let coords = representative.iter().map(|m| m.and_then(|m| null_chart(m, tol.chart_pole))).collect();
        GaussMapGrid { domain: surface.domain, sign, chart: ChartKind::Generalized, representative, coords }
    };
    (build(Sign::Plus), build(Sign::Minus))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Holomorphicity {
    Antiholomorphic,
    Holomorphic,
    Constant,
    Neither,
}

impl Holomorphicity {
    pub fn name(self) -> &'static str {
        match self {
            Holomorphicity::Antiholomorphic => "antiholomorphic",
            Holomorphicity::Holomorphic => "holomorphic",
            Holomorphicity::Constant => "constant",
            Holomorphicity::Neither => "neither",
        }
    }

    fn from_flags(u_free: bool, v_free: bool) -> Self {
        match (u_free, v_free) {
            (true, true) => Holomorphicity::Constant,
            (true, false) => Holomorphicity::Antiholomorphic,
            (false, true) => Holomorphicity::Holomorphic,
            (false, false) => Holomorphicity::Neither,
        }
    }
}

/// Per-node values of `x_t[0] x[1] - x[0] x_t[1]` for a frame column `x`,
/// one entry per identity, and their predicted values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityPoint {
    pub i: usize,
    pub j: usize,
    /// `[Phi1 u, Phi2 u, Phi1 v, Phi2 v]` for the plus columns.
    pub plus: [f64; 4],
    pub plus_expected: [f64; 4],
    /// Same for the minus columns.
    pub minus: [f64; 4],
    pub minus_expected: [f64; 4],
    pub plus_class: Holomorphicity,
    pub minus_class: Holomorphicity,
}

impl IdentityPoint {
    pub fn residual(&self) -> f64 {
        (0..4)
            .map(|k| (self.plus[k] - self.plus_expected[k]).abs().max((self.minus[k] - self.minus_expected[k]).abs()))
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HolomorphicityReport {
    pub points: Vec<IdentityPoint>,
    pub max_residual: f64,
    /// Common class of all points, if they agree.
    pub plus: Option<Holomorphicity>,
    pub minus: Option<Holomorphicity>,
}

fn unanimous(it: impl Iterator<Item = Holomorphicity>) -> Option<Holomorphicity> {
    let mut out = None;
    for c in it {
        match out {
            None => out = Some(c),
            Some(o) if o != c => return None,
            _ => {}
        }
    }
    out
}

/// Wronskian-type expressions of the frame columns against `e^{-w/2} Q`,
/// `e^{w/2}(H -+ 1)/2`, `e^{-w/2} R`, with `(w, H, Q, R)` measured on the
/// assembled surface. Requires mu frames.
pub fn holomorphicity_check(frames: &LaxFrames, tol: &Tolerances) -> Result<HolomorphicityReport> {
    if frames.action != Action::Mu {
        return Err(Error::Usage("the holomorphicity identities are stated for mu frames".into()));
    }
    let d = frames.domain;
    let local = local4_grid(&frames.assemble(), Orientation::Positive);
    let (hu, hv) = (d.u.step(), d.v.step());
    let entries = |leg: usize, i: usize, j: usize| {
        let (a, b) = frames.at(i, j);
        if leg == 0 {
            a
        } else {
            b
        }
    };
    // x_t[0] x[1] - x[0] x_t[1] for column `c` of leg `leg`, t = u or v
    let wronski = |leg: usize, c: usize, along_u: bool, i: usize, j: usize| {
        let col = |m: Mat2| if c == 0 { [m.a, m.c] } else { [m.b, m.d] };
        let mut dx = [0.0; 2];
        for (k, w) in D1.iter().enumerate() {
            let m = if along_u { entries(leg, i + k - 2, j) } else { entries(leg, i, j + k - 2) };
            let x = col(m);
            dx[0] += w * x[0];
            dx[1] += w * x[1];
        }
        let h = if along_u { hu } else { hv };
        let x = col(entries(leg, i, j));
        (dx[0] * x[1] - x[0] * dx[1]) / (12.0 * h)
    };
    let points: Vec<IdentityPoint> = (0..d.len())
        .into_par_iter()
        .filter_map(|k| {
            let (i, j) = (k / d.nv(), k % d.nv());
            let l = local[k]?;
            let (ep, em) = ((0.5 * l.omega).exp(), (-0.5 * l.omega).exp());
            let plus = [wronski(0, 0, true, i, j), wronski(1, 0, true, i, j), wronski(0, 0, false, i, j), wronski(1, 0, false, i, j)];
            let minus = [wronski(0, 1, true, i, j), wronski(1, 1, true, i, j), wronski(0, 1, false, i, j), wronski(1, 1, false, i, j)];
            let plus_expected = [em * l.q, 0.5 * ep * (l.h - 1.0), 0.5 * ep * (l.h - 1.0), em * l.r];
            let minus_expected = [0.5 * ep * (l.h + 1.0), em * l.q, em * l.r, 0.5 * ep * (l.h + 1.0)];
            let small = |a: f64, b: f64| a.abs() <= tol.tol_hol && b.abs() <= tol.tol_hol;
            Some(IdentityPoint {
                i,
                j,
                plus,
                plus_expected,
                minus,
                minus_expected,
                plus_class: Holomorphicity::from_flags(small(plus[0], plus[1]), small(plus[2], plus[3])),
                minus_class: Holomorphicity::from_flags(small(minus[0], minus[1]), small(minus[2], minus[3])),
            })
        })
        .collect();
    let max_residual = points.iter().map(IdentityPoint::residual).fold(0.0, f64::max);
    Ok(HolomorphicityReport {
        plus: unanimous(points.iter().map(|p| p.plus_class)),
        minus: unanimous(points.iter().map(|p| p.minus_class)),
        max_residual,
        points,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConformalityPoint {
    pub i: usize,
    pub j: usize,
    /// `2 <G_u, G_v>`, the `du dv` coefficient of the pulled-back metric.
    pub coefficient: f64,
    /// `<G_u, G_u>` and `<G_v, G_v>`.
    pub diagonal: (f64, f64),
    /// `|2 <G_u, G_v> + K e^w|`.
    pub residual: f64,
}

/// Pulls the metric back through `G = phi +- N` and compares it with `-K ds^2`.
pub fn gauss_conformality_check(surface: &SurfaceGridH31, orientation: Orientation, sign: Sign) -> Vec<ConformalityPoint> {
    let amb = AmbientSpec::h31();
    let d = surface.domain;
    let local = local4_grid(surface, orientation);
    let g = |k: usize| local[k].map(|l| -> [f64; 4] { std::array::from_fn(|c| l.p[c] + sign.value() * l.n[c]) });
    let (hu, hv) = (d.u.step(), d.v.step());
    (0..d.len())
        .into_par_iter()
        .filter_map(|k| {
            let (i, j) = (k / d.nv(), k % d.nv());
            let l = local[k]?;
            if i < 4 || j < 4 || i + 4 >= d.nu() || j + 4 >= d.nv() {
                return None;
            }
            let col: Vec<[f64; 4]> = (0..5).map(|a| g(d.index(i + a - 2, j))).collect::<Option<_>>()?;
            let row: Vec<[f64; 4]> = (0..5).map(|b| g(d.index(i, j + b - 2))).collect::<Option<_>>()?;
            let gu = combine4(&col, &D1, 1.0 / (12.0 * hu));
            let gv = combine4(&row, &D1, 1.0 / (12.0 * hv));
            let coefficient = 2.0 * amb.dot(&gu, &gv);
            Some(ConformalityPoint {
                i,
                j,
                coefficient,
                diagonal: (amb.dot(&gu, &gu), amb.dot(&gv, &gv)),
                residual: (coefficient + l.k * l.omega.exp()).abs(),
            })
        })
        .collect()
}
