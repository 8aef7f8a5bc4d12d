//! Closed-form examples: Enneper cousins, the B-scroll, the horosphere and the
//! minimal surfaces sharing their data.
//!
//! All entries use `f = g = 1`. With `F_iso(t) = [[cosh t, sinh t - t cosh t],
//! [sinh t, cosh t - t sinh t]]` (data `q = t`) and `F_anti(t) = [[cos t,
//! -sin t + t cos t], [sin t, cos t + t sin t]]` (data `q = -t`):
//!
//! | name               | (q, r)  | surface                      |
//! |--------------------|---------|------------------------------|
//! | enneper-isothermic | (u, v)  | `F_iso(u) F_iso(v)^t`        |
//! | enneper-anti       | (-u, v) | `F_anti(u) F_iso(v)^t`       |
//! | b-scroll           | (u, 0)  | `F_iso(u) [[1, v], [0, 1]]`  |
//! | horosphere         | (0, 0)  | `[[1, v], [u, 1 + u v]]`     |
//!
//! `minimal-enneper` and `minimal-b-scroll` live in Minkowski space and have
//! no transcribed closed form; they are built by quadrature.

use serde::{Deserialize, Serialize};

use crate::algebra::{GroupElement, Mat2};
use crate::bryant::{assemble_mu, integrate_frame, FrameCurve, NullLeg};
use crate::error::{Error, Result};
use crate::geometry::{geometry_report, AmbientKind, AmbientSpec, Check, GeometryReport, Orientation};
use crate::minimal::{integrate_minimal, WeierstrassData};
use crate::surface::{Action, Domain, Surface, SurfaceGridH31};
use crate::tol::Tolerances;

pub const NAMES: [&str; 6] = ["enneper-isothermic", "enneper-anti", "b-scroll", "horosphere", "minimal-enneper", "minimal-b-scroll"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Leg {
    F1,
    F2,
}

/// Properties a verified build must show, under the positive orientation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Expected {
    pub h: f64,
    pub umbilic: bool,
    pub q: f64,
    pub r: f64,
    /// Constant Gaussian curvature, where it is one.
    pub k: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GalleryEntry {
    pub name: &'static str,
    /// `(q, f, r, g)` sources.
    pub sources: [&'static str; 4],
    pub ambient: AmbientKind,
    pub expected: Expected,
    pub domain: Domain,
    /// Domain clear of frame-chart poles, for Gauss map checks.
    pub gauss_domain: Domain,
    pub notes: &'static str,
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Closed {
    Iso,
    Anti,
    Nilpotent,
}

fn closed(kind: Closed, t: f64) -> Mat2 {
    match kind {
        Closed::Iso => {
            let (c, s) = (t.cosh(), t.sinh());
            Mat2::new(c, s - t * c, s, c - t * s)
        }
        Closed::Anti => {
            let (c, s) = (t.cos(), t.sin());
            Mat2::new(c, -s + t * c, s, c + t * s)
        }
        Closed::Nilpotent => Mat2::new(1.0, 0.0, t, 1.0),
    }
}

fn legs(name: &str) -> Option<(Closed, Closed)> {
    match name {
        "enneper-isothermic" => Some((Closed::Iso, Closed::Iso)),
        "enneper-anti" => Some((Closed::Anti, Closed::Iso)),
        "b-scroll" => Some((Closed::Iso, Closed::Nilpotent)),
        "horosphere" => Some((Closed::Nilpotent, Closed::Nilpotent)),
        _ => None,
    }
}

pub fn gallery(name: &str) -> Result<GalleryEntry> {
    let square = |lo, hi, n| Domain::square(lo, hi, n).expect("static domain");
    let wide = square(-1.5, 1.5, 101);
    let enneper = square(-0.75, 0.75, 51);
    let h31 = AmbientKind::H31;
    let e = |h, umbilic, q, r, k| Expected { h, umbilic, q, r, k };
    let entry = match name {
        "enneper-isothermic" => GalleryEntry {
            name: "enneper-isothermic",
            sources: ["u", "1", "v", "1"],
            ambient: h31,
            expected: e(1.0, false, -1.0, -1.0, None),
            domain: enneper,
            gauss_domain: enneper,
            notes: "degenerate along 1 + uv = 0",
        },
        "enneper-anti" => GalleryEntry {
            name: "enneper-anti",
            sources: ["-u", "1", "v", "1"],
            ambient: h31,
            expected: e(1.0, false, 1.0, -1.0, None),
            domain: enneper,
            gauss_domain: enneper,
            notes: "degenerate along 1 - uv = 0",
        },
        "b-scroll" => GalleryEntry {
            name: "b-scroll",
            sources: ["u", "1", "0", "1"],
            ambient: h31,
            expected: e(1.0, false, -1.0, 0.0, Some(0.0)),
            domain: wide,
            gauss_domain: Domain::new((-1.5, 1.5), (0.1, 3.1), 101, 101).expect("static domain"),
            notes: "R = 0 with Q nonzero: not umbilic",
        },
        "horosphere" => GalleryEntry {
            name: "horosphere",
            sources: ["0", "1", "0", "1"],
            ambient: h31,
            expected: e(1.0, true, 0.0, 0.0, Some(0.0)),
            domain: wide,
            gauss_domain: wide,
            notes: "totally umbilic, constant hyperbolic Gauss map",
        },
        "minimal-enneper" => GalleryEntry {
            name: "minimal-enneper",
            sources: ["u", "1", "v", "1"],
            ambient: AmbientKind::E31,
            expected: e(0.0, false, 1.0, 1.0, None),
            domain: enneper,
            gauss_domain: enneper,
            notes: "minimal cousin of enneper-isothermic",
        },
        "minimal-b-scroll" => GalleryEntry {
            name: "minimal-b-scroll",
            sources: ["u", "1", "0", "1"],
            ambient: AmbientKind::E31,
            expected: e(0.0, false, 1.0, 0.0, Some(0.0)),
            domain: wide,
            gauss_domain: wide,
            notes: "minimal cousin of b-scroll",
        },
        _ => return Err(Error::UnknownGallery { name: name.into(), valid: NAMES.join(", ") }),
    };
    Ok(entry)
}

/// Closed-form frame of a constant mean curvature entry.
pub fn oracle_frame(entry: &GalleryEntry, leg: Leg, t: f64) -> Result<Mat2> {
    let (a, b) = legs(entry.name).ok_or(Error::NoClosedForm {
        name: entry.name.into(),
        leg: match leg {
            Leg::F1 => "F1",
            Leg::F2 => "F2",
        },
    })?;
    Ok(closed(if leg == Leg::F1 { a } else { b }, t))
}

/// Closed-form surface point `F1(u) F2(v)^t`.
pub fn oracle_point(entry: &GalleryEntry, u: f64, v: f64) -> Result<Mat2> {
    Ok(oracle_frame(entry, Leg::F1, u)? * oracle_frame(entry, Leg::F2, v)?.transpose())
}

impl GalleryEntry {
    pub fn data(&self) -> Result<WeierstrassData> {
        let [q, f, r, g] = self.sources;
        WeierstrassData::parse(q, f, r, g)
    }

    pub fn ambient_spec(&self) -> AmbientSpec {
        match self.ambient {
            AmbientKind::H31 => AmbientSpec::h31(),
            AmbientKind::E31 => AmbientSpec::e31(),
        }
    }

    /// RK4 frames on the domain axes, anchored at the node nearest `0` with
    /// the closed-form value there.
    pub fn frames(&self, domain: &Domain, tol: &Tolerances) -> Result<(FrameCurve, FrameCurve)> {
        let data = self.data()?;
        let leg = |kind, leg, s: &crate::fields::ScalarField1D, w: &crate::fields::ScalarField1D, axis: &crate::surface::Axis| {
            let anchor = axis.at(axis.nearest(0.0));
            let init = GroupElement::renormalize(oracle_frame(self, leg, anchor)?)?;
            integrate_frame(kind, s, w, axis, anchor, &init, tol)
        };
        Ok((
            leg(NullLeg::Holomorphic, Leg::F1, &data.q, &data.f, &domain.u)?,
            leg(NullLeg::AntiholomorphicMu, Leg::F2, &data.r, &data.g, &domain.v)?,
        ))
    }

    /// Builds the surface through the integrators: Bryant-type frames for the
    /// constant mean curvature entries, quadrature for the minimal ones.
    pub fn build(&self, domain: &Domain, tol: &Tolerances) -> Result<Surface> {
        match self.ambient {
            AmbientKind::H31 => {
                let (f1, f2) = self.frames(domain, tol)?;
                Ok(Surface::H31(assemble_mu(&f1, &f2, tol)?))
            }
            AmbientKind::E31 => {
                let origin = (domain.u.at(domain.u.nearest(0.0)), domain.v.at(domain.v.nearest(0.0)));
                Ok(Surface::E31(integrate_minimal(&self.data()?, domain, origin, tol)?))
            }
        }
    }

    /// The closed form sampled on `domain`.
    pub fn closed_form(&self, domain: &Domain) -> Result<SurfaceGridH31> {
        legs(self.name).ok_or(Error::NoClosedForm { name: self.name.into(), leg: "surface" })?;
        Ok(SurfaceGridH31::from_fn(*domain, Action::Mu, |u, v| {
            oracle_point(self, u, v).expect("entry has closed-form legs")
        }))
    }

    /// Geometry report plus checks against the expected properties.
    pub fn verify(&self, surface: &Surface, orientation: Orientation, tol: &Tolerances) -> Result<(GeometryReport, Vec<Check>)> {
        let report = geometry_report(surface.as_ref(), &self.ambient_spec(), orientation, tol)?;
        let s = orientation.sign();
        let mut checks = report.surface_checks(surface.as_ref(), Some(s * self.expected.h), tol);
        let hopf_tol = tol.fd_scaled(tol.sff, report.summary.step);
        let pts = &report.data.points;
        for (name, want, get) in [
            ("hopf Q", s * self.expected.q, (|p: &crate::geometry::PointData| p.q) as fn(&_) -> f64),
            ("hopf R", s * self.expected.r, |p| p.r),
        ] {
            let (mut worst, mut at) = (0.0_f64, (0.0, 0.0));
            for p in pts {
                let e = (get(p) - want).abs();
                if e > worst || e.is_nan() {
                    worst = e;
                    at = (p.u, p.v);
                }
            }
            checks.push(Check { name: name.into(), value: worst, tolerance: hopf_tol, at, pass: worst <= hopf_tol });
        }
        let umb = report.summary.umbilic_fraction;
        let umb_err = if self.expected.umbilic { 1.0 - umb } else { umb };
        checks.push(Check { name: "umbilic fraction".into(), value: umb_err, tolerance: 0.0, at: (0.0, 0.0), pass: umb_err == 0.0 });
        Ok((report, checks))
    }
}
