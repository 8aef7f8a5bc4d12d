//! Timelike minimal surfaces in Minkowski 3-space from Weierstrass data.
//!
//! With data `(q, f)` in `u` and `(r, g)` in `v`,
//!
//! ```text
//! psi_u = ( (1+q^2)/2, -(1-q^2)/2, -q) f(u)
//! psi_v = (-(1+r^2)/2, -(1-r^2)/2, -r) g(v)
//! ```
//!
//! so `psi = A(u) + B(v)` and the induced metric is `(1+qr)^2 f g du dv`.

use rayon::prelude::*;

use crate::algebra::Vec3;
use crate::error::{Error, Result};
use crate::fields::ScalarField1D;
use crate::geometry::normal_e31;
use crate::quadrature;
use crate::surface::{Axis, Domain, Pole, SurfaceGridE31};
use crate::tol::Tolerances;

#[derive(Clone, Debug, PartialEq)]
pub struct WeierstrassData {
    pub q: ScalarField1D,
    pub f: ScalarField1D,
    pub r: ScalarField1D,
    pub g: ScalarField1D,
}

impl WeierstrassData {
    /// Parses `q, f` in `u` and `r, g` in `v`.
    pub fn parse(q: &str, f: &str, r: &str, g: &str) -> Result<Self> {
        Ok(WeierstrassData {
            q: ScalarField1D::parse(q, "u")?,
            f: ScalarField1D::parse(f, "u")?,
            r: ScalarField1D::parse(r, "v")?,
            g: ScalarField1D::parse(g, "v")?,
        })
    }

    /// The normalized case `f = g = 1`.
    pub fn normalized(q: &str, r: &str) -> Result<Self> {
        Self::parse(q, "1", r, "1")
    }
}

fn u_tangent(q: f64, f: f64) -> Vec3 {
    Vec3::new(0.5 * (1.0 + q * q) * f, -0.5 * (1.0 - q * q) * f, -q * f)
}

fn v_tangent(r: f64, g: f64) -> Vec3 {
    Vec3::new(-0.5 * (1.0 + r * r) * g, -0.5 * (1.0 - r * r) * g, -r * g)
}

pub fn weierstrass_derivatives(data: &WeierstrassData, u: f64, v: f64) -> Result<(Vec3, Vec3)> {
    let (q, f) = (data.q.evaluate(u)?, data.f.evaluate(u)?);
    let (r, g) = (data.r.evaluate(v)?, data.g.evaluate(v)?);
    Ok((u_tangent(q, f), v_tangent(r, g)))
}

/// `(1 + q r)^2 f g`.
pub fn minimal_metric_factor(data: &WeierstrassData, u: f64, v: f64) -> Result<f64> {
    let (q, f) = (data.q.evaluate(u)?, data.f.evaluate(u)?);
    let (r, g) = (data.r.evaluate(v)?, data.g.evaluate(v)?);
    let s = 1.0 + q * r;
    Ok(s * s * f * g)
}

/// Per-point degeneracy flags: `true` where `|(1+qr)^2 f g| <= tol_degen`.
pub fn degeneracy_mask(data: &WeierstrassData, domain: &Domain, tol: &Tolerances) -> Result<Vec<bool>> {
    let mut mask = Vec::with_capacity(domain.len());
    for i in 0..domain.nu() {
        for j in 0..domain.nv() {
            let (u, v) = domain.point(i, j);
            mask.push(minimal_metric_factor(data, u, v)?.abs() <= tol.tol_degen);
        }
    }
    Ok(mask)
}

/// Primitive of `tangent` along `axis`, vanishing at `origin`. Sums run
/// outward from the node nearest to `origin`.
fn primitive(
    axis: &Axis,
    origin: f64,
    tangent: impl Fn(f64) -> Result<Vec3> + Sync,
    tol: f64,
) -> Result<Vec<Vec3>> {
    let integrand = |t: f64| tangent(t).map(|p| p.to_array());
    let nodes = axis.nodes();
    let k = axis.nearest(origin);
    let anchor = quadrature::integrate(integrand, origin, nodes[k], tol)?;
    let segments: Vec<[f64; 3]> = nodes
        .par_windows(2)
        .map(|w| quadrature::integrate(integrand, w[0], w[1], tol))
        .collect::<Result<_>>()?;
    let mut out = vec![Vec3::ZERO; nodes.len()];
    out[k] = Vec3::new(anchor[0], anchor[1], anchor[2]);
    for i in k + 1..nodes.len() {
        let s = segments[i - 1];
        out[i] = out[i - 1] + Vec3::new(s[0], s[1], s[2]);
    }
    for i in (0..k).rev() {
        let s = segments[i];
        out[i] = out[i + 1] - Vec3::new(s[0], s[1], s[2]);
    }
    Ok(out)
}

/// Builds `psi = A(u) + B(v)` with `psi(origin) = 0`.
pub fn integrate_minimal(
    data: &WeierstrassData,
    domain: &Domain,
    origin: (f64, f64),
    tol: &Tolerances,
) -> Result<SurfaceGridE31> {
    let a = primitive(&domain.u, origin.0, |t| Ok(u_tangent(data.q.evaluate(t)?, data.f.evaluate(t)?)), tol.quadrature)?;
    let b = primitive(&domain.v, origin.1, |t| Ok(v_tangent(data.r.evaluate(t)?, data.g.evaluate(t)?)), tol.quadrature)?;
    let mut points = Vec::with_capacity(domain.len());
    for ai in &a {
        for bj in &b {
            points.push(*ai + *bj);
        }
    }
    let mask = degeneracy_mask(data, domain, tol)?;
    Ok(SurfaceGridE31 { domain: *domain, points, mask })
}

/// Projected Gauss map: the unit normal pushed through the minus
/// stereographic projection of the de Sitter 2-sphere. Equals `(q, r)`.
pub fn projected_gauss_minimal(data: &WeierstrassData, u: f64, v: f64, tol: &Tolerances) -> Result<(f64, f64)> {
    if minimal_metric_factor(data, u, v)?.abs() <= tol.tol_degen {
        return Err(Error::DegeneratePoint { u, v });
    }
    let (pu, pv) = weierstrass_derivatives(data, u, v)?;
    let n = normal_e31(pu, pv).ok_or(Error::DegeneratePoint { u, v })?;
    stereographic_s21(n, Pole::Minus)
}

/// `((x1+x2)/(1 +- x3), (-x1+x2)/(1 +- x3))` for a point of the unit de Sitter 2-sphere.
pub fn stereographic_s21(p: Vec3, pole: Pole) -> Result<(f64, f64)> {
    let defect = p.dot(p) - 1.0;
    if defect.abs() > 1e-9 {
        return Err(Error::OffQuadric { defect });
    }
    let den = 1.0 + pole.value() * p.x3;
    if den.abs() <= 1e-12 {
        return Err(Error::Pole { denominator: den });
    }
    Ok(((p.x1 + p.x2) / den, (-p.x1 + p.x2) / den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn enneper() -> WeierstrassData {
        WeierstrassData::normalized("u", "v").unwrap()
    }

    #[test]
    fn derivative_examples() {
        let d = WeierstrassData::normalized("0", "0").unwrap();
        let (pu, _) = weierstrass_derivatives(&d, 0.4, 0.1).unwrap();
        assert_eq!(pu, Vec3::new(0.5, -0.5, 0.0));
        let d = WeierstrassData::parse("1", "2", "0", "1").unwrap();
        let (pu, _) = weierstrass_derivatives(&d, 0.0, 0.0).unwrap();
        assert_eq!(pu, Vec3::new(2.0, 0.0, -2.0));
    }

    #[test]
    fn metric_factor_examples() {
        let d = WeierstrassData::normalized("0", "0").unwrap();
        assert_eq!(minimal_metric_factor(&d, 0.2, 0.3).unwrap(), 1.0);
        let (pu, pv) = weierstrass_derivatives(&d, 0.2, 0.3).unwrap();
        assert_eq!(2.0 * pu.dot(pv), 1.0);
        assert_eq!(minimal_metric_factor(&enneper(), 1.0, 1.0).unwrap(), 4.0);
        assert_eq!(minimal_metric_factor(&enneper(), 1.0, -1.0).unwrap(), 0.0);
        let dom = Domain::square(-1.0, 1.0, 3).unwrap();
        let mask = degeneracy_mask(&enneper(), &dom, &Tolerances::default()).unwrap();
        assert_eq!(mask.iter().filter(|m| **m).count(), 2);
    }

    #[test]
    fn enneper_primitive_closed_form() {
        let dom = Domain::square(-1.0, 1.0, 21).unwrap();
        let s = integrate_minimal(&enneper(), &dom, (0.0, 0.0), &Tolerances::default()).unwrap();
        let j0 = dom.v.nearest(0.0);
        for i in 0..21 {
            let u = dom.u.at(i);
            let want = Vec3::new(u / 2.0 + u.powi(3) / 6.0, -u / 2.0 + u.powi(3) / 6.0, -u * u / 2.0);
            let got = s.at(i, j0);
            assert!((got - want).to_array().iter().all(|x| x.abs() < 1e-13), "{got:?} {want:?}");
        }
        assert_eq!(s.at(dom.u.nearest(0.0), j0), Vec3::ZERO);
    }

    #[test]
    fn mixed_difference_vanishes() {
        let h = 1e-3;
        let dom = Domain::new((0.2, 0.2 + 10.0 * h), (-0.3, -0.3 + 10.0 * h), 11, 11).unwrap();
        let d = WeierstrassData::parse("sinh(u)", "exp(u)", "cos(v)", "1 + v^2").unwrap();
        let s = integrate_minimal(&d, &dom, (0.2, -0.3), &Tolerances::default()).unwrap();
        for i in 1..10 {
            for j in 1..10 {
                let m = s.at(i + 1, j + 1) - s.at(i + 1, j - 1) - s.at(i - 1, j + 1) + s.at(i - 1, j - 1);
                let m = (1.0 / (4.0 * h * h)) * m;
                assert!(m.to_array().iter().all(|x| x.abs() <= 1e-8), "{m:?}");
            }
        }
    }

    #[test]
    fn projected_gauss_examples() {
        let t = Tolerances::default();
        let (a, b) = projected_gauss_minimal(&enneper(), 0.3, -0.2, &t).unwrap();
        assert!((a - 0.3).abs() < 1e-6 && (b + 0.2).abs() < 1e-6);
        let z = WeierstrassData::normalized("0", "0").unwrap();
        let (a, b) = projected_gauss_minimal(&z, 0.7, 0.1, &t).unwrap();
        assert!(a.abs() < 1e-15 && b.abs() < 1e-15);
        assert!(matches!(
            projected_gauss_minimal(&enneper(), 1.0, -1.0 + 1e-10, &t),
            Err(Error::DegeneratePoint { .. })
        ));
    }

    #[test]
    fn stereographic_examples() {
        assert_eq!(stereographic_s21(Vec3::new(0.0, 0.0, -1.0), Pole::Minus).unwrap(), (0.0, 0.0));
        assert!(matches!(stereographic_s21(Vec3::new(0.0, 0.0, 1.0), Pole::Minus), Err(Error::Pole { .. })));
        assert_eq!(stereographic_s21(Vec3::new(0.0, 1.0, 0.0), Pole::Minus).unwrap(), (1.0, 1.0));
        assert!(matches!(stereographic_s21(Vec3::new(0.0, 0.0, 2.0), Pole::Plus), Err(Error::OffQuadric { .. })));
    }

    proptest! {
        #[test]
        fn null_tangents_and_metric(q in -3.0..3.0f64, f in -3.0..3.0f64, r in -3.0..3.0f64, g in -3.0..3.0f64) {
            let (pu, pv) = (u_tangent(q, f), v_tangent(r, g));
            let scale = (1.0 + q * q).powi(2) * f * f + (1.0 + r * r).powi(2) * g * g;
            prop_assert!(pu.dot(pu).abs() <= 1e-12 * scale.max(1.0));
            prop_assert!(pv.dot(pv).abs() <= 1e-12 * scale.max(1.0));
            let m = (1.0 + q * r).powi(2) * f * g;
            prop_assert!((2.0 * pu.dot(pv) - m).abs() <= 1e-10 * (1.0 + m.abs()));
        }

        #[test]
        fn gauss_map_recovers_data(u in -2.0..2.0f64, v in -2.0..2.0f64) {
            let d = WeierstrassData::parse("u^3 - u", "exp(u)", "sin(v)", "2 + v").unwrap();
            prop_assume!(minimal_metric_factor(&d, u, v).unwrap().abs() > 1e-3);
            let (a, b) = projected_gauss_minimal(&d, u, v, &Tolerances::default()).unwrap();
            prop_assert!((a - (u * u * u - u)).abs() <= 1e-8 * (1.0 + a.abs()));
            prop_assert!((b - v.sin()).abs() <= 1e-8);
        }
    }
}
