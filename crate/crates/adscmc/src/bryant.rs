//! Null curves in SL(2, R) and the surfaces they assemble.
//!
//! A holomorphic leg solves `F1^-1 F1' = [[q, -q^2], [1, -q]] f` in `u`; an
//! antiholomorphic leg solves the same system in `v` with `(r, g)` (mu
//! action) or `(F2^-1)' F2 = [[r, 1], [-r^2, -r]] g` (nu action). Then `F1 F2^t` resp. `F1 F2^-1` is a timelike surface with
//! `H = 1` and metric `(1 + q r)^2 f g du dv`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{GroupElement, Mat2};
use crate::error::{Error, Result};
use crate::fields::ScalarField1D;
use crate::surface::{Action, Axis, Domain, SurfaceGridH31};
use crate::tol::Tolerances;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NullLeg {
    /// `F1` along `u`.
    Holomorphic,
    /// `F2` along `v`, for the mu action.
    AntiholomorphicMu,
    /// `F2` along `v`, for the nu action.
    AntiholomorphicNu,
}

impl NullLeg {
    pub fn name(self) -> &'static str {
        match self {
            NullLeg::Holomorphic => "holomorphic",
            NullLeg::AntiholomorphicMu => "antiholomorphic-mu",
            NullLeg::AntiholomorphicNu => "antiholomorphic-nu",
        }
    }
}

/// Rank-one coefficient of the null-curve system.
pub fn null_coefficient(kind: NullLeg, s: f64, w: f64) -> Mat2 {
    match kind {
        NullLeg::Holomorphic | NullLeg::AntiholomorphicMu => Mat2::new(s * w, -s * s * w, w, -s * w),
        NullLeg::AntiholomorphicNu => Mat2::new(s * w, w, -s * s * w, -s * w),
    }
}

/// A frame sampled on the nodes of `axis`.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameCurve {
    pub axis: Axis,
    pub leg: NullLeg,
    /// `F` at each node.
    pub samples: Vec<GroupElement>,
    /// `F^-1` as integrated, stored for the nu leg only.
    pub inverse_samples: Option<Vec<GroupElement>>,
    /// System coefficient at each node.
    pub coefficients: Vec<Mat2>,
}

impl FrameCurve {
    pub fn max_drift(&self) -> f64 {
        self.samples.iter().map(|g| (g.mat().det() - 1.0).abs()).fold(0.0, f64::max)
    }

    pub fn at(&self, i: usize) -> Mat2 {
        self.samples[i].mat()
    }
}

/// Right system `F' = F C` or left system `G' = C G`, one classical RK4 step.
pub(crate) fn rk4_step(y: Mat2, t: f64, h: f64, left: bool, coef: &impl Fn(f64) -> Result<Mat2>) -> Result<Mat2> {
    let rhs = |y: Mat2, c: Mat2| if left { c * y } else { y * c };
    let (c0, c1, c2) = (coef(t)?, coef(t + 0.5 * h)?, coef(t + h)?);
    let k1 = rhs(y, c0);
    let k2 = rhs(y + (0.5 * h) * k1, c1);
    let k3 = rhs(y + (0.5 * h) * k2, c1);
    let k4 = rhs(y + h * k3, c2);
    Ok(y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4))
}

/// Integrates `y` from `t0` through `nodes[start..]` (forward) or
/// `nodes[..=start]` (backward); `out[start]` must already be set.
fn sweep(
    out: &mut [Mat2],
    nodes: &[f64],
    start: usize,
    forward: bool,
    left: bool,
    coef: &impl Fn(f64) -> Result<Mat2>,
) -> Result<()> {
    let idx: Vec<usize> = if forward { (start + 1..nodes.len()).collect() } else { (0..start).rev().collect() };
    let mut prev = start;
    for k in idx {
        out[k] = rk4_step(out[prev], nodes[prev], nodes[k] - nodes[prev], left, coef)?;
        prev = k;
    }
    Ok(())
}

pub(crate) fn integrate_system(
    axis: &Axis,
    anchor: f64,
    init: Mat2,
    left: bool,
    coef: impl Fn(f64) -> Result<Mat2>,
) -> Result<Vec<Mat2>> {
    if anchor < axis.lo - 1e-12 || anchor > axis.hi + 1e-12 {
        return Err(Error::Domain { t: anchor, lo: axis.lo, hi: axis.hi });
    }
    let nodes = axis.nodes();
    let k = axis.nearest(anchor);
    let mut out = vec![Mat2::ZERO; nodes.len()];
    out[k] = if nodes[k] == anchor { init } else { rk4_step(init, anchor, nodes[k] - anchor, left, &coef)? };
    sweep(&mut out, &nodes, k, true, left, &coef)?;
    sweep(&mut out, &nodes, k, false, left, &coef)?;
    Ok(out)
}

fn check_drift(mats: &[Mat2], axis: &Axis, tol: &Tolerances) -> Result<()> {
    for (index, m) in mats.iter().enumerate() {
        let drift = (m.det() - 1.0).abs();
        if !(drift <= tol.det_drift) {
            return Err(Error::StepFailure { index, t: axis.at(index), drift });
        }
    }
    Ok(())
}

/// Classical RK4 on the uniform nodes of `axis`, with `F(anchor) = init`.
pub fn integrate_frame(
    kind: NullLeg,
    s_field: &ScalarField1D,
    w_field: &ScalarField1D,
    axis: &Axis,
    anchor: f64,
    init: &GroupElement,
    tol: &Tolerances,
) -> Result<FrameCurve> {
    let coef = |t: f64| Ok(null_coefficient(kind, s_field.evaluate(t)?, w_field.evaluate(t)?));
    let coefficients = axis.nodes().into_iter().map(coef).collect::<Result<Vec<_>>>()?;
    match kind {
        NullLeg::Holomorphic | NullLeg::AntiholomorphicMu => {
            let f = integrate_system(axis, anchor, init.mat(), false, coef)?;
            check_drift(&f, axis, tol)?;
            Ok(FrameCurve {
                axis: *axis,
                leg: kind,
                samples: f.into_iter().map(GroupElement::from_integrator).collect(),
                inverse_samples: None,
                coefficients,
            })
        }
        NullLeg::AntiholomorphicNu => {
            let g = integrate_system(axis, anchor, init.inverse(), true, coef)?;
            check_drift(&g, axis, tol)?;
            let f = g.iter().map(|m| (1.0 / m.det()) * m.adjugate()).collect::<Vec<_>>();
            Ok(FrameCurve {
                axis: *axis,
                leg: kind,
                samples: f.into_iter().map(GroupElement::from_integrator).collect(),
                inverse_samples: Some(g.into_iter().map(GroupElement::from_integrator).collect()),
                coefficients,
            })
        }
    }
}

fn expect_leg(c: &FrameCurve, want: NullLeg) -> Result<()> {
    if c.leg != want {
        return Err(Error::LegMismatch { expected: want.name(), found: c.leg.name() });
    }
    Ok(())
}

/// Mixed `du dv` coefficient of `-det(A du + B dv)`.
fn mixed_metric(a: Mat2, b: Mat2) -> f64 {
    -(a.a * b.d + a.d * b.a - a.b * b.c - a.c * b.b)
}

/// Metric coefficient `e^w` at grid node `(i, j)` from the frame coefficients.
pub fn frame_metric(f1: &FrameCurve, f2: &FrameCurve, assembly: Action, i: usize, j: usize) -> Result<f64> {
    expect_leg(f1, NullLeg::Holomorphic)?;
    let c2 = match assembly {
        Action::Mu => {
            expect_leg(f2, NullLeg::AntiholomorphicMu)?;
            f2.coefficients[j].transpose()
        }
        Action::Nu => {
            expect_leg(f2, NullLeg::AntiholomorphicNu)?;
            f2.coefficients[j]
        }
    };
    Ok(mixed_metric(f1.coefficients[i], c2))
}

fn assemble(f1: &FrameCurve, f2: &FrameCurve, assembly: Action, tol: &Tolerances) -> Result<SurfaceGridH31> {
    let domain = Domain { u: f1.axis, v: f2.axis };
    let right: Vec<Mat2> = match assembly {
        Action::Mu => f2.samples.iter().map(|g| g.mat().transpose()).collect(),
        Action::Nu => f2.inverse_samples.as_ref().expect("nu leg stores inverses").iter().map(|g| g.mat()).collect(),
    };
    let rows: Vec<(Vec<Mat2>, Vec<bool>)> = (0..domain.nu())
        .into_par_iter()
        .map(|i| {
            let left = f1.at(i);
            let mut pts = Vec::with_capacity(domain.nv());
            let mut mask = Vec::with_capacity(domain.nv());
            for (j, r) in right.iter().enumerate() {
                pts.push(left * *r);
                mask.push(frame_metric(f1, f2, assembly, i, j)?.abs() < tol.tol_degen);
            }
            Ok((pts, mask))
        })
        .collect::<Result<_>>()?;
    let (mut points, mut mask) = (Vec::with_capacity(domain.len()), Vec::with_capacity(domain.len()));
    for (p, m) in rows {
        points.extend(p);
        mask.extend(m);
    }
    Ok(SurfaceGridH31 { domain, points, assembly, mask })
}

/// `F1(u_i) F2(v_j)^t`.
pub fn assemble_mu(f1: &FrameCurve, f2: &FrameCurve, tol: &Tolerances) -> Result<SurfaceGridH31> {
    expect_leg(f1, NullLeg::Holomorphic)?;
    expect_leg(f2, NullLeg::AntiholomorphicMu)?;
    assemble(f1, f2, Action::Mu, tol)
}

/// `F1(u_i) F2(v_j)^-1`.
pub fn assemble_nu(f1: &FrameCurve, f2: &FrameCurve, tol: &Tolerances) -> Result<SurfaceGridH31> {
    expect_leg(f1, NullLeg::Holomorphic)?;
    expect_leg(f2, NullLeg::AntiholomorphicNu)?;
    assemble(f1, f2, Action::Nu, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ONE;
    use proptest::prelude::*;

    fn field(src: &str) -> ScalarField1D {
        ScalarField1D::parse(src, "t").unwrap()
    }

    fn leg(kind: NullLeg, s: &str, lo: f64, hi: f64, n: usize) -> FrameCurve {
        let axis = Axis::new(lo, hi, n).unwrap();
        let anchor = 0.0_f64.clamp(lo, hi);
        integrate_frame(kind, &field(s), &field("1"), &axis, anchor, &GroupElement::IDENTITY, &Tolerances::default())
            .unwrap()
    }

    fn example1(u: f64) -> Mat2 {
        let (c, s) = (u.cosh(), u.sinh());
        Mat2::new(c, s - u * c, s, c - u * s)
    }

    #[test]
    fn coefficient_examples() {
        assert_eq!(null_coefficient(NullLeg::Holomorphic, 2.0, 1.0), Mat2::new(2.0, -4.0, 1.0, -2.0));
        assert_eq!(null_coefficient(NullLeg::AntiholomorphicNu, 1.0, 1.0), Mat2::new(1.0, 1.0, -1.0, -1.0));
    }

    #[test]
    fn example_one_frame() {
        let f = leg(NullLeg::Holomorphic, "t", 0.0, 1.0, 1001);
        let last = f.at(1000);
        assert!((last - example1(1.0)).max_abs() < 1e-8);
        assert!((last - Mat2::new(1.5430806, -0.3678794, 1.1752012, 0.3678794)).max_abs() < 1e-7);
    }

    #[test]
    fn nilpotent_and_trigonometric_frames() {
        let f = leg(NullLeg::Holomorphic, "0", -1.0, 2.0, 301);
        for (i, t) in f.axis.nodes().into_iter().enumerate() {
            assert!((f.at(i) - Mat2::new(1.0, 0.0, t, 1.0)).max_abs() < 1e-13);
        }
        let f = leg(NullLeg::Holomorphic, "-t", -1.5, 1.5, 1501);
        for (i, t) in f.axis.nodes().into_iter().enumerate() {
            let want = Mat2::new(t.cos(), -t.sin() + t * t.cos(), t.sin(), t.cos() + t * t.sin());
            assert!((f.at(i) - want).max_abs() < 1e-9);
        }
    }

    #[test]
    fn rk4_fourth_order() {
        let err = |n: usize| {
            let f = leg(NullLeg::Holomorphic, "t", -1.5, 1.5, n + 1);
            (0..=n).map(|i| (f.at(i) - example1(f.axis.at(i))).max_abs()).fold(0.0, f64::max)
        };
        let r = err(60) / err(120);
        assert!((14.0..=18.0).contains(&r), "ratio {r}");
    }

    #[test]
    fn drift_is_small() {
        let f = leg(NullLeg::Holomorphic, "t", -2.0, 2.0, 4001);
        assert!(f.max_drift() <= 1e-10);
        let g = leg(NullLeg::AntiholomorphicNu, "sin(t)", -2.0, 2.0, 4001);
        assert!(g.max_drift() <= 1e-10);
    }

    #[test]
    fn coarse_steps_fail() {
        let axis = Axis::new(-3.0, 3.0, 4).unwrap();
        let r = integrate_frame(
            NullLeg::Holomorphic,
            &field("t^3"),
            &field("1"),
            &axis,
            0.0,
            &GroupElement::IDENTITY,
            &Tolerances::default(),
        );
        assert!(matches!(r, Err(Error::StepFailure { .. })));
    }

    #[test]
    fn anchor_off_node() {
        let axis = Axis::new(-1.0, 1.0, 201).unwrap();
        let f = integrate_frame(
            NullLeg::Holomorphic,
            &field("t"),
            &field("1"),
            &axis,
            0.0033,
            &GroupElement::renormalize(example1(0.0033)).unwrap(),
            &Tolerances::default(),
        )
        .unwrap();
        for i in [0, 57, 200] {
            assert!((f.at(i) - example1(axis.at(i))).max_abs() < 1e-8);
        }
    }

    #[test]
    fn nu_leg_stores_inverse() {
        let g = leg(NullLeg::AntiholomorphicNu, "t", -1.0, 1.0, 201);
        let inv = g.inverse_samples.as_ref().unwrap();
        for (f, gi) in g.samples.iter().zip(inv) {
            assert!((f.mat() * gi.mat() - ONE).max_abs() < 1e-12);
        }
        // (F2^-1)' F2 = [[t, 1], [-t^2, -t]]
        let h = g.axis.step();
        for i in [50, 120] {
            let d = (1.0 / (2.0 * h)) * (inv[i + 1].mat() - inv[i - 1].mat());
            let c = d * g.at(i);
            let t = g.axis.at(i);
            assert!((c - Mat2::new(t, 1.0, -t * t, -t)).max_abs() < 1e-4);
        }
    }

    #[test]
    fn bscroll_and_horosphere_assembly() {
        let tol = Tolerances::default();
        let f1 = leg(NullLeg::Holomorphic, "t", -1.0, 1.0, 201);
        let f2 = leg(NullLeg::AntiholomorphicMu, "0", -1.0, 1.0, 201);
        let s = assemble_mu(&f1, &f2, &tol).unwrap();
        for (i, j) in [(0, 0), (37, 150), (200, 200)] {
            let (u, v) = s.domain.point(i, j);
            let (c, sh) = (u.cosh(), u.sinh());
            let want = Mat2::new(c, -(u - v) * c + sh, sh, -(u - v) * sh + c);
            assert!((s.at(i, j) - want).max_abs() < 1e-9);
        }
        assert!(s.max_det_defect() <= 1e-8);
        let h1 = leg(NullLeg::Holomorphic, "0", -1.0, 1.0, 21);
        let h2 = leg(NullLeg::AntiholomorphicMu, "0", -1.0, 1.0, 21);
        let s = assemble_mu(&h1, &h2, &tol).unwrap();
        for (i, j) in [(3, 4), (20, 0)] {
            let (u, v) = s.domain.point(i, j);
            assert!((s.at(i, j) - Mat2::new(1.0, v, u, 1.0 + u * v)).max_abs() < 1e-13);
        }
        assert_eq!(frame_metric(&h1, &h2, Action::Mu, 5, 5).unwrap(), 1.0);
        assert!(s.mask.iter().all(|m| !m));
    }

    #[test]
    fn leg_mismatch() {
        let tol = Tolerances::default();
        let a = leg(NullLeg::Holomorphic, "0", 0.0, 1.0, 5);
        let b = leg(NullLeg::AntiholomorphicNu, "0", 0.0, 1.0, 5);
        assert!(matches!(assemble_mu(&a, &b, &tol), Err(Error::LegMismatch { .. })));
        let c = leg(NullLeg::AntiholomorphicMu, "0", 0.0, 1.0, 5);
        assert!(matches!(assemble_nu(&a, &c, &tol), Err(Error::LegMismatch { .. })));
        assert!(frame_metric(&a, &c, Action::Nu, 1, 1).is_err());
    }

    #[test]
    fn nu_assembly() {
        let tol = Tolerances::default();
        let f1 = leg(NullLeg::Holomorphic, "t", -1.0, 1.0, 21);
        let axis = Axis::new(-1.0, 1.0, 21).unwrap();
        let still = integrate_frame(
            NullLeg::AntiholomorphicNu,
            &field("0"),
            &field("0"),
            &axis,
            0.0,
            &GroupElement::IDENTITY,
            &tol,
        )
        .unwrap();
        let s = assemble_nu(&f1, &still, &tol).unwrap();
        assert!(s.mask.iter().all(|m| *m));
        for i in 0..21 {
            assert!((s.at(i, 7) - f1.at(i)).max_abs() < 1e-15);
        }
        // r = 0 with g = 1 on the nu leg gives G = [[1, v], [0, 1]]: the horosphere again
        let h1 = leg(NullLeg::Holomorphic, "0", -1.0, 1.0, 21);
        let h2 = leg(NullLeg::AntiholomorphicNu, "0", -1.0, 1.0, 21);
        let s = assemble_nu(&h1, &h2, &tol).unwrap();
        let (u, v) = s.domain.point(4, 17);
        assert!((s.at(4, 17) - Mat2::new(1.0, v, u, 1.0 + u * v)).max_abs() < 1e-13);
        assert_eq!(frame_metric(&h1, &h2, Action::Nu, 4, 17).unwrap(), 1.0);
        // 1 + q r = 0 everywhere: fully degenerate
        let d1 = leg(NullLeg::Holomorphic, "1", -1.0, 1.0, 21);
        let d2 = leg(NullLeg::AntiholomorphicNu, "-1", -1.0, 1.0, 21);
        let s = assemble_nu(&d1, &d2, &tol).unwrap();
        assert!(s.mask.iter().all(|m| *m));
        assert!(s.max_det_defect() <= 1e-8);
    }

    proptest! {
        #[test]
        fn coefficients_are_null(s in -5.0..5.0f64, w in -5.0..5.0f64) {
            for kind in [NullLeg::Holomorphic, NullLeg::AntiholomorphicMu, NullLeg::AntiholomorphicNu] {
                let c = null_coefficient(kind, s, w);
                prop_assert!(c.det().abs() <= 1e-12 * (1.0 + s * s * w * w));
                prop_assert_eq!(c.trace(), 0.0);
            }
        }

        #[test]
        fn frame_metric_formula(q in -2.0..2.0f64, r in -2.0..2.0f64, f in -2.0..2.0f64, g in -2.0..2.0f64) {
            let c1 = null_coefficient(NullLeg::Holomorphic, q, f);
            let mu = mixed_metric(c1, null_coefficient(NullLeg::AntiholomorphicMu, r, g).transpose());
            let nu = mixed_metric(c1, null_coefficient(NullLeg::AntiholomorphicNu, r, g));
            let want = (1.0 + q * r).powi(2) * f * g;
            prop_assert!((mu - want).abs() <= 1e-12 * (1.0 + want.abs()) * 10.0);
            prop_assert!((nu - want).abs() <= 1e-12 * (1.0 + want.abs()) * 10.0);
        }
    }
}
