//! Split-quaternion model of the flat space of signature (-,-,+,+).
//!
//! A point `x0 1 + x1 i + x2 j' + x3 k'` is stored either as a [`Vec4`] or as
//! the real 2x2 matrix `[[x0+x3, x1+x2], [-x1+x2, x0-x3]]`. The scalar product
//! satisfies `<u, u> = -det u`, so the unit hyperquadric `det = 1` is
//! anti-de Sitter 3-space, identified with SL(2, R).

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tol::Tolerances;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Vec4 {
    pub x0: f64,
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl Vec4 {
    pub fn new(x0: f64, x1: f64, x2: f64, x3: f64) -> Result<Self> {
        let v = Vec4 { x0, x1, x2, x3 };
        if v.to_array().iter().all(|c| c.is_finite()) {
            Ok(v)
        } else {
            Err(Error::NonFinite("Vec4"))
        }
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.x0, self.x1, self.x2, self.x3]
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Vec4 { x0: a[0], x1: a[1], x2: a[2], x3: a[3] }
    }

    pub fn to_mat(self) -> Mat2 {
        Mat2 {
            a: self.x0 + self.x3,
            b: self.x1 + self.x2,
            c: -self.x1 + self.x2,
            d: self.x0 - self.x3,
        }
    }

    /// Indefinite scalar product with signature (-,-,+,+).
    pub fn dot(self, o: Vec4) -> f64 {
        -self.x0 * o.x0 - self.x1 * o.x1 + self.x2 * o.x2 + self.x3 * o.x3
    }
}

impl Add for Vec4 {
    type Output = Vec4;
    fn add(self, o: Vec4) -> Vec4 {
        Vec4::from_array([self.x0 + o.x0, self.x1 + o.x1, self.x2 + o.x2, self.x3 + o.x3])
    }
}

impl Sub for Vec4 {
    type Output = Vec4;
    fn sub(self, o: Vec4) -> Vec4 {
        Vec4::from_array([self.x0 - o.x0, self.x1 - o.x1, self.x2 - o.x2, self.x3 - o.x3])
    }
}

impl Mul<Vec4> for f64 {
    type Output = Vec4;
    fn mul(self, v: Vec4) -> Vec4 {
        Vec4::from_array([self * v.x0, self * v.x1, self * v.x2, self * v.x3])
    }
}

/// A point of Minkowski 3-space with signature (-,+,+).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Vec3 {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 { x1: 0.0, x2: 0.0, x3: 0.0 };

    pub fn new(x1: f64, x2: f64, x3: f64) -> Self {
        Vec3 { x1, x2, x3 }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x1, self.x2, self.x3]
    }

    pub fn dot(self, o: Vec3) -> f64 {
        -self.x1 * o.x1 + self.x2 * o.x2 + self.x3 * o.x3
    }

    /// Traceless matrix `x1 i + x2 j' + x3 k'`.
    pub fn to_mat(self) -> Mat2 {
        Vec4 { x0: 0.0, x1: self.x1, x2: self.x2, x3: self.x3 }.to_mat()
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x1 + o.x1, self.x2 + o.x2, self.x3 + o.x3)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x1 - o.x1, self.x2 - o.x2, self.x3 - o.x3)
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        Vec3::new(self * v.x1, self * v.x2, self * v.x3)
    }
}

/// The matrix `[[a, b], [c, d]]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mat2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

pub const ONE: Mat2 = Mat2 { a: 1.0, b: 0.0, c: 0.0, d: 1.0 };
pub const I: Mat2 = Mat2 { a: 0.0, b: 1.0, c: -1.0, d: 0.0 };
pub const J_PRIME: Mat2 = Mat2 { a: 0.0, b: 1.0, c: 1.0, d: 0.0 };
pub const K_PRIME: Mat2 = Mat2 { a: 1.0, b: 0.0, c: 0.0, d: -1.0 };

impl Mat2 {
    pub const ZERO: Mat2 = Mat2 { a: 0.0, b: 0.0, c: 0.0, d: 0.0 };

    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn to_vec(self) -> Vec4 {
        Vec4 {
            x0: (self.a + self.d) / 2.0,
            x1: (self.b - self.c) / 2.0,
            x2: (self.b + self.c) / 2.0,
            x3: (self.a - self.d) / 2.0,
        }
    }

    pub fn det(self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(self) -> f64 {
        self.a + self.d
    }

    pub fn transpose(self) -> Mat2 {
        Mat2::new(self.a, self.c, self.b, self.d)
    }

    pub fn adjugate(self) -> Mat2 {
        Mat2::new(self.d, -self.b, -self.c, self.a)
    }

    pub fn inverse(self, singular: f64) -> Result<Mat2> {
        let det = self.det();
        if det.abs() < singular || !det.is_finite() {
            return Err(Error::Singular { det });
        }
        Ok((1.0 / det) * self.adjugate())
    }

    pub fn is_finite(self) -> bool {
        self.entries().iter().all(|x| x.is_finite())
    }

    pub fn entries(self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn max_abs(self) -> f64 {
        self.entries().iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    /// Scalar product `(tr(uv) - tr u tr v) / 2`.
    pub fn dot(self, o: Mat2) -> f64 {
        scalar_product(self, o)
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, o: Mat2) -> Mat2 {
        Mat2::new(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, o: Mat2) -> Mat2 {
        Mat2::new(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        Mat2::new(-self.a, -self.b, -self.c, -self.d)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        Mat2::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }
}

impl Mul<Mat2> for f64 {
    type Output = Mat2;
    fn mul(self, m: Mat2) -> Mat2 {
        Mat2::new(self * m.a, self * m.b, self * m.c, self * m.d)
    }
}

pub fn vec_to_mat(v: Vec4) -> Mat2 {
    v.to_mat()
}

pub fn mat_to_vec(m: Mat2) -> Vec4 {
    m.to_vec()
}

pub fn scalar_product(u: Mat2, v: Mat2) -> f64 {
    0.5 * ((u * v).trace() - u.trace() * v.trace())
}

/// A unimodular matrix. Construction checks `|det - 1|` and never rescales.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupElement {
    m: Mat2,
}

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement { m: ONE };

    pub fn new(m: Mat2, tol: &Tolerances) -> Result<Self> {
        let det = m.det();
        if !m.is_finite() || (det - 1.0).abs() > tol.tol_det {
            return Err(Error::NotUnimodular { det });
        }
        Ok(GroupElement { m })
    }

    /// Divides by `sqrt(det)`; fails for non-positive determinant.
    pub fn renormalize(m: Mat2) -> Result<Self> {
        let det = m.det();
        if !(det > 0.0) || !m.is_finite() {
            return Err(Error::NotUnimodular { det });
        }
        Ok(GroupElement { m: (1.0 / det.sqrt()) * m })
    }

    /// Integrator output; drift is checked by the caller against its own budget.
    pub(crate) fn from_integrator(m: Mat2) -> Self {
        GroupElement { m }
    }

    pub fn mat(&self) -> Mat2 {
        self.m
    }

    /// Inverse via the adjugate, exact for det = 1 up to the stored drift.
    pub fn inverse(&self) -> Mat2 {
        (1.0 / self.m.det()) * self.m.adjugate()
    }
}

/// `g1 u g2^T`.
pub fn mu_action(g1: &GroupElement, g2: &GroupElement, u: Mat2) -> Mat2 {
    g1.m * u * g2.m.transpose()
}

/// `g1 u g2^-1`.
pub fn nu_action(g1: &GroupElement, g2: &GroupElement, u: Mat2) -> Result<Mat2> {
    let inv = g2.m.inverse(1e-12)?;
    Ok(g1.m * u * inv)
}

/// `g u g^-1` on the traceless model of Minkowski 3-space.
pub fn ad_action(g: &GroupElement, u: Mat2) -> Result<Mat2> {
    let trace = u.trace();
    if trace.abs() > 1e-12 {
        return Err(Error::NotTraceless { trace });
    }
    Ok(g.m * u * g.inverse())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: Mat2, b: Mat2, tol: f64) -> bool {
        (a - b).max_abs() <= tol
    }

    #[test]
    fn basis_matrices() {
        assert_eq!(Vec4::new(1.0, 0.0, 0.0, 0.0).unwrap().to_mat(), ONE);
        assert_eq!(Vec4::new(0.0, 1.0, 0.0, 0.0).unwrap().to_mat(), I);
        assert_eq!(Vec4::new(0.0, 0.0, 1.0, 0.0).unwrap().to_mat(), J_PRIME);
        assert_eq!(Vec4::new(0.0, 0.0, 0.0, 1.0).unwrap().to_mat(), K_PRIME);
    }

    fn ulp_close(a: Vec4, b: Vec4) -> bool {
        let scale = a.to_array().iter().fold(1.0_f64, |m, x| m.max(x.abs()));
        a.to_array().iter().zip(b.to_array()).all(|(x, y)| (x - y).abs() <= 4.0 * f64::EPSILON * scale)
    }

    #[test]
    fn round_trip() {
        let v = Vec4::new(0.3, -1.2, 0.5, 2.0).unwrap();
        assert!(ulp_close(mat_to_vec(vec_to_mat(v)), v));
        // dyadic inputs involve no rounding at all
        let w = Vec4::new(0.375, -1.25, 0.5, 2.0).unwrap();
        assert_eq!(mat_to_vec(vec_to_mat(w)), w);
    }

    #[test]
    fn non_finite_rejected() {
        assert!(Vec4::new(f64::NAN, 0.0, 0.0, 0.0).is_err());
        assert!(Vec4::new(0.0, f64::INFINITY, 0.0, 0.0).is_err());
    }

    #[test]
    fn signature_table() {
        let basis = [ONE, I, J_PRIME, K_PRIME];
        let sig = [-1.0, -1.0, 1.0, 1.0];
        for (p, a) in basis.iter().enumerate() {
            for (q, b) in basis.iter().enumerate() {
                let want = if p == q { sig[p] } else { 0.0 };
                assert_eq!(scalar_product(*a, *b), want);
            }
        }
    }

    #[test]
    fn scalar_product_examples() {
        assert_eq!(scalar_product(ONE, ONE), -1.0);
        assert_eq!(scalar_product(K_PRIME, K_PRIME), 1.0);
        let u = Mat2::new(2.0, 3.0, 1.0, 2.0);
        assert_eq!(scalar_product(u, u), -1.0);
        assert_eq!(-u.det(), -1.0);
    }

    #[test]
    fn action_examples() {
        let t = Tolerances::default();
        let g1 = GroupElement::new(Mat2::new(1.0, 1.0, 0.0, 1.0), &t).unwrap();
        let e = GroupElement::IDENTITY;
        let m = mu_action(&g1, &e, ONE);
        assert_eq!(m, Mat2::new(1.0, 1.0, 0.0, 1.0));
        assert_eq!(m.to_vec(), Vec4::from_array([1.0, 0.5, 0.5, 0.0]));
        assert_eq!(scalar_product(m, m), -1.0);
        assert_eq!(nu_action(&g1, &e, ONE).unwrap(), Mat2::new(1.0, 1.0, 0.0, 1.0));
        assert!(close(nu_action(&g1, &g1, ONE).unwrap(), ONE, 1e-15));
        let u = Mat2::new(0.3, 0.7, -1.1, 0.9);
        assert_eq!(mu_action(&e, &e, u), u);
        assert_eq!(ad_action(&e, K_PRIME).unwrap(), K_PRIME);
    }

    #[test]
    fn ad_on_k_prime() {
        // h = [[p1, -q2], [q1, p2]] with p1 p2 + q1 q2 = 1
        let (p1, q2, q1) = (1.3, 0.4, -0.7);
        let p2 = (1.0 - q1 * q2) / p1;
        let g = GroupElement::new(Mat2::new(p1, -q2, q1, p2), &Tolerances::default()).unwrap();
        let got = ad_action(&g, K_PRIME).unwrap();
        let want = Mat2::new(p1 * p2 - q1 * q2, 2.0 * p1 * q2, 2.0 * p2 * q1, -p1 * p2 + q1 * q2);
        assert!(close(got, want, 1e-14));
    }

    #[test]
    fn ad_rejects_trace() {
        assert!(matches!(
            ad_action(&GroupElement::IDENTITY, ONE),
            Err(Error::NotTraceless { .. })
        ));
    }

    #[test]
    fn unimodular_check_and_renormalize() {
        let t = Tolerances::default();
        let m = Mat2::new(2.0, 0.0, 0.0, 0.5 + 1e-6);
        assert!(GroupElement::new(m, &t).is_err());
        let g = GroupElement::renormalize(m).unwrap();
        assert!((g.mat().det() - 1.0).abs() < 1e-15);
        assert!(GroupElement::renormalize(Mat2::new(1.0, 0.0, 0.0, -1.0)).is_err());
    }

    fn unimodular() -> impl Strategy<Value = Mat2> {
        (-2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64)
            .prop_filter("a away from zero", |(a, _, _)| a.abs() > 0.2)
            .prop_map(|(a, b, c)| Mat2::new(a, b, c, (1.0 + b * c) / a))
            .prop_filter("entries in [-2, 2]", |m| m.d.abs() <= 2.0)
    }

    fn any_mat() -> impl Strategy<Value = Mat2> {
        (-3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64)
            .prop_map(|(a, b, c, d)| Mat2::new(a, b, c, d))
    }

    proptest! {
        #[test]
        fn norm_is_minus_det(u in any_mat()) {
            prop_assert!((scalar_product(u, u) + u.det()).abs() <= 1e-12);
        }

        #[test]
        fn conversion_is_bijective(k in proptest::array::uniform4(-4096i32..4096)) {
            // multiples of 1/1024: every intermediate sum is exact
            let x = k.map(|n| n as f64 / 1024.0);
            let v = Vec4::from_array(x);
            prop_assert_eq!(v.to_mat().to_vec(), v);
            let m = Mat2::new(x[0], x[1], x[2], x[3]);
            prop_assert_eq!(m.to_vec().to_mat(), m);
        }

        #[test]
        fn conversion_round_trip_to_rounding(x in proptest::array::uniform4(-5.0..5.0f64)) {
            let v = Vec4::from_array(x);
            prop_assert!(ulp_close(v.to_mat().to_vec(), v));
        }

        #[test]
        fn vec_and_mat_products_agree(u in any_mat(), v in any_mat()) {
            prop_assert!((u.to_vec().dot(v.to_vec()) - scalar_product(u, v)).abs() <= 1e-12);
        }

        #[test]
        fn actions_are_isometries(g1 in unimodular(), g2 in unimodular(), u in any_mat(), v in any_mat()) {
            let t = Tolerances { tol_det: 1e-8, ..Tolerances::default() };
            let g1 = GroupElement::new(g1, &t).unwrap();
            let g2 = GroupElement::new(g2, &t).unwrap();
            let base = scalar_product(u, v);
            let m = scalar_product(mu_action(&g1, &g2, u), mu_action(&g1, &g2, v));
            let n = scalar_product(nu_action(&g1, &g2, u).unwrap(), nu_action(&g1, &g2, v).unwrap());
            prop_assert!((m - base).abs() <= 1e-10);
            prop_assert!((n - base).abs() <= 1e-10);
        }

        #[test]
        fn ad_preserves_trace_and_norm(g in unimodular(), x in proptest::array::uniform3(-2.0..2.0f64)) {
            let g = GroupElement::new(g, &Tolerances { tol_det: 1e-8, ..Tolerances::default() }).unwrap();
            let u = Vec3::new(x[0], x[1], x[2]).to_mat();
            let w = ad_action(&g, u).unwrap();
            prop_assert!(w.trace().abs() <= 1e-9);
            prop_assert!((w.det() - u.det()).abs() <= 1e-8 * (1.0 + u.det().abs()));
        }
    }
}
