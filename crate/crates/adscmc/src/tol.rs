//! Tolerance context shared by every construction and verification call.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Accepted |det - 1| for a group element.
    pub tol_det: f64,
    /// |det - 1| beyond which an integration step is reported as failed.
    pub det_drift: f64,
    /// Metric coefficient below which a grid point is masked as degenerate.
    pub tol_degen: f64,
    /// Maximal compatibility residual accepted by the Lax integrator.
    pub compat_tol: f64,
    /// Path-independence defect above which a warning is recorded.
    pub path_tol: f64,
    /// Threshold for the holomorphicity classification.
    pub tol_hol: f64,
    /// Chart denominators at or below this are masked.
    pub chart_pole: f64,
    /// Determinant below which a matrix counts as singular.
    pub singular: f64,
    /// Target accuracy of the adaptive quadrature.
    pub quadrature: f64,
    /// Finite-difference step for second derivatives of closed-form fields.
    pub fd_step: f64,
    /// Accepted deviation of H from its target.
    pub mean_curvature: f64,
    /// Accepted |<phi_u, phi_u>|, |<phi_v, phi_v>| at the reference step.
    pub conformality: f64,
    /// Accepted Gauss-equation residual at the reference step.
    pub gauss_eq: f64,
    /// Accepted second fundamental form residual at the reference step.
    pub sff: f64,
    /// Accepted chordal distance between two computations of one Gauss map.
    pub gauss_map: f64,
    /// Accepted residual of the holomorphicity identities on frames.
    pub identity: f64,
    /// Accepted `|2 <G_u, G_v> + K e^w|` for the hyperbolic Gauss map.
    pub gauss_conformality: f64,
    /// Grid step at which the finite-difference thresholds apply; coarser
    /// grids scale them by (h / fd_reference)^2.
    pub fd_reference: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            tol_det: 1e-9,
            det_drift: 1e-6,
            tol_degen: 1e-8,
            compat_tol: 1e-5,
            path_tol: 1e-6,
            tol_hol: 1e-4,
            chart_pole: 1e-10,
            singular: 1e-12,
            quadrature: 1e-12,
            fd_step: 1e-3,
            mean_curvature: 5e-5,
            conformality: 1e-6,
            gauss_eq: 1e-5,
            sff: 1e-5,
            gauss_map: 1e-6,
            identity: 1e-5,
            gauss_conformality: 1e-4,
            fd_reference: 1e-3,
        }
    }
}

impl Tolerances {
    /// Threshold for a second-order finite-difference residual on a grid of step `h`.
    pub fn fd_scaled(&self, base: f64, h: f64) -> f64 {
        let r = h / self.fd_reference;
        base * (r * r).max(1.0)
    }

    /// Overrides one field by name, as in `tol_hol=1e-3`.
    pub fn set(&mut self, assignment: &str) -> crate::Result<()> {
        let bad = || crate::Error::Usage(format!("--tol expects name=value, got `{assignment}`"));
        let (name, value) = assignment.split_once('=').ok_or_else(bad)?;
        let value: f64 = value.trim().parse().map_err(|_| bad())?;
        let mut map = match serde_json::to_value(&*self)? {
            serde_json::Value::Object(m) => m,
            _ => unreachable!("tolerances serialize to an object"),
        };
        if !map.contains_key(name.trim()) {
            let names: Vec<&str> = map.keys().map(String::as_str).collect();
            return Err(crate::Error::Usage(format!("unknown tolerance `{}`; valid names: {}", name.trim(), names.join(", "))));
        }
        map.insert(name.trim().into(), serde_json::json!(value));
        *self = serde_json::from_value(serde_json::Value::Object(map))?;
        Ok(())
    }
}
