//! Parameter grids and sampled surfaces.

use serde::{Deserialize, Serialize};

use crate::algebra::{Mat2, Vec3};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl Axis {
    pub fn new(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if n < 2 || !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::Grid(format!("axis [{lo}, {hi}] with {n} nodes")));
        }
        Ok(Axis { lo, hi, n })
    }

    pub fn step(&self) -> f64 {
        (self.hi - self.lo) / (self.n - 1) as f64
    }

    pub fn at(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            self.hi
        } else {
            self.lo + self.step() * i as f64
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.at(i)).collect()
    }

    /// Index of the node nearest to `t`.
    pub fn nearest(&self, t: f64) -> usize {
        (((t - self.lo) / self.step()).round().max(0.0) as usize).min(self.n - 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub u: Axis,
    pub v: Axis,
}

impl Domain {
    pub fn new(u: (f64, f64), v: (f64, f64), nu: usize, nv: usize) -> Result<Self> {
        Ok(Domain { u: Axis::new(u.0, u.1, nu)?, v: Axis::new(v.0, v.1, nv)? })
    }

    /// Square `[lo, hi]^2` with `n` nodes per side.
    pub fn square(lo: f64, hi: f64, n: usize) -> Result<Self> {
        Domain::new((lo, hi), (lo, hi), n, n)
    }

    pub fn nu(&self) -> usize {
        self.u.n
    }

    pub fn nv(&self) -> usize {
        self.v.n
    }

    pub fn len(&self) -> usize {
        self.u.n * self.v.n
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Row-major index, u outer.
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.v.n + j
    }

    pub fn point(&self, i: usize, j: usize) -> (f64, f64) {
        (self.u.at(i), self.v.at(j))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Action {
    Mu,
    Nu,
}

impl Action {
    pub fn name(self) -> &'static str {
        match self {
            Action::Mu => "mu",
            Action::Nu => "nu",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// Stereographic projection pole: `Plus` divides by `1 + x`, `Minus` by `1 - x`.
pub type Pole = Sign;

/// Points of anti-de Sitter 3-space as unimodular matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceGridH31 {
    pub domain: Domain,
    pub points: Vec<Mat2>,
    pub assembly: Action,
    /// `true` marks a degenerate point.
    pub mask: Vec<bool>,
}

impl SurfaceGridH31 {
    pub fn from_fn(domain: Domain, assembly: Action, f: impl Fn(f64, f64) -> Mat2) -> Self {
        let mut points = Vec::with_capacity(domain.len());
        for i in 0..domain.nu() {
            for j in 0..domain.nv() {
                let (u, v) = domain.point(i, j);
                points.push(f(u, v));
            }
        }
        SurfaceGridH31 { domain, points, assembly, mask: vec![false; domain.len()] }
    }

    pub fn at(&self, i: usize, j: usize) -> Mat2 {
        self.points[self.domain.index(i, j)]
    }

    pub fn max_det_defect(&self) -> f64 {
        self.points
            .iter()
            .zip(&self.mask)
            .filter(|(_, m)| !**m)
            .map(|(p, _)| (p.det() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

/// Points of Minkowski 3-space.
#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceGridE31 {
    pub domain: Domain,
    pub points: Vec<Vec3>,
    pub mask: Vec<bool>,
}

impl SurfaceGridE31 {
    pub fn at(&self, i: usize, j: usize) -> Vec3 {
        self.points[self.domain.index(i, j)]
    }
}

/// An owned surface in either ambient.
#[derive(Clone, Debug, PartialEq)]
pub enum Surface {
    H31(SurfaceGridH31),
    E31(SurfaceGridE31),
}

impl Surface {
    pub fn as_ref(&self) -> SurfaceRef<'_> {
        match self {
            Surface::H31(s) => SurfaceRef::H31(s),
            Surface::E31(s) => SurfaceRef::E31(s),
        }
    }

    pub fn domain(&self) -> &Domain {
        match self {
            Surface::H31(s) => &s.domain,
            Surface::E31(s) => &s.domain,
        }
    }
}

/// Either kind of sampled surface.
#[derive(Clone, Copy, Debug)]
pub enum SurfaceRef<'a> {
    H31(&'a SurfaceGridH31),
    E31(&'a SurfaceGridE31),
}

impl<'a> From<&'a SurfaceGridH31> for SurfaceRef<'a> {
    fn from(s: &'a SurfaceGridH31) -> Self {
        SurfaceRef::H31(s)
    }
}

impl<'a> From<&'a SurfaceGridE31> for SurfaceRef<'a> {
    fn from(s: &'a SurfaceGridE31) -> Self {
        SurfaceRef::E31(s)
    }
}

impl SurfaceRef<'_> {
    pub fn domain(&self) -> &Domain {
        match self {
            SurfaceRef::H31(s) => &s.domain,
            SurfaceRef::E31(s) => &s.domain,
        }
    }

    pub fn mask(&self) -> &[bool] {
        match self {
            SurfaceRef::H31(s) => &s.mask,
            SurfaceRef::E31(s) => &s.mask,
        }
    }

    /// Coordinates padded to four components; E31 leaves the last one zero.
    pub fn coords(&self, i: usize, j: usize) -> [f64; 4] {
        match self {
            SurfaceRef::H31(s) => s.at(i, j).to_vec().to_array(),
            SurfaceRef::E31(s) => {
                let p = s.at(i, j);
                [p.x1, p.x2, p.x3, 0.0]
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_nodes_hit_ends() {
        let a = Axis::new(-1.5, 1.5, 101).unwrap();
        assert_eq!(a.at(0), -1.5);
        assert_eq!(a.at(100), 1.5);
        assert!((a.step() - 0.03).abs() < 1e-15);
        assert_eq!(a.nearest(0.0), 50);
        assert!(Axis::new(1.0, 1.0, 5).is_err());
        assert!(Axis::new(0.0, 1.0, 1).is_err());
    }

    #[test]
    fn row_major_indexing() {
        let d = Domain::new((0.0, 1.0), (0.0, 2.0), 3, 5).unwrap();
        assert_eq!(d.index(1, 2), 7);
        assert_eq!(d.point(2, 4), (1.0, 2.0));
        let s = SurfaceGridH31::from_fn(d, Action::Mu, |u, v| Mat2::new(1.0, v, u, 1.0 + u * v));
        assert_eq!(s.at(1, 2), Mat2::new(1.0, 1.0, 0.5, 1.5));
        assert!(s.max_det_defect() < 1e-15);
    }
}
