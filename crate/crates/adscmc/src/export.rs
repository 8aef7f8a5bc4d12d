//! Stereographic projection and the OBJ, JSON and CSV file formats.
//!
//! Every float is written with 17 significant digits so that files are
//! byte-for-byte reproducible and JSON reads back bit-exact.

use std::io::{self, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::ser::Formatter;

use crate::algebra::{Mat2, Vec3};
use crate::error::{Error, Result};
use crate::geometry::{AmbientKind, Check, GeometryReport};
use crate::surface::{Action, Domain, Pole, Surface, SurfaceGridE31, SurfaceGridH31};

/// Largest tolerated `|det p - 1|` before projecting.
pub const QUADRIC_TOL: f64 = 1e-8;
/// Smallest tolerated `|1 ± x0|`.
pub const POLE_TOL: f64 = 1e-10;

pub const SCHEMA: u32 = 1;

pub const CSV_HEADER: &str = "u,v,omega,H,Q,R,K,K_shape,conf_u,conf_v,gauss_eq,sff";

/// Stereographic projection of anti-de Sitter 3-space into Minkowski 3-space,
/// from `-e0` (`Plus`) or `e0` (`Minus`).
pub fn project_h31(p: Mat2, pole: Pole) -> Result<Vec3> {
    let defect = (p.det() - 1.0).abs();
    if !(defect <= QUADRIC_TOL) {
        return Err(Error::OffQuadric { defect });
    }
    let x = p.to_vec();
    let den = 1.0 + pole.value() * x.x0;
    if den.abs() <= POLE_TOL {
        return Err(Error::Pole { denominator: den });
    }
    Ok(Vec3::new(x.x1 / den, x.x2 / den, x.x3 / den))
}

/// Projects every unmasked point; masked points become the origin and stay masked.
pub fn project_surface(s: &SurfaceGridH31, pole: Pole) -> Result<SurfaceGridE31> {
    let points = s
        .points
        .iter()
        .zip(&s.mask)
        .map(|(p, &m)| if m { Ok(Vec3::new(0.0, 0.0, 0.0)) } else { project_h31(*p, pole) })
        .collect::<Result<Vec<_>>>()?;
    Ok(SurfaceGridE31 { domain: s.domain, points, mask: s.mask.clone() })
}

fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

/// Wavefront OBJ: `v` lines row-major, two triangles per unmasked cell.
pub fn write_obj(w: &mut impl Write, s: &SurfaceGridE31) -> Result<()> {
    let d = s.domain;
    for p in &s.points {
        writeln!(w, "v {} {} {}", fmt(p.x1), fmt(p.x2), fmt(p.x3))?;
    }
    for i in 0..d.nu() - 1 {
        for j in 0..d.nv() - 1 {
            let corners = [d.index(i, j), d.index(i + 1, j), d.index(i + 1, j + 1), d.index(i, j + 1)];
            if corners.iter().any(|&k| s.mask[k]) {
                continue;
            }
            let [a, b, c, e] = corners.map(|k| k + 1);
            writeln!(w, "f {a} {b} {c}")?;
            writeln!(w, "f {a} {c} {e}")?;
        }
    }
    Ok(())
}

/// The JSON document; `vertices` hold the matrix entries `[a, b, c, d]` for
/// anti-de Sitter surfaces and three coordinates for Minkowski ones, `null`
/// where non-finite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurfaceFile {
    pub schema: u32,
    pub meta: Meta,
    pub vertices: Vec<Option<Vec<f64>>>,
    /// Row-major indices of masked points.
    #[serde(default)]
    pub masked: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<ReportFile>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub domain: DomainFile,
    pub nu: usize,
    pub nv: usize,
    pub ambient: AmbientKind,
    pub assembly: Option<Action>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DomainFile {
    pub u: [f64; 2],
    pub v: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub summary: crate::geometry::ReportSummary,
    pub checks: Vec<Check>,
}

impl SurfaceFile {
    pub fn new(surface: &Surface, report: Option<(&GeometryReport, &[Check])>) -> Self {
        let d = *surface.domain();
        let (ambient, assembly, vertices, mask) = match surface {
            Surface::H31(s) => (
                AmbientKind::H31,
                Some(s.assembly),
                s.points.iter().map(|p| finite(&[p.a, p.b, p.c, p.d])).collect(),
                &s.mask,
            ),
            Surface::E31(s) => (AmbientKind::E31, None, s.points.iter().map(|p| finite(&p.to_array())).collect(), &s.mask),
        };
        SurfaceFile {
            schema: SCHEMA,
            meta: Meta {
                domain: DomainFile { u: [d.u.lo, d.u.hi], v: [d.v.lo, d.v.hi] },
                nu: d.nu(),
                nv: d.nv(),
                ambient,
                assembly,
            },
            vertices,
            masked: mask.iter().enumerate().filter(|(_, &m)| m).map(|(k, _)| k).collect(),
            report: report.map(|(r, c)| ReportFile { summary: r.summary.clone(), checks: c.to_vec() }),
        }
    }

    pub fn surface(&self) -> Result<Surface> {
        if self.schema != SCHEMA {
            return Err(Error::Format(format!("unsupported schema {}", self.schema)));
        }
        let m = &self.meta;
        let domain = Domain::new((m.domain.u[0], m.domain.u[1]), (m.domain.v[0], m.domain.v[1]), m.nu, m.nv)?;
        if self.vertices.len() != domain.len() {
            return Err(Error::Format(format!("{} vertices for a {}x{} grid", self.vertices.len(), m.nu, m.nv)));
        }
        let mut mask = vec![false; domain.len()];
        for &k in &self.masked {
            *mask.get_mut(k).ok_or_else(|| Error::Format(format!("masked index {k} out of range")))? = true;
        }
        let dim = match m.ambient {
            AmbientKind::H31 => 4,
            AmbientKind::E31 => 3,
        };
        let mut coords = Vec::with_capacity(domain.len());
        for (k, v) in self.vertices.iter().enumerate() {
            match v {
                Some(x) if x.len() == dim => coords.push(x.clone()),
                Some(x) => return Err(Error::Format(format!("vertex {k} has {} coordinates, expected {dim}", x.len()))),
                None => coords.push(vec![f64::NAN; dim]),
            }
        }
        Ok(match m.ambient {
            AmbientKind::H31 => Surface::H31(SurfaceGridH31 {
                domain,
                points: coords.iter().map(|x| Mat2::new(x[0], x[1], x[2], x[3])).collect(),
                assembly: m.assembly.unwrap_or(Action::Mu),
                mask,
            }),
            AmbientKind::E31 => Surface::E31(SurfaceGridE31 {
                domain,
                points: coords.iter().map(|x| Vec3::new(x[0], x[1], x[2])).collect(),
                mask,
            }),
        })
    }
}

fn finite(x: &[f64]) -> Option<Vec<f64>> {
    x.iter().all(|t| t.is_finite()).then(|| x.to_vec())
}

/// serde_json formatter printing floats as `{:.16e}` and non-finite ones as `null`.
struct Digits17;

impl Formatter for Digits17 {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            w.write_all(fmt(value).as_bytes())
        } else {
            w.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }
}

pub fn write_json<T: Serialize>(w: &mut impl Write, value: &T) -> Result<()> {
    let mut ser = serde_json::Serializer::with_formatter(&mut *w, Digits17);
    value.serialize(&mut ser)?;
    w.write_all(b"\n")?;
    Ok(())
}

pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    write_json(&mut buf, value)?;
    String::from_utf8(buf).map_err(|e| Error::Format(e.to_string()))
}

pub fn import_json(text: &str) -> Result<SurfaceFile> {
    Ok(serde_json::from_str(text)?)
}

pub fn read_json(path: &Path) -> Result<SurfaceFile> {
    import_json(&std::fs::read_to_string(path)?)
}

/// One CSV row per interior point of the report; absent values are empty.
pub fn write_csv(w: &mut impl Write, report: &GeometryReport) -> Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    let opt = |x: Option<f64>| x.map(fmt).unwrap_or_default();
    for p in &report.data.points {
        let cols = [
            fmt(p.u),
            fmt(p.v),
            fmt(p.omega),
            fmt(p.h),
            fmt(p.q),
            fmt(p.r),
            fmt(p.k),
            opt(p.k_shape),
            fmt(p.conf_u),
            fmt(p.conf_v),
            opt(p.gauss_eq),
            opt(p.sff),
        ];
        writeln!(w, "{}", cols.join(","))?;
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Obj,
    Json,
    Csv,
}

impl Format {
    pub fn from_path(path: &Path) -> Result<Self> {
        match path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref() {
            Some("obj") => Ok(Format::Obj),
            Some("json") => Ok(Format::Json),
            Some("csv") => Ok(Format::Csv),
            _ => Err(Error::Format(format!("cannot infer format of {}", path.display()))),
        }
    }
}

/// Writes `surface` to `path`. OBJ projects anti-de Sitter surfaces with
/// `pole`; CSV needs a report.
pub fn export_surface(
    surface: &Surface,
    report: Option<(&GeometryReport, &[Check])>,
    pole: Pole,
    format: Format,
    path: &Path,
) -> Result<()> {
    let mut buf = Vec::new();
    match format {
        Format::Obj => match surface {
            Surface::H31(s) => write_obj(&mut buf, &project_surface(s, pole)?)?,
            Surface::E31(s) => write_obj(&mut buf, s)?,
        },
        Format::Json => write_json(&mut buf, &SurfaceFile::new(surface, report))?,
        Format::Csv => {
            let (r, _) = report.ok_or_else(|| Error::Format("CSV export needs a geometry report".into()))?;
            write_csv(&mut buf, r)?;
        }
    }
    std::fs::write(path, buf)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{geometry_report, AmbientSpec, Orientation};
    use crate::tol::Tolerances;
    use crate::algebra::Vec4;
    use proptest::prelude::*;

    fn horosphere(n: usize) -> SurfaceGridH31 {
        SurfaceGridH31::from_fn(Domain::square(-1.0, 1.0, n).unwrap(), Action::Mu, |u, v| Mat2::new(1.0, v, u, 1.0 + u * v))
    }

    #[test]
    fn projection_examples() {
        let c = project_h31(Mat2::new(1.0, 0.0, 0.0, 1.0), Pole::Plus).unwrap();
        assert_eq!(c.to_array(), [0.0, 0.0, 0.0]);
        let (ch, sh) = (1.0_f64.cosh(), 1.0_f64.sinh());
        let p = Vec4::from_array([ch, 0.0, sh, 0.0]).to_mat();
        let y = project_h31(p, Pole::Plus).unwrap();
        assert!(y.x1.abs() < 1e-15 && (y.x2 - 0.5f64.tanh()).abs() < 1e-12 && y.x3.abs() < 1e-15);
        assert!((y.x2 - 0.4621172).abs() < 1e-7);
        assert!(matches!(project_h31(Mat2::new(1.0, 0.0, 0.0, 1.0), Pole::Minus), Err(Error::Pole { .. })));
        assert!(matches!(project_h31(Mat2::new(2.0, 0.0, 0.0, 1.0), Pole::Plus), Err(Error::OffQuadric { .. })));
    }

    #[test]
    fn obj_counts() {
        let s = project_surface(&horosphere(11), Pole::Plus).unwrap();
        let mut buf = Vec::new();
        write_obj(&mut buf, &s).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 121);
        assert_eq!(text.lines().filter(|l| l.starts_with("f ")).count(), 200);
    }

    #[test]
    fn masked_points_drop_faces() {
        let mut h = horosphere(11);
        h.mask[h.domain.index(5, 5)] = true;
        let s = project_surface(&h, Pole::Plus).unwrap();
        let mut buf = Vec::new();
        write_obj(&mut buf, &s).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let faces: Vec<&str> = text.lines().filter(|l| l.starts_with("f ")).collect();
        assert_eq!(faces.len(), 200 - 8);
        let masked = (h.domain.index(5, 5) + 1).to_string();
        assert!(faces.iter().all(|f| f.split(' ').skip(1).all(|k| k != masked)));
    }

    #[test]
    fn json_round_trip_is_exact() {
        let mut h = horosphere(7);
        h.points[3] = h.points[3] * Mat2::new(1.0, 1.0 / 3.0, 0.0, 1.0);
        h.mask[10] = true;
        let tol = Tolerances::default();
        let rep = geometry_report(&h, &AmbientSpec::h31(), Orientation::Positive, &tol).unwrap();
        let checks = rep.checks(Some(1.0), &tol);
        let surface = Surface::H31(h.clone());
        let file = SurfaceFile::new(&surface, Some((&rep, &checks)));
        let text = to_json_string(&file).unwrap();
        assert!(text.starts_with("{\"schema\":1,"));
        let back = import_json(&text).unwrap();
        assert_eq!(back, file);
        assert_eq!(back.surface().unwrap(), surface);
        assert_eq!(to_json_string(&back).unwrap(), text);
    }

    #[test]
    fn bad_json_is_a_format_error() {
        let h = Surface::H31(horosphere(5));
        let mut file = SurfaceFile::new(&h, None);
        file.vertices.pop();
        assert!(matches!(file.surface(), Err(Error::Format(_))));
        file = SurfaceFile::new(&h, None);
        file.schema = 2;
        assert!(matches!(file.surface(), Err(Error::Format(_))));
        assert!(import_json("{").is_err());
    }

    #[test]
    fn csv_layout() {
        let h = horosphere(9);
        let rep = geometry_report(&h, &AmbientSpec::h31(), Orientation::Positive, &Tolerances::default()).unwrap();
        let mut buf = Vec::new();
        write_csv(&mut buf, &rep).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 1 + 7 * 7);
        assert!(lines[1..].iter().all(|l| l.split(',').count() == 12));
        assert!(!text.contains('\r'));
    }

    #[test]
    fn export_is_deterministic() {
        let dir = tempfile::tempdir().unwrap();
        let s = Surface::H31(horosphere(9));
        for (ext, format) in [("obj", Format::Obj), ("json", Format::Json)] {
            let (a, b) = (dir.path().join(format!("a.{ext}")), dir.path().join(format!("b.{ext}")));
            assert_eq!(Format::from_path(&a).unwrap(), format);
            export_surface(&s, None, Pole::Plus, format, &a).unwrap();
            export_surface(&s, None, Pole::Plus, format, &b).unwrap();
            assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
        }
        let csv = dir.path().join("r.csv");
        assert!(matches!(export_surface(&s, None, Pole::Plus, Format::Csv, &csv), Err(Error::Format(_))));
        assert!(Format::from_path(Path::new("x.txt")).is_err());
    }

    proptest! {
        #[test]
        fn upper_half_lands_inside(x1 in -3.0f64..3.0, x2 in -3.0f64..3.0, x3 in -3.0f64..3.0) {
            let sq = 1.0 - x1 * x1 + x2 * x2 + x3 * x3;
            prop_assume!(sq > 1e-6);
            let p = Vec4::from_array([sq.sqrt(), x1, x2, x3]).to_mat();
            let y = project_h31(p, Pole::Plus).unwrap();
            prop_assert!(-y.x1 * y.x1 + y.x2 * y.x2 + y.x3 * y.x3 < 1.0);
            let m = project_h31(p * Mat2::new(-1.0, 0.0, 0.0, -1.0), Pole::Minus).unwrap();
            prop_assert!((m.x1 + y.x1).abs() < 1e-12 && (m.x2 + y.x2).abs() < 1e-12);
        }
    }
}
