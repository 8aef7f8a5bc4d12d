//! Acceptance suite. Each test prints one PASS/FAIL line with the measured
//! numbers, then asserts.

use adscmc::algebra::GroupElement;
use adscmc::bryant::{integrate_frame, NullLeg};
use adscmc::export::{import_json, project_h31, to_json_string, write_csv, write_obj, project_surface, SurfaceFile};
use adscmc::gallery::{gallery, oracle_frame, GalleryEntry, Leg};
use adscmc::gauss::{gauss_conformality_check, generalized_gauss, holomorphicity_check, hyperbolic_gauss, Holomorphicity};
use adscmc::geometry::{curvature_cross_check, geometry_report, lawson_shift, AmbientSpec, Orientation};
use adscmc::lax::{extract_weierstrass_data, gmc_residual, integrate_lax, GmcData, LaxOptions};
use adscmc::minimal::{integrate_minimal, minimal_metric_factor, weierstrass_derivatives};
use adscmc::surface::{Action, Axis, Domain, Pole, Sign, Surface, SurfaceGridH31};
use adscmc::{Error, Tolerances};

const CMC: [&str; 4] = ["enneper-isothermic", "enneper-anti", "b-scroll", "horosphere"];

fn tol() -> Tolerances {
    Tolerances::default()
}

fn verdict(id: u32, name: &str, pass: bool, detail: &str) {
    println!("[{}] criterion {id:2} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {id} ({name}) failed: {detail}");
}

fn h31(entry: &GalleryEntry, d: &Domain) -> SurfaceGridH31 {
    match entry.build(d, &tol()).unwrap() {
        Surface::H31(s) => s,
        Surface::E31(_) => panic!("{} is not an anti-de Sitter entry", entry.name),
    }
}

fn with_nodes(d: &Domain, n: usize) -> Domain {
    Domain::new((d.u.lo, d.u.hi), (d.v.lo, d.v.hi), n, n).unwrap()
}

fn lax_frames(omega: &str, h: f64, q: &str, r: &str, d: Domain) -> adscmc::Result<adscmc::lax::LaxFrames> {
    let data = GmcData::parse(omega, h, q, r)?;
    let opts = LaxOptions { anchor: (d.u.nearest(0.0), d.v.nearest(0.0)), ..LaxOptions::default() };
    integrate_lax(&data, Action::Mu, &d, &opts, &tol())
}

/// Max entry error of the RK4 frame against the closed form, over `steps` steps on [-1.5, 1.5].
fn frame_error(entry: &GalleryEntry, leg: Leg, steps: usize) -> f64 {
    let data = entry.data().unwrap();
    let axis = Axis::new(-1.5, 1.5, steps + 1).unwrap();
    let anchor = axis.at(axis.nearest(0.0));
    let init = GroupElement::renormalize(oracle_frame(entry, leg, anchor).unwrap()).unwrap();
    let (kind, s, w) = match leg {
        Leg::F1 => (NullLeg::Holomorphic, &data.q, &data.f),
        Leg::F2 => (NullLeg::AntiholomorphicMu, &data.r, &data.g),
    };
    let f = integrate_frame(kind, s, w, &axis, anchor, &init, &tol()).unwrap();
    (0..axis.n).map(|i| (f.at(i) - oracle_frame(entry, leg, axis.at(i)).unwrap()).max_abs()).fold(0.0, f64::max)
}

#[test]
fn criterion_01_integrator_vs_oracle() {
    let mut worst: f64 = 0.0;
    let mut ratios = Vec::new();
    let mut notes = Vec::new();
    for name in ["enneper-isothermic", "enneper-anti", "b-scroll"] {
        let e = gallery(name).unwrap();
        for leg in [Leg::F1, Leg::F2] {
            worst = worst.max(frame_error(&e, leg, 1500));
            // the order is read where truncation dominates rounding
            let (coarse, fine) = (frame_error(&e, leg, 60), frame_error(&e, leg, 120));
            if coarse > 1e-12 {
                ratios.push(coarse / fine);
            } else {
                notes.push(format!("{name} {leg:?} exact ({coarse:.1e})"));
            }
        }
    }
    let (lo, hi) = ratios.iter().fold((f64::INFINITY, 0.0_f64), |(a, b), &r| (a.min(r), b.max(r)));
    let pass = worst <= 1e-8 && !ratios.is_empty() && lo >= 14.0 && hi <= 18.0;
    let detail = format!(
        "max entry error {worst:.3e} (n = 1500); halving ratios in [{lo:.2}, {hi:.2}] over {} legs; {}",
        ratios.len(),
        notes.join(", ")
    );
    verdict(1, "integrator vs closed forms", pass, &detail);
}

#[test]
fn criterion_02_cmc_verification() {
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for name in CMC {
        let e = gallery(name).unwrap();
        assert!((e.domain.u.step() - 3e-2).abs() < 1e-12);
        let s = h31(&e, &e.domain);
        let plus = geometry_report(&s, &AmbientSpec::h31(), Orientation::Positive, &tol()).unwrap().h_error(1.0).max;
        let minus = geometry_report(&s, &AmbientSpec::h31(), Orientation::Negative, &tol()).unwrap().h_error(-1.0).max;
        worst = worst.max(plus).max(minus);
        parts.push(format!("{name} {plus:.2e}/{minus:.2e}"));
    }
    verdict(2, "H = 1, flipped H = -1 at h = 3e-2", worst <= 5e-5, &format!("max |H -+ 1| {worst:.3e}: {}", parts.join(", ")));
}

#[test]
fn criterion_03_minimal_cousins() {
    let (mut h_worst, mut m_worst) = (0.0_f64, 0.0_f64);
    for name in CMC {
        let e = gallery(name).unwrap();
        let data = e.data().unwrap();
        let d = e.domain;
        let origin = (d.u.at(d.u.nearest(0.0)), d.v.at(d.v.nearest(0.0)));
        let psi = integrate_minimal(&data, &d, origin, &tol()).unwrap();
        let rep = geometry_report(&psi, &AmbientSpec::e31(), Orientation::Positive, &tol()).unwrap();
        h_worst = h_worst.max(rep.h_error(0.0).max);
        for i in 0..d.nu() {
            for j in 0..d.nv() {
                let (u, v) = d.point(i, j);
                let (pu, pv) = weierstrass_derivatives(&data, u, v).unwrap();
                let two = 2.0 * (-pu.x1 * pv.x1 + pu.x2 * pv.x2 + pu.x3 * pv.x3);
                m_worst = m_worst.max((two - minimal_metric_factor(&data, u, v).unwrap()).abs());
            }
        }
    }
    let pass = h_worst <= 5e-5 && m_worst <= 1e-10;
    verdict(3, "minimal cousins", pass, &format!("max |H| {h_worst:.3e}, metric factor mismatch {m_worst:.3e}"));
}

#[test]
fn criterion_04_gauss_equation() {
    // finest desk-scale grid on each gallery rectangle
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for name in CMC {
        let e = gallery(name).unwrap();
        let s = h31(&e, &with_nodes(&e.domain, 201));
        let pts = curvature_cross_check(&s, Orientation::Positive);
        assert!(!pts.is_empty());
        let w = pts.iter().max_by(|a, b| a.residual.total_cmp(&b.residual)).unwrap();
        worst = worst.max(w.residual);
        parts.push(format!("{name} {:.2e} at ({:.3}, {:.3}) K = {:.2}", w.residual, w.u, w.v, w.k_relation));
    }
    verdict(
        4,
        "gauss equation with K = det(II I^-1) - 1",
        worst <= 1e-5,
        &format!("max |H^2 - K - 1 - 4 e^-2w QR| {worst:.3e} on 201x201: {}", parts.join("; ")),
    );
}

#[test]
fn criterion_05_lax_route() {
    let d = Domain::square(-0.75, 0.75, 51).unwrap();
    let data = GmcData::parse("2*ln(1 + u*v)", 1.0, "1", "1").unwrap();
    let (res, _, _) = gmc_residual(&data, &d, &tol()).unwrap().max();
    let mut defect: f64 = 0.0;
    let mut h_err: f64 = 0.0;
    for action in [Action::Mu, Action::Nu] {
        let opts = LaxOptions { anchor: (25, 25), ..LaxOptions::default() };
        let frames = integrate_lax(&data, action, &d, &opts, &tol()).unwrap();
        defect = defect.max(frames.path_defect);
        let s = frames.assemble();
        for (o, target) in [(Orientation::Positive, 1.0), (Orientation::Negative, -1.0)] {
            h_err = h_err.max(geometry_report(&s, &AmbientSpec::h31(), o, &tol()).unwrap().h_error(target).max);
        }
    }
    let rejected = matches!(lax_frames("0", 1.0, "1", "1", d), Err(Error::Compatibility { .. }));
    let pass = res <= 1e-6 && defect <= 1e-6 && h_err <= 5e-5 && rejected;
    verdict(
        5,
        "Lax route on Liouville data",
        pass,
        &format!("compatibility {res:.3e}, path defect {defect:.3e}, max |H -+ 1| {h_err:.3e}, incompatible rejected: {rejected}"),
    );
}

#[test]
fn criterion_06_holomorphicity_identities() {
    let liou = lax_frames("2*ln(1 + u*v)", 1.0, "1", "1", Domain::square(-0.75, 0.75, 51).unwrap()).unwrap();
    let rep = holomorphicity_check(&liou, &tol()).unwrap();
    let d = Domain::square(-0.5, 0.5, 101).unwrap();
    use Holomorphicity::*;
    let cases = [
        ("H=1 Q=0", 1.0, "0", "1", Some(Antiholomorphic), None),
        ("H=1 R=0", 1.0, "1", "0", Some(Holomorphic), None),
        ("H=-1 Q=0", -1.0, "0", "1", None, Some(Antiholomorphic)),
        ("H=-1 R=0", -1.0, "1", "0", None, Some(Holomorphic)),
        ("H=1 Q=R=0", 1.0, "0", "0", Some(Constant), None),
    ];
    let mut ok = rep.max_residual <= 1e-5;
    let mut parts = vec![format!("Liouville residual {:.3e}", rep.max_residual)];
    for (label, h, q, r, plus, minus) in cases {
        let c = holomorphicity_check(&lax_frames("0", h, q, r, d).unwrap(), &tol()).unwrap();
        let hit = plus.map_or(true, |p| c.plus == Some(p)) && minus.map_or(true, |m| c.minus == Some(m));
        ok &= hit && c.max_residual <= 1e-5;
        let name = |x: Option<Holomorphicity>| x.map_or("mixed", |x| x.name());
        parts.push(format!("{label}: {}/{} ({:.1e})", name(c.plus), name(c.minus), c.max_residual));
    }
    verdict(6, "holomorphicity identities and classification", ok, &parts.join(", "));
}

#[test]
fn criterion_07_gauss_map_conformality() {
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for name in CMC {
        let e = gallery(name).unwrap();
        let s = h31(&e, &e.domain);
        let r = gauss_conformality_check(&s, Orientation::Positive, Sign::Plus).iter().map(|p| p.residual).fold(0.0, f64::max);
        worst = worst.max(r);
        parts.push(format!("{name} {r:.2e}"));
    }
    let horo = gallery("horosphere").unwrap();
    let g = hyperbolic_gauss(&h31(&horo, &horo.domain), Orientation::Positive, Sign::Plus, &tol());
    let spread = g.spread();
    let pass = worst <= 1e-4 && spread <= 1e-6 && g.defined() > 0;
    verdict(
        7,
        "hyperbolic Gauss map conformality",
        pass,
        &format!("max |2<G_u,G_v> + K e^w| {worst:.3e} ({}); horosphere spread {spread:.3e}", parts.join(", ")),
    );
}

#[test]
fn criterion_08_generalized_gauss_map() {
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for name in CMC {
        let e = gallery(name).unwrap();
        let d = e.gauss_domain;
        let s = h31(&e, &d);
        let (gp, gm) = generalized_gauss(&s, &tol());
        for (sign, g) in [(Sign::Plus, gp), (Sign::Minus, gm)] {
            let (diff, n) = hyperbolic_gauss(&s, Orientation::Positive, sign, &tol()).max_difference(&g);
            assert!(n > 0, "{name}: no comparable nodes");
            worst = worst.max(diff);
            parts.push(format!("{name} {sign:?} {diff:.1e}"));
        }
    }
    verdict(8, "generalized = hyperbolic Gauss map", worst <= 1e-6, &format!("max chordal distance {worst:.3e}: {}", parts.join(", ")));
}

#[test]
fn criterion_09_lawson_round_trip() {
    let axis = Axis::new(-1.5, 1.5, 1501).unwrap();
    let id = GroupElement::IDENTITY;
    let mut worst: f64 = 0.0;
    for name in CMC {
        let data = gallery(name).unwrap().data().unwrap();
        let f1 = integrate_frame(NullLeg::Holomorphic, &data.q, &data.f, &axis, 0.0, &id, &tol()).unwrap();
        let f2 = integrate_frame(NullLeg::AntiholomorphicMu, &data.r, &data.g, &axis, 0.0, &id, &tol()).unwrap();
        let back = extract_weierstrass_data(&f1, &f2, &tol()).unwrap();
        for t in axis.nodes() {
            for (a, b) in [(&back.q, &data.q), (&back.f, &data.f), (&back.r, &data.r), (&back.g, &data.g)] {
                worst = worst.max((a.evaluate(t).unwrap() - b.evaluate(t).unwrap()).abs());
            }
        }
    }
    let corners = [lawson_shift(0.0, 0.0, 1.0), lawson_shift(0.0, 1.0, 1.0)];
    let exact = corners == [(1.0, -1.0), (1.0, 0.0)];
    verdict(
        9,
        "Lawson round trip",
        worst <= 1e-7 && exact,
        &format!("max |(q,f,r,g) error| {worst:.3e}; shifts {corners:?}"),
    );
}

fn artifacts(name: &str) -> [Vec<u8>; 3] {
    let e = gallery(name).unwrap();
    let surface = e.build(&e.domain, &tol()).unwrap();
    let (rep, checks) = e.verify(&surface, Orientation::Positive, &tol()).unwrap();
    let mut obj = Vec::new();
    match &surface {
        Surface::H31(s) => write_obj(&mut obj, &project_surface(s, Pole::Plus).unwrap()).unwrap(),
        Surface::E31(s) => write_obj(&mut obj, s).unwrap(),
    }
    let json = to_json_string(&SurfaceFile::new(&surface, Some((&rep, &checks)))).unwrap().into_bytes();
    let mut csv = Vec::new();
    write_csv(&mut csv, &rep).unwrap();
    [obj, json, csv]
}

#[test]
fn criterion_10_determinism_and_formats() {
    let mut same = true;
    for name in ["b-scroll", "minimal-enneper"] {
        same &= artifacts(name) == artifacts(name);
    }
    let mut lossless = true;
    let mut inside = true;
    let mut checked = 0usize;
    for name in adscmc::gallery::NAMES {
        let e = gallery(name).unwrap();
        let surface = e.build(&e.domain, &tol()).unwrap();
        let back = import_json(&to_json_string(&SurfaceFile::new(&surface, None)).unwrap()).unwrap().surface().unwrap();
        lossless &= back == surface;
        if let Surface::H31(s) = &surface {
            for (p, &m) in s.points.iter().zip(&s.mask) {
                if !m && p.to_vec().x0 > 0.0 {
                    let y = project_h31(*p, Pole::Plus).unwrap();
                    inside &= -y.x1 * y.x1 + y.x2 * y.x2 + y.x3 * y.x3 < 1.0;
                    checked += 1;
                }
            }
        }
    }
    verdict(
        10,
        "determinism and formats",
        same && lossless && inside && checked > 0,
        &format!("byte-identical reruns: {same}, JSON round trip lossless: {lossless}, {checked} upper-half points inside: {inside}"),
    );
}
