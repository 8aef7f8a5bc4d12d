// A mean curvature one surface from a pair of null curves, verified and exported.

use adscmc::algebra::GroupElement;
use adscmc::bryant::{assemble_mu, integrate_frame, NullLeg};
use adscmc::export::{export_surface, Format};
use adscmc::geometry::{geometry_report, AmbientSpec, Orientation};
use adscmc::minimal::WeierstrassData;
use adscmc::surface::{Domain, Pole, Surface};
use adscmc::Tolerances;

fn main() -> adscmc::Result<()> {
    let tol = Tolerances::default();
    let data = WeierstrassData::normalized("u", "v")?;
    let d = Domain::square(-0.75, 0.75, 51)?;
    let id = GroupElement::IDENTITY;
    let f1 = integrate_frame(NullLeg::Holomorphic, &data.q, &data.f, &d.u, 0.0, &id, &tol)?;
    let f2 = integrate_frame(NullLeg::AntiholomorphicMu, &data.r, &data.g, &d.v, 0.0, &id, &tol)?;
    let s = assemble_mu(&f1, &f2, &tol)?;
    println!("max |det - 1| on the grid: {:.3e}", s.max_det_defect());

    for orientation in [Orientation::Positive, Orientation::Negative] {
        let rep = geometry_report(&s, &AmbientSpec::h31(), orientation, &tol)?;
        let target = orientation.sign();
        println!("{orientation:?}: max |H - {target}| = {:.3e}", rep.h_error(target).max);
        for c in rep.surface_checks(&s, Some(target), &tol) {
            println!("  {:<26} {:.3e} (tol {:.1e}) {}", c.name, c.value, c.tolerance, if c.pass { "ok" } else { "FAIL" });
        }
    }

    let path = std::env::temp_dir().join("adscmc-enneper-cousin.obj");
    export_surface(&Surface::H31(s), None, Pole::Plus, Format::Obj, &path)?;
    println!("wrote {}", path.display());
    Ok(())
}
