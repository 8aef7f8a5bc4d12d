// The Lax route: compatibility check, frame integration and the assembled surface.

use adscmc::geometry::{geometry_report, AmbientSpec, Orientation};
use adscmc::lax::{gmc_residual, integrate_lax, GmcData, LaxOptions};
use adscmc::surface::{Action, Domain};
use adscmc::{Error, Tolerances};

fn main() -> adscmc::Result<()> {
    let tol = Tolerances::default();
    let d = Domain::square(-0.75, 0.75, 51)?;
    let data = GmcData::parse("2*ln(1 + u*v)", 1.0, "1", "1")?;
    let (res, _, _) = gmc_residual(&data, &d, &tol)?.max();
    println!("compatibility residual {res:.3e}");

    let opts = LaxOptions { anchor: (d.u.nearest(0.0), d.v.nearest(0.0)), ..LaxOptions::default() };
    for action in [Action::Mu, Action::Nu] {
        let frames = integrate_lax(&data, action, &d, &opts, &tol)?;
        let s = frames.assemble();
        let rep = geometry_report(&s, &AmbientSpec::h31(), Orientation::Positive, &tol)?;
        println!(
            "{}: path defect {:.3e}, max |H - 1| {:.3e}, max |det - 1| {:.3e}",
            action.name(),
            frames.path_defect,
            rep.h_error(1.0).max,
            s.max_det_defect()
        );
    }

    let flat = GmcData::parse("0", 1.0, "1", "1")?;
    match integrate_lax(&flat, Action::Mu, &d, &opts, &tol) {
        Err(Error::Compatibility { residual, .. }) => println!("incompatible data rejected (residual {residual:.3e})"),
        other => println!("unexpected: {:?}", other.map(|f| f.path_defect)),
    }
    Ok(())
}
