// RK4 null curves in SL(2, R) against the closed-form frames of a gallery entry.

use adscmc::algebra::GroupElement;
use adscmc::bryant::{integrate_frame, NullLeg};
use adscmc::gallery::{gallery, oracle_frame, Leg};
use adscmc::lax::nullity_defect;
use adscmc::surface::Axis;
use adscmc::Tolerances;

fn main() -> adscmc::Result<()> {
    let tol = Tolerances::default();
    let entry = gallery("enneper-isothermic")?;
    let data = entry.data()?;
    for n in [375, 750, 1500] {
        let axis = Axis::new(-1.5, 1.5, n + 1)?;
        let anchor = axis.at(axis.nearest(0.0));
        let init = GroupElement::renormalize(oracle_frame(&entry, Leg::F1, anchor)?)?;
        let f1 = integrate_frame(NullLeg::Holomorphic, &data.q, &data.f, &axis, anchor, &init, &tol)?;
        let mut err = 0.0_f64;
        for i in 0..axis.n {
            err = err.max((f1.at(i) - oracle_frame(&entry, Leg::F1, axis.at(i))?).max_abs());
        }
        println!("n = {n:5}: max entry error {err:.3e}, det drift {:.3e}, nullity {:.3e}", f1.max_drift(), nullity_defect(&f1));
    }

    // the nu leg integrates the inverse frame
    let axis = Axis::new(-1.0, 1.0, 401)?;
    let g = integrate_frame(NullLeg::AntiholomorphicNu, &data.r, &data.g, &axis, 0.0, &GroupElement::IDENTITY, &tol)?;
    let inv = g.inverse_samples.as_ref().expect("nu legs keep the inverse");
    let worst = (0..axis.n).map(|i| (g.at(i) * inv[i].mat() - adscmc::algebra::Mat2::new(1.0, 0.0, 0.0, 1.0)).max_abs()).fold(0.0, f64::max);
    println!("nu leg: |F G - 1| <= {worst:.3e}");
    Ok(())
}
