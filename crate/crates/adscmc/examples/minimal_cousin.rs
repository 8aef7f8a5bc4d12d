// The minimal cousin in Minkowski 3-space from the same data, and the Lawson shift.

use adscmc::geometry::{geometry_report, lawson_shift, AmbientSpec, Orientation};
use adscmc::minimal::{integrate_minimal, minimal_metric_factor, projected_gauss_minimal, weierstrass_derivatives, WeierstrassData};
use adscmc::surface::Domain;
use adscmc::Tolerances;

fn main() -> adscmc::Result<()> {
    let tol = Tolerances::default();
    let data = WeierstrassData::normalized("u", "v")?;
    let d = Domain::square(-0.75, 0.75, 51)?;
    let psi = integrate_minimal(&data, &d, (0.0, 0.0), &tol)?;
    let rep = geometry_report(&psi, &AmbientSpec::e31(), Orientation::Positive, &tol)?;
    println!("max |H| = {:.3e}", rep.h_error(0.0).max);

    let mut worst = 0.0_f64;
    for &(u, v) in &[(0.1, 0.2), (-0.5, 0.3), (0.7, 0.7)] {
        let (pu, pv) = weierstrass_derivatives(&data, u, v)?;
        let two_dot = 2.0 * (-pu.x1 * pv.x1 + pu.x2 * pv.x2 + pu.x3 * pv.x3);
        worst = worst.max((two_dot - minimal_metric_factor(&data, u, v)?).abs());
    }
    println!("metric factor vs 2<psi_u, psi_v>: {worst:.3e}");
    println!("projected Gauss map at (0.2, -0.4): {:?}", projected_gauss_minimal(&data, 0.2, -0.4, &tol)?);

    // H = 0 in flat space shifts to H = 1 in curvature -1
    for (h, kbar, c) in [(0.0, 0.0, 1.0), (0.0, 1.0, 1.0)] {
        println!("lawson_shift({h}, {kbar}, {c}) = {:?}", lawson_shift(h, kbar, c));
    }
    Ok(())
}
