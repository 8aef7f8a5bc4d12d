// Hyperbolic, frame and generalized Gauss maps, and the holomorphicity classification.

use adscmc::gallery::gallery;
use adscmc::gauss::{
    frame_gauss_coordinates, gauss_conformality_check, generalized_gauss, holomorphicity_check, hyperbolic_gauss, FramesRef,
};
use adscmc::geometry::Orientation;
use adscmc::lax::{integrate_lax, GmcData, LaxOptions};
use adscmc::surface::{Action, Domain, Sign, Surface};
use adscmc::Tolerances;

fn main() -> adscmc::Result<()> {
    let tol = Tolerances::default();

    let horo = gallery("horosphere")?;
    let Surface::H31(h) = horo.build(&horo.domain, &tol)? else { unreachable!() };
    let g = hyperbolic_gauss(&h, Orientation::Positive, Sign::Plus, &tol);
    println!("horosphere: plus map spread {:.3e} over {} nodes", g.spread(), g.defined());

    let bs = gallery("b-scroll")?;
    let d = Domain::new((-1.5, 1.5), (0.1, 3.1), 101, 101)?;
    let Surface::H31(s) = bs.build(&d, &tol)? else { unreachable!() };
    let (gp, gm) = generalized_gauss(&s, &tol);
    for (sign, gen) in [(Sign::Plus, &gp), (Sign::Minus, &gm)] {
        let hyp = hyperbolic_gauss(&s, Orientation::Positive, sign, &tol);
        let (diff, n) = hyp.max_difference(gen);
        println!("b-scroll {sign:?}: generalized vs hyperbolic {diff:.3e} on {n} nodes");
    }
    let conf = gauss_conformality_check(&s, Orientation::Positive, Sign::Plus);
    println!("b-scroll: conformality residual {:.3e}", conf.iter().map(|p| p.residual).fold(0.0, f64::max));

    let d = Domain::square(-0.5, 0.5, 101)?;
    let opts = LaxOptions { anchor: (50, 50), ..LaxOptions::default() };
    for (label, omega, q, r) in [("Q = 0", "0", "0", "1"), ("R = 0", "0", "1", "0"), ("Q = R = 1", "2*ln(1 + u*v)", "1", "1")] {
        let data = GmcData::parse(omega, 1.0, q, r)?;
        let frames = integrate_lax(&data, Action::Mu, &d, &opts, &tol)?;
        let rep = holomorphicity_check(&frames, &tol)?;
        let name = |c: Option<adscmc::gauss::Holomorphicity>| c.map_or("mixed", |c| c.name());
        println!("{label:10} plus {:16} minus {:16} identity residual {:.3e}", name(rep.plus), name(rep.minus), rep.max_residual);
        let fg = frame_gauss_coordinates(FramesRef::Lax(&frames), Sign::Plus, &tol)?;
        let hg = hyperbolic_gauss(&frames.assemble(), Orientation::Positive, Sign::Plus, &tol);
        println!("{:10} frame chart vs hyperbolic chart {:.3e}", "", fg.max_difference(&hg).0);
    }
    Ok(())
}
