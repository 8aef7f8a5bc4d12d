// Data to frames and back: the Weierstrass data read off integrated null curves.

use adscmc::algebra::GroupElement;
use adscmc::bryant::{integrate_frame, NullLeg};
use adscmc::lax::extract_weierstrass_data;
use adscmc::minimal::WeierstrassData;
use adscmc::surface::Axis;
use adscmc::Tolerances;

fn main() -> adscmc::Result<()> {
    let tol = Tolerances::default();
    let data = WeierstrassData::parse("u", "exp(u/2)", "sin(v)", "1 + v^2/4")?;
    let axis = Axis::new(-1.0, 1.0, 1501)?;
    let id = GroupElement::IDENTITY;
    let f1 = integrate_frame(NullLeg::Holomorphic, &data.q, &data.f, &axis, 0.0, &id, &tol)?;
    let f2 = integrate_frame(NullLeg::AntiholomorphicMu, &data.r, &data.g, &axis, 0.0, &id, &tol)?;
    let back = extract_weierstrass_data(&f1, &f2, &tol)?;
    let mut worst = [0.0_f64; 4];
    for t in axis.nodes() {
        let pairs = [
            (back.q.evaluate(t)?, data.q.evaluate(t)?),
            (back.f.evaluate(t)?, data.f.evaluate(t)?),
            (back.r.evaluate(t)?, data.r.evaluate(t)?),
            (back.g.evaluate(t)?, data.g.evaluate(t)?),
        ];
        for (w, (a, b)) in worst.iter_mut().zip(pairs) {
            *w = w.max((a - b).abs());
        }
    }
    println!("max error in q, f, r, g: {:.3e} {:.3e} {:.3e} {:.3e}", worst[0], worst[1], worst[2], worst[3]);
    Ok(())
}
