// Parsing data expressions and evaluating them with exact derivatives.

use adscmc::expr::parse_expression;
use adscmc::fields::{ScalarField1D, ScalarField2D};

fn main() -> adscmc::Result<()> {
    let ast = parse_expression("2*ln(1 + u*v)", &["u", "v"])?;
    println!("omega(0.3, 0.4) = {:.12}", ast.eval_f64(&[0.3, 0.4])?);

    let omega = ScalarField2D::parse("2*ln(1 + u*v)")?;
    let (w, wu, wv) = omega.evaluate_grad(0.3, 0.4)?;
    println!("omega = {w:.12}, omega_u = {wu:.12} (2v/(1+uv) = {:.12}), omega_v = {wv:.12}", 0.8 / 1.12);

    let q = ScalarField1D::parse("sinh(u)^2", "u")?;
    let (val, d) = q.evaluate_d(0.5)?;
    println!("q(0.5) = {val:.12}, q'(0.5) = {d:.12}");

    let nodes: Vec<f64> = (0..201).map(|k| (-1.0 + 0.01 * k as f64).sin()).collect();
    let sampled = ScalarField1D::sampled(-1.0, 0.01, nodes)?;
    println!("sampled sin(0.123) = {:.10} vs {:.10}", sampled.evaluate(0.123)?, 0.123f64.sin());

    match parse_expression("u + w", &["u"]) {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
