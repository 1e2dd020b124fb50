//! Schouten, Weyl and Cotton tensors and the weight-6 invariant Phi on a
//! generic metric; then the conformal weight law under g -> e^(2Y) g.

use conflab::conformal::{conformal_bundle, conformal_weight_check, ConformalQuantity};
use conflab::curvature::riemann;
use conflab::dsl::parse_expr;
use conflab::metric::MetricField;
use conflab::tensor::PointFrame;

fn main() -> conflab::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/metrics/warped4.metric");
    let field = MetricField::from_file_str(&std::fs::read_to_string(path).unwrap())?;
    let x = [0.1, 0.2, 0.3, 0.4];

    let frame = PointFrame::build(&field, &x, 4)?;
    let b = riemann(&frame)?;
    let cb = conformal_bundle(&b, &frame)?;
    println!("|W|^2       {:.10e}", cb.weyl_sq);
    println!("W1, W2      {:.10e}, {:.10e}", cb.cubic_w1, cb.cubic_w2);
    println!("Phi         {:.10e}", cb.phi.unwrap());
    println!("W traces    {:.1e}", cb.weyl_trace_defect(&frame));
    println!("max |P|     {:.6}", cb.schouten.max_abs());
    println!("max |C|     {:.6}", cb.cotton.as_ref().unwrap().max_abs());

    let ups = parse_expr("0.3*x1 - 0.2*x2*x3 + 0.1*sin(x4)")?;
    println!("\nY = {ups}");
    for q in [ConformalQuantity::WeylSq, ConformalQuantity::CubicW1, ConformalQuantity::CubicW2, ConformalQuantity::Phi] {
        let c = conformal_weight_check(q, &field, &ups, &x, 4)?;
        println!(
            "{q:?}: I(e^2Y g) / I(g) = {:.12}, e^(-wY) = {:.12}",
            c.rescaled / c.base,
            c.expected_factor
        );
    }
    Ok(())
}
