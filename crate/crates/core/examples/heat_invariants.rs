use conflab::catalog;
use conflab::curvature::riemann;
use conflab::invariants::{heat_expression, heat_invariant, weight_scaling_check, InvariantName};
use conflab::metric::MetricField;
use conflab::tensor::PointFrame;

fn main() -> conflab::Result<()> {
    for j in 0..=3 {
        println!("a_{} = {}", 2 * j, heat_expression(j)?);
    }
    println!();

    for e in [
        catalog::round_sphere(4)?,
        catalog::product_sphere_sphere()?,
        catalog::schwarzschild_tangherlini(6, 1.0)?,
    ] {
        let frame = PointFrame::build(&e.field, &e.safe_points[2], 4)?;
        let b = riemann(&frame)?;
        let flat = b.is_ricci_flat();
        print!("{:<28}", e.name);
        for j in 0..=3 {
            let h = heat_invariant(j, &b, &frame, flat)?;
            print!("  a_{}={:<12.6e}{}", 2 * j, h.value, if h.partial { "*" } else { "" });
        }
        println!();
    }
    println!("(* = PARTIAL: the Ricci terms of a_6 are not included)\n");

    // I(λ²g) = λ^(-w) I(g), on a metric where nothing vanishes
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/metrics/warped4.metric");
    let field = MetricField::from_file_str(&std::fs::read_to_string(path).unwrap())?;
    for name in InvariantName::ALL {
        let c = weight_scaling_check(name, &field, &[0.1, 0.2, 0.3, 0.4], 1.7, 4)?;
        println!("{:<26} w={}  ratio {:.10}  expected {:.10}  {}", name.symbol(), name.weight(), c.scaled / c.base, c.expected_ratio, if c.passed { "ok" } else { "FAIL" });
    }
    Ok(())
}
