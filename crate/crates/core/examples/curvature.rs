//! Riemann, Ricci and scalar curvature on a few catalog metrics, with the
//! algebraic and differential Bianchi identities as sanity checks.

use conflab::catalog;
use conflab::curvature::{riemann, riemann_symmetry_defect, second_bianchi_defect};
use conflab::tensor::PointFrame;

fn main() -> conflab::Result<()> {
    let entries = [
        catalog::round_sphere(4)?,
        catalog::hyperbolic_ball(3)?,
        catalog::schwarzschild_tangherlini(5, 1.0)?,
        catalog::product_sphere_sphere()?,
    ];
    for e in &entries {
        let x = &e.safe_points[1];
        let frame = PointFrame::build(&e.field, x, 3)?;
        let b = riemann(&frame)?;
        let (c, resid) = b.einstein_constant(&frame);
        println!("{} (n = {}) at {x:.3?}", e.name, e.field.dim());
        println!("  kappa           {:.10}", b.kappa);
        println!("  max |Ric|       {:.3e}   Ricci-flat: {}", b.ricci_max_abs(), b.is_ricci_flat());
        println!("  Ric = c g       c = {c:.10}, residual {resid:.1e}");
        println!("  symmetry defect {:.1e}", riemann_symmetry_defect(&b.riemann));
        println!("  2nd Bianchi     {:.1e}", second_bianchi_defect(b.grad_riemann.as_ref().unwrap()));
    }

    // the chart boundary of Tangherlini is a singular point
    let t = catalog::schwarzschild_tangherlini(5, 1.0)?;
    let err = PointFrame::build(&t.field, &[0.0, 0.0, 1.0, 1.0, 1.0], 3).err();
    println!("r = 0: {}", err.map(|e| e.to_string()).unwrap_or_default());
    Ok(())
}
