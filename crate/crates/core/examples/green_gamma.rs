//! Log coefficients of GJMS Green functions, by both available formulas,
//! and the conformal flatness probe built on them.

use conflab::catalog;
use conflab::conformal::conformal_bundle;
use conflab::curvature::riemann;
use conflab::green::{conformal_flatness_probe, gamma_gjms, gamma_power_laplacian, HalfInt, FLATNESS_TOLERANCE};
use conflab::tensor::PointFrame;

fn main() -> conflab::Result<()> {
    // Ricci-flat: Δ^k and P_k coincide, so their gammas must too
    for n in [5usize, 6] {
        let t = catalog::schwarzschild_tangherlini(n, 1.0)?;
        let frame = PointFrame::build(&t.field, &t.safe_points[0], 4)?;
        let b = riemann(&frame)?;
        let cb = conformal_bundle(&b, &frame)?;
        for twice in (1..=n as u32).rev().filter(|t| (n as u32 - t).is_multiple_of(2)) {
            let k = HalfInt::from_twice(twice);
            let g = gamma_gjms(k, Some(&cb), &frame)?;
            let h = gamma_power_laplacian(k, &b, &frame)?;
            println!("n={n} k={k:<4} P_k: {:+.12e}  Lap^k: {:+.12e}   [{}]", g.value, h.value, g.expression);
        }
    }

    println!();
    let s2 = catalog::round_sphere(2)?;
    let frame = PointFrame::build(&s2.field, &s2.safe_points[0], 2)?;
    println!("S^2 Yamabe: {:.12}", gamma_gjms(HalfInt::integer(1), None, &frame)?.value);

    // weight beyond what is implemented
    let f = catalog::flat(10)?;
    let frame = PointFrame::build(&f.field, &f.safe_points[0], 2)?;
    println!("n=10, k=1: {}", gamma_gjms(HalfInt::integer(1), None, &frame).unwrap_err());

    println!();
    for e in [
        catalog::round_sphere(6)?,
        catalog::conformally_flat(5, "0.2*x1*x2 - 0.1*x3")?,
        catalog::schwarzschild_tangherlini(5, 1.0)?,
    ] {
        let p = conformal_flatness_probe(&e.field, &e.safe_points, FLATNESS_TOLERANCE)?;
        println!("{:<28} {:?}  max |gamma| = {:.3e}", e.name, p.verdict, p.max_abs_gamma);
    }
    Ok(())
}
