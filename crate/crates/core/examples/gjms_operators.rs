//! Yamabe, Paneitz and the Einstein product formula for P_k, with conformal
//! covariance residuals P_k^(e^2Y g) u - e^(-(n/2+k)Y) P_k^g (e^((n/2-k)Y) u).

use conflab::catalog;
use conflab::dsl::parse_expr;
use conflab::gjms::{covariance_residual, einstein_gjms_apply, einstein_lambda, paneitz_apply, yamabe_apply, Operator};

fn main() -> conflab::Result<()> {
    let s5 = catalog::round_sphere(5)?;
    let x = &s5.safe_points[1];
    let u = parse_expr("1 + x1*x2 + exp(0.3*x3)")?;
    let lam = einstein_lambda(4.0, 5);
    println!("S^5, u = {u}");
    println!("  Yamabe            {:.12}", yamabe_apply(&s5.field, x, &u, 2)?);
    println!("  product, k=1      {:.12}", einstein_gjms_apply(1, lam, &s5.field, x, &u, 2)?);
    println!("  Paneitz           {:.12}", paneitz_apply(&s5.field, x, &u, 4)?);
    println!("  product, k=2      {:.12}", einstein_gjms_apply(2, lam, &s5.field, x, &u, 4)?);
    println!("  product, k=3      {:.12}", einstein_gjms_apply(3, lam, &s5.field, x, &u, 6)?);

    let t = catalog::schwarzschild_tangherlini(5, 1.0)?;
    let ups = parse_expr("0.1*r - 0.05*th1*th2")?;
    let v = parse_expr("1 + tau*th3 + r^2")?;
    println!("\nTangherlini n=5, Y = {ups}, u = {v}");
    for (i, x) in t.safe_points.iter().enumerate() {
        let ry = covariance_residual(Operator::Yamabe, &t.field, &ups, &v, x, 4)?;
        let rp = covariance_residual(Operator::Paneitz, &t.field, &ups, &v, x, 4)?;
        println!("  point {i}: Yamabe {ry:.1e}  Paneitz {rp:.1e}");
    }

    // Ricci-flat is Einstein with lambda = 0, where P_2 is the bilaplacian
    println!("\nTangherlini P_2 u = {:.12}", einstein_gjms_apply(2, 0.0, &t.field, &t.safe_points[0], &v, 4)?);
    let p = catalog::product_sphere_sphere()?;
    println!("{:?}", einstein_gjms_apply(2, 0.0, &p.field, &p.safe_points[0], &v, 4).err());
    Ok(())
}
