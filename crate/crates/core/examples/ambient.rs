//! The ambient metric of an Einstein manifold and GJMS operators as
//! restricted powers of its Laplacian.

use conflab::ambient::{ambient_lambda, ambient_laplacian_power, build_ambient, extension_independence_check, homogeneity_defect, t_independence_check};
use conflab::catalog;
use conflab::dsl::parse_expr;
use conflab::gjms::{einstein_gjms_apply, einstein_lambda, yamabe_apply};

fn main() -> conflab::Result<()> {
    let s = catalog::round_sphere(4)?;
    let x = s.safe_points[1].clone();
    let af = build_ambient(&s.field, ambient_lambda(3.0, 4), &x)?;
    println!("ambient coordinates {:?}", af.ambient.coords());
    println!("max |Ric(g~)| at rho = 0: {:.1e}", af.ricci_max_abs(&x)?);
    let p = af.ambient_point(1.4, &x, 0.1);
    println!("homogeneity defect:     {:.1e}", homogeneity_defect(&af, &p, 2.0)?);

    let u = parse_expr("x1 + x2^2*x3 + cos(x4)")?;
    let a1 = ambient_laplacian_power(&af, 1, &u, &x, 1.0)?;
    let a2 = ambient_laplacian_power(&af, 2, &u, &x, 1.0)?;
    println!("\nk=1 ambient {a1:.12}  Yamabe   {:.12}", yamabe_apply(&s.field, &x, &u, 2)?);
    println!("k=2 ambient {a2:.12}  product  {:.12}", einstein_gjms_apply(2, einstein_lambda(3.0, 4), &s.field, &x, &u, 4)?);

    let t = t_independence_check(&af, 2, &u, &x, 3.0)?;
    println!("t = 1 vs t = 3:      {:.12} {:.12}", t.at_one, t.at_t);
    let c = extension_independence_check(&af, 2, &u, &x, &parse_expr("rho*x1*x2")?)?;
    println!("extension + rho*x1*x2: {:.12} {:.12}", c.base_value, c.perturbed_value);
    println!("extension + x1 (not O(rho)): {:?}", extension_independence_check(&af, 2, &u, &x, &parse_expr("x1")?).err());
    // k > n/2 does not exist for even n
    println!("{:?}", ambient_laplacian_power(&af, 3, &u, &x, 1.0).err());
    Ok(())
}
