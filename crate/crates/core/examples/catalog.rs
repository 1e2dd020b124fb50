use conflab::catalog::{self, CatalogParams};

fn main() -> conflab::Result<()> {
    let params = CatalogParams { r0: Some(2.0), upsilon: None };
    for name in catalog::NAMES {
        let e = catalog::builtin(name, if name == "product_sphere_sphere" { 4 } else { 5 }, &params)?;
        println!("{name:<28} coords {:?}", e.field.coords());
        println!("{:<28} {:?}", "", e.properties);
        println!("{:<28} {} safe points, first {:.3?}", "", e.safe_points.len(), e.safe_points[0]);
    }
    println!("\n{}", catalog::schwarzschild_tangherlini(5, 2.0)?.field.to_file_string());
    println!("{:?}", catalog::builtin("torus", 3, &params).err());
    Ok(())
}
