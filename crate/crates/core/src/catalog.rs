//! Built-in analytic metrics with known properties.
//!
//! Every flag on a [`CatalogEntry`] is a claim; the test suite checks each one
//! at each safe point.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::dsl::parse_expr;
use crate::error::{Error, Result};
use crate::metric::MetricField;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Default)]
pub struct Properties {
    pub flat: bool,
    pub conformally_flat: bool,
    /// `c` with `Ric = c g`.
    pub einstein: Option<f64>,
    pub ricci_flat: bool,
    pub weyl_nonzero: bool,
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub field: MetricField,
    pub properties: Properties,
    pub safe_points: Vec<Vec<f64>>,
}

/// Optional parameters of the parameterized families.
#[derive(Debug, Clone, Default)]
pub struct CatalogParams {
    /// Horizon radius of the Tangherlini family (default 1).
    pub r0: Option<f64>,
    /// Conformal factor `Υ` of the `conformally_flat` family, over `x1..xn`.
    pub upsilon: Option<String>,
}

pub const NAMES: [&str; 6] = [
    "flat",
    "round_sphere_stereographic",
    "hyperbolic_ball",
    "conformally_flat",
    "schwarzschild_tangherlini",
    "product_sphere_sphere",
];

fn cartesian(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

fn radius_sq(n: usize) -> String {
    (1..=n).map(|i| format!("x{i}^2")).collect::<Vec<_>>().join(" + ")
}

fn conformal_diag(n: usize, factor: &str) -> Result<MetricField> {
    MetricField::diagonal(cartesian(n), BTreeMap::new(), vec![parse_expr(factor)?; n])
}

/// `count` points in a box of half-width `scale`, spread by a fixed
/// quasi-random sequence.
fn box_points(n: usize, count: usize, scale: f64) -> Vec<Vec<f64>> {
    (0..count)
        .map(|m| {
            (0..n)
                .map(|i| {
                    if m == 0 {
                        0.0
                    } else {
                        scale * (1.7 * ((m * n + i) as f64 + 1.0)).sin()
                    }
                })
                .collect()
        })
        .collect()
}

fn check_dim(name: &str, n: usize, min: usize) -> Result<()> {
    if n < min {
        return Err(Error::Dimension(format!("{name} needs n >= {min}, got {n}")));
    }
    Ok(())
}

pub fn flat(n: usize) -> Result<CatalogEntry> {
    check_dim("flat", n, 1)?;
    Ok(CatalogEntry {
        name: "flat".into(),
        field: conformal_diag(n, "1")?,
        properties: Properties {
            flat: true,
            conformally_flat: true,
            einstein: Some(0.0),
            ricci_flat: true,
            weyl_nonzero: false,
        },
        safe_points: box_points(n, 5, 1.0),
    })
}

/// Unit sphere in stereographic coordinates, `4/(1+|x|²)² δ`.
pub fn round_sphere(n: usize) -> Result<CatalogEntry> {
    check_dim("round_sphere_stereographic", n, 2)?;
    Ok(CatalogEntry {
        name: "round_sphere_stereographic".into(),
        field: conformal_diag(n, &format!("4/(1 + {})^2", radius_sq(n)))?,
        properties: Properties {
            conformally_flat: true,
            einstein: Some(n as f64 - 1.0),
            ..Properties::default()
        },
        safe_points: box_points(n, 5, 0.6),
    })
}

/// Poincaré ball, `4/(1−|x|²)² δ`, curvature −1.
pub fn hyperbolic_ball(n: usize) -> Result<CatalogEntry> {
    check_dim("hyperbolic_ball", n, 2)?;
    let scale = 0.5 / (n as f64).sqrt();
    Ok(CatalogEntry {
        name: "hyperbolic_ball".into(),
        field: conformal_diag(n, &format!("4/(1 - ({}))^2", radius_sq(n)))?,
        properties: Properties {
            conformally_flat: true,
            einstein: Some(-(n as f64 - 1.0)),
            ..Properties::default()
        },
        safe_points: box_points(n, 5, scale),
    })
}

/// `e^{2Υ} δ` for a DSL expression `Υ` in `x1..xn`.
pub fn conformally_flat(n: usize, upsilon: &str) -> Result<CatalogEntry> {
    check_dim("conformally_flat", n, 2)?;
    let ups = parse_expr(upsilon)?;
    let field = conformal_diag(n, "1")?.rescale(&ups)?;
    Ok(CatalogEntry {
        name: "conformally_flat".into(),
        field,
        properties: Properties {
            conformally_flat: true,
            ..Properties::default()
        },
        safe_points: box_points(n, 5, 0.5),
    })
}

/// Euclidean Schwarzschild–Tangherlini metric in coordinates
/// `(tau, r, th1, …, th{n−2})`:
/// `f dτ² + f⁻¹ dr² + r² dΩ²_{n−2}`, `f = 1 − (r0/r)^{n−3}`.
pub fn schwarzschild_tangherlini(n: usize, r0: f64) -> Result<CatalogEntry> {
    check_dim("schwarzschild_tangherlini", n, 4)?;
    if r0 <= 0.0 {
        return Err(Error::Rejected(format!("r0 must be positive, got {r0}")));
    }
    let mut coords = vec!["tau".to_string(), "r".to_string()];
    coords.extend((1..=n - 2).map(|a| format!("th{a}")));
    let f = format!("(1 - (r0/r)^{})", n - 3);
    let mut diag = vec![parse_expr(&f)?, parse_expr(&format!("1/{f}"))?];
    for a in 1..=n - 2 {
        let mut s = "r^2".to_string();
        for b in 1..a {
            s.push_str(&format!(" * sin(th{b})^2"));
        }
        diag.push(parse_expr(&s)?);
    }
    let params = BTreeMap::from([("r0".to_string(), r0)]);
    let field = MetricField::diagonal(coords, params, diag)?;
    let safe_points = (0..5)
        .map(|m| {
            let mut p = vec![0.3 * m as f64, r0 * (1.5 + 0.4 * m as f64)];
            p.extend((0..n - 2).map(|a| 0.9 + 0.3 * ((m + a) % 5) as f64));
            p
        })
        .collect();
    Ok(CatalogEntry {
        name: "schwarzschild_tangherlini".into(),
        field,
        properties: Properties {
            einstein: Some(0.0),
            ricci_flat: true,
            weyl_nonzero: true,
            ..Properties::default()
        },
        safe_points,
    })
}

/// Product of two unit 2-spheres, each in stereographic coordinates.
pub fn product_sphere_sphere() -> Result<CatalogEntry> {
    let a = parse_expr("4/(1 + x1^2 + x2^2)^2")?;
    let b = parse_expr("4/(1 + x3^2 + x4^2)^2")?;
    let field = MetricField::diagonal(cartesian(4), BTreeMap::new(), vec![a.clone(), a, b.clone(), b])?;
    Ok(CatalogEntry {
        name: "product_sphere_sphere".into(),
        field,
        properties: Properties {
            einstein: Some(1.0),
            weyl_nonzero: true,
            ..Properties::default()
        },
        safe_points: box_points(4, 5, 0.6),
    })
}

/// Looks up a family by name.
pub fn builtin(name: &str, n: usize, params: &CatalogParams) -> Result<CatalogEntry> {
    match name {
        "flat" => flat(n),
        "round_sphere_stereographic" => round_sphere(n),
        "hyperbolic_ball" => hyperbolic_ball(n),
        "conformally_flat" => {
            let default = if n >= 2 { "0.1*x1 - 0.05*x2^2" } else { "0.1*x1" };
            conformally_flat(n, params.upsilon.as_deref().unwrap_or(default))
        }
        "schwarzschild_tangherlini" => schwarzschild_tangherlini(n, params.r0.unwrap_or(1.0)),
        "product_sphere_sphere" => {
            if n != 4 {
                return Err(Error::Dimension(format!("product_sphere_sphere has n = 4, got {n}")));
            }
            product_sphere_sphere()
        }
        _ => Err(Error::UnknownMetric(name.to_string())),
    }
}
