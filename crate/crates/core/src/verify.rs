//! Batteries of property checks, grouped into named suites.

use rayon::prelude::*;
use serde::Serialize;

use crate::ambient::{
    ambient_lambda, ambient_laplacian_power, build_ambient, extension_independence_check, homogeneity_defect,
    t_independence_check,
};
use crate::catalog::{self, CatalogEntry, CatalogParams};
use crate::conformal::{conformal_bundle, conformal_weight_check, ConformalQuantity};
use crate::curvature::{riemann, riemann_symmetry_defect, second_bianchi_defect};
use crate::dsl::{parse_expr, Expr};
use crate::error::{Error, Result};
use crate::fg_rule::{a_tilde, eval_conformal_expr, fg_transform, ConformalPrimitive};
use crate::gjms::{covariance_residual, einstein_gjms_apply, einstein_lambda, yamabe_apply, Operator};
use crate::green::{gamma_gjms, gamma_power_laplacian, HalfInt};
use crate::invariants::{heat_invariant, weight_scaling_check, InvariantName};
use crate::spectral::{geometric_side, zeta_residue_at_1, SphereSpectrum};
use crate::tensor::PointFrame;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }

    /// A check whose computation errored counts as failed.
    fn from_result(name: impl Into<String>, r: Result<(bool, String)>) -> Check {
        match r {
            Ok((passed, detail)) => Check::new(name, passed, detail),
            Err(e) => Check::new(name, false, format!("error: {e}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub const SUITES: [&str; 7] = [
    "symmetries",
    "weights",
    "conformal-covariance",
    "fg-rule",
    "ricci-flat-consistency",
    "ambient",
    "spectral",
];

/// Runs one suite by name.
pub fn run_suite(name: &str) -> Result<SuiteReport> {
    let checks = match name {
        "symmetries" => symmetries(),
        "weights" => weights(),
        "conformal-covariance" => conformal_covariance(),
        "fg-rule" => fg_rule(),
        "ricci-flat-consistency" => ricci_flat_consistency(),
        "ambient" => ambient(),
        "spectral" => spectral(),
        _ => {
            return Err(Error::Rejected(format!(
                "unknown suite `{name}` (expected one of {})",
                SUITES.join(", ")
            )))
        }
    }?;
    Ok(SuiteReport {
        suite: name.to_string(),
        checks,
    })
}

/// Runs several suites concurrently, reporting in the given order.
pub fn run_suites(names: &[&str]) -> Result<Vec<SuiteReport>> {
    names.par_iter().map(|n| run_suite(n)).collect()
}

fn e(s: &str) -> Expr {
    parse_expr(s).expect("built-in expression")
}

fn rel_close(a: f64, b: f64, rel: f64, abs: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()) + abs
}

fn test_entries() -> Result<Vec<CatalogEntry>> {
    let p = CatalogParams::default();
    Ok(vec![
        catalog::round_sphere(4)?,
        catalog::hyperbolic_ball(4)?,
        catalog::builtin("conformally_flat", 5, &p)?,
        catalog::schwarzschild_tangherlini(5, 1.0)?,
        catalog::schwarzschild_tangherlini(6, 1.0)?,
        catalog::product_sphere_sphere()?,
    ])
}

fn symmetries() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for entry in test_entries()? {
        for (i, x) in entry.safe_points.iter().take(2).enumerate() {
            let tag = format!("{} n={} point {i}", entry.name, entry.field.dim());
            let r = (|| -> Result<(bool, String)> {
                let frame = PointFrame::build(&entry.field, x, 3)?;
                let b = riemann(&frame)?;
                let cb = conformal_bundle(&b, &frame)?;
                let sym = riemann_symmetry_defect(&b.riemann);
                let bianchi = second_bianchi_defect(b.grad_riemann.as_ref().unwrap());
                let trace = cb.weyl_trace_defect(&frame);
                let wsym = riemann_symmetry_defect(&cb.weyl);
                let c = cb.cotton.as_ref().unwrap();
                let n = frame.dim();
                let mut cotton = 0.0f64;
                crate::tensor::for_each_index(n, 3, |i| {
                    cotton = cotton.max((c.get(i) + c.get(&[i[0], i[2], i[1]])).abs());
                });
                let scale = b.riemann.max_abs().max(1.0);
                let passed = sym < 1e-9 * scale
                    && bianchi < 1e-8 * scale
                    && trace < 1e-9 * scale
                    && wsym < 1e-9 * scale
                    && cotton < 1e-10 * scale;
                Ok((
                    passed,
                    format!(
                        "R sym {sym:.1e}, 2nd Bianchi {bianchi:.1e}, W trace {trace:.1e}, W sym {wsym:.1e}, C antisym {cotton:.1e}"
                    ),
                ))
            })();
            out.push(Check::from_result(tag, r));
        }
    }
    Ok(out)
}

fn weights() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let fields = [
        catalog::round_sphere(4)?,
        catalog::schwarzschild_tangherlini(5, 1.0)?,
        catalog::product_sphere_sphere()?,
    ];
    for entry in &fields {
        let x = &entry.safe_points[1];
        for name in InvariantName::ALL {
            for lambda in [0.5, 2.0, 1.7] {
                let r = weight_scaling_check(name, &entry.field, x, lambda, 4)
                    .map(|c| (c.passed, format!("I = {:.6e}, I_scaled = {:.6e}", c.base, c.scaled)));
                out.push(Check::from_result(
                    format!("{} {} lambda={lambda}", entry.name, name.symbol()),
                    r,
                ));
            }
        }
    }
    let tangherlini = &fields[1];
    let ups = e("0.2*r - 0.1*th1^2");
    for q in [
        ConformalQuantity::WeylSq,
        ConformalQuantity::CubicW1,
        ConformalQuantity::CubicW2,
        ConformalQuantity::Phi,
    ] {
        let r = conformal_weight_check(q, &tangherlini.field, &ups, &tangherlini.safe_points[1], 4).map(|c| {
            (
                c.passed,
                format!("I = {:.6e}, I_hat = {:.6e}, factor {:.6e}", c.base, c.rescaled, c.expected_factor),
            )
        });
        out.push(Check::from_result(format!("conformal weight {q:?} on tangherlini"), r));
    }
    Ok(out)
}

/// Smooth `(Υ, u)` pairs over the first few coordinates.
fn test_pairs(coords: &[String]) -> Vec<(Expr, Expr)> {
    let (a, b, c) = (&coords[0], &coords[1], &coords[2]);
    [
        (format!("0.1*{a}"), format!("1 + {b}")),
        (format!("0.05*({a} + {c}^2)"), format!("1 + {a}*{b}")),
        (format!("0.1*sin({b}) - 0.05*{a}*{c}"), format!("exp(0.2*{c}) + {a}^2")),
    ]
    .iter()
    .map(|(u, v)| (e(u), e(v)))
    .collect()
}

fn conformal_covariance() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let bases = [
        catalog::flat(5)?,
        catalog::round_sphere(4)?,
        catalog::schwarzschild_tangherlini(5, 1.0)?,
    ];
    for entry in &bases {
        for (pi, x) in entry.safe_points.iter().take(3).enumerate() {
            for (qi, (ups, u)) in test_pairs(entry.field.coords()).iter().enumerate() {
                for op in [Operator::Yamabe, Operator::Paneitz] {
                    let r = covariance_residual(op, &entry.field, ups, u, x, 4)
                        .map(|res| (res < 1e-6, format!("residual {res:.2e}")));
                    out.push(Check::from_result(
                        format!("{op:?} on {} point {pi} pair {qi}", entry.name),
                        r,
                    ));
                }
            }
        }
    }
    Ok(out)
}

fn fg_rule() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let r = |a, b| num_rational::Rational64::new(a, b);
    let a2 = a_tilde(1)?;
    out.push(Check::new("a~2 = 0", a2.is_zero(), a2.to_string()));
    let a4 = a_tilde(2)?;
    let ok4 = a4.terms().count() == 1 && a4.coefficient(ConformalPrimitive::WeylSq) == r(1, 180);
    out.push(Check::new("a~4 = |W|^2/180", ok4, a4.to_string()));
    let a6 = a_tilde(3)?;
    let ok6 = a6.terms().count() == 3
        && a6.coefficient(ConformalPrimitive::Phi) == r(81, 45360)
        && a6.coefficient(ConformalPrimitive::CubicW1) == r(64, 45360)
        && a6.coefficient(ConformalPrimitive::CubicW2) == r(352, 45360);
    out.push(Check::new("a~6 = (81 Phi + 64 W1 + 352 W2)/(9*7!)", ok6, a6.to_string()));
    for n in [5, 6] {
        let entry = catalog::schwarzschild_tangherlini(n, 1.0)?;
        let x = &entry.safe_points[1];
        let frame = PointFrame::build(&entry.field, x, 4)?;
        let b = riemann(&frame)?;
        let cb = conformal_bundle(&b, &frame)?;
        for j in 0..=3 {
            let rr = (|| -> Result<(bool, String)> {
                let a = heat_invariant(j, &b, &frame, true)?.value;
                let t = eval_conformal_expr(&fg_transform(&crate::invariants::heat_expression(j)?)?, &cb)?;
                Ok((rel_close(a, t, 1e-7, 1e-14), format!("a = {a:.10e}, a~ = {t:.10e}")))
            })();
            out.push(Check::from_result(format!("a_{} = a~_{} on tangherlini n={n}", 2 * j, 2 * j), rr));
        }
    }
    Ok(out)
}

fn ricci_flat_consistency() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for n in [5usize, 6] {
        let entry = catalog::schwarzschild_tangherlini(n, 1.0)?;
        for (pi, x) in entry.safe_points.iter().take(3).enumerate() {
            let frame = PointFrame::build(&entry.field, x, 4)?;
            let b = riemann(&frame)?;
            let cb = conformal_bundle(&b, &frame)?;
            for w in [0u32, 2, 4] {
                let k = HalfInt::from_twice(n as u32 - w);
                let r = (|| -> Result<(bool, String)> {
                    let gj = gamma_gjms(k, Some(&cb), &frame)?.value;
                    let gl = gamma_power_laplacian(k, &b, &frame)?.value;
                    Ok((rel_close(gj, gl, 1e-7, 1e-15), format!("P_k: {gj:.10e}, Lap^k: {gl:.10e}")))
                })();
                out.push(Check::from_result(format!("tangherlini n={n} k={k} point {pi}"), r));
            }
        }
    }
    Ok(out)
}

fn ambient() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let u = e("1 + x1*x2 + sin(x1)");
    for n in [4usize, 5] {
        let sphere = catalog::round_sphere(n)?;
        let x = sphere.safe_points[1].clone();
        let af = build_ambient(&sphere.field, ambient_lambda(n as f64 - 1.0, n), &x)?;
        let ric = af.ricci_max_abs(&x)?;
        out.push(Check::new(format!("ambient Ricci S^{n}"), ric < 1e-7, format!("max |Ric| {ric:.2e}")));
        let r = (|| -> Result<(bool, String)> {
            let a = ambient_laplacian_power(&af, 1, &u, &x, 1.0)?;
            let y = yamabe_apply(&sphere.field, &x, &u, 2)?;
            Ok((rel_close(a, y, 1e-6, 1e-12), format!("ambient {a:.10e}, Yamabe {y:.10e}")))
        })();
        out.push(Check::from_result(format!("k=1 ambient = Yamabe on S^{n}"), r));
        let r = (|| -> Result<(bool, String)> {
            let a = ambient_laplacian_power(&af, 2, &u, &x, 1.0)?;
            let p = einstein_gjms_apply(2, einstein_lambda(n as f64 - 1.0, n), &sphere.field, &x, &u, 4)?;
            Ok((rel_close(a, p, 1e-6, 1e-12), format!("ambient {a:.10e}, product {p:.10e}")))
        })();
        out.push(Check::from_result(format!("k=2 ambient = Einstein product on S^{n}"), r));
        let r = t_independence_check(&af, 2, &u, &x, 2.0)
            .map(|c| (c.passed, format!("t=1 {:.10e}, t=2 {:.10e}", c.at_one, c.at_t)));
        out.push(Check::from_result(format!("t-independence S^{n}"), r));
        let r = extension_independence_check(&af, 2, &u, &x, &e("rho*sin(x1)"))
            .map(|c| (c.passed, format!("{:.10e} vs {:.10e}", c.base_value, c.perturbed_value)));
        out.push(Check::from_result(format!("extension independence S^{n}"), r));
        let mut p = af.ambient_point(1.3, &x, 0.2);
        p[1] += 0.05;
        let h = homogeneity_defect(&af, &p, 1.7)?;
        out.push(Check::new(format!("homogeneity S^{n}"), h < 1e-12, format!("defect {h:.2e}")));
    }
    let flat = catalog::flat(4)?;
    let x = flat.safe_points[2].clone();
    let af = build_ambient(&flat.field, 0.0, &x)?;
    let w = e("x1^2*x2^2 + x3^3*x4");
    for k in [1u32, 2] {
        let r = (|| -> Result<(bool, String)> {
            let a = ambient_laplacian_power(&af, k, &w, &x, 1.0)?;
            let d = einstein_gjms_apply(k, 0.0, &flat.field, &x, &w, 2 * k as usize)?;
            Ok(((a - d).abs() < 1e-7, format!("ambient {a:.10e}, Lap^k {d:.10e}")))
        })();
        out.push(Check::from_result(format!("lambda=0 collapse k={k}"), r));
    }
    let r = extension_independence_check(&af, 1, &w, &x, &e("1"));
    out.push(Check::new(
        "added term 1 rejected",
        matches!(r, Err(Error::Rejected(_))),
        format!("{r:?}"),
    ));
    Ok(out)
}

fn spectral() -> Result<Vec<Check>> {
    let configs = [(2usize, 1u32), (4, 2), (6, 1)];
    Ok(configs
        .par_iter()
        .map(|&(n, k)| {
            let r = (|| -> Result<(bool, String)> {
                let spectrum = SphereSpectrum::new(n, k, 2000)?;
                let est = zeta_residue_at_1(&spectrum)?;
                let lhs = 2.0 * k as f64 * est.residue;
                let rhs = geometric_side(n, k)?;
                let passed = if rhs.abs() < 1e-12 {
                    lhs.abs() < 1e-5
                } else {
                    (lhs - rhs).abs() < 1e-4 * rhs.abs()
                };
                Ok((
                    passed,
                    format!(
                        "2k Res = {lhs:.10e}, integral of gamma = {rhs:.10e}, error estimate {:.1e}",
                        est.error_estimate
                    ),
                ))
            })();
            Check::from_result(format!("zeta residue n={n} k={k}"), r)
        })
        .collect())
}
