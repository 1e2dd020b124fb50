//! The ambient metric of an Einstein manifold and GJMS operators from powers
//! of the ambient Laplacian.
//!
//! For `Ric(g) = 2λ(n−1) g` the ambient metric on `(t, x, ρ)` is
//!
//! ```text
//! g̃ = 2ρ dt² + t²(1 + λρ)² g(x) + 2t dt dρ
//! ```
//!
//! and `P_k u(x) = t^{n/2+k} Δ̃ᵏ (t^{k−n/2} ũ)(t, x, 0)` for any extension
//! `ũ` of `u` off `ρ = 0`.
//!
//! The density `t^{k−n/2} ũ` has the homogeneity for which both the
//! extension and `t` drop out; with the opposite exponents
//! (`t^{−(n/2+k)} Δ̃ᵏ t^{n/2−k} ũ`) neither does, and `k = 1` no longer gives
//! the Yamabe operator. [`ambient_power_with_weights`] evaluates either form.

use serde::Serialize;

use crate::curvature::riemann;
use crate::dsl::{BinOp, Expr};
use crate::error::{Error, Result};
use crate::gjms::EINSTEIN_TOLERANCE;
use crate::metric::MetricField;
use crate::tensor::PointFrame;

#[derive(Debug, Clone)]
pub struct AmbientField {
    pub base: MetricField,
    pub lambda: f64,
    /// Metric on `(t, x¹…xⁿ, ρ)`.
    pub ambient: MetricField,
    t_name: String,
    rho_name: String,
}

/// `λ` of the ambient closed form for `Ric = c g`.
pub fn ambient_lambda(c: f64, n: usize) -> f64 {
    c / (2.0 * (n as f64 - 1.0))
}

fn fresh_name(base: &MetricField, want: &str) -> String {
    let mut name = want.to_string();
    while base.coords().contains(&name) || base.params().contains_key(&name) {
        name.push('_');
    }
    name
}

impl AmbientField {
    pub fn t_name(&self) -> &str {
        &self.t_name
    }

    pub fn rho_name(&self) -> &str {
        &self.rho_name
    }

    /// Ambient coordinates of `(t, x, ρ)`.
    pub fn ambient_point(&self, t: f64, x: &[f64], rho: f64) -> Vec<f64> {
        let mut p = Vec::with_capacity(x.len() + 2);
        p.push(t);
        p.extend_from_slice(x);
        p.push(rho);
        p
    }

    /// `max |Ric(g̃)|` at `(1, x, 0)`.
    pub fn ricci_max_abs(&self, x: &[f64]) -> Result<f64> {
        let frame = PointFrame::build(&self.ambient, &self.ambient_point(1.0, x, 0.0), 2)?;
        Ok(riemann(&frame)?.ricci_max_abs())
    }
}

/// Assembles the ambient metric after checking at `check_point` that the base
/// is Einstein with `Ric = 2λ(n−1) g`.
pub fn build_ambient(base: &MetricField, lambda: f64, check_point: &[f64]) -> Result<AmbientField> {
    let n = base.dim();
    let frame = PointFrame::build(base, check_point, 2)?;
    let (c, residual) = riemann(&frame)?.einstein_constant(&frame);
    if residual > EINSTEIN_TOLERANCE * c.abs().max(1.0) {
        return Err(Error::NotEinstein { residual });
    }
    let expected = ambient_lambda(c, n);
    if (lambda - expected).abs() > 1e-8 * expected.abs().max(1.0) {
        return Err(Error::Rejected(format!(
            "lambda = {lambda} does not match Ric = {c} g (expected {expected})"
        )));
    }

    let t_name = fresh_name(base, "t");
    let rho_name = fresh_name(base, "rho");
    let t = Expr::ident(&t_name);
    let rho = Expr::ident(&rho_name);
    let zero = Expr::num(0.0);
    // t²(1 + λρ)²
    let warp = Expr::bin(
        BinOp::Mul,
        Expr::bin(BinOp::Pow, t.clone(), Expr::num(2.0)),
        Expr::bin(
            BinOp::Pow,
            Expr::bin(BinOp::Add, Expr::num(1.0), Expr::bin(BinOp::Mul, Expr::num(lambda), rho.clone())),
            Expr::num(2.0),
        ),
    );
    let m = n + 2;
    let mut comps = vec![vec![zero.clone(); m]; m];
    comps[0][0] = Expr::bin(BinOp::Mul, Expr::num(2.0), rho);
    comps[0][m - 1] = t.clone();
    comps[m - 1][0] = t;
    for i in 0..n {
        for j in 0..n {
            let g = base.component(i, j);
            if !g.is_zero() {
                comps[i + 1][j + 1] = Expr::bin(BinOp::Mul, warp.clone(), g.clone());
            }
        }
    }
    let mut coords = vec![t_name.clone()];
    coords.extend(base.coords().iter().cloned());
    coords.push(rho_name.clone());
    let mut signature = vec![1i8; m];
    signature[m - 1] = -1;
    let ambient = MetricField::new(coords, base.params().clone(), comps)?.with_signature(signature)?;
    Ok(AmbientField {
        base: base.clone(),
        lambda,
        ambient,
        t_name,
        rho_name,
    })
}

/// `t^{w_out} Δ̃ᵏ(t^{w_in} ũ)` at `(t, x, 0)`.
pub fn ambient_power_with_weights(
    af: &AmbientField,
    k: u32,
    ext: &Expr,
    x: &[f64],
    t: f64,
    w_in: f64,
    w_out: f64,
) -> Result<f64> {
    let n = af.base.dim();
    if k == 0 {
        return Err(Error::Rejected("k must be positive".into()));
    }
    if n.is_multiple_of(2) && k as usize > n / 2 {
        return Err(Error::Rejected(format!(
            "GJMS construction breaks down for k = {k} > n/2 = {}",
            n / 2
        )));
    }
    if t <= 0.0 {
        return Err(Error::Rejected(format!("t = {t} must be positive")));
    }
    let f = Expr::bin(
        BinOp::Mul,
        Expr::bin(BinOp::Pow, Expr::ident(&af.t_name), Expr::num(w_in)),
        ext.clone(),
    );
    let order = 2 * k as usize;
    let p = af.ambient_point(t, x, 0.0);
    let frame = PointFrame::build(&af.ambient, &p, order)?;
    let mut v = af.ambient.compile_scalar(&f)?.eval_jet(af.ambient.coords(), &p, order)?;
    for _ in 0..k {
        v = frame.laplacian_jet(&v)?;
    }
    Ok(t.powf(w_out) * v.value())
}

fn ambient_power(af: &AmbientField, k: u32, ext: &Expr, x: &[f64], t: f64) -> Result<f64> {
    let (half_n, kf) = (af.base.dim() as f64 / 2.0, k as f64);
    ambient_power_with_weights(af, k, ext, x, t, kf - half_n, half_n + kf)
}

/// `P_k u(x)` through the ambient Laplacian, with the trivial extension `ũ(t,x,ρ) = u(x)`.
pub fn ambient_laplacian_power(af: &AmbientField, k: u32, u: &Expr, x: &[f64], t: f64) -> Result<f64> {
    ambient_power(af, k, u, x, t)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IndependenceCheck {
    pub passed: bool,
    pub base_value: f64,
    pub perturbed_value: f64,
}

/// Relative tolerance of the extension-independence and `t`-independence checks.
pub const INDEPENDENCE_TOLERANCE: f64 = 1e-6;

fn agree(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

/// Recomputes `P_k u` with `ũ' = u + added` and compares.
///
/// `added` must vanish on `ρ = 0`: every Taylor coefficient at `(1, x, 0)`
/// free of `ρ` has to be zero, otherwise the term is rejected.
pub fn extension_independence_check(
    af: &AmbientField,
    k: u32,
    u: &Expr,
    x: &[f64],
    added: &Expr,
) -> Result<IndependenceCheck> {
    let order = 2 * k as usize;
    let p = af.ambient_point(1.0, x, 0.0);
    let jet = af.ambient.compile_scalar(added)?.eval_jet(af.ambient.coords(), &p, order)?;
    let rho_slot = af.ambient.dim() - 1;
    let space = jet.space().clone();
    let scale = jet.coeffs().iter().fold(0.0f64, |m, c| m.max(c.abs())).max(1.0);
    for (idx, c) in jet.coeffs().iter().enumerate() {
        if space.monomial(idx)[rho_slot] == 0 && c.abs() > 1e-12 * scale {
            return Err(Error::Rejected(format!(
                "added term `{added}` does not vanish on {} = 0",
                af.rho_name
            )));
        }
    }
    let base_value = ambient_power(af, k, u, x, 1.0)?;
    let perturbed = Expr::bin(BinOp::Add, u.clone(), added.clone());
    let perturbed_value = ambient_power(af, k, &perturbed, x, 1.0)?;
    Ok(IndependenceCheck {
        passed: agree(base_value, perturbed_value, INDEPENDENCE_TOLERANCE),
        base_value,
        perturbed_value,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TIndependence {
    pub passed: bool,
    pub at_one: f64,
    pub at_t: f64,
}

/// Compares `P_k u` computed at `t = 1` and at `t`, to `1e-8` relative.
pub fn t_independence_check(af: &AmbientField, k: u32, u: &Expr, x: &[f64], t: f64) -> Result<TIndependence> {
    let at_one = ambient_power(af, k, u, x, 1.0)?;
    let at_t = ambient_power(af, k, u, x, t)?;
    Ok(TIndependence {
        passed: agree(at_one, at_t, 1e-8),
        at_one,
        at_t,
    })
}

/// Largest `|g̃_IJ(st, x, ρ) s^{[I=t]+[J=t]} − s² g̃_IJ(t, x, ρ)|`, the
/// componentwise form of `δ_s^* g̃ = s² g̃`.
pub fn homogeneity_defect(af: &AmbientField, ambient_point: &[f64], s: f64) -> Result<f64> {
    let m = af.ambient.dim();
    let mut scaled = ambient_point.to_vec();
    scaled[0] *= s;
    let mut worst = 0.0f64;
    for i in 0..m {
        for j in i..m {
            let c = af.ambient.compile_scalar(af.ambient.component(i, j))?;
            let pull = s.powi((i == 0) as i32 + (j == 0) as i32);
            let lhs = c.eval_f64(&scaled)? * pull;
            let rhs = s * s * c.eval_f64(ambient_point)?;
            worst = worst.max((lhs - rhs).abs());
        }
    }
    Ok(worst)
}
