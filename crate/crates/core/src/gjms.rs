//! Conformally covariant operators applied to test functions: Yamabe,
//! Paneitz, and the product formula for GJMS operators on Einstein metrics.
//!
//! The Laplacian is the non-negative one, `Δ = −∇^i∇_i`, and the divergence on
//! 1-forms is its adjoint partner `δω = −∇^i ω_i`, so that `δd = Δ`.

use serde::Serialize;

use crate::curvature::riemann;
use crate::dsl::{BinOp, Expr, Func};
use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::metric::MetricField;
use crate::tensor::{JetTensor, PointFrame};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Operator {
    Yamabe,
    Paneitz,
    EinsteinGjms { k: u32, lambda: f64 },
}

impl Operator {
    /// Order `k` of `P_k`, half the differential order.
    pub fn k(self) -> u32 {
        match self {
            Operator::Yamabe => 1,
            Operator::Paneitz => 2,
            Operator::EinsteinGjms { k, .. } => k,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OperatorApplication {
    pub operator: Operator,
    pub point: Vec<f64>,
    pub u: String,
    pub value: f64,
    /// `|P_{e^{2Υ}g} u − e^{−(n/2+k)Υ} P_g(e^{(n/2−k)Υ} u)|` at the point.
    pub covariance_residual: Option<f64>,
}

fn require_dim(field: &MetricField) -> Result<usize> {
    let n = field.dim();
    if n < 3 {
        return Err(Error::Dimension(format!("operator needs n >= 3, got {n}")));
    }
    Ok(n)
}

fn u_jet(field: &MetricField, u: &Expr, point: &[f64], order: usize) -> Result<Jet> {
    field.compile_scalar(u)?.eval_jet(field.coords(), point, order)
}

/// `P₁u = Δu + (n−2)/(4(n−1)) κ u`.
pub fn yamabe_apply(field: &MetricField, point: &[f64], u: &Expr, order: usize) -> Result<f64> {
    let n = require_dim(field)? as f64;
    let frame = PointFrame::build(field, point, order.max(2))?;
    let b = riemann(&frame)?;
    let uj = u_jet(field, u, point, frame.order())?;
    let lap = frame.laplacian_jet(&uj)?.value();
    Ok(lap + (n - 2.0) / (4.0 * (n - 1.0)) * b.kappa * uj.value())
}

/// `P₂u = Δ²u + δVdu + (n−4)/2 · (Δκ/(2(n−1)) + nκ²/(8(n−1)²) − 2|P|²) u`
/// with `V_ij = (n−2)/(2(n−1)) κ g_ij − 4 P_ij`.
pub fn paneitz_apply(field: &MetricField, point: &[f64], u: &Expr, order: usize) -> Result<f64> {
    let n = require_dim(field)?;
    let nf = n as f64;
    let frame = PointFrame::build(field, point, order.max(4))?;
    let b = riemann(&frame)?;
    let uj = u_jet(field, u, point, frame.order())?;
    let bilap = frame.laplacian_jet(&frame.laplacian_jet(&uj)?)?.value();

    // ω_i = V_i^j ∂_j u, to first order
    let g = frame.metric_jet_tensor(1);
    let ginv = frame.inverse_jets_at_order(1)?;
    let ric = b.ricci_jets().truncate(1);
    let kappa = b.kappa_jet().truncate(1);
    let du: Vec<Jet> = (0..n)
        .map(|j| uj.derivative(j).map(|d| d.truncate(1)))
        .collect::<Result<_>>()?;
    let a = (nf - 2.0) / (2.0 * (nf - 1.0));
    let v = |i: usize, k: usize| -> Jet {
        let kg = &kappa * g.get(&[i, k]);
        let p = (ric.get(&[i, k]) - &kg.scale(1.0 / (2.0 * (nf - 1.0)))).scale(1.0 / (nf - 2.0));
        &kg.scale(a) - &p.scale(4.0)
    };
    let mut up_du = vec![Jet::zero(n, 1); n];
    for (k, slot) in up_du.iter_mut().enumerate() {
        for (j, d) in du.iter().enumerate() {
            slot.add_mul_assign(&ginv[k * n + j], d);
        }
    }
    let omega = JetTensor::from_fn(n, 1, |x| {
        let mut acc = Jet::zero(n, 1);
        for (k, w) in up_du.iter().enumerate() {
            acc.add_mul_assign(&v(x[0], k), w);
        }
        acc
    });
    let grad_omega = omega.covariant_derivative(&frame)?.value();
    let mut div = 0.0;
    for p in 0..n {
        for i in 0..n {
            div += frame.ginv(p, i) * grad_omega.get(&[p, i]);
        }
    }
    let delta_v_d = -div;

    let schouten = ric
        .value()
        .sub(&frame.metric_tensor().scale(b.kappa / (2.0 * (nf - 1.0))))
        .scale(1.0 / (nf - 2.0));
    let lap_kappa = b.lap_kappa.ok_or(Error::InsufficientOrder {
        needed: 4,
        have: frame.order(),
    })?;
    let q = lap_kappa / (2.0 * (nf - 1.0)) + nf * b.kappa * b.kappa / (8.0 * (nf - 1.0).powi(2))
        - 2.0 * schouten.norm_sq(&frame);
    Ok(bilap + delta_v_d + (nf - 4.0) / 2.0 * q * uj.value())
}

/// `λ` in the product formula for an Einstein metric with `Ric = c g`.
///
/// With the non-negative Laplacian the factors `Δ − ¼λ(n+2j−2)(n−2j)` need
/// `λ = −c/(n−1)`; for the unit sphere `λ = −1` and the first factor is the
/// Yamabe operator `Δ + n(n−2)/4`.
pub fn einstein_lambda(c: f64, n: usize) -> f64 {
    -c / (n as f64 - 1.0)
}

/// The constants `¼λ(n+2j−2)(n−2j)`, `j = 1..=k`.
pub fn einstein_factor_constants(k: u32, lambda: f64, n: usize) -> Vec<f64> {
    let nf = n as f64;
    (1..=k)
        .map(|j| {
            let j = j as f64;
            0.25 * lambda * (nf + 2.0 * j - 2.0) * (nf - 2.0 * j)
        })
        .collect()
}

/// Applies `∏ (Δ − c_j)` in the given order.
pub fn apply_factors(frame: &PointFrame, u: &Jet, constants: &[f64]) -> Result<f64> {
    let mut v = u.clone();
    for &c in constants {
        let lap = frame.laplacian_jet(&v)?;
        v = &lap - &v.truncate(lap.order()).scale(c);
    }
    Ok(v.value())
}

/// Tolerance on `max |Ric − c g|` for accepting a metric as Einstein.
pub const EINSTEIN_TOLERANCE: f64 = 1e-8;

/// `P_k u = ∏_{j=1..k} (Δ − ¼λ(n+2j−2)(n−2j)) u` on an Einstein metric.
///
/// `λ` must agree with [`einstein_lambda`] of the measured Einstein constant.
pub fn einstein_gjms_apply(
    k: u32,
    lambda: f64,
    field: &MetricField,
    point: &[f64],
    u: &Expr,
    order: usize,
) -> Result<f64> {
    let n = field.dim();
    if k == 0 {
        return Err(Error::Rejected("k must be positive".into()));
    }
    let frame = PointFrame::build(field, point, order.max(2 * k as usize))?;
    let b = riemann(&frame)?;
    let (c, residual) = b.einstein_constant(&frame);
    if residual > EINSTEIN_TOLERANCE * c.abs().max(1.0) {
        return Err(Error::NotEinstein { residual });
    }
    let expected = einstein_lambda(c, n);
    if (lambda - expected).abs() > 1e-8 * expected.abs().max(1.0) {
        return Err(Error::Rejected(format!(
            "lambda = {lambda} does not match Ric = {c} g (expected {expected})"
        )));
    }
    let uj = u_jet(field, u, point, frame.order())?;
    apply_factors(&frame, &uj, &einstein_factor_constants(k, lambda, n))
}

/// `e^{s Υ} · u` as an expression.
fn weighted(upsilon: &Expr, s: f64, u: &Expr) -> Expr {
    let e = Expr::call(Func::Exp, Expr::bin(BinOp::Mul, Expr::num(s), upsilon.clone()));
    Expr::bin(BinOp::Mul, e, u.clone())
}

fn apply(op: Operator, field: &MetricField, point: &[f64], u: &Expr, order: usize) -> Result<f64> {
    match op {
        Operator::Yamabe => yamabe_apply(field, point, u, order),
        Operator::Paneitz => paneitz_apply(field, point, u, order),
        Operator::EinsteinGjms { k, lambda } => einstein_gjms_apply(k, lambda, field, point, u, order),
    }
}

/// Applies `op` and, when `upsilon` is given, measures the covariance law
/// `P_{e^{2Υ}g} = e^{−(n/2+k)Υ} P_g e^{(n/2−k)Υ}` at the point.
///
/// Einstein products are not covariance-checked: a conformal change of an
/// Einstein metric is in general not Einstein.
pub fn apply_operator(
    op: Operator,
    field: &MetricField,
    point: &[f64],
    u: &Expr,
    upsilon: Option<&Expr>,
    order: usize,
) -> Result<OperatorApplication> {
    let value = apply(op, field, point, u, order)?;
    let covariance_residual = match (op, upsilon) {
        (Operator::EinsteinGjms { .. }, Some(_)) => {
            return Err(Error::Rejected(
                "covariance of the Einstein product formula is not defined".into(),
            ))
        }
        (_, Some(ups)) => Some(covariance_residual(op, field, ups, u, point, order)?),
        (_, None) => None,
    };
    Ok(OperatorApplication {
        operator: op,
        point: point.to_vec(),
        u: u.to_string(),
        value,
        covariance_residual,
    })
}

/// `|P_{e^{2Υ}g} u − e^{−(n/2+k)Υ(x)} P_g(e^{(n/2−k)Υ} u)|` for Yamabe or Paneitz.
pub fn covariance_residual(
    op: Operator,
    field: &MetricField,
    upsilon: &Expr,
    u: &Expr,
    point: &[f64],
    order: usize,
) -> Result<f64> {
    if let Operator::EinsteinGjms { .. } = op {
        return Err(Error::Rejected(
            "covariance of the Einstein product formula is not defined".into(),
        ));
    }
    let half_n = field.dim() as f64 / 2.0;
    let k = op.k() as f64;
    let lhs = apply(op, &field.rescale(upsilon)?, point, u, order)?;
    let inner = apply(op, field, point, &weighted(upsilon, half_n - k, u), order)?;
    let ups = field.compile_scalar(upsilon)?.eval_f64(point)?;
    Ok((lhs - (-(half_n + k) * ups).exp() * inner).abs())
}
