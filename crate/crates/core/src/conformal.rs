//! Schouten, Weyl and Cotton tensors, the auxiliary tensors `V`, `U`, the
//! weight-6 invariant `Φ`, and conformal rescaling.
//!
//! ```text
//! P_jk     = (Ric_jk − κ/(2(n−1)) g_jk) / (n−2)
//! W_ijkl   = R_ijkl − (P_jk g_il + P_il g_jk − P_jl g_ik − P_ik g_jl)
//! C_jkl    = ∇_l P_jk − ∇_k P_jl
//! V_mijkl  = ∇_m W_ijkl − g_im C_jkl + g_jm C_ikl − g_km C_lij + g_lm C_kij
//! U_mjkl   = ∇_m C_jkl + g^{rs} P_mr W_sjkl
//! Φ        = |V|² + 16 ⟨W, U⟩ + 16 |C|²
//! ```
//!
//! `⟨W, U⟩` pairs `W^{mjkl}` with `U_mjkl` slot by slot.

use serde::Serialize;

use crate::curvature::{riemann, CurvatureBundle};
use crate::dsl::Expr;
use crate::error::{Error, Result};
use crate::fg_rule::ConformalPrimitive;
use crate::invariants::{cubic1, cubic2};
use crate::jet::Jet;
use crate::metric::MetricField;
use crate::tensor::{for_each_index, JetTensor, PointFrame, Tensor};

/// Conformal tensors at one point.
#[derive(Debug, Clone)]
pub struct ConformalBundle {
    /// Schouten tensor `P_jk`.
    pub schouten: Tensor,
    /// Weyl tensor `W_ijkl`.
    pub weyl: Tensor,
    /// Cotton tensor `C_jkl` (frame order ≥ 3).
    pub cotton: Option<Tensor>,
    /// `V_mijkl` (frame order ≥ 3).
    pub v: Option<Tensor>,
    /// `U_mjkl` (frame order ≥ 4).
    pub u: Option<Tensor>,
    /// `Φ` (frame order ≥ 4).
    pub phi: Option<f64>,
    pub weyl_sq: f64,
    pub cubic_w1: f64,
    pub cubic_w2: f64,
}

impl ConformalBundle {
    /// Value of a conformal primitive.
    pub fn primitive(&self, p: ConformalPrimitive) -> Result<f64> {
        Ok(match p {
            ConformalPrimitive::One => 1.0,
            ConformalPrimitive::WeylSq => self.weyl_sq,
            ConformalPrimitive::CubicW1 => self.cubic_w1,
            ConformalPrimitive::CubicW2 => self.cubic_w2,
            ConformalPrimitive::Phi => self.phi.ok_or(Error::MissingTensor("Phi needs jet order >= 4"))?,
        })
    }

    /// Largest single trace `g^{ab}` of `W` over any pair of slots.
    pub fn weyl_trace_defect(&self, frame: &PointFrame) -> f64 {
        let mut worst = 0.0f64;
        for a in 0..4 {
            for b in (a + 1)..4 {
                worst = worst.max(self.weyl.contract(a, b, frame).unwrap().max_abs());
            }
        }
        worst
    }
}

/// `P_jk g_il + P_il g_jk − P_jl g_ik − P_ik g_jl`.
fn schouten_block(p: impl Fn(usize, usize) -> Jet, g: impl Fn(usize, usize) -> Jet, x: &[usize]) -> Jet {
    let (i, j, k, l) = (x[0], x[1], x[2], x[3]);
    let a = &p(j, k) * &g(i, l);
    let b = &p(i, l) * &g(j, k);
    let c = &p(j, l) * &g(i, k);
    let d = &p(i, k) * &g(j, l);
    &(&(&a + &b) - &c) - &d
}

/// Builds the conformal bundle from a curvature bundle; needs `n ≥ 3`.
pub fn conformal_bundle(bundle: &CurvatureBundle, frame: &PointFrame) -> Result<ConformalBundle> {
    let n = frame.dim();
    if n < 3 {
        return Err(Error::Dimension(format!(
            "Schouten tensor needs n >= 3, got {n}"
        )));
    }
    let order = bundle.ricci_jets().order().min(2);
    let g = frame.metric_jet_tensor(order);
    let ric = bundle.ricci_jets().truncate(order);
    let kappa = bundle.kappa_jet().truncate(order);
    let nf = n as f64;
    let p_jets = JetTensor::from_fn(n, 2, |x| {
        let (i, j) = (x[0], x[1]);
        let kg = &kappa * g.get(&[i, j]);
        (ric.get(&[i, j]) - &kg.scale(1.0 / (2.0 * (nf - 1.0)))).scale(1.0 / (nf - 2.0))
    });
    let r = bundle.riemann_jets().truncate(order);
    let w_jets = JetTensor::from_fn(n, 4, |x| {
        let block = schouten_block(
            |a, b| p_jets.get(&[a, b]).clone(),
            |a, b| g.get(&[a, b]).clone(),
            x,
        );
        r.get(x) - &block
    });
    let schouten = p_jets.value();
    let weyl = w_jets.value();
    let weyl_sq = weyl.norm_sq(frame);
    let cubic_w1 = cubic1(&weyl, frame);
    let cubic_w2 = cubic2(&weyl, frame);

    let (mut cotton, mut v, mut u, mut phi) = (None, None, None, None);
    if order >= 1 {
        let dp = p_jets.covariant_derivative(frame)?;
        let c_jets = JetTensor::from_fn(n, 3, |x| {
            let (j, k, l) = (x[0], x[1], x[2]);
            dp.get(&[l, j, k]) - dp.get(&[k, j, l])
        });
        let c = c_jets.value();
        let dw = w_jets.covariant_derivative(frame)?.value();
        let mut vt = Tensor::covariant(n, 5);
        for_each_index(n, 5, |x| {
            let (m, i, j, k, l) = (x[0], x[1], x[2], x[3], x[4]);
            let val = dw.get(x) - frame.g(i, m) * c.get(&[j, k, l]) + frame.g(j, m) * c.get(&[i, k, l])
                - frame.g(k, m) * c.get(&[l, i, j])
                + frame.g(l, m) * c.get(&[k, i, j]);
            vt.set(x, val);
        });
        if order >= 2 {
            let dc = c_jets.covariant_derivative(frame)?.value();
            // P_m^s = g^{rs} P_mr
            let mut p_mixed = vec![0.0; n * n];
            for m in 0..n {
                for s in 0..n {
                    p_mixed[m * n + s] = (0..n).map(|r| frame.ginv(r, s) * schouten.get(&[m, r])).sum();
                }
            }
            let mut ut = Tensor::covariant(n, 4);
            for_each_index(n, 4, |x| {
                let (m, j, k, l) = (x[0], x[1], x[2], x[3]);
                let pw: f64 = (0..n).map(|s| p_mixed[m * n + s] * weyl.get(&[s, j, k, l])).sum();
                ut.set(x, dc.get(x) + pw);
            });
            phi = Some(vt.norm_sq(frame) + 16.0 * weyl.inner(&ut, frame) + 16.0 * c.norm_sq(frame));
            u = Some(ut);
        }
        cotton = Some(c);
        v = Some(vt);
    }

    Ok(ConformalBundle {
        schouten,
        weyl,
        cotton,
        v,
        u,
        phi,
        weyl_sq,
        cubic_w1,
        cubic_w2,
    })
}

/// `e^{2Υ} g`, composed at the expression level.
pub fn rescale_metric(field: &MetricField, upsilon: &Expr) -> Result<MetricField> {
    field.compile_scalar(upsilon)?;
    field.rescale(upsilon)
}

/// Weyl conformal invariants with a known conformal weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ConformalQuantity {
    WeylSq,
    CubicW1,
    CubicW2,
    Phi,
}

impl ConformalQuantity {
    pub fn weight(self) -> u32 {
        self.primitive().weight()
    }

    pub fn primitive(self) -> ConformalPrimitive {
        match self {
            ConformalQuantity::WeylSq => ConformalPrimitive::WeylSq,
            ConformalQuantity::CubicW1 => ConformalPrimitive::CubicW1,
            ConformalQuantity::CubicW2 => ConformalPrimitive::CubicW2,
            ConformalQuantity::Phi => ConformalPrimitive::Phi,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeightCheck {
    pub passed: bool,
    pub base: f64,
    pub rescaled: f64,
    pub expected_factor: f64,
}

/// Relative tolerance of the conformal-weight law.
pub const CONFORMAL_WEIGHT_TOLERANCE: f64 = 1e-7;

/// Checks `I_{e^{2Υ}g}(x) = e^{−wΥ(x)} I_g(x)`.
pub fn conformal_weight_check(
    quantity: ConformalQuantity,
    field: &MetricField,
    upsilon: &Expr,
    point: &[f64],
    order: usize,
) -> Result<WeightCheck> {
    let rescaled_field = rescale_metric(field, upsilon)?;
    let eval = |f: &MetricField| -> Result<f64> {
        let frame = PointFrame::build(f, point, order)?;
        let cb = conformal_bundle(&riemann(&frame)?, &frame)?;
        cb.primitive(quantity.primitive())
    };
    let base = eval(field)?;
    let rescaled = eval(&rescaled_field)?;
    let ups = field.compile_scalar(upsilon)?.eval_f64(point)?;
    let expected_factor = (-(quantity.weight() as f64) * ups).exp();
    let expected = expected_factor * base;
    let passed = (rescaled - expected).abs()
        <= CONFORMAL_WEIGHT_TOLERANCE * rescaled.abs().max(expected.abs()) + 1e-12;
    Ok(WeightCheck {
        passed,
        base,
        rescaled,
        expected_factor,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::riemann_symmetry_defect;
    use crate::dsl::parse_expr;
    use std::collections::BTreeMap;

    fn conformally_flat(n: usize, factor: &str) -> MetricField {
        let coords: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
        MetricField::diagonal(coords, BTreeMap::new(), vec![parse_expr(factor).unwrap(); n]).unwrap()
    }

    // a warped product, Einstein nowhere, Weyl-curved
    fn generic4() -> MetricField {
        let coords: Vec<String> = (1..=4).map(|i| format!("x{i}")).collect();
        let diag = ["1 + 0.3*x2^2", "exp(0.4*x1) + 0.1*x3", "1 + 0.2*sin(x1*x4)", "2 + x1*x2*0.25"];
        MetricField::diagonal(
            coords,
            BTreeMap::new(),
            diag.iter().map(|s| parse_expr(s).unwrap()).collect(),
        )
        .unwrap()
    }

    fn bundle(f: &MetricField, p: &[f64], k: usize) -> (PointFrame, ConformalBundle) {
        let fr = PointFrame::build(f, p, k).unwrap();
        let cb = conformal_bundle(&riemann(&fr).unwrap(), &fr).unwrap();
        (fr, cb)
    }

    #[test]
    fn conformally_flat_has_no_weyl() {
        let f = conformally_flat(4, "exp(2*(0.3*x1 - 0.2*x2*x3 + 0.1*x4^2))");
        let (_, cb) = bundle(&f, &[0.1, 0.2, -0.3, 0.4], 4);
        assert!(cb.weyl.max_abs() < 1e-10);
        assert!(cb.phi.unwrap().abs() < 1e-10);
    }

    #[test]
    fn sphere_cotton_vanishes() {
        let f = conformally_flat(3, "4/(1+x1^2+x2^2+x3^2)^2");
        let (_, cb) = bundle(&f, &[0.3, 0.1, -0.2], 4);
        assert!(cb.cotton.unwrap().max_abs() < 1e-10);
        assert!((cb.schouten.get(&[0, 0]) - 0.5 * 4.0 / (1.14f64).powi(2)).abs() < 1e-10);
    }

    #[test]
    fn weyl_is_trace_free_with_riemann_symmetries() {
        let f = generic4();
        let (fr, cb) = bundle(&f, &[0.2, 0.3, 0.1, 0.4], 4);
        assert!(cb.weyl.max_abs() > 1e-3);
        assert!(cb.weyl_trace_defect(&fr) < 1e-9);
        assert!(riemann_symmetry_defect(&cb.weyl) < 1e-9);
        let c = cb.cotton.unwrap();
        for_each_index(4, 3, |x| {
            assert!((c.get(x) + c.get(&[x[0], x[2], x[1]])).abs() < 1e-10);
        });
    }

    #[test]
    fn weights_under_rescaling() {
        let f = generic4();
        let ups = parse_expr("0.2*x1 - 0.1*x2*x3 + 0.05*x4^2").unwrap();
        let p = [0.2, 0.3, 0.1, 0.4];
        for q in [ConformalQuantity::WeylSq, ConformalQuantity::CubicW1, ConformalQuantity::CubicW2] {
            let c = conformal_weight_check(q, &f, &ups, &p, 3).unwrap();
            assert!(c.passed, "{q:?}: {c:?}");
        }
    }

    #[test]
    fn phi_has_weight_six() {
        let f = generic4();
        let ups = parse_expr("0.2*x1 - 0.1*x2*x3 + 0.05*x4^2").unwrap();
        let c = conformal_weight_check(ConformalQuantity::Phi, &f, &ups, &[0.2, 0.3, 0.1, 0.4], 4).unwrap();
        assert!(c.passed, "{c:?}");
    }

    #[test]
    fn two_dimensions_rejected() {
        let f = conformally_flat(2, "1");
        let fr = PointFrame::build(&f, &[0.0, 0.0], 2).unwrap();
        assert!(matches!(
            conformal_bundle(&riemann(&fr).unwrap(), &fr),
            Err(Error::Dimension(_))
        ));
    }
}
