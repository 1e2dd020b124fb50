//! Weyl Riemannian invariants of weight ≤ 6 and the heat invariants of the
//! Laplacian built from them.

use std::fmt;

use num_rational::Rational64;
use serde::Serialize;

use crate::curvature::{riemann, CurvatureBundle};
use crate::dsl::Expr;
use crate::error::{Error, Result};
use crate::fg_rule::{InvariantExpr, Primitive};
use crate::metric::MetricField;
use crate::tensor::{PointFrame, Tensor, Variance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum InvariantName {
    One,
    Kappa,
    KappaSq,
    RicSq,
    RiemSq,
    LapKappa,
    GradRiemSq,
    /// `R_ij^kl R^ij_pq R^pq_kl`
    Cubic1,
    /// `R_ijkl R^i_p^k_q R^pjql`
    Cubic2,
}

impl InvariantName {
    pub const ALL: [InvariantName; 9] = [
        InvariantName::One,
        InvariantName::Kappa,
        InvariantName::KappaSq,
        InvariantName::RicSq,
        InvariantName::RiemSq,
        InvariantName::LapKappa,
        InvariantName::GradRiemSq,
        InvariantName::Cubic1,
        InvariantName::Cubic2,
    ];

    pub fn weight(self) -> u32 {
        match self {
            InvariantName::One => 0,
            InvariantName::Kappa => 2,
            InvariantName::KappaSq
            | InvariantName::RicSq
            | InvariantName::RiemSq
            | InvariantName::LapKappa => 4,
            InvariantName::GradRiemSq | InvariantName::Cubic1 | InvariantName::Cubic2 => 6,
        }
    }

    /// Minimum frame order at which the invariant can be evaluated.
    pub fn required_order(self) -> usize {
        match self {
            InvariantName::GradRiemSq => 3,
            InvariantName::LapKappa => 4,
            _ => 2,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            InvariantName::One => "1",
            InvariantName::Kappa => "kappa",
            InvariantName::KappaSq => "kappa^2",
            InvariantName::RicSq => "|Ric|^2",
            InvariantName::RiemSq => "|R|^2",
            InvariantName::LapKappa => "Lap(kappa)",
            InvariantName::GradRiemSq => "|nabla R|^2",
            InvariantName::Cubic1 => "R_ij^kl R^ij_pq R^pq_kl",
            InvariantName::Cubic2 => "R_ijkl R^i_p^k_q R^pjql",
        }
    }
}

impl fmt::Display for InvariantName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// `T_ij^kl T^ij_pq T^pq_kl` for an all-covariant rank-4 tensor with pair symmetry.
pub fn cubic1(t: &Tensor, frame: &PointFrame) -> f64 {
    let n = t.dim();
    let nn = n * n;
    // Q[(ij),(kl)] = T_ij^kl, A[(ij),(pq)] = T^ij_pq
    let q = t.raise_lower(2, frame).unwrap().raise_lower(3, frame).unwrap();
    let a = t.raise_lower(0, frame).unwrap().raise_lower(1, frame).unwrap();
    let (q, a) = (q.data(), a.data());
    let mut sum = 0.0;
    for ij in 0..nn {
        for kl in 0..nn {
            let qv = q[ij * nn + kl];
            if qv == 0.0 {
                continue;
            }
            let mut m = 0.0;
            for pq in 0..nn {
                m += a[ij * nn + pq] * a[pq * nn + kl];
            }
            sum += qv * m;
        }
    }
    sum
}

/// `T_ijkl T^i_p^k_q T^pjql` for an all-covariant rank-4 tensor.
pub fn cubic2(t: &Tensor, frame: &PointFrame) -> f64 {
    let n = t.dim();
    let mixed = t.raise_lower(0, frame).unwrap().raise_lower(2, frame).unwrap();
    let up = t.with_all(Variance::Contra, frame);
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let v = t.get(&[i, j, k, l]);
                    if v == 0.0 {
                        continue;
                    }
                    let mut inner = 0.0;
                    for p in 0..n {
                        for q in 0..n {
                            inner += mixed.get(&[i, p, k, q]) * up.get(&[p, j, q, l]);
                        }
                    }
                    sum += v * inner;
                }
            }
        }
    }
    sum
}

/// Value of a named invariant at the frame's point.
pub fn eval_invariant(name: InvariantName, bundle: &CurvatureBundle, frame: &PointFrame) -> Result<f64> {
    Ok(match name {
        InvariantName::One => 1.0,
        InvariantName::Kappa => bundle.kappa,
        InvariantName::KappaSq => bundle.kappa * bundle.kappa,
        InvariantName::RicSq => bundle.ricci.norm_sq(frame),
        InvariantName::RiemSq => bundle.riemann.norm_sq(frame),
        InvariantName::LapKappa => bundle
            .lap_kappa
            .ok_or(Error::MissingTensor("Lap(kappa) needs jet order >= 4"))?,
        InvariantName::GradRiemSq => bundle
            .grad_riemann
            .as_ref()
            .ok_or(Error::MissingTensor("nabla R needs jet order >= 3"))?
            .norm_sq(frame),
        InvariantName::Cubic1 => cubic1(&bundle.riemann, frame),
        InvariantName::Cubic2 => cubic2(&bundle.riemann, frame),
    })
}

/// Heat-invariant value; `partial` marks an `a₆` whose Ricci-involving
/// remainder was not included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HeatValue {
    pub value: f64,
    pub partial: bool,
}

/// The stored expression for `a_{2j}(Δ_g)`, `j ≤ 3`.
///
/// `a₆` carries a `RicciInvolving(6)` marker for its unstated remainder.
pub fn heat_expression(j: u32) -> Result<InvariantExpr> {
    let r = |a: i64, b: i64| Rational64::new(a, b);
    let e = match j {
        0 => InvariantExpr::from_terms(0, [(Primitive::Invariant(InvariantName::One), r(1, 1))]),
        1 => InvariantExpr::from_terms(2, [(Primitive::Invariant(InvariantName::Kappa), r(-1, 6))]),
        2 => InvariantExpr::from_terms(
            4,
            [
                (Primitive::Invariant(InvariantName::RiemSq), r(1, 180)),
                (Primitive::Invariant(InvariantName::RicSq), r(-1, 180)),
                (Primitive::Invariant(InvariantName::KappaSq), r(1, 72)),
                (Primitive::Invariant(InvariantName::LapKappa), r(-1, 30)),
            ],
        ),
        3 => {
            let d = 9 * 5040;
            InvariantExpr::from_terms(
                6,
                [
                    (Primitive::Invariant(InvariantName::GradRiemSq), r(81, d)),
                    (Primitive::Invariant(InvariantName::Cubic1), r(64, d)),
                    (Primitive::Invariant(InvariantName::Cubic2), r(352, d)),
                    (Primitive::RicciInvolving(6), r(1, 1)),
                ],
            )
        }
        _ => {
            return Err(Error::WeightOutOfRange(format!(
                "heat invariant a_{} is not implemented",
                2 * j
            )))
        }
    }?;
    Ok(e)
}

/// Evaluates an invariant expression.
///
/// `RicciInvolving` terms evaluate to 0 in `ricci_flat_mode` (after checking
/// that the point is Ricci-flat) and otherwise mark the result partial.
pub fn eval_invariant_expr(
    e: &InvariantExpr,
    bundle: &CurvatureBundle,
    frame: &PointFrame,
    ricci_flat_mode: bool,
) -> Result<HeatValue> {
    if ricci_flat_mode && !bundle.is_ricci_flat() {
        return Err(Error::NotRicciFlat {
            residual: bundle.ricci_max_abs(),
        });
    }
    let mut value = 0.0;
    let mut partial = false;
    for (p, c) in e.terms() {
        let coeff = *c.numer() as f64 / *c.denom() as f64;
        match p {
            Primitive::Invariant(name) => value += coeff * eval_invariant(*name, bundle, frame)?,
            Primitive::RicciInvolving(_) => partial |= !ricci_flat_mode,
            Primitive::Named(name, _) => {
                return Err(Error::UnsupportedRewrite(format!(
                    "no evaluator for invariant `{name}`"
                )))
            }
        }
    }
    Ok(HeatValue { value, partial })
}

/// `a_{2j}(Δ_g; x)`.
pub fn heat_invariant(
    j: u32,
    bundle: &CurvatureBundle,
    frame: &PointFrame,
    ricci_flat_mode: bool,
) -> Result<HeatValue> {
    eval_invariant_expr(&heat_expression(j)?, bundle, frame, ricci_flat_mode)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalingCheck {
    pub passed: bool,
    pub base: f64,
    pub scaled: f64,
    pub expected_ratio: f64,
}

/// Relative tolerance of the constant-rescaling law.
pub const SCALING_TOLERANCE: f64 = 1e-9;

/// Checks `I_{λ²g} = λ^{−w} I_g` at `point`.
///
/// Agreement is `|I_{λ²g} − λ^{−w} I_g| ≤ 1e-9 · max(|I_{λ²g}|, |λ^{−w} I_g|)`, with
/// an absolute floor of `1e-12` for invariants that vanish at the point.
pub fn weight_scaling_check(
    name: InvariantName,
    field: &MetricField,
    point: &[f64],
    lambda: f64,
    order: usize,
) -> Result<ScalingCheck> {
    if lambda <= 0.0 {
        return Err(Error::Rejected(format!("scale factor {lambda} must be positive")));
    }
    let scaled_field = field.scaled_by(&Expr::num(lambda * lambda))?;
    let eval = |f: &MetricField| -> Result<f64> {
        let frame = PointFrame::build(f, point, order)?;
        let bundle = riemann(&frame)?;
        eval_invariant(name, &bundle, &frame)
    };
    let base = eval(field)?;
    let scaled = eval(&scaled_field)?;
    let expected_ratio = lambda.powi(-(name.weight() as i32));
    let expected = expected_ratio * base;
    let passed = (scaled - expected).abs()
        <= SCALING_TOLERANCE * scaled.abs().max(expected.abs()) + 1e-12;
    Ok(ScalingCheck {
        passed,
        base,
        scaled,
        expected_ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_expr;
    use std::collections::BTreeMap;

    fn sphere(n: usize) -> MetricField {
        let coords: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
        let r2: Vec<String> = coords.iter().map(|c| format!("{c}^2")).collect();
        let f = parse_expr(&format!("4/(1+{})^2", r2.join("+"))).unwrap();
        MetricField::diagonal(coords, BTreeMap::new(), vec![f; n]).unwrap()
    }

    #[test]
    fn weights() {
        let w: Vec<u32> = InvariantName::ALL.iter().map(|n| n.weight()).collect();
        assert_eq!(w, vec![0, 2, 4, 4, 4, 4, 6, 6, 6]);
    }

    #[test]
    fn sphere_invariants() {
        let f = sphere(4);
        let fr = PointFrame::build(&f, &[0.2, -0.1, 0.3, 0.0], 4).unwrap();
        let b = riemann(&fr).unwrap();
        let v = |n| eval_invariant(n, &b, &fr).unwrap();
        assert!((v(InvariantName::RiemSq) - 24.0).abs() < 1e-9);
        assert!((v(InvariantName::RicSq) - 36.0).abs() < 1e-9);
        assert!(v(InvariantName::GradRiemSq).abs() < 1e-18);
        let a4 = heat_invariant(2, &b, &fr, false).unwrap();
        // 24/180 - 36/180 + 144/72
        assert!((a4.value - 29.0 / 15.0).abs() < 1e-9);
        assert!(!a4.partial);
        let a6 = heat_invariant(3, &b, &fr, false).unwrap();
        assert!(a6.partial);
        assert!(matches!(
            heat_invariant(3, &b, &fr, true),
            Err(Error::NotRicciFlat { .. })
        ));
    }

    #[test]
    fn missing_tensors_reported() {
        let f = sphere(3);
        let fr = PointFrame::build(&f, &[0.1, 0.1, 0.1], 2).unwrap();
        let b = riemann(&fr).unwrap();
        assert!(matches!(
            eval_invariant(InvariantName::LapKappa, &b, &fr),
            Err(Error::MissingTensor(_))
        ));
        assert!(matches!(
            eval_invariant(InvariantName::GradRiemSq, &b, &fr),
            Err(Error::MissingTensor(_))
        ));
    }

    #[test]
    fn kappa_scales_with_weight_two() {
        let f = sphere(4);
        let c = weight_scaling_check(InvariantName::Kappa, &f, &[0.1, 0.2, 0.0, -0.3], 2.0, 4).unwrap();
        assert!(c.passed);
        assert!((c.scaled - 3.0).abs() < 1e-9);
        let c = weight_scaling_check(InvariantName::One, &f, &[0.0; 4], 1.7, 2).unwrap();
        assert!(c.passed && c.scaled == 1.0);
        assert!(weight_scaling_check(InvariantName::One, &f, &[0.0; 4], -1.0, 2).is_err());
    }
}
