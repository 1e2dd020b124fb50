//! Logarithmic singularities `γ` of Green functions: of `Δᵏ` through the heat
//! invariants, and of the GJMS operators `P_k` through the conformal
//! invariants `ã_{n−2k}`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::conformal::{conformal_bundle, ConformalBundle};
use crate::curvature::{riemann, CurvatureBundle};
use crate::error::{Error, Result};
use crate::fg_rule::{a_tilde, fg_transform_in_dim, ConformalExpr, ConformalPrimitive, InvariantExpr};
use crate::invariants::{eval_invariant_expr, heat_expression};
use crate::metric::MetricField;
use crate::tensor::PointFrame;

/// A positive multiple of one half, stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt {
    twice: u32,
}

impl HalfInt {
    pub fn from_twice(twice: u32) -> HalfInt {
        HalfInt { twice }
    }

    pub fn integer(k: u32) -> HalfInt {
        HalfInt { twice: 2 * k }
    }

    pub fn twice(self) -> u32 {
        self.twice
    }

    pub fn value(self) -> f64 {
        self.twice as f64 / 2.0
    }

    pub fn is_integer(self) -> bool {
        self.twice.is_multiple_of(2)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

impl Serialize for HalfInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Accepts `3`, `5/2` and `2.5`.
impl FromStr for HalfInt {
    type Err = Error;

    fn from_str(s: &str) -> Result<HalfInt> {
        let bad = || Error::Rejected(format!("`{s}` is not a positive multiple of 1/2"));
        let s = s.trim();
        let twice = if let Some((a, b)) = s.split_once('/') {
            let a: u32 = a.trim().parse().map_err(|_| bad())?;
            match b.trim() {
                "1" => 2 * a,
                "2" => a,
                _ => return Err(bad()),
            }
        } else {
            let v: f64 = s.parse().map_err(|_| bad())?;
            let t = 2.0 * v;
            if !(t.is_finite() && t >= 0.0 && t.fract() == 0.0) {
                return Err(bad());
            }
            t as u32
        };
        if twice == 0 {
            return Err(bad());
        }
        Ok(HalfInt { twice })
    }
}

/// `Γ(m/2)` for `m ≥ 1` by `Γ(1/2) = √π`, `Γ(1) = 1`, `Γ(x+1) = xΓ(x)`.
pub fn gamma_half(twice: u32) -> f64 {
    assert!(twice >= 1, "Gamma has a pole at 0");
    let (mut x, mut acc) = if twice.is_multiple_of(2) { (1.0, 1.0) } else { (0.5, PI.sqrt()) };
    let target = twice as f64 / 2.0;
    while x < target {
        acc *= x;
        x += 1.0;
    }
    acc
}

/// `2/Γ(k) · (4π)^{−n/2}`.
pub fn gamma_prefactor(k: HalfInt, n: usize) -> f64 {
    2.0 / gamma_half(k.twice) * (4.0 * PI).powf(-(n as f64) / 2.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FormulaPath {
    RiemannianHeat,
    ConformalMainTheorem,
}

#[derive(Debug, Clone, PartialEq)]
pub enum GammaExpression {
    Riemannian(InvariantExpr),
    Conformal(ConformalExpr),
}

impl fmt::Display for GammaExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GammaExpression::Riemannian(e) => e.fmt(f),
            GammaExpression::Conformal(e) => e.fmt(f),
        }
    }
}

impl Serialize for GammaExpression {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GammaResult {
    pub k: HalfInt,
    pub n: usize,
    pub value: f64,
    pub formula_path: FormulaPath,
    /// The heat invariant or conformal invariant that was evaluated.
    pub expression: GammaExpression,
    /// True when an `a₆` lacking its Ricci terms was used.
    pub partial: bool,
}

/// Weight `n − 2k` if it is a non-negative even integer.
fn weight_of(k: HalfInt, n: usize) -> Result<u32> {
    let n2 = n as u32;
    if k.twice == 0 || k.twice > n2 || !(n2 - k.twice).is_multiple_of(2) {
        return Err(Error::WeightOutOfRange(format!(
            "n - 2k must be a non-negative even integer (n = {n}, k = {k})"
        )));
    }
    let w = n2 - k.twice;
    if w > 6 {
        return Err(Error::WeightOutOfRange(format!(
            "weight n - 2k = {w} > 6 is not implemented (n = {n}, k = {k})"
        )));
    }
    Ok(w)
}

/// `γ_{Δᵏ}(x) = (4π)^{−n/2} · 2/Γ(k) · a_{n−2k}(Δ_g; x)`.
pub fn gamma_power_laplacian(k: HalfInt, bundle: &CurvatureBundle, frame: &PointFrame) -> Result<GammaResult> {
    let n = frame.dim();
    let w = weight_of(k, n)?;
    let e = heat_expression(w / 2)?;
    let heat = eval_invariant_expr(&e, bundle, frame, bundle.is_ricci_flat())?;
    Ok(GammaResult {
        k,
        n,
        value: gamma_prefactor(k, n) * heat.value,
        formula_path: FormulaPath::RiemannianHeat,
        expression: GammaExpression::Riemannian(e),
        partial: heat.partial,
    })
}

/// `γ_{P_k}(x) = 2/Γ(k) · (4π)^{−n/2} · ã_{n−2k}(Δ_g; x)`.
///
/// `cb` may be `None` when `ã_{n−2k}` is constant (weights 0 and 2), which is
/// the only case available in dimension 2.
pub fn gamma_gjms(k: HalfInt, cb: Option<&ConformalBundle>, frame: &PointFrame) -> Result<GammaResult> {
    let n = frame.dim();
    let w = weight_of(k, n)?;
    let e = fg_transform_in_dim(&heat_expression(w / 2)?, n)?;
    debug_assert_eq!(e, a_tilde(w / 2)?);
    let value = e.eval_with(|p| {
        if p == ConformalPrimitive::One {
            return Ok(1.0);
        }
        cb.ok_or(Error::MissingTensor("conformal bundle needed for this weight"))?
            .primitive(p)
    })?;
    Ok(GammaResult {
        k,
        n,
        value: gamma_prefactor(k, n) * value,
        formula_path: FormulaPath::ConformalMainTheorem,
        expression: GammaExpression::Conformal(e),
        partial: false,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FlatnessVerdict {
    ConformallyFlatConsistent,
    Obstructed,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlatnessProbe {
    pub verdict: FlatnessVerdict,
    pub max_abs_gamma: f64,
    /// Point where `|γ|` is largest.
    pub witness: Vec<f64>,
    pub values: Vec<f64>,
}

/// Default threshold on `|γ_{P_{n/2−2}}|`.
pub const FLATNESS_TOLERANCE: f64 = 1e-12;

/// Samples `γ_{P_{n/2−2}}`, which vanishes identically exactly on locally
/// conformally flat metrics (`n ≥ 5`).
pub fn conformal_flatness_probe(
    field: &MetricField,
    points: &[Vec<f64>],
    tol: f64,
) -> Result<FlatnessProbe> {
    let n = field.dim();
    if n < 5 {
        return Err(Error::Dimension(format!("flatness probe needs n >= 5, got {n}")));
    }
    if points.is_empty() {
        return Err(Error::Rejected("no sample points".into()));
    }
    let k = HalfInt::from_twice(n as u32 - 4);
    let mut values = Vec::with_capacity(points.len());
    let (mut max_abs_gamma, mut witness) = (-1.0f64, points[0].clone());
    for p in points {
        let frame = PointFrame::build(field, p, 2)?;
        let cb = conformal_bundle(&riemann(&frame)?, &frame)?;
        let g = gamma_gjms(k, Some(&cb), &frame)?.value;
        if g.abs() > max_abs_gamma {
            max_abs_gamma = g.abs();
            witness = p.clone();
        }
        values.push(g);
    }
    let verdict = if max_abs_gamma < tol {
        FlatnessVerdict::ConformallyFlatConsistent
    } else {
        FlatnessVerdict::Obstructed
    };
    Ok(FlatnessProbe {
        verdict,
        max_abs_gamma,
        witness,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn half_integer_gamma() {
        assert_eq!(gamma_half(2), 1.0);
        assert_eq!(gamma_half(6), 2.0);
        assert!((gamma_half(1) - PI.sqrt()).abs() < 1e-15);
        assert!((gamma_half(5) - 0.75 * PI.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn parse_half_int() {
        assert_eq!("5/2".parse::<HalfInt>().unwrap().twice(), 5);
        assert_eq!("2.5".parse::<HalfInt>().unwrap().twice(), 5);
        assert_eq!("3".parse::<HalfInt>().unwrap().twice(), 6);
        assert_eq!(HalfInt::from_twice(5).to_string(), "5/2");
        for bad in ["0", "1/3", "-1", "x", "0.3"] {
            assert!(bad.parse::<HalfInt>().is_err(), "{bad}");
        }
    }

    #[test]
    fn sphere_s6_values() {
        let e = catalog::round_sphere(6).unwrap();
        let fr = PointFrame::build(&e.field, &[0.1; 6], 4).unwrap();
        let b = riemann(&fr).unwrap();
        let c = (4.0 * PI).powi(-3);
        let g = gamma_power_laplacian(HalfInt::integer(3), &b, &fr).unwrap();
        assert!((g.value - c).abs() < 1e-15);
        let g = gamma_power_laplacian(HalfInt::integer(2), &b, &fr).unwrap();
        assert!((g.value - c * 2.0 * -5.0).abs() < 1e-12);
        let cb = conformal_bundle(&b, &fr).unwrap();
        assert!(gamma_gjms(HalfInt::integer(2), Some(&cb), &fr).unwrap().value == 0.0);
        assert!(gamma_gjms(HalfInt::integer(1), Some(&cb), &fr).unwrap().value.abs() < 1e-15);
    }

    #[test]
    fn out_of_range_weights() {
        let e = catalog::flat(10).unwrap();
        let fr = PointFrame::build(&e.field, &[0.0; 10], 2).unwrap();
        assert!(matches!(gamma_gjms(HalfInt::integer(1), None, &fr), Err(Error::WeightOutOfRange(_))));
        assert!(matches!(gamma_gjms(HalfInt::from_twice(3), None, &fr), Err(Error::WeightOutOfRange(_))));
        assert!(matches!(gamma_gjms(HalfInt::integer(6), None, &fr), Err(Error::WeightOutOfRange(_))));
    }

    #[test]
    fn dimension_two_needs_no_bundle() {
        let e = catalog::round_sphere(2).unwrap();
        let fr = PointFrame::build(&e.field, &[0.3, 0.1], 2).unwrap();
        let g = gamma_gjms(HalfInt::integer(1), None, &fr).unwrap();
        assert!((g.value - 2.0 / (4.0 * PI)).abs() < 1e-15);
    }
}
