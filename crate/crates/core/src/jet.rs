//! Truncated multivariate Taylor arithmetic.
//!
//! A [`Jet`] stores the Taylor coefficients of a scalar field at a base point,
//! `coeffs[α] = ∂^α f(x₀) / α!`, for every multi-index `|α| ≤ K`. With this
//! normalization multiplication is a plain truncated Cauchy product and
//! [`Jet::partial`] multiplies back by `α!`.
//!
//! Multi-indices are enumerated graded-lexicographically: all monomials of
//! degree 0, then degree 1, and so on, with the within-degree order depending
//! only on the number of variables. The coefficient vector of an order-`K'`
//! jet is therefore a prefix of the order-`K` vector for `K' < K`, which makes
//! truncation a slice copy.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

/// Shared index tables for jets with a given `(num_vars, order)`.
pub struct JetSpace {
    num_vars: usize,
    order: usize,
    monomials: Vec<Vec<u8>>,
    lookup: HashMap<Vec<u8>, usize>,
    /// `degree_start[d]` is the index of the first monomial of degree `d`.
    degree_start: Vec<usize>,
    /// `(a, b, c)`: monomial `a` times monomial `b` is monomial `c`.
    mul_table: Vec<(u32, u32, u32)>,
    /// Per variable: `(source, factor)` for each coefficient of the derivative.
    deriv_table: Vec<Vec<(u32, f64)>>,
    factorials: Vec<f64>,
}

impl JetSpace {
    fn build(num_vars: usize, order: usize) -> JetSpace {
        let mut monomials = Vec::new();
        let mut degree_start = Vec::with_capacity(order + 2);
        for d in 0..=order {
            degree_start.push(monomials.len());
            let mut cur = vec![0u8; num_vars];
            push_degree(&mut monomials, &mut cur, 0, d);
        }
        degree_start.push(monomials.len());

        let lookup: HashMap<Vec<u8>, usize> = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();

        let degree = |m: &Vec<u8>| m.iter().map(|&e| e as usize).sum::<usize>();
        let mut mul_table = Vec::new();
        for (a, ma) in monomials.iter().enumerate() {
            let da = degree(ma);
            for (b, mb) in monomials.iter().enumerate() {
                if da + degree(mb) > order {
                    // later monomials only have equal or higher degree
                    break;
                }
                let sum: Vec<u8> = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
                mul_table.push((a as u32, b as u32, lookup[&sum] as u32));
            }
        }

        let lower_len = if order == 0 { 0 } else { degree_start[order] };
        let deriv_table = (0..num_vars)
            .map(|i| {
                (0..lower_len)
                    .map(|t| {
                        let mut src = monomials[t].clone();
                        src[i] += 1;
                        (lookup[&src] as u32, (monomials[t][i] as f64) + 1.0)
                    })
                    .collect()
            })
            .collect();

        let factorials = monomials
            .iter()
            .map(|m| m.iter().map(|&e| factorial(e as usize)).product())
            .collect();

        JetSpace {
            num_vars,
            order,
            monomials,
            lookup,
            degree_start,
            mul_table,
            deriv_table,
            factorials,
        }
    }

    /// Number of coefficients, `C(n + K, K)`.
    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomial(&self, idx: usize) -> &[u8] {
        &self.monomials[idx]
    }

    /// Position of a multi-index, or `None` when `|α| > K`.
    pub fn index_of(&self, alpha: &[usize]) -> Option<usize> {
        if alpha.len() != self.num_vars || alpha.iter().sum::<usize>() > self.order {
            return None;
        }
        let key: Vec<u8> = alpha.iter().map(|&a| a as u8).collect();
        self.lookup.get(&key).copied()
    }
}

fn push_degree(out: &mut Vec<Vec<u8>>, cur: &mut [u8], var: usize, remaining: usize) {
    if var + 1 == cur.len() {
        cur[var] = remaining as u8;
        out.push(cur.to_vec());
        cur[var] = 0;
        return;
    }
    for e in (0..=remaining).rev() {
        cur[var] = e as u8;
        push_degree(out, cur, var + 1, remaining - e);
    }
    cur[var] = 0;
}

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Returns the shared table set for `(num_vars, order)`.
pub fn space(num_vars: usize, order: usize) -> Arc<JetSpace> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<JetSpace>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(s) = cache.lock().unwrap().get(&(num_vars, order)) {
        return s.clone();
    }
    let built = Arc::new(JetSpace::build(num_vars, order));
    cache
        .lock()
        .unwrap()
        .entry((num_vars, order))
        .or_insert(built)
        .clone()
}

/// Truncated Taylor expansion of a scalar field at a point.
#[derive(Clone)]
pub struct Jet {
    space: Arc<JetSpace>,
    coeffs: Vec<f64>,
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Jet")
            .field("num_vars", &self.space.num_vars)
            .field("order", &self.space.order)
            .field("coeffs", &self.coeffs)
            .finish()
    }
}

impl PartialEq for Jet {
    fn eq(&self, other: &Self) -> bool {
        self.same_shape(other) && self.coeffs == other.coeffs
    }
}

impl Jet {
    pub fn zero(num_vars: usize, order: usize) -> Jet {
        let space = space(num_vars, order);
        let coeffs = vec![0.0; space.len()];
        Jet { space, coeffs }
    }

    pub fn constant(value: f64, num_vars: usize, order: usize) -> Jet {
        let mut j = Jet::zero(num_vars, order);
        j.coeffs[0] = value;
        j
    }

    /// Jet of the coordinate function `x_i` with base value `value`.
    pub fn variable(i: usize, value: f64, num_vars: usize, order: usize) -> Result<Jet> {
        if i >= num_vars {
            return Err(Error::IndexOutOfRange {
                index: i,
                limit: num_vars,
            });
        }
        let mut j = Jet::constant(value, num_vars, order);
        if order >= 1 {
            let mut alpha = vec![0; num_vars];
            alpha[i] = 1;
            let idx = j.space.index_of(&alpha).unwrap();
            j.coeffs[idx] = 1.0;
        }
        Ok(j)
    }

    /// Builds a jet from raw Taylor-normalized coefficients.
    pub fn from_coeffs(num_vars: usize, order: usize, coeffs: Vec<f64>) -> Result<Jet> {
        let space = space(num_vars, order);
        if coeffs.len() != space.len() {
            return Err(Error::Dimension(format!(
                "expected {} coefficients, got {}",
                space.len(),
                coeffs.len()
            )));
        }
        Ok(Jet { space, coeffs })
    }

    pub fn num_vars(&self) -> usize {
        self.space.num_vars
    }

    pub fn order(&self) -> usize {
        self.space.order
    }

    pub fn space(&self) -> &Arc<JetSpace> {
        &self.space
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Value at the base point.
    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    /// Taylor coefficient `∂^α f / α!`; absent entries read as 0.
    pub fn coeff(&self, alpha: &[usize]) -> f64 {
        self.space
            .index_of(alpha)
            .map(|i| self.coeffs[i])
            .unwrap_or(0.0)
    }

    /// `∂^α f(x₀)`.
    pub fn partial(&self, alpha: &[usize]) -> Result<f64> {
        if alpha.len() != self.num_vars() {
            return Err(Error::Dimension(format!(
                "multi-index of length {} for a jet in {} variables",
                alpha.len(),
                self.num_vars()
            )));
        }
        let degree: usize = alpha.iter().sum();
        if degree > self.order() {
            return Err(Error::InsufficientOrder {
                needed: degree,
                have: self.order(),
            });
        }
        let idx = self.space.index_of(alpha).unwrap();
        Ok(self.coeffs[idx] * self.space.factorials[idx])
    }

    pub fn same_shape(&self, other: &Jet) -> bool {
        Arc::ptr_eq(&self.space, &other.space)
            || (self.num_vars() == other.num_vars() && self.order() == other.order())
    }

    fn check_shape(&self, other: &Jet) -> Result<()> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(Error::JetMismatch(
                self.num_vars(),
                self.order(),
                other.num_vars(),
                other.order(),
            ))
        }
    }

    pub fn try_add(&self, other: &Jet) -> Result<Jet> {
        self.check_shape(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn try_sub(&self, other: &Jet) -> Result<Jet> {
        self.check_shape(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    pub fn try_mul(&self, other: &Jet) -> Result<Jet> {
        self.check_shape(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn try_div(&self, other: &Jet) -> Result<Jet> {
        self.check_shape(other)?;
        Ok(self.mul_unchecked(&other.recip()?))
    }

    fn zip_with(&self, other: &Jet, f: impl Fn(f64, f64) -> f64) -> Jet {
        Jet {
            space: self.space.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    fn mul_unchecked(&self, other: &Jet) -> Jet {
        let mut out = vec![0.0; self.coeffs.len()];
        let (x, y) = (&self.coeffs, &other.coeffs);
        for &(a, b, c) in &self.space.mul_table {
            out[c as usize] += x[a as usize] * y[b as usize];
        }
        Jet {
            space: self.space.clone(),
            coeffs: out,
        }
    }

    /// Accumulates `self += a * b` without allocating the product.
    pub fn add_mul_assign(&mut self, a: &Jet, b: &Jet) {
        assert!(self.same_shape(a) && self.same_shape(b), "jet shape mismatch");
        let (x, y) = (&a.coeffs, &b.coeffs);
        for &(i, j, k) in &self.space.mul_table {
            self.coeffs[k as usize] += x[i as usize] * y[j as usize];
        }
    }

    pub fn add_assign_scaled(&mut self, other: &Jet, factor: f64) {
        assert!(self.same_shape(other), "jet shape mismatch");
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += factor * b;
        }
    }

    pub fn scale(&self, factor: f64) -> Jet {
        Jet {
            space: self.space.clone(),
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn add_scalar(&self, value: f64) -> Jet {
        let mut out = self.clone();
        out.coeffs[0] += value;
        out
    }

    /// The non-constant part `f − f(x₀)`, which is nilpotent of degree `K + 1`.
    fn increment(&self) -> Jet {
        let mut h = self.clone();
        h.coeffs[0] = 0.0;
        h
    }

    /// Evaluates `Σ_m series[m] h^m` with `h = self − self(x₀)` by Horner's rule.
    pub fn compose(&self, series: &[f64]) -> Jet {
        let h = self.increment();
        let terms = series.len().min(self.order() + 1);
        let mut acc = Jet::constant(
            series.get(terms.saturating_sub(1)).copied().unwrap_or(0.0),
            self.num_vars(),
            self.order(),
        );
        for m in (0..terms.saturating_sub(1)).rev() {
            acc = acc.mul_unchecked(&h);
            acc.coeffs[0] += series[m];
        }
        acc
    }

    pub fn recip(&self) -> Result<Jet> {
        let a0 = self.value();
        if a0 == 0.0 || !a0.is_finite() {
            return Err(Error::SingularPoint(format!(
                "division by a jet with constant term {a0}"
            )));
        }
        // 1/(a0 + h) = Σ (−1)^m h^m / a0^{m+1}
        let series: Vec<f64> = (0..=self.order())
            .map(|m| (-1f64).powi(m as i32) / a0.powi(m as i32 + 1))
            .collect();
        Ok(self.compose(&series))
    }

    pub fn exp(&self) -> Jet {
        let e = self.value().exp();
        let series: Vec<f64> = (0..=self.order()).map(|m| e / factorial(m)).collect();
        self.compose(&series)
    }

    pub fn ln(&self) -> Result<Jet> {
        let a0 = self.value();
        if a0 <= 0.0 || !a0.is_finite() {
            return Err(Error::SingularPoint(format!("log of {a0}")));
        }
        let mut series = vec![a0.ln()];
        for m in 1..=self.order() {
            series.push((-1f64).powi(m as i32 + 1) / (m as f64 * a0.powi(m as i32)));
        }
        Ok(self.compose(&series))
    }

    pub fn sin(&self) -> Jet {
        let (s, c) = self.value().sin_cos();
        // derivatives of sin cycle through sin, cos, −sin, −cos
        let cycle = [s, c, -s, -c];
        let series: Vec<f64> = (0..=self.order())
            .map(|m| cycle[m % 4] / factorial(m))
            .collect();
        self.compose(&series)
    }

    pub fn cos(&self) -> Jet {
        let (s, c) = self.value().sin_cos();
        let cycle = [c, -s, -c, s];
        let series: Vec<f64> = (0..=self.order())
            .map(|m| cycle[m % 4] / factorial(m))
            .collect();
        self.compose(&series)
    }

    pub fn tan(&self) -> Result<Jet> {
        let c = self.cos();
        if c.value().abs() < 1e-300 {
            return Err(Error::SingularPoint(format!(
                "tan at a pole ({})",
                self.value()
            )));
        }
        Ok(self.sin().mul_unchecked(&c.recip()?))
    }

    /// `f^c` for real `c`; requires a positive constant term.
    pub fn powf(&self, exponent: f64) -> Result<Jet> {
        let a0 = self.value();
        if a0 <= 0.0 || !a0.is_finite() {
            return Err(Error::SingularPoint(format!(
                "non-integer power {exponent} of {a0}"
            )));
        }
        // binomial series (a0 + h)^c = Σ C(c, m) a0^{c−m} h^m
        let mut series = Vec::with_capacity(self.order() + 1);
        let mut binom = 1.0;
        for m in 0..=self.order() {
            series.push(binom * a0.powf(exponent - m as f64));
            binom *= (exponent - m as f64) / (m as f64 + 1.0);
        }
        Ok(self.compose(&series))
    }

    pub fn powi(&self, exponent: i32) -> Result<Jet> {
        let base = if exponent < 0 {
            self.recip()?
        } else {
            self.clone()
        };
        let mut e = exponent.unsigned_abs();
        let mut acc = Jet::constant(1.0, self.num_vars(), self.order());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul_unchecked(&sq);
            }
        }
        Ok(acc)
    }

    pub fn sqrt(&self) -> Result<Jet> {
        self.powf(0.5)
    }

    pub fn abs(&self) -> Result<Jet> {
        let a0 = self.value();
        if a0 > 0.0 {
            Ok(self.clone())
        } else if a0 < 0.0 {
            Ok(self.scale(-1.0))
        } else {
            Err(Error::SingularPoint("abs at a zero".into()))
        }
    }

    /// `∂f/∂x_i` as a jet of order `K − 1`.
    pub fn derivative(&self, i: usize) -> Result<Jet> {
        if i >= self.num_vars() {
            return Err(Error::IndexOutOfRange {
                index: i,
                limit: self.num_vars(),
            });
        }
        if self.order() == 0 {
            return Err(Error::InsufficientOrder { needed: 1, have: 0 });
        }
        let space = space(self.num_vars(), self.order() - 1);
        let coeffs = self.space.deriv_table[i]
            .iter()
            .map(|&(src, factor)| factor * self.coeffs[src as usize])
            .collect();
        Ok(Jet { space, coeffs })
    }

    /// Drops all coefficients of degree above `order`.
    pub fn truncate(&self, order: usize) -> Jet {
        if order >= self.order() {
            return self.clone();
        }
        let space = space(self.num_vars(), order);
        let len = self.space.degree_start[order + 1];
        Jet {
            space,
            coeffs: self.coeffs[..len].to_vec(),
        }
    }

    /// Value of the truncated Taylor polynomial at displacement `dx` from the base point.
    pub fn eval_polynomial(&self, dx: &[f64]) -> f64 {
        self.space
            .monomials
            .iter()
            .zip(&self.coeffs)
            .map(|(m, c)| {
                c * m
                    .iter()
                    .zip(dx)
                    .map(|(&e, &d)| d.powi(e as i32))
                    .product::<f64>()
            })
            .sum()
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Jet> for &Jet {
            type Output = Jet;
            /// Panics when the operands have different shapes.
            fn $method(self, rhs: &Jet) -> Jet {
                self.$checked(rhs).expect("jet shape mismatch")
            }
        }
        impl $trait<Jet> for Jet {
            type Output = Jet;
            fn $method(self, rhs: Jet) -> Jet {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Jet> for Jet {
            type Output = Jet;
            fn $method(self, rhs: &Jet) -> Jet {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}
