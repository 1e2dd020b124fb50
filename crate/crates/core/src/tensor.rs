//! Dense point tensors with per-slot variance, and the per-point frame of
//! metric, inverse-metric and Christoffel jets.

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::metric::MetricField;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variance {
    Co,
    Contra,
}

impl Variance {
    pub fn flipped(self) -> Variance {
        match self {
            Variance::Co => Variance::Contra,
            Variance::Contra => Variance::Co,
        }
    }
}

/// Calls `f` with every multi-index in `[0, dim)^rank`, last slot fastest.
pub fn for_each_index(dim: usize, rank: usize, mut f: impl FnMut(&[usize])) {
    let mut idx = vec![0usize; rank];
    if dim == 0 {
        return;
    }
    loop {
        f(&idx);
        let mut s = rank;
        loop {
            if s == 0 {
                return;
            }
            s -= 1;
            idx[s] += 1;
            if idx[s] < dim {
                break;
            }
            idx[s] = 0;
        }
    }
}

fn flat_index(dim: usize, idx: &[usize]) -> usize {
    idx.iter().fold(0, |acc, &i| acc * dim + i)
}

/// Dense row-major tensor at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    dim: usize,
    slots: Vec<Variance>,
    data: Vec<f64>,
}

impl Tensor {
    pub fn zeros(dim: usize, slots: Vec<Variance>) -> Tensor {
        let len = dim.pow(slots.len() as u32);
        Tensor {
            dim,
            slots,
            data: vec![0.0; len],
        }
    }

    pub fn covariant(dim: usize, rank: usize) -> Tensor {
        Tensor::zeros(dim, vec![Variance::Co; rank])
    }

    pub fn from_data(dim: usize, slots: Vec<Variance>, data: Vec<f64>) -> Result<Tensor> {
        let len = dim.pow(slots.len() as u32);
        if data.len() != len {
            return Err(Error::Dimension(format!(
                "tensor data has {} entries, expected {len}",
                data.len()
            )));
        }
        Ok(Tensor { dim, slots, data })
    }

    pub fn scalar(dim: usize, value: f64) -> Tensor {
        Tensor {
            dim,
            slots: Vec::new(),
            data: vec![value],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.slots.len()
    }

    pub fn slots(&self) -> &[Variance] {
        &self.slots
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        self.data[flat_index(self.dim, idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: f64) {
        let i = flat_index(self.dim, idx);
        self.data[i] = v;
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Value of a rank-0 tensor.
    pub fn as_scalar(&self) -> f64 {
        assert_eq!(self.rank(), 0, "not a scalar");
        self.data[0]
    }

    pub fn add(&self, other: &Tensor) -> Tensor {
        assert_eq!(self.slots, other.slots, "variance mismatch");
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        out
    }

    pub fn sub(&self, other: &Tensor) -> Tensor {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, f: f64) -> Tensor {
        let mut out = self.clone();
        out.data.iter_mut().for_each(|x| *x *= f);
        out
    }

    /// Tensor product, slots of `self` first.
    pub fn outer(&self, other: &Tensor) -> Tensor {
        let mut slots = self.slots.clone();
        slots.extend_from_slice(&other.slots);
        let mut data = Vec::with_capacity(self.data.len() * other.data.len());
        for a in &self.data {
            for b in &other.data {
                data.push(a * b);
            }
        }
        Tensor {
            dim: self.dim,
            slots,
            data,
        }
    }

    /// Reorders slots: slot `s` of the result is slot `perm[s]` of `self`.
    pub fn permute(&self, perm: &[usize]) -> Tensor {
        assert_eq!(perm.len(), self.rank());
        let slots = perm.iter().map(|&p| self.slots[p]).collect();
        let mut out = Tensor::zeros(self.dim, slots);
        let mut src = vec![0; self.rank()];
        for_each_index(self.dim, self.rank(), |idx| {
            for (s, &p) in perm.iter().enumerate() {
                src[p] = idx[s];
            }
            let v = self.get(&src);
            out.set(idx, v);
        });
        out
    }

    /// Flips the variance of `slot` using `g` or `g⁻¹` of the frame.
    pub fn raise_lower(&self, slot: usize, frame: &PointFrame) -> Result<Tensor> {
        if slot >= self.rank() {
            return Err(Error::IndexOutOfRange {
                index: slot,
                limit: self.rank(),
            });
        }
        let n = self.dim;
        let m = match self.slots[slot] {
            Variance::Co => &frame.inverse_values,
            Variance::Contra => &frame.metric_values,
        };
        let mut slots = self.slots.clone();
        slots[slot] = slots[slot].flipped();
        let mut out = Tensor::zeros(n, slots);
        let mut src = vec![0; self.rank()];
        for_each_index(n, self.rank(), |idx| {
            src.copy_from_slice(idx);
            let mut acc = 0.0;
            for j in 0..n {
                src[slot] = j;
                acc += m[idx[slot] * n + j] * self.get(&src);
            }
            out.set(idx, acc);
        });
        Ok(out)
    }

    /// Sets every slot to `target` variance.
    pub fn with_all(&self, target: Variance, frame: &PointFrame) -> Tensor {
        let mut t = self.clone();
        for s in 0..self.rank() {
            if t.slots[s] != target {
                t = t.raise_lower(s, frame).unwrap();
            }
        }
        t
    }

    /// Contracts slots `a` and `b`: a plain trace when their variances differ,
    /// otherwise with `g⁻¹` (two covariant slots) or `g` (two contravariant).
    pub fn contract(&self, a: usize, b: usize, frame: &PointFrame) -> Result<Tensor> {
        let r = self.rank();
        for s in [a, b] {
            if s >= r {
                return Err(Error::IndexOutOfRange { index: s, limit: r });
            }
        }
        if a == b {
            return Err(Error::Rejected("cannot contract a slot with itself".into()));
        }
        let n = self.dim;
        let weights: Option<&[f64]> = match (self.slots[a], self.slots[b]) {
            (Variance::Co, Variance::Co) => {
                log::debug!("contract({a},{b}): inserting inverse metric");
                Some(&frame.inverse_values)
            }
            (Variance::Contra, Variance::Contra) => {
                log::debug!("contract({a},{b}): inserting metric");
                Some(&frame.metric_values)
            }
            _ => None,
        };
        let keep: Vec<usize> = (0..r).filter(|&s| s != a && s != b).collect();
        let slots = keep.iter().map(|&s| self.slots[s]).collect();
        let mut out = Tensor::zeros(n, slots);
        let mut src = vec![0; r];
        for_each_index(n, keep.len(), |idx| {
            for (k, &s) in keep.iter().enumerate() {
                src[s] = idx[k];
            }
            let mut acc = 0.0;
            match weights {
                None => {
                    for i in 0..n {
                        src[a] = i;
                        src[b] = i;
                        acc += self.get(&src);
                    }
                }
                Some(w) => {
                    for i in 0..n {
                        for j in 0..n {
                            let wij = w[i * n + j];
                            if wij != 0.0 {
                                src[a] = i;
                                src[b] = j;
                                acc += wij * self.get(&src);
                            }
                        }
                    }
                }
            }
            out.set(idx, acc);
        });
        Ok(out)
    }

    /// Complete contraction `⟨self, other⟩` over matching slot positions.
    pub fn inner(&self, other: &Tensor, frame: &PointFrame) -> f64 {
        assert_eq!(self.rank(), other.rank(), "rank mismatch");
        let mut a = self.clone();
        for s in 0..a.rank() {
            if a.slots[s] == other.slots[s] {
                a = a.raise_lower(s, frame).unwrap();
            }
        }
        a.data.iter().zip(&other.data).map(|(x, y)| x * y).sum()
    }

    pub fn norm_sq(&self, frame: &PointFrame) -> f64 {
        self.inner(self, frame)
    }
}

/// Covariant tensor whose components are jets in position.
#[derive(Debug, Clone)]
pub struct JetTensor {
    dim: usize,
    rank: usize,
    data: Vec<Jet>,
}

impl JetTensor {
    pub fn new(dim: usize, rank: usize, data: Vec<Jet>) -> Result<JetTensor> {
        if data.len() != dim.pow(rank as u32) {
            return Err(Error::Dimension(format!(
                "jet tensor has {} entries, expected {}",
                data.len(),
                dim.pow(rank as u32)
            )));
        }
        Ok(JetTensor { dim, rank, data })
    }

    /// Builds a tensor component-by-component from a closure over the multi-index.
    pub fn from_fn(dim: usize, rank: usize, mut f: impl FnMut(&[usize]) -> Jet) -> JetTensor {
        let mut data = Vec::with_capacity(dim.pow(rank as u32));
        for_each_index(dim, rank, |idx| data.push(f(idx)));
        JetTensor { dim, rank, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> usize {
        self.data[0].order()
    }

    pub fn get(&self, idx: &[usize]) -> &Jet {
        &self.data[flat_index(self.dim, idx)]
    }

    pub fn data(&self) -> &[Jet] {
        &self.data
    }

    pub fn truncate(&self, order: usize) -> JetTensor {
        JetTensor {
            dim: self.dim,
            rank: self.rank,
            data: self.data.iter().map(|j| j.truncate(order)).collect(),
        }
    }

    /// Value part as an all-covariant [`Tensor`].
    pub fn value(&self) -> Tensor {
        Tensor {
            dim: self.dim,
            slots: vec![Variance::Co; self.rank],
            data: self.data.iter().map(|j| j.value()).collect(),
        }
    }

    /// `∇_m T_{a₁…a_r} = ∂_m T − Σ_s Γ^p_{m a_s} T_{…p…}`, new slot first.
    pub fn covariant_derivative(&self, frame: &PointFrame) -> Result<JetTensor> {
        let order = self.order();
        if order == 0 {
            return Err(Error::InsufficientOrder { needed: 1, have: 0 });
        }
        let out_order = order - 1;
        let n = self.dim;
        let neg_gamma: Vec<Jet> = frame
            .christoffel_at_order(out_order)?
            .iter()
            .map(|j| -j)
            .collect();
        let nonzero: Vec<bool> = neg_gamma
            .iter()
            .map(|g| g.coeffs().iter().any(|&c| c != 0.0))
            .collect();
        let base = self.truncate(out_order);
        let rank = self.rank;
        let mut src = vec![0usize; rank];
        let mut derivs = Vec::with_capacity(n);
        for m in 0..n {
            derivs.push(
                self.data
                    .iter()
                    .map(|j| j.derivative(m))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        let mut data = Vec::with_capacity(n.pow(rank as u32 + 1));
        for_each_index(n, rank + 1, |idx| {
            let m = idx[0];
            let rest = &idx[1..];
            let mut acc = derivs[m][flat_index(n, rest)].clone();
            for s in 0..rank {
                src.copy_from_slice(rest);
                for p in 0..n {
                    let gi = (p * n + m) * n + rest[s];
                    if !nonzero[gi] {
                        continue;
                    }
                    src[s] = p;
                    acc.add_mul_assign(&neg_gamma[gi], base.get(&src));
                }
            }
            data.push(acc);
        });
        Ok(JetTensor {
            dim: n,
            rank: rank + 1,
            data,
        })
    }
}

/// Everything known about the metric at one point: jets of `g_ij` to order
/// `K`, of `g^{ij}` to order `K`, and of `Γ^k_ij` to order `K − 1`.
#[derive(Debug, Clone)]
pub struct PointFrame {
    dim: usize,
    signature: Vec<i8>,
    order: usize,
    point: Vec<f64>,
    metric: Vec<Jet>,
    inverse: Vec<Jet>,
    /// `Γ^k_ij` at `(k * n + i) * n + j`.
    christoffel: Vec<Jet>,
    /// `g^{ij} Γ^k_ij`.
    contracted_christoffel: Vec<Jet>,
    metric_values: Vec<f64>,
    inverse_values: Vec<f64>,
}

impl PointFrame {
    /// Evaluates `field` at `point` and assembles the frame; requires `order ≥ 2`.
    pub fn build(field: &MetricField, point: &[f64], order: usize) -> Result<PointFrame> {
        if order < 2 {
            return Err(Error::InsufficientOrder {
                needed: 2,
                have: order,
            });
        }
        let jets = field.metric_jets(point, order)?;
        PointFrame::from_metric_jets(field.signature().to_vec(), point.to_vec(), jets)
    }

    /// Assembles a frame from a row-major array of metric jets.
    pub fn from_metric_jets(signature: Vec<i8>, point: Vec<f64>, metric: Vec<Jet>) -> Result<PointFrame> {
        let n = point.len();
        if metric.len() != n * n {
            return Err(Error::Dimension("metric jet array has wrong size".into()));
        }
        let order = metric[0].order();
        let inverse = invert_jet_matrix(&metric, n)?;

        let dg: Vec<Vec<Jet>> = metric
            .iter()
            .map(|g| (0..n).map(|m| g.derivative(m)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        let inv_low: Vec<Jet> = inverse.iter().map(|j| j.truncate(order - 1)).collect();
        let mut christoffel = Vec::with_capacity(n * n * n);
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let mut acc = Jet::zero(n, order - 1);
                    for l in 0..n {
                        // ∂_i g_jl + ∂_j g_il − ∂_l g_ij
                        let bracket = &(&dg[j * n + l][i] + &dg[i * n + l][j]) - &dg[i * n + j][l];
                        acc.add_mul_assign(&inv_low[k * n + l], &bracket);
                    }
                    christoffel.push(acc.scale(0.5));
                }
            }
        }
        let mut contracted_christoffel = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = Jet::zero(n, order - 1);
            for i in 0..n {
                for j in 0..n {
                    acc.add_mul_assign(&inv_low[i * n + j], &christoffel[(k * n + i) * n + j]);
                }
            }
            contracted_christoffel.push(acc);
        }
        let metric_values = metric.iter().map(|j| j.value()).collect();
        let inverse_values = inverse.iter().map(|j| j.value()).collect();
        Ok(PointFrame {
            dim: n,
            signature,
            order,
            point,
            metric,
            inverse,
            christoffel,
            contracted_christoffel,
            metric_values,
            inverse_values,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn signature(&self) -> &[i8] {
        &self.signature
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn point(&self) -> &[f64] {
        &self.point
    }

    pub fn metric_jet(&self, i: usize, j: usize) -> &Jet {
        &self.metric[i * self.dim + j]
    }

    pub fn inverse_jet(&self, i: usize, j: usize) -> &Jet {
        &self.inverse[i * self.dim + j]
    }

    /// `Γ^k_ij` as a jet of order `K − 1`.
    pub fn christoffel(&self, k: usize, i: usize, j: usize) -> &Jet {
        &self.christoffel[(k * self.dim + i) * self.dim + j]
    }

    pub fn g(&self, i: usize, j: usize) -> f64 {
        self.metric_values[i * self.dim + j]
    }

    pub fn ginv(&self, i: usize, j: usize) -> f64 {
        self.inverse_values[i * self.dim + j]
    }

    /// `g_ij` as a covariant rank-2 tensor.
    pub fn metric_tensor(&self) -> Tensor {
        Tensor::from_data(self.dim, vec![Variance::Co; 2], self.metric_values.clone()).unwrap()
    }

    /// Metric jets as a covariant jet tensor, truncated to `order`.
    pub fn metric_jet_tensor(&self, order: usize) -> JetTensor {
        JetTensor {
            dim: self.dim,
            rank: 2,
            data: self.metric.iter().map(|j| j.truncate(order)).collect(),
        }
    }

    pub fn inverse_jets_at_order(&self, order: usize) -> Result<Vec<Jet>> {
        if order > self.order {
            return Err(Error::InsufficientOrder {
                needed: order,
                have: self.order,
            });
        }
        Ok(self.inverse.iter().map(|j| j.truncate(order)).collect())
    }

    pub(crate) fn christoffel_at_order(&self, order: usize) -> Result<Vec<Jet>> {
        if order + 1 > self.order {
            return Err(Error::InsufficientOrder {
                needed: order + 1,
                have: self.order,
            });
        }
        Ok(self.christoffel.iter().map(|j| j.truncate(order)).collect())
    }

    /// Laplacian with the geometer's (positive) sign,
    /// `Δf = −g^{ij}(∂_i∂_j f − Γ^k_ij ∂_k f)`; loses two orders.
    pub fn laplacian_jet(&self, f: &Jet) -> Result<Jet> {
        let n = self.dim;
        if f.order() < 2 {
            return Err(Error::InsufficientOrder {
                needed: 2,
                have: f.order(),
            });
        }
        let out = (f.order() - 2).min(self.order - 1);
        let first: Vec<Jet> = (0..n).map(|k| f.derivative(k)).collect::<Result<_>>()?;
        let mut acc = Jet::zero(n, out);
        for i in 0..n {
            let di = first[i].derivative(i).map(|j| j.truncate(out))?;
            for j in 0..n {
                let w = self.inverse[i * n + j].truncate(out);
                if w.coeffs().iter().all(|&c| c == 0.0) {
                    continue;
                }
                let dij = if i == j {
                    di.clone()
                } else {
                    first[i].derivative(j)?.truncate(out)
                };
                acc.add_mul_assign(&w, &dij);
            }
        }
        for k in 0..n {
            let a = self.contracted_christoffel[k].truncate(out);
            acc.add_mul_assign(&(-a), &first[k].truncate(out));
        }
        Ok(-acc)
    }
}

/// Gauss–Jordan elimination over jets, pivoting on the constant terms.
fn invert_jet_matrix(m: &[Jet], n: usize) -> Result<Vec<Jet>> {
    let order = m[0].order();
    let scale = m.iter().fold(0.0f64, |s, j| s.max(j.value().abs()));
    let mut a: Vec<Jet> = m.to_vec();
    let mut inv: Vec<Jet> = (0..n * n)
        .map(|k| Jet::constant(if k / n == k % n { 1.0 } else { 0.0 }, n, order))
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| {
                a[x * n + col]
                    .value()
                    .abs()
                    .partial_cmp(&a[y * n + col].value().abs())
                    .unwrap()
            })
            .unwrap();
        if a[pivot * n + col].value().abs() <= 1e-13 * scale.max(1e-300) {
            return Err(Error::SingularPoint("metric is not invertible at the point".into()));
        }
        if pivot != col {
            for k in 0..n {
                a.swap(pivot * n + k, col * n + k);
                inv.swap(pivot * n + k, col * n + k);
            }
        }
        let r = a[col * n + col].recip()?;
        for k in 0..n {
            a[col * n + k] = &a[col * n + k] * &r;
            inv[col * n + k] = &inv[col * n + k] * &r;
        }
        for row in 0..n {
            if row == col {
                continue;
            }
            let f = a[row * n + col].clone();
            if f.coeffs().iter().all(|&c| c == 0.0) {
                continue;
            }
            for k in 0..n {
                let da = &f * &a[col * n + k];
                let di = &f * &inv[col * n + k];
                a[row * n + k] = &a[row * n + k] - &da;
                inv[row * n + k] = &inv[row * n + k] - &di;
            }
        }
    }
    Ok(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_expr;
    use std::collections::BTreeMap;

    fn constant_frame(g: &[f64], n: usize) -> PointFrame {
        let jets = g.iter().map(|&v| Jet::constant(v, n, 2)).collect();
        PointFrame::from_metric_jets(vec![1; n], vec![0.0; n], jets).unwrap()
    }

    fn field(coords: &[&str], diag: &[&str]) -> MetricField {
        MetricField::diagonal(
            coords.iter().map(|s| s.to_string()).collect(),
            BTreeMap::new(),
            diag.iter().map(|s| parse_expr(s).unwrap()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn flat_christoffels_vanish() {
        let f = field(&["x", "y", "z"], &["1", "1", "1"]);
        let fr = PointFrame::build(&f, &[0.3, -1.0, 2.0], 3).unwrap();
        for c in &fr.christoffel {
            assert!(c.coeffs().iter().all(|&x| x == 0.0));
        }
    }

    #[test]
    fn conformal_christoffel() {
        // g = e^{2cx} δ: Γ^k_ij = δ^k_i ∂_jΥ + δ^k_j ∂_iΥ − δ_ij ∂^kΥ with Υ = c x
        let c = 0.7;
        let e = format!("exp(2*{c}*x)");
        let f = field(&["x", "y"], &[&e, &e]);
        let fr = PointFrame::build(&f, &[0.2, 0.5], 3).unwrap();
        let dups = [c, 0.0];
        for k in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    let mut expect = 0.0;
                    if k == i {
                        expect += dups[j];
                    }
                    if k == j {
                        expect += dups[i];
                    }
                    if i == j {
                        expect -= dups[k];
                    }
                    let got = fr.christoffel(k, i, j).value();
                    assert!((got - expect).abs() < 1e-12, "Γ^{k}_{i}{j} = {got}");
                }
            }
        }
    }

    #[test]
    fn sphere_christoffel_vanishes_at_origin() {
        let s = "4/(1+x^2+y^2+z^2)^2";
        let f = field(&["x", "y", "z"], &[s, s, s]);
        let fr = PointFrame::build(&f, &[0.0; 3], 3).unwrap();
        for c in &fr.christoffel {
            assert!(c.value().abs() < 1e-15);
        }
    }

    #[test]
    fn inverse_jets_are_inverse() {
        let f = MetricField::new(
            vec!["x".into(), "y".into()],
            BTreeMap::new(),
            vec![
                vec![parse_expr("2 + sin(x*y)").unwrap(), parse_expr("0.3*x").unwrap()],
                vec![parse_expr("0.3*x").unwrap(), parse_expr("1 + y^2").unwrap()],
            ],
        )
        .unwrap();
        let fr = PointFrame::build(&f, &[0.4, 0.9], 4).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = Jet::zero(2, 4);
                for k in 0..2 {
                    acc.add_mul_assign(fr.metric_jet(i, k), fr.inverse_jet(k, j));
                }
                let target = if i == j { 1.0 } else { 0.0 };
                assert!((acc.value() - target).abs() < 1e-12);
                assert!(acc.coeffs()[1..].iter().all(|c| c.abs() < 1e-10));
            }
        }
    }

    #[test]
    fn singular_metric_rejected() {
        let f = field(&["x", "y"], &["x", "1"]);
        assert!(matches!(
            PointFrame::build(&f, &[0.0, 0.0], 2),
            Err(Error::SingularPoint(_))
        ));
    }

    #[test]
    fn contraction_examples() {
        let n = 4;
        let fr = constant_frame(
            &[2.0, 0.1, 0.0, 0.0, 0.1, 1.0, 0.0, 0.0, 0.0, 0.0, 3.0, 0.2, 0.0, 0.0, 0.2, 1.5],
            n,
        );
        let mut id = Tensor::zeros(n, vec![Variance::Contra, Variance::Co]);
        for i in 0..n {
            id.set(&[i, i], 1.0);
        }
        assert_eq!(id.contract(0, 1, &fr).unwrap().as_scalar(), 4.0);

        let g = fr.metric_tensor();
        let gg = g.outer(&g);
        let once = gg.contract(0, 2, &fr).unwrap();
        let twice = once.contract(0, 1, &fr).unwrap();
        assert!((twice.as_scalar() - 4.0).abs() < 1e-12);

        let up = g.raise_lower(0, &fr).unwrap().raise_lower(1, &fr).unwrap();
        for i in 0..n {
            for j in 0..n {
                assert!((up.get(&[i, j]) - fr.ginv(i, j)).abs() < 1e-14);
            }
        }
        assert!(matches!(
            g.contract(0, 2, &fr),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(g.contract(1, 1, &fr).is_err());
    }

    #[test]
    fn lorentzian_inverse() {
        let fr = constant_frame(&[-1.0, 0.3, 0.3, 2.0], 2);
        for i in 0..2 {
            for k in 0..2 {
                let s: f64 = (0..2).map(|j| fr.ginv(i, j) * fr.g(j, k)).sum();
                assert!((s - if i == k { 1.0 } else { 0.0 }).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn laplacian_sign() {
        let f = field(&["x", "y", "z"], &["1", "1", "1"]);
        let fr = PointFrame::build(&f, &[0.5, 0.1, 0.2], 3).unwrap();
        let u = f.parse_scalar("x^2").unwrap().eval_jet(f.coords(), fr.point(), 3).unwrap();
        assert!((fr.laplacian_jet(&u).unwrap().value() + 2.0).abs() < 1e-14);
        let u = f.parse_scalar("x^2+y^2+z^2").unwrap().eval_jet(f.coords(), fr.point(), 3).unwrap();
        assert!((fr.laplacian_jet(&u).unwrap().value() + 6.0).abs() < 1e-14);
        let c = Jet::constant(3.0, 3, 3);
        assert_eq!(fr.laplacian_jet(&c).unwrap().value(), 0.0);
    }

    #[test]
    fn metric_is_parallel() {
        let s = "4/(1+x^2+y^2)^2 + 0.1*x";
        let f = field(&["x", "y"], &[s, "1 + y^2"]);
        let fr = PointFrame::build(&f, &[0.3, 0.6], 3).unwrap();
        let g = fr.metric_jet_tensor(3);
        let dg = g.covariant_derivative(&fr).unwrap();
        assert!(dg.value().max_abs() < 1e-12);
    }
}
