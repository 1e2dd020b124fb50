//! Riemann, Ricci and scalar curvature, their covariant derivatives, and the
//! scalar Laplacian.
//!
//! Sign conventions, fixed here once:
//!
//! * `R(X,Y) = ∇_X∇_Y − ∇_Y∇_X − ∇_[X,Y]` and `R_ijkl = ⟨R(∂_i,∂_j)∂_k, ∂_l⟩`,
//!   so `R^l_ijk = ∂_iΓ^l_jk − ∂_jΓ^l_ik + Γ^l_im Γ^m_jk − Γ^l_jm Γ^m_ik`.
//! * `Ric_ij = R^k_{ijk} = g^{ab} R_aijb`, `κ = R^{ij}_{ji} = g^{ij} Ric_ij`.
//! * The unit round sphere then has `R_ijkl = g_il g_jk − g_ik g_jl`,
//!   `Ric = (n−1) g` and `κ = n(n−1) > 0`.
//! * `Δ_g = −g^{ij}∇_i∇_j` is non-negative.

use crate::dsl::Compiled;
use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::metric::MetricField;
use crate::tensor::{for_each_index, JetTensor, PointFrame, Tensor};

/// Curvature data at one point.
///
/// The public tensors are values; the jets behind them are kept so further
/// covariant derivatives need no second pass over the metric.
#[derive(Debug, Clone)]
pub struct CurvatureBundle {
    /// `R_ijkl`, all covariant.
    pub riemann: Tensor,
    /// `Ric_ij`.
    pub ricci: Tensor,
    pub kappa: f64,
    /// `∇_m R_ijkl`, present when the frame order is at least 3.
    pub grad_riemann: Option<Tensor>,
    /// `Δ_g κ`, present when the frame order is at least 4.
    pub lap_kappa: Option<f64>,
    riemann_jets: JetTensor,
    ricci_jets: JetTensor,
    kappa_jet: Jet,
    grad_riemann_jets: Option<JetTensor>,
}

/// Highest jet order retained for derived curvature tensors; two derivatives
/// beyond the curvature tensor cover every implemented invariant.
const DERIVED_ORDER: usize = 2;

impl CurvatureBundle {
    pub fn riemann_jets(&self) -> &JetTensor {
        &self.riemann_jets
    }

    pub fn ricci_jets(&self) -> &JetTensor {
        &self.ricci_jets
    }

    pub fn kappa_jet(&self) -> &Jet {
        &self.kappa_jet
    }

    pub fn grad_riemann_jets(&self) -> Option<&JetTensor> {
        self.grad_riemann_jets.as_ref()
    }

    /// `∇_p∇_q R_ijkl` with slots `(p, q, i, j, k, l)`.
    pub fn second_grad_riemann(&self, frame: &PointFrame) -> Result<Tensor> {
        let grad = self
            .grad_riemann_jets
            .as_ref()
            .ok_or(Error::InsufficientOrder {
                needed: 4,
                have: frame.order(),
            })?;
        if grad.order() == 0 {
            return Err(Error::InsufficientOrder {
                needed: 4,
                have: frame.order(),
            });
        }
        Ok(grad.covariant_derivative(frame)?.value())
    }

    /// `−⟨R, Δ_g R⟩ = g^{pq} R^{ijkl} ∇_p∇_q R_ijkl`.
    pub fn riemann_rough_laplacian_pairing(&self, frame: &PointFrame) -> Result<f64> {
        let hess = self.second_grad_riemann(frame)?;
        let rough = hess.contract(0, 1, frame)?;
        Ok(self.riemann.inner(&rough, frame))
    }

    /// Largest `|Ric_ij|`, used to classify Ricci-flat points.
    pub fn ricci_max_abs(&self) -> f64 {
        self.ricci.max_abs()
    }

    /// True when `max |Ric| ≤ 1e-8 · max(1, max |R|)`.
    pub fn is_ricci_flat(&self) -> bool {
        self.ricci_max_abs() <= 1e-8 * self.riemann.max_abs().max(1.0)
    }

    /// Constant `c` with `Ric = c g` and the residual `max |Ric − c g|`.
    pub fn einstein_constant(&self, frame: &PointFrame) -> (f64, f64) {
        let n = frame.dim();
        let c = self.kappa / n as f64;
        let mut residual = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                residual = residual.max((self.ricci.get(&[i, j]) - c * frame.g(i, j)).abs());
            }
        }
        (c, residual)
    }
}

/// Computes the curvature bundle of `frame`.
pub fn riemann(frame: &PointFrame) -> Result<CurvatureBundle> {
    let n = frame.dim();
    let k = frame.order();
    if k < 2 {
        return Err(Error::InsufficientOrder { needed: 2, have: k });
    }
    let order = k - 2;

    // Γ^l_jk at order K−1 and K−2, and ∂_i Γ^l_jk at order K−2
    let gamma_low: Vec<Jet> = (0..n * n * n)
        .map(|idx| {
            let (l, rest) = (idx / (n * n), idx % (n * n));
            frame.christoffel(l, rest / n, rest % n).truncate(order)
        })
        .collect();
    let gamma = |l: usize, i: usize, j: usize| &gamma_low[(l * n + i) * n + j];
    let mut dgamma: Vec<Vec<Jet>> = Vec::with_capacity(n * n * n);
    for l in 0..n {
        for i in 0..n {
            for j in 0..n {
                let g = frame.christoffel(l, i, j);
                dgamma.push((0..n).map(|m| g.derivative(m)).collect::<Result<_>>()?);
            }
        }
    }
    let dgamma_at = |m: usize, l: usize, i: usize, j: usize| &dgamma[(l * n + i) * n + j][m];

    // R^l_ijk for i < j
    let mut up = vec![Jet::zero(n, order); n * n * n * n];
    let up_idx = |l: usize, i: usize, j: usize, kk: usize| ((l * n + i) * n + j) * n + kk;
    for l in 0..n {
        for i in 0..n {
            for j in (i + 1)..n {
                for kk in 0..n {
                    let mut acc = dgamma_at(i, l, j, kk) - dgamma_at(j, l, i, kk);
                    for m in 0..n {
                        acc.add_mul_assign(gamma(l, i, m), gamma(m, j, kk));
                        acc.add_mul_assign(&-gamma(l, j, m), gamma(m, i, kk));
                    }
                    up[up_idx(l, i, j, kk)] = acc;
                }
            }
        }
    }

    // R_ijkl = g_lm R^m_ijk
    let g_low: Vec<Jet> = (0..n * n)
        .map(|idx| frame.metric_jet(idx / n, idx % n).truncate(order))
        .collect();
    let mut down = vec![Jet::zero(n, order); n * n * n * n];
    let down_idx = |i: usize, j: usize, kk: usize, l: usize| ((i * n + j) * n + kk) * n + l;
    for i in 0..n {
        for j in (i + 1)..n {
            for kk in 0..n {
                for l in 0..n {
                    let mut acc = Jet::zero(n, order);
                    for m in 0..n {
                        acc.add_mul_assign(&g_low[l * n + m], &up[up_idx(m, i, j, kk)]);
                    }
                    down[down_idx(j, i, kk, l)] = -&acc;
                    down[down_idx(i, j, kk, l)] = acc;
                }
            }
        }
    }
    let riemann_jets = JetTensor::new(n, 4, down)?;

    // Ric_ij = g^{ab} R_aijb, κ = g^{ij} Ric_ij
    let inv = frame.inverse_jets_at_order(order)?;
    let ricci_jets = JetTensor::from_fn(n, 2, |idx| {
        let (i, j) = (idx[0], idx[1]);
        let mut acc = Jet::zero(n, order);
        for a in 0..n {
            for b in 0..n {
                acc.add_mul_assign(&inv[a * n + b], riemann_jets.get(&[a, i, j, b]));
            }
        }
        acc
    });
    let mut kappa_jet = Jet::zero(n, order);
    for i in 0..n {
        for j in 0..n {
            kappa_jet.add_mul_assign(&inv[i * n + j], ricci_jets.get(&[i, j]));
        }
    }

    let lap_kappa = if order >= 2 {
        Some(frame.laplacian_jet(&kappa_jet)?.value())
    } else {
        None
    };
    let grad_riemann_jets = if order >= 1 {
        let r = riemann_jets.truncate(order.min(DERIVED_ORDER));
        Some(r.covariant_derivative(frame)?)
    } else {
        None
    };

    Ok(CurvatureBundle {
        riemann: riemann_jets.value(),
        ricci: ricci_jets.value(),
        kappa: kappa_jet.value(),
        grad_riemann: grad_riemann_jets.as_ref().map(|g| g.value()),
        lap_kappa,
        riemann_jets,
        ricci_jets,
        kappa_jet,
        grad_riemann_jets,
    })
}

/// `Δ_g f` at the frame's point, positive-sign convention: on flat space
/// `Δ(|x|²) = −2n`.
pub fn laplacian_scalar(f: &Compiled, field: &MetricField, frame: &PointFrame) -> Result<f64> {
    let jet = f.eval_jet(field.coords(), frame.point(), frame.order())?;
    Ok(frame.laplacian_jet(&jet)?.value())
}

/// Largest violation of the algebraic Riemann symmetries
/// (both antisymmetries, pair symmetry, first Bianchi).
pub fn riemann_symmetry_defect(r: &Tensor) -> f64 {
    let n = r.dim();
    let mut worst = 0.0f64;
    for_each_index(n, 4, |x| {
        let (i, j, k, l) = (x[0], x[1], x[2], x[3]);
        let v = r.get(&[i, j, k, l]);
        worst = worst
            .max((v + r.get(&[j, i, k, l])).abs())
            .max((v + r.get(&[i, j, l, k])).abs())
            .max((v - r.get(&[k, l, i, j])).abs())
            .max((v + r.get(&[i, k, l, j]) + r.get(&[i, l, j, k])).abs());
    });
    worst
}

/// Largest violation of `∇_m R_ijkl + ∇_k R_ijlm + ∇_l R_ijmk = 0`.
pub fn second_bianchi_defect(grad: &Tensor) -> f64 {
    let n = grad.dim();
    let mut worst = 0.0f64;
    for_each_index(n, 5, |x| {
        let (m, i, j, k, l) = (x[0], x[1], x[2], x[3], x[4]);
        let s = grad.get(&[m, i, j, k, l]) + grad.get(&[k, i, j, l, m]) + grad.get(&[l, i, j, m, k]);
        worst = worst.max(s.abs());
    });
    worst
}
