//! Zeta functions of GJMS operators on round spheres from their explicit
//! spectra, and the residue at `s = 1`.
//!
//! On the unit sphere `Sⁿ` the spherical harmonics of degree `l` have
//! `Δ`-eigenvalue `μ_l = l(l+n−1)` and multiplicity
//! `m_l = C(n+l, n) − C(n+l−2, n)`; `P_k` acts on them by
//! `Λ_l = ∏_{j=1..k} (μ_l − ¼λ(n+2j−2)(n−2j))` with `λ = −1`.
//!
//! `Z(s) = Σ m_l Λ_l^{−s}` is continued past its abscissa by splitting off the
//! tail `l ≥ L`: the tail integral is taken term by term from the large-`l`
//! expansion of the summand and the Euler–Maclaurin boundary terms come from
//! jets at `L`. The residue is then read off symmetrically,
//! `Res ≈ ε (Z(1+ε) − Z(1−ε)) / 2`, with Richardson extrapolation in `ε`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::catalog;
use crate::conformal::conformal_bundle;
use crate::curvature::riemann;
use crate::error::{Error, Result};
use crate::gjms::{einstein_factor_constants, einstein_lambda};
use crate::green::{gamma_gjms, gamma_half, HalfInt};
use crate::jet::Jet;
use crate::tensor::PointFrame;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SphereSpectrum {
    pub n: usize,
    pub k: u32,
    pub lambda: f64,
    pub l_max: u64,
    /// `a_j` with `Λ = ∏ (μ + a_j)`.
    shifts: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidueEstimate {
    pub residue: f64,
    /// Change under `L → 2L` plus the change between successive `ε`
    /// extrapolations.
    pub error_estimate: f64,
    /// `(l, Λ_l)` for the modes with `Λ_l ≤ 0`, left out of the sum.
    pub excluded_modes: Vec<(u64, f64)>,
}

/// Largest acceptable [`ResidueEstimate::error_estimate`].
pub const RESIDUE_TOLERANCE: f64 = 1e-5;

const EPSILON: f64 = 1e-2;
/// Terms kept in the large-`l` expansion of the summand.
const TAIL_TERMS: usize = 28;
/// `B_2, B_4, B_6`.
const BERNOULLI: [f64; 3] = [1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0];

/// Neumaier-compensated sum.
#[derive(Default)]
struct Sum {
    s: f64,
    c: f64,
}

impl Sum {
    fn add(&mut self, x: f64) {
        let t = self.s + x;
        if self.s.abs() >= x.abs() {
            self.c += (self.s - t) + x;
        } else {
            self.c += (x - t) + self.s;
        }
        self.s = t;
    }

    fn value(&self) -> f64 {
        self.s + self.c
    }
}

impl SphereSpectrum {
    /// `P_k` on the unit `Sⁿ`; `l_max` is the truncation `L`.
    pub fn new(n: usize, k: u32, l_max: u64) -> Result<SphereSpectrum> {
        if n < 2 {
            return Err(Error::Dimension(format!("sphere spectrum needs n >= 2, got {n}")));
        }
        if k == 0 {
            return Err(Error::Rejected("k must be positive".into()));
        }
        let lambda = einstein_lambda(n as f64 - 1.0, n);
        let shifts = einstein_factor_constants(k, lambda, n).iter().map(|c| -c).collect();
        Ok(SphereSpectrum {
            n,
            k,
            lambda,
            l_max,
            shifts,
        })
    }

    /// `m_l` as the polynomial `(2l+n−1)/(n−1)! · ∏_{i=1}^{n−2} (l+i)`.
    pub fn multiplicity(&self, l: u64) -> f64 {
        self.multiplicity_jet(&Jet::constant(l as f64, 1, 0)).value()
    }

    pub fn eigenvalue(&self, l: u64) -> f64 {
        self.eigenvalue_jet(&Jet::constant(l as f64, 1, 0)).value()
    }

    fn multiplicity_jet(&self, x: &Jet) -> Jet {
        let n = self.n;
        let mut acc = x.scale(2.0).add_scalar(n as f64 - 1.0);
        for i in 1..=n.saturating_sub(2) {
            acc = &acc * &x.add_scalar(i as f64);
        }
        acc.scale(1.0 / gamma_half(2 * n as u32))
    }

    fn eigenvalue_jet(&self, x: &Jet) -> Jet {
        let mu = x * &x.add_scalar(self.n as f64 - 1.0);
        let mut acc = Jet::constant(1.0, 1, x.order());
        for a in &self.shifts {
            acc = &acc * &mu.add_scalar(*a);
        }
        acc
    }

    /// Coefficients `c_i(s)` with `m(x) Λ(x)^{−s} = Σ c_i x^{n−1−2ks−i}`.
    fn tail_coefficients(&self, s: f64) -> Result<Vec<f64>> {
        let n = self.n as f64;
        let u = Jet::variable(0, 0.0, 1, TAIL_TERMS)?;
        // x^{-(n-1)} m(x) and x^{-2k} Λ(x) in u = 1/x
        let mut m_hat = u.scale(n - 1.0).add_scalar(2.0);
        for i in 1..=self.n.saturating_sub(2) {
            m_hat = &m_hat * &u.scale(i as f64).add_scalar(1.0);
        }
        let m_hat = m_hat.scale(1.0 / gamma_half(2 * self.n as u32));
        let mut l_hat = Jet::constant(1.0, 1, TAIL_TERMS);
        for a in &self.shifts {
            let factor = &(&u * &u).scale(*a) + &u.scale(n - 1.0).add_scalar(1.0);
            l_hat = &l_hat * &factor;
        }
        Ok((&m_hat * &l_hat.powf(-s)?).coeffs().to_vec())
    }

    /// `Σ_{l ≥ L} m_l Λ_l^{−s}`, continued in `s`.
    fn tail(&self, s: f64, big_l: u64) -> Result<f64> {
        let lf = big_l as f64;
        let p = self.n as f64 - 2.0 * self.k as f64 * s;
        let mut integral = 0.0;
        for (i, c) in self.tail_coefficients(s)?.iter().enumerate() {
            let e = p - i as f64;
            integral += c * lf.powf(e) / -e;
        }
        let x = Jet::variable(0, lf, 1, 5)?;
        let f = &self.multiplicity_jet(&x) * &self.eigenvalue_jet(&x).powf(-s)?;
        // f^{(r)}(L) = r! · coeff_r
        let deriv = |r: usize| f.coeffs()[r] * gamma_half(2 * (r as u32 + 1));
        let mut em = integral + f.value() / 2.0;
        for (p, b) in BERNOULLI.iter().enumerate() {
            let order = 2 * p + 2;
            em -= b / gamma_half(2 * (order as u32 + 1)) * deriv(order - 1);
        }
        Ok(em)
    }

    /// Continued `Z(s)` with truncation `L`.
    pub fn zeta(&self, s: f64, big_l: u64) -> Result<f64> {
        let mut sum = Sum::default();
        for l in 0..big_l {
            let lam = self.eigenvalue(l);
            if lam > 0.0 {
                sum.add(self.multiplicity(l) * lam.powf(-s));
            }
        }
        sum.add(self.tail(s, big_l)?);
        Ok(sum.value())
    }

    /// Richardson-extrapolated residue and the change from the next finer
    /// extrapolation, which bounds the remaining `ε` bias.
    fn residue_at(&self, big_l: u64) -> Result<(f64, f64)> {
        let sym = |eps: f64| -> Result<f64> {
            Ok(eps * (self.zeta(1.0 + eps, big_l)? - self.zeta(1.0 - eps, big_l)?) / 2.0)
        };
        let (a, b, c) = (sym(EPSILON)?, sym(EPSILON / 2.0)?, sym(EPSILON / 4.0)?);
        let coarse = (4.0 * b - a) / 3.0;
        let fine = (4.0 * c - b) / 3.0;
        Ok((fine, (fine - coarse).abs()))
    }

    /// Modes with `Λ_l ≤ 0`; all of them have `l` below the largest root.
    pub fn nonpositive_modes(&self) -> Vec<(u64, f64)> {
        let mut out = Vec::new();
        let mut l = 0;
        // Λ is increasing once μ exceeds every |a_j|
        let bound = self.shifts.iter().fold(0.0f64, |m, a| m.max(a.abs()));
        while (l as f64) * (l as f64 + self.n as f64 - 1.0) <= bound || l < 2 {
            let lam = self.eigenvalue(l);
            if lam <= 0.0 {
                out.push((l, lam));
            }
            l += 1;
        }
        out
    }
}

/// `Res_{s=1} Σ m_l Λ_l^{−s}`, excluding nonpositive modes.
pub fn zeta_residue_at_1(spectrum: &SphereSpectrum) -> Result<ResidueEstimate> {
    let w = spectrum.n as i64 - 2 * spectrum.k as i64;
    if !(w == 0 || w == 2 || w == 4) {
        return Err(Error::WeightOutOfRange(format!(
            "n - 2k = {w} outside {{0, 2, 4}}"
        )));
    }
    if spectrum.l_max < 200 {
        return Err(Error::Rejected(format!("L_max = {} < 200", spectrum.l_max)));
    }
    let excluded_modes = spectrum.nonpositive_modes();
    if excluded_modes.iter().any(|(l, _)| *l >= spectrum.l_max) {
        return Err(Error::Rejected("nonpositive mode beyond the truncation".into()));
    }
    let (residue, eps_change) = spectrum.residue_at(spectrum.l_max)?;
    let (doubled, _) = spectrum.residue_at(2 * spectrum.l_max)?;
    let error_estimate = (residue - doubled).abs() + eps_change;
    if !(error_estimate <= RESIDUE_TOLERANCE) {
        return Err(Error::NonConvergent(format!(
            "residue {residue} has error estimate {error_estimate:e}"
        )));
    }
    Ok(ResidueEstimate {
        residue,
        error_estimate,
        excluded_modes,
    })
}

/// `Vol(Sⁿ) = 2π^{(n+1)/2} / Γ((n+1)/2)`.
pub fn sphere_volume(n: usize) -> f64 {
    2.0 * PI.powf((n as f64 + 1.0) / 2.0) / gamma_half(n as u32 + 1)
}

/// `∫_{Sⁿ} γ_{P_k}`, from the conformal formula at one point times the volume.
pub fn geometric_side(n: usize, k: u32) -> Result<f64> {
    let entry = catalog::round_sphere(n)?;
    let x: Vec<f64> = (0..n).map(|i| 0.1 * (i as f64 + 1.0)).collect();
    let frame = PointFrame::build(&entry.field, &x, 2)?;
    let cb = if n >= 3 {
        Some(conformal_bundle(&riemann(&frame)?, &frame)?)
    } else {
        None
    };
    let g = gamma_gjms(HalfInt::integer(k), cb.as_ref(), &frame)?;
    Ok(sphere_volume(n) * g.value)
}
