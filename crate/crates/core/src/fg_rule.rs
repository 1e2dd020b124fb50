//! Formal linear combinations of invariants and the Fefferman–Graham rule
//! `I ↦ Ĩ` that turns a Riemannian invariant into a conformal one.
//!
//! The rule is a closed rewrite table:
//!
//! * anything carrying a Ricci factor (`κ`, `κ²`, `|Ric|²`, `Δκ`, the
//!   `RicciInvolving` marker) maps to 0;
//! * pure curvature contractions map to the same contraction of `W`;
//! * `|∇R|²` maps to `Φ`.
//!
//! Everything else is an error.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Rational64;

use crate::conformal::ConformalBundle;
use crate::error::{Error, Result};
use crate::invariants::{heat_expression, InvariantName};

fn is_zero(r: &Rational64) -> bool {
    *r.numer() == 0
}

pub(crate) fn to_f64(r: &Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// A term of an [`InvariantExpr`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Primitive {
    Invariant(InvariantName),
    /// Placeholder for an unstated combination of invariants with a Ricci factor.
    RicciInvolving(u32),
    /// Any other invariant, known by name and weight only.
    Named(String, u32),
}

impl Primitive {
    pub fn weight(&self) -> u32 {
        match self {
            Primitive::Invariant(n) => n.weight(),
            Primitive::RicciInvolving(w) | Primitive::Named(_, w) => *w,
        }
    }

    fn symbol(&self) -> String {
        match self {
            Primitive::Invariant(n) => n.symbol().to_string(),
            Primitive::RicciInvolving(w) => format!("(Ricci terms, w={w})"),
            Primitive::Named(s, _) => s.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConformalPrimitive {
    One,
    WeylSq,
    CubicW1,
    CubicW2,
    Phi,
}

impl ConformalPrimitive {
    pub fn weight(self) -> u32 {
        match self {
            ConformalPrimitive::One => 0,
            ConformalPrimitive::WeylSq => 4,
            _ => 6,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            ConformalPrimitive::One => "1",
            ConformalPrimitive::WeylSq => "|W|^2",
            ConformalPrimitive::CubicW1 => "W_ij^kl W^ij_pq W^pq_kl",
            ConformalPrimitive::CubicW2 => "W_ijkl W^i_p^k_q W^pjql",
            ConformalPrimitive::Phi => "Phi",
        }
    }
}

/// Canonical sparse linear combination over an ordered key type.
fn insert<K: Ord>(map: &mut BTreeMap<K, Rational64>, key: K, c: Rational64) {
    let entry = map.entry(key).or_insert_with(|| Rational64::from_integer(0));
    *entry += c;
    map.retain(|_, v| !is_zero(v));
}

fn write_terms<'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (String, bool, &'a Rational64)>,
) -> fmt::Result {
    let mut first = true;
    for (sym, is_one, c) in terms {
        let neg = *c.numer() < 0;
        let mag = if neg { -*c } else { *c };
        match (first, neg) {
            (true, true) => f.write_str("-")?,
            (true, false) => {}
            (false, true) => f.write_str(" - ")?,
            (false, false) => f.write_str(" + ")?,
        }
        if is_one {
            write!(f, "{mag}")?;
        } else if mag == Rational64::from_integer(1) {
            f.write_str(&sym)?;
        } else {
            write!(f, "{mag} * {sym}")?;
        }
        first = false;
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

/// Linear combination of Riemannian invariants of one weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantExpr {
    weight: u32,
    terms: BTreeMap<Primitive, Rational64>,
}

impl InvariantExpr {
    pub fn zero(weight: u32) -> InvariantExpr {
        InvariantExpr {
            weight,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(
        weight: u32,
        terms: impl IntoIterator<Item = (Primitive, Rational64)>,
    ) -> Result<InvariantExpr> {
        let mut e = InvariantExpr::zero(weight);
        for (p, c) in terms {
            e.add_term(p, c)?;
        }
        Ok(e)
    }

    /// Adds `c · p`, merging with an existing term.
    pub fn add_term(&mut self, p: Primitive, c: Rational64) -> Result<()> {
        if p.weight() != self.weight {
            return Err(Error::Rejected(format!(
                "term `{}` has weight {}, expression has weight {}",
                p.symbol(),
                p.weight(),
                self.weight
            )));
        }
        insert(&mut self.terms, p, c);
        Ok(())
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Primitive, &Rational64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, p: &Primitive) -> Rational64 {
        self.terms.get(p).copied().unwrap_or_else(|| Rational64::from_integer(0))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: Rational64) -> InvariantExpr {
        let mut out = InvariantExpr::zero(self.weight);
        for (p, v) in &self.terms {
            insert(&mut out.terms, p.clone(), *v * c);
        }
        out
    }

    pub fn try_add(&self, other: &InvariantExpr) -> Result<InvariantExpr> {
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(p.clone(), *c)?;
        }
        Ok(out)
    }
}

impl fmt::Display for InvariantExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(
            f,
            self.terms.iter().map(|(p, c)| {
                (p.symbol(), *p == Primitive::Invariant(InvariantName::One), c)
            }),
        )
    }
}

/// Linear combination of Weyl conformal invariants of one weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConformalExpr {
    weight: u32,
    terms: BTreeMap<ConformalPrimitive, Rational64>,
}

impl ConformalExpr {
    pub fn zero(weight: u32) -> ConformalExpr {
        ConformalExpr {
            weight,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(
        weight: u32,
        terms: impl IntoIterator<Item = (ConformalPrimitive, Rational64)>,
    ) -> Result<ConformalExpr> {
        let mut e = ConformalExpr::zero(weight);
        for (p, c) in terms {
            if p.weight() != weight {
                return Err(Error::Rejected(format!(
                    "term `{}` has weight {}, expression has weight {weight}",
                    p.symbol(),
                    p.weight()
                )));
            }
            insert(&mut e.terms, p, c);
        }
        Ok(e)
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ConformalPrimitive, &Rational64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, p: ConformalPrimitive) -> Rational64 {
        self.terms.get(&p).copied().unwrap_or_else(|| Rational64::from_integer(0))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Σ c · value(p)`; the closure is only called for primitives present.
    pub fn eval_with(&self, mut value: impl FnMut(ConformalPrimitive) -> Result<f64>) -> Result<f64> {
        let mut acc = 0.0;
        for (p, c) in &self.terms {
            acc += to_f64(c) * value(*p)?;
        }
        Ok(acc)
    }
}

impl fmt::Display for ConformalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(
            f,
            self.terms
                .iter()
                .map(|(p, c)| (p.symbol().to_string(), *p == ConformalPrimitive::One, c)),
        )
    }
}

/// Highest weight covered by the rewrite table.
pub const MAX_RULE_WEIGHT: u32 = 6;

/// Applies the rewrite table term by term.
pub fn fg_transform(e: &InvariantExpr) -> Result<ConformalExpr> {
    if e.weight > MAX_RULE_WEIGHT {
        return Err(Error::UnsupportedRewrite(format!(
            "weight {} exceeds the rewrite table (max {MAX_RULE_WEIGHT})",
            e.weight
        )));
    }
    let mut out = ConformalExpr::zero(e.weight);
    for (p, c) in &e.terms {
        use InvariantName as N;
        let target = match p {
            Primitive::Invariant(N::One) => Some(ConformalPrimitive::One),
            Primitive::Invariant(N::Kappa | N::KappaSq | N::RicSq | N::LapKappa) => None,
            Primitive::RicciInvolving(_) => None,
            Primitive::Invariant(N::RiemSq) => Some(ConformalPrimitive::WeylSq),
            Primitive::Invariant(N::Cubic1) => Some(ConformalPrimitive::CubicW1),
            Primitive::Invariant(N::Cubic2) => Some(ConformalPrimitive::CubicW2),
            Primitive::Invariant(N::GradRiemSq) => Some(ConformalPrimitive::Phi),
            Primitive::Named(name, _) => {
                return Err(Error::UnsupportedRewrite(format!(
                    "no rewrite rule for `{name}`"
                )))
            }
        };
        if let Some(t) = target {
            insert(&mut out.terms, t, *c);
        }
    }
    Ok(out)
}

/// [`fg_transform`] with the even-dimension guard `w ≤ n`.
pub fn fg_transform_in_dim(e: &InvariantExpr, n: usize) -> Result<ConformalExpr> {
    if n.is_multiple_of(2) && e.weight as usize > n {
        return Err(Error::UnsupportedRewrite(format!(
            "weight {} exceeds dimension {n} (even dimension)",
            e.weight
        )));
    }
    fg_transform(e)
}

/// `ã_{2j}`: the rewrite of the stored heat invariant `a_{2j}`.
pub fn a_tilde(j: u32) -> Result<ConformalExpr> {
    fg_transform(&heat_expression(j)?)
}

/// Evaluates `e` on a conformal bundle.
pub fn eval_conformal_expr(e: &ConformalExpr, cb: &ConformalBundle) -> Result<f64> {
    e.eval_with(|p| cb.primitive(p))
}
