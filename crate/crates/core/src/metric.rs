//! Metric fields defined by closed-form component expressions, and the
//! plain-text metric file format.
//!
//! ```text
//! # comment
//! dim = 2
//! signature = +1,+1          # optional, default all +1
//! coords = x1,x2
//! param a = 0.5              # optional, repeatable
//! g[1][1] = 4/(1+x1^2+x2^2)^2
//! g[2][2] = 4/(1+x1^2+x2^2)^2
//! ```
//!
//! Indices are 1-based with `i ≤ j`; missing off-diagonal entries are 0.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::dsl::{compile, parse_expr, BinOp, Compiled, Expr, Func};
use crate::error::{Error, Result};
use crate::jet::Jet;

#[derive(Debug, Clone, PartialEq)]
pub struct MetricField {
    dim: usize,
    signature: Vec<i8>,
    coords: Vec<String>,
    params: BTreeMap<String, f64>,
    /// Upper triangle, row-major: `(0,0), (0,1), …, (0,n−1), (1,1), …`.
    components: Vec<Expr>,
}

fn packed(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * n - i * (i + 1) / 2 + j
}

impl MetricField {
    /// Builds a field from a full component matrix; `components[i][j]` must equal
    /// `components[j][i]`.
    pub fn new(
        coords: Vec<String>,
        params: BTreeMap<String, f64>,
        components: Vec<Vec<Expr>>,
    ) -> Result<MetricField> {
        let n = coords.len();
        if n == 0 {
            return Err(Error::Dimension("metric with no coordinates".into()));
        }
        if components.len() != n || components.iter().any(|row| row.len() != n) {
            return Err(Error::Dimension(format!("expected a {n}x{n} component matrix")));
        }
        let mut packed_components = Vec::with_capacity(n * (n + 1) / 2);
        for i in 0..n {
            for j in i..n {
                if components[i][j] != components[j][i] {
                    return Err(Error::Rejected(format!(
                        "component ({},{}) differs from ({},{})",
                        i + 1,
                        j + 1,
                        j + 1,
                        i + 1
                    )));
                }
                packed_components.push(components[i][j].clone());
            }
        }
        let field = MetricField {
            dim: n,
            signature: vec![1; n],
            coords,
            params,
            components: packed_components,
        };
        field.validate()?;
        Ok(field)
    }

    /// Diagonal metric `Σ g_i dx_i²`.
    pub fn diagonal(coords: Vec<String>, params: BTreeMap<String, f64>, diag: Vec<Expr>) -> Result<MetricField> {
        let n = diag.len();
        let mut m = vec![vec![Expr::Num(0.0); n]; n];
        for (i, e) in diag.into_iter().enumerate() {
            m[i][i] = e;
        }
        MetricField::new(coords, params, m)
    }

    pub fn with_signature(mut self, signature: Vec<i8>) -> Result<MetricField> {
        if signature.len() != self.dim || signature.iter().any(|s| s.abs() != 1) {
            return Err(Error::Dimension(format!(
                "signature must be {} entries of ±1",
                self.dim
            )));
        }
        self.signature = signature;
        Ok(self)
    }

    /// Replaces the value of an existing parameter.
    pub fn with_param(mut self, name: &str, value: f64) -> Result<MetricField> {
        match self.params.get_mut(name) {
            Some(v) => *v = value,
            None => return Err(Error::Rejected(format!("the metric has no parameter `{name}`"))),
        }
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        for (i, name) in self.coords.iter().enumerate() {
            if self.coords[..i].contains(name) {
                return Err(Error::Rejected(format!("duplicate coordinate `{name}`")));
            }
        }
        for e in &self.components {
            compile(e, &self.coords, &self.params)?;
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn signature(&self) -> &[i8] {
        &self.signature
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    pub fn params(&self) -> &BTreeMap<String, f64> {
        &self.params
    }

    pub fn component(&self, i: usize, j: usize) -> &Expr {
        &self.components[packed(self.dim, i, j)]
    }

    /// Full component matrix as expressions.
    pub fn matrix(&self) -> Vec<Vec<Expr>> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.component(i, j).clone()).collect())
            .collect()
    }

    /// Compiles a scalar expression (test function, conformal factor) over this
    /// field's coordinates and parameters.
    pub fn compile_scalar(&self, e: &Expr) -> Result<Compiled> {
        compile(e, &self.coords, &self.params)
    }

    pub fn parse_scalar(&self, src: &str) -> Result<Compiled> {
        self.compile_scalar(&parse_expr(src)?)
    }

    /// Jets of every `g_ij` at `point`, as a full row-major `n×n` array.
    pub fn metric_jets(&self, point: &[f64], order: usize) -> Result<Vec<Jet>> {
        if point.len() != self.dim {
            return Err(Error::Dimension(format!(
                "point has {} coordinates, metric has dimension {}",
                point.len(),
                self.dim
            )));
        }
        let n = self.dim;
        let mut packed_jets = Vec::with_capacity(self.components.len());
        for e in &self.components {
            let c = compile(e, &self.coords, &self.params)?;
            packed_jets.push(c.eval_jet(&self.coords, point, order)?);
        }
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                out.push(packed_jets[packed(n, i, j)].clone());
            }
        }
        Ok(out)
    }

    /// Component-wise product with a scalar expression, `factor · g_ij`.
    pub fn scaled_by(&self, factor: &Expr) -> Result<MetricField> {
        let mut out = self.clone();
        for c in out.components.iter_mut() {
            if !c.is_zero() {
                *c = Expr::bin(BinOp::Mul, factor.clone(), c.clone());
            }
        }
        out.validate()?;
        Ok(out)
    }

    /// Conformal change `e^{2Υ} g` built by expression composition.
    pub fn rescale(&self, upsilon: &Expr) -> Result<MetricField> {
        let factor = Expr::call(
            Func::Exp,
            Expr::bin(BinOp::Mul, Expr::Num(2.0), upsilon.clone()),
        );
        self.scaled_by(&factor)
    }

    /// Serializes to the metric file format.
    pub fn to_file_string(&self) -> String {
        let mut s = String::new();
        writeln!(s, "dim = {}", self.dim).unwrap();
        let sig: Vec<String> = self
            .signature
            .iter()
            .map(|&x| if x > 0 { "+1".into() } else { "-1".into() })
            .collect();
        writeln!(s, "signature = {}", sig.join(",")).unwrap();
        writeln!(s, "coords = {}", self.coords.join(",")).unwrap();
        for (k, v) in &self.params {
            writeln!(s, "param {k} = {v}").unwrap();
        }
        for i in 0..self.dim {
            for j in i..self.dim {
                let e = self.component(i, j);
                if !e.is_zero() {
                    writeln!(s, "g[{}][{}] = {}", i + 1, j + 1, e).unwrap();
                }
            }
        }
        s
    }

    /// Parses the metric file format.
    pub fn from_file_str(src: &str) -> Result<MetricField> {
        let err = |line: usize, msg: String| Error::MetricFile { line, msg };
        let mut dim: Option<usize> = None;
        let mut signature: Option<Vec<i8>> = None;
        let mut coords: Option<Vec<String>> = None;
        let mut params = BTreeMap::new();
        let mut entries: Vec<(usize, usize, usize, Expr)> = Vec::new();

        for (ln, raw) in src.lines().enumerate() {
            let line_no = ln + 1;
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(line_no, "expected `key = value`".into()))?;
            let key = key.trim();
            let value = value.trim();
            if key == "dim" {
                dim = Some(
                    value
                        .parse()
                        .map_err(|_| err(line_no, format!("bad dimension `{value}`")))?,
                );
            } else if key == "signature" {
                let sig: std::result::Result<Vec<i8>, _> =
                    value.split(',').map(|s| s.trim().parse::<i8>()).collect();
                signature = Some(sig.map_err(|_| err(line_no, format!("bad signature `{value}`")))?);
            } else if key == "coords" {
                let names: Vec<String> = value.split(',').map(|s| s.trim().to_string()).collect();
                if names.iter().any(|s| s.is_empty()) {
                    return Err(err(line_no, "empty coordinate name".into()));
                }
                coords = Some(names);
            } else if let Some(name) = key.strip_prefix("param ") {
                let v: f64 = value
                    .parse()
                    .map_err(|_| err(line_no, format!("bad parameter value `{value}`")))?;
                params.insert(name.trim().to_string(), v);
            } else if let Some(rest) = key.strip_prefix("g[") {
                let (i, j) = parse_indices(rest)
                    .ok_or_else(|| err(line_no, format!("bad component key `{key}`")))?;
                let e = parse_expr(value).map_err(|e| match e {
                    Error::Syntax { pos, msg } => err(line_no, format!("byte {pos}: {msg}")),
                    Error::UnknownFunction { name, pos } => {
                        err(line_no, format!("byte {pos}: unknown function `{name}`"))
                    }
                    other => other,
                })?;
                entries.push((line_no, i, j, e));
            } else {
                return Err(err(line_no, format!("unknown key `{key}`")));
            }
        }

        let coords = coords.ok_or_else(|| err(0, "missing `coords`".into()))?;
        let n = dim.unwrap_or(coords.len());
        if coords.len() != n {
            return Err(err(0, format!("dim = {n} but {} coordinates", coords.len())));
        }
        let mut m = vec![vec![Expr::Num(0.0); n]; n];
        let mut seen = vec![vec![false; n]; n];
        for (line_no, i, j, e) in entries {
            if i == 0 || j == 0 || i > n || j > n || i > j {
                return Err(err(line_no, format!("component g[{i}][{j}] must satisfy 1 ≤ i ≤ j ≤ {n}")));
            }
            if seen[i - 1][j - 1] {
                return Err(err(line_no, format!("duplicate component g[{i}][{j}]")));
            }
            seen[i - 1][j - 1] = true;
            m[i - 1][j - 1] = e.clone();
            m[j - 1][i - 1] = e;
        }
        let field = MetricField::new(coords, params, m)?;
        match signature {
            Some(sig) => field.with_signature(sig),
            None => Ok(field),
        }
    }
}

fn parse_indices(rest: &str) -> Option<(usize, usize)> {
    let (i, rest) = rest.split_once(']')?;
    let rest = rest.trim().strip_prefix('[')?;
    let (j, tail) = rest.split_once(']')?;
    if !tail.trim().is_empty() {
        return None;
    }
    Some((i.trim().parse().ok()?, j.trim().parse().ok()?))
}
