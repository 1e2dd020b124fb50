//! Command-line front end. The `conflab` binary is a thin wrapper around [`run`].
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
//! 3 numeric-domain error.

use std::collections::BTreeSet;
use std::io::Write;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::catalog::{self, CatalogParams};
use crate::conformal::{conformal_bundle, ConformalBundle};
use crate::curvature::{riemann, CurvatureBundle};
use crate::error::{Error, Result};
use crate::fg_rule::{a_tilde, eval_conformal_expr, ConformalPrimitive};
use crate::green::{gamma_gjms, gamma_power_laplacian, HalfInt};
use crate::invariants::{eval_invariant, heat_expression, heat_invariant, InvariantName};
use crate::metric::MetricField;
use crate::report::{fnv1a, MetricIdentity, Quantity, Report};
use crate::tensor::PointFrame;
use crate::verify::{self, Check, SuiteReport};

#[derive(Debug, Parser)]
#[command(name = "conflab", version, about = "Curvature invariants, GJMS log coefficients and verification suites")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Riemannian, heat and conformal invariants at one or more points.
    Invariants(InvariantsArgs),
    /// Log coefficient of the Green function of the k-th GJMS operator.
    Gamma(GammaArgs),
    /// Run a verification suite (or `all`).
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Debug, Args)]
struct MetricArgs {
    /// `builtin:<name>` or a metric file path.
    #[arg(long)]
    metric: String,
    /// Dimension of a built-in family.
    #[arg(long)]
    dim: Option<usize>,
    /// Comma-separated coordinates; repeat for several points. Defaults to
    /// the first safe point of a built-in.
    #[arg(long, allow_hyphen_values = true)]
    point: Vec<String>,
    /// Jet order of the metric expansion.
    #[arg(long, default_value_t = 6)]
    order: usize,
    /// Horizon radius for `schwarzschild_tangherlini`.
    #[arg(long)]
    r0: Option<f64>,
    /// Conformal factor for `conformally_flat`.
    #[arg(long, allow_hyphen_values = true)]
    upsilon: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Debug, Args)]
struct InvariantsArgs {
    #[command(flatten)]
    metric: MetricArgs,
    /// Weights to report.
    #[arg(long, value_delimiter = ',', default_values_t = [0u32, 2, 4, 6])]
    weights: Vec<u32>,
}

#[derive(Debug, Args)]
struct GammaArgs {
    #[command(flatten)]
    metric: MetricArgs,
    /// Positive half-integer, e.g. `3` or `5/2`.
    #[arg(long)]
    k: String,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// One of the suite names, or `all`.
    suite: String,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code.
pub fn run(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let start = Instant::now();
    let command: Vec<String> = args.iter().skip(1).cloned().collect();
    let (result, format) = match &cli.command {
        Command::Invariants(a) => (cmd_invariants(a, command), a.metric.format),
        Command::Gamma(a) => (cmd_gamma(a, command), a.metric.format),
        Command::Verify(a) => (cmd_verify(a, command), a.format),
    };
    match result {
        Ok(mut report) => {
            report.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
            let text = match format {
                Format::Table => report.to_table(),
                Format::Json => report.to_json() + "\n",
            };
            let _ = write!(out, "{text}");
            exit_status(&report)
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

/// 1 when any check in the report failed, else 0.
fn exit_status(report: &Report) -> i32 {
    if report.passed == Some(false) {
        1
    } else {
        0
    }
}

struct Resolved {
    field: MetricField,
    identity: MetricIdentity,
    points: Vec<Vec<f64>>,
}

fn resolve(a: &MetricArgs) -> Result<Resolved> {
    let (field, identity, safe) = if let Some(name) = a.metric.strip_prefix("builtin:") {
        let n = match (a.dim, name) {
            (Some(n), _) => n,
            (None, "product_sphere_sphere") => 4,
            (None, _) => return Err(Error::Rejected(format!("--dim is required for builtin:{name}"))),
        };
        let params = CatalogParams {
            r0: a.r0,
            upsilon: a.upsilon.clone(),
        };
        let entry = catalog::builtin(name, n, &params)?;
        let id = MetricIdentity {
            source: "builtin".into(),
            name: name.into(),
            dim: n,
            hash: None,
        };
        (entry.field, id, entry.safe_points.first().cloned())
    } else {
        let text = std::fs::read_to_string(&a.metric).map_err(|e| Error::Io(format!("{}: {e}", a.metric)))?;
        let mut field = MetricField::from_file_str(&text)?;
        if let Some(r0) = a.r0 {
            field = field.with_param("r0", r0)?;
        }
        if a.upsilon.is_some() {
            return Err(Error::Rejected("--upsilon applies only to builtin:conformally_flat".into()));
        }
        if let Some(n) = a.dim {
            if n != field.dim() {
                return Err(Error::Dimension(format!("--dim {n} but the file has dim {}", field.dim())));
            }
        }
        let id = MetricIdentity {
            source: "file".into(),
            name: a.metric.clone(),
            dim: field.dim(),
            hash: Some(format!("{:016x}", fnv1a(text.as_bytes()))),
        };
        (field, id, None)
    };
    let points = if a.point.is_empty() {
        vec![safe.ok_or_else(|| Error::Rejected("--point is required for metric files".into()))?]
    } else {
        a.point
            .iter()
            .map(|p| parse_point(p, field.dim()))
            .collect::<Result<Vec<_>>>()?
    };
    log::debug!("resolved {}:{} at {} point(s)", identity.source, identity.name, points.len());
    Ok(Resolved {
        field,
        identity,
        points,
    })
}

fn parse_point(s: &str, n: usize) -> Result<Vec<f64>> {
    let mut v = Vec::with_capacity(n);
    for (i, item) in s.split(',').enumerate() {
        let x: f64 = item
            .trim()
            .parse()
            .map_err(|_| Error::Rejected(format!("--point item {}: `{}` is not a number", i + 1, item.trim())))?;
        v.push(x);
    }
    if v.len() != n {
        return Err(Error::Rejected(format!("--point has {} coordinates, metric has dim {n}", v.len())));
    }
    Ok(v)
}

fn base_report(command: Vec<String>, r: &Resolved, order: usize) -> Report {
    let mut report = Report::new(command);
    report.metric = Some(r.identity.clone());
    report.points = r.points.clone();
    report.order = Some(order);
    report
}

fn quantity(point: usize, name: &str, weight: u32, value: f64, path: &str) -> Quantity {
    Quantity {
        point,
        name: name.to_string(),
        weight,
        value,
        formula_path: path.to_string(),
        partial: false,
        expression: None,
    }
}

fn bundles(field: &MetricField, x: &[f64], order: usize) -> Result<(PointFrame, CurvatureBundle, Option<ConformalBundle>)> {
    let frame = PointFrame::build(field, x, order)?;
    let b = riemann(&frame)?;
    let cb = if frame.dim() >= 3 {
        Some(conformal_bundle(&b, &frame)?)
    } else {
        None
    };
    Ok((frame, b, cb))
}

fn cmd_invariants(a: &InvariantsArgs, command: Vec<String>) -> Result<Report> {
    let weights: BTreeSet<u32> = a.weights.iter().copied().collect();
    if let Some(w) = weights.iter().find(|&&w| w % 2 != 0 || w > 6) {
        return Err(Error::WeightOutOfRange(format!("--weights accepts 0, 2, 4, 6; got {w}")));
    }
    let r = resolve(&a.metric)?;
    let mut report = base_report(command, &r, a.metric.order);
    for (pi, x) in r.points.iter().enumerate() {
        let (frame, b, cb) = bundles(&r.field, x, a.metric.order)?;
        let ricci_flat = b.is_ricci_flat();
        for name in InvariantName::ALL {
            if weights.contains(&name.weight()) {
                let v = eval_invariant(name, &b, &frame)?;
                report.quantities.push(quantity(pi, name.symbol(), name.weight(), v, "riemannian_invariant"));
            }
        }
        for &w in &weights {
            let h = heat_invariant(w / 2, &b, &frame, ricci_flat)?;
            let mut q = quantity(pi, &format!("a_{w}"), w, h.value, "riemannian_heat");
            q.partial = h.partial;
            q.expression = Some(heat_expression(w / 2)?.to_string());
            report.quantities.push(q);
        }
        let Some(cb) = cb else { continue };
        for p in [
            ConformalPrimitive::WeylSq,
            ConformalPrimitive::CubicW1,
            ConformalPrimitive::CubicW2,
            ConformalPrimitive::Phi,
        ] {
            if weights.contains(&p.weight()) {
                report.quantities.push(quantity(pi, p.symbol(), p.weight(), cb.primitive(p)?, "conformal_scalar"));
            }
        }
        for &w in &weights {
            let e = a_tilde(w / 2)?;
            let mut q = quantity(pi, &format!("a~_{w}"), w, eval_conformal_expr(&e, &cb)?, "fg_rule");
            q.expression = Some(e.to_string());
            report.quantities.push(q);
        }
    }
    Ok(report)
}

fn cmd_gamma(a: &GammaArgs, command: Vec<String>) -> Result<Report> {
    let k: HalfInt = a.k.parse()?;
    let r = resolve(&a.metric)?;
    let mut report = base_report(command, &r, a.metric.order);
    let mut agreement = Vec::new();
    for (pi, x) in r.points.iter().enumerate() {
        let (frame, b, cb) = bundles(&r.field, x, a.metric.order)?;
        let g = gamma_gjms(k, cb.as_ref(), &frame)?;
        let w = (r.field.dim() as u32) - k.twice();
        let mut q = quantity(pi, &format!("gamma_P{k}"), w, g.value, "conformal_main_theorem");
        q.expression = Some(g.expression.to_string());
        report.quantities.push(q);
        if b.is_ricci_flat() {
            let h = gamma_power_laplacian(k, &b, &frame)?;
            let mut q = quantity(pi, &format!("gamma_Lap^{k}"), w, h.value, "riemannian_heat");
            q.partial = h.partial;
            q.expression = Some(h.expression.to_string());
            report.quantities.push(q);
            let diff = (g.value - h.value).abs();
            agreement.push(Check {
                name: format!("point {pi}: both formula paths agree"),
                passed: diff <= 1e-7 * g.value.abs().max(h.value.abs()) + 1e-15,
                detail: format!("|difference| = {diff:e}"),
            });
        }
    }
    if !agreement.is_empty() {
        report.passed = Some(agreement.iter().all(|c| c.passed));
        report.suites.push(SuiteReport {
            suite: "formula-agreement".into(),
            checks: agreement,
        });
    }
    Ok(report)
}

fn cmd_verify(a: &VerifyArgs, command: Vec<String>) -> Result<Report> {
    let names: Vec<&str> = if a.suite == "all" {
        verify::SUITES.to_vec()
    } else {
        vec![a.suite.as_str()]
    };
    let suites = verify::run_suites(&names)?;
    let mut report = Report::new(command);
    report.passed = Some(suites.iter().all(|s| s.passed()));
    report.suites = suites;
    Ok(report)
}
