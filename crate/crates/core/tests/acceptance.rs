//! Acceptance criteria 1-10, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the lines always reach stdout. The
//! process fails when the set of failing criteria differs from
//! `KNOWN_UNATTAINABLE`.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::time::{Duration, Instant};

use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use conflab::ambient::{
    ambient_lambda, ambient_laplacian_power, build_ambient, extension_independence_check, t_independence_check,
};
use conflab::catalog::{self, CatalogEntry};
use conflab::conformal::{conformal_bundle, ConformalBundle};
use conflab::curvature::{riemann, CurvatureBundle};
use conflab::dsl::{parse_expr, Expr};
use conflab::fg_rule::{a_tilde, eval_conformal_expr, fg_transform, ConformalPrimitive as CP, Primitive};
use conflab::gjms::{covariance_residual, einstein_gjms_apply, einstein_lambda, yamabe_apply, Operator};
use conflab::green::{conformal_flatness_probe, gamma_gjms, gamma_power_laplacian, FlatnessVerdict, HalfInt, FLATNESS_TOLERANCE};
use conflab::invariants::{eval_invariant, heat_expression, heat_invariant, weight_scaling_check, InvariantName as IN};
use conflab::spectral::{geometric_side, zeta_residue_at_1, SphereSpectrum};
use conflab::tensor::PointFrame;

/// Criterion 2 asks for `a₄(S⁴) = 28/15` and for the non-Ricci part of `a₆`
/// to vanish on symmetric spaces. The four-term formula gives 29/15 on the
/// unit S⁴, and the cubic terms of `a₆` are nonzero on any non-flat space
/// form. Both targets are checked and reported as they are.
const KNOWN_UNATTAINABLE: &[u32] = &[2];

struct Outcome {
    lines: Vec<(bool, String)>,
}

impl Outcome {
    fn new() -> Outcome {
        Outcome { lines: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        self.lines.push((ok, what.into()));
    }

    fn passed(&self) -> bool {
        self.lines.iter().all(|(ok, _)| *ok)
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

/// Relative 1e-7 with an absolute floor for targets that are exactly zero.
fn close7(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-7 * a.abs().max(b.abs()) + 1e-14
}

fn e(s: &str) -> Expr {
    parse_expr(s).unwrap()
}

fn frame_bundles(entry: &CatalogEntry, x: &[f64], order: usize) -> (PointFrame, CurvatureBundle, ConformalBundle) {
    let frame = PointFrame::build(&entry.field, x, order).unwrap();
    let b = riemann(&frame).unwrap();
    let cb = conformal_bundle(&b, &frame).unwrap();
    (frame, b, cb)
}

fn timed(out: &mut Outcome, limit: Duration, start: Instant) {
    let t = start.elapsed();
    out.check(t < limit, format!("runtime {:.2} s < {} s", t.as_secs_f64(), limit.as_secs()));
}

fn c1_curvature() -> Outcome {
    let mut out = Outcome::new();
    let start = Instant::now();
    for n in 3..=6usize {
        let entry = catalog::round_sphere(n).unwrap();
        let nf = n as f64;
        let (mut wk, mut wric, mut wr) = (0.0f64, 0.0f64, 0.0f64);
        for x in &entry.safe_points {
            let frame = PointFrame::build(&entry.field, x, 2).unwrap();
            let b = riemann(&frame).unwrap();
            wk = wk.max(rel(b.kappa, nf * (nf - 1.0)));
            let scale = (nf - 1.0) * (0..n).map(|i| frame.g(i, i).abs()).fold(0.0, f64::max);
            for i in 0..n {
                for j in 0..n {
                    wric = wric.max((b.ricci.get(&[i, j]) - (nf - 1.0) * frame.g(i, j)).abs() / scale);
                }
            }
            wr = wr.max(rel(eval_invariant(IN::RiemSq, &b, &frame).unwrap(), 2.0 * nf * (nf - 1.0)));
        }
        out.check(wk < 1e-8, format!("S^{n} kappa = n(n-1), worst rel {wk:.1e}"));
        out.check(wric < 1e-8, format!("S^{n} Ric = (n-1)g, worst rel {wric:.1e}"));
        out.check(wr < 1e-8, format!("S^{n} |R|^2 = 2n(n-1), worst rel {wr:.1e}"));
    }
    timed(&mut out, Duration::from_secs(10), start);
    out
}

/// Space form of sectional curvature `k` in an orthonormal frame:
/// `R_ijkl = k (δ_il δ_jk − δ_ik δ_jl)`.
fn space_form_riemann(k: f64) -> impl Fn(usize, usize, usize, usize) -> f64 {
    move |i, j, l, m| {
        let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
        k * (d(i, m) * d(j, l) - d(i, l) * d(j, m))
    }
}

/// `(|R|², |Ric|², κ, C₁, C₂)` of a space form by brute-force index sums.
fn space_form_oracle(n: usize, k: f64) -> [f64; 5] {
    let r = space_form_riemann(k);
    let (mut rsq, mut c1, mut c2) = (0.0, 0.0, 0.0);
    let mut ric = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            for a in 0..n {
                ric[i][j] += r(a, i, j, a);
            }
            for l in 0..n {
                for m in 0..n {
                    let rijlm = r(i, j, l, m);
                    rsq += rijlm * rijlm;
                    for p in 0..n {
                        for q in 0..n {
                            c1 += rijlm * r(i, j, p, q) * r(p, q, l, m);
                            c2 += rijlm * r(i, p, l, q) * r(p, j, q, m);
                        }
                    }
                }
            }
        }
    }
    let kappa: f64 = (0..n).map(|i| ric[i][i]).sum();
    let ricsq: f64 = ric.iter().flatten().map(|v| v * v).sum();
    [rsq, ricsq, kappa, c1, c2]
}

fn c2_heat() -> Outcome {
    let mut out = Outcome::new();
    let forms = [(3usize, 1.0), (4, 1.0), (5, 1.0), (6, 1.0), (4, -1.0)];
    for (n, k) in forms {
        let entry = if k > 0.0 {
            catalog::round_sphere(n).unwrap()
        } else {
            catalog::hyperbolic_ball(n).unwrap()
        };
        let [rsq, ricsq, kappa, _, _] = space_form_oracle(n, k);
        let frame = PointFrame::build(&entry.field, &entry.safe_points[1], 4).unwrap();
        let b = riemann(&frame).unwrap();
        let a2 = heat_invariant(1, &b, &frame, false).unwrap().value;
        let a4 = heat_invariant(2, &b, &frame, false).unwrap().value;
        let want4 = rsq / 180.0 - ricsq / 180.0 + kappa * kappa / 72.0;
        out.check(rel(a2, -kappa / 6.0) < 1e-9, format!("{} n={n}: a2 = -kappa/6 ({a2})", entry.name));
        out.check(rel(a4, want4) < 1e-9, format!("{} n={n}: a4 = four-term value {want4} ({a4})", entry.name));
    }
    let s4 = catalog::round_sphere(4).unwrap();
    let frame = PointFrame::build(&s4.field, &s4.safe_points[2], 4).unwrap();
    let b = riemann(&frame).unwrap();
    let a4 = heat_invariant(2, &b, &frame, false).unwrap().value;
    out.check(
        (a4 - 28.0 / 15.0).abs() < 1e-9,
        format!("a4(S^4) = 28/15 = {:.12}: computed {a4:.12} = 29/15 (24/180 - 36/180 + 144/72)", 28.0 / 15.0),
    );

    let a6 = heat_expression(3).unwrap();
    let d = 9 * 5040;
    let coeff = |p: IN| a6.coefficient(&Primitive::Invariant(p));
    out.check(
        coeff(IN::GradRiemSq) == Rational64::new(81, d)
            && coeff(IN::Cubic1) == Rational64::new(64, d)
            && coeff(IN::Cubic2) == Rational64::new(352, d),
        format!("a6 non-Ricci part = (81|nabla R|^2 + 64 C1 + 352 C2)/(9*7!): {a6}"),
    );
    for (n, k) in [(4usize, 1.0), (4, -1.0), (6, 1.0)] {
        let entry = if k > 0.0 {
            catalog::round_sphere(n).unwrap()
        } else {
            catalog::hyperbolic_ball(n).unwrap()
        };
        let frame = PointFrame::build(&entry.field, &entry.safe_points[1], 4).unwrap();
        let b = riemann(&frame).unwrap();
        let [_, _, _, c1, c2] = space_form_oracle(n, k);
        let lib_c1 = eval_invariant(IN::Cubic1, &b, &frame).unwrap();
        let lib_c2 = eval_invariant(IN::Cubic2, &b, &frame).unwrap();
        let grad = eval_invariant(IN::GradRiemSq, &b, &frame).unwrap();
        let h = heat_invariant(3, &b, &frame, false).unwrap();
        let oracle = (64.0 * c1 + 352.0 * c2) / d as f64;
        out.check(
            rel(lib_c1, c1) < 1e-9 && rel(lib_c2, c2) < 1e-9 && grad.abs() < 1e-9 && rel(h.value, oracle) < 1e-9,
            format!(
                "{} n={n}: C1 = {lib_c1:.6} (oracle {c1}), C2 = {lib_c2:.6} (oracle {c2}), |nabla R|^2 = {grad:.1e}, a6 non-Ricci = {:.9} (oracle {oracle:.9}), partial = {}",
                entry.name, h.value, h.partial
            ),
        );
        out.check(
            h.value.abs() < 1e-9,
            format!("{} n={n}: a6 non-Ricci part vanishes: it is {:.9}", entry.name, h.value),
        );
    }
    out
}

fn random_upsilon(rng: &mut ChaCha8Rng, coords: &[String]) -> Expr {
    let mut c = || rng.gen_range(-0.2..0.2);
    let (a, b, d) = (&coords[0], &coords[1], &coords[2]);
    e(&format!(
        "({})*{a} + ({})*{b}^2 + ({})*{a}*{d} + ({})*sin({b})",
        c(),
        c(),
        c(),
        c()
    ))
}

fn random_u(rng: &mut ChaCha8Rng, coords: &[String]) -> Expr {
    let mut c = || rng.gen_range(-1.0..1.0);
    let (a, b, d) = (&coords[0], &coords[1], &coords[2]);
    e(&format!("1 + ({})*{a} + ({})*{b}*{d} + ({})*{a}^2 + ({})*cos({d})", c(), c(), c(), c()))
}

fn c3_weyl() -> Outcome {
    let mut out = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut flat_entries = Vec::new();
    for n in [4usize, 5] {
        flat_entries.push(catalog::round_sphere(n).unwrap());
        flat_entries.push(catalog::hyperbolic_ball(n).unwrap());
    }
    for n in [4usize, 5, 4, 5, 6] {
        let coords: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
        let ups = random_upsilon(&mut rng, &coords);
        flat_entries.push(catalog::conformally_flat(n, &ups.to_string()).unwrap());
    }
    for entry in &flat_entries {
        let worst = entry
            .safe_points
            .iter()
            .map(|x| frame_bundles(entry, x, 2).2.weyl_sq.abs())
            .fold(0.0, f64::max);
        out.check(worst < 1e-8, format!("{} n={}: max |W|^2 = {worst:.1e}", entry.name, entry.field.dim()));
    }
    for n in [5usize, 6] {
        let entry = catalog::schwarzschild_tangherlini(n, 1.0).unwrap();
        let least = entry
            .safe_points
            .iter()
            .map(|x| frame_bundles(&entry, x, 2).2.weyl_sq)
            .fold(f64::INFINITY, f64::min);
        out.check(least > 1e-3, format!("tangherlini n={n}: min |W|^2 = {least:.4e}"));
    }
    out
}

fn c4_fg_rule() -> Outcome {
    let mut out = Outcome::new();
    let r = Rational64::new;
    let a2 = a_tilde(1).unwrap();
    out.check(a2.is_zero() && fg_transform(&heat_expression(1).unwrap()).unwrap() == a2, format!("a~2 = {a2}"));
    let a4 = a_tilde(2).unwrap();
    out.check(
        a4.terms().count() == 1 && a4.coefficient(CP::WeylSq) == r(1, 180),
        format!("a~4 = {a4}"),
    );
    let a6 = a_tilde(3).unwrap();
    out.check(
        a6.terms().count() == 3
            && a6.coefficient(CP::Phi) == r(81, 45360)
            && a6.coefficient(CP::CubicW1) == r(64, 45360)
            && a6.coefficient(CP::CubicW2) == r(352, 45360),
        format!("a~6 = {a6}"),
    );
    for n in [5usize, 6] {
        let entry = catalog::schwarzschild_tangherlini(n, 1.0).unwrap();
        for (pi, x) in entry.safe_points.iter().enumerate() {
            let (frame, b, cb) = frame_bundles(&entry, x, 4);
            let mut pairs = Vec::new();
            for j in 0..=3 {
                let a = heat_invariant(j, &b, &frame, true).unwrap().value;
                let t = eval_conformal_expr(&a_tilde(j).unwrap(), &cb).unwrap();
                pairs.push((a, t));
            }
            out.check(
                pairs.iter().all(|&(a, t)| close7(a, t)),
                format!("tangherlini n={n} point {pi}: a_2j = a~_2j, j=0..3: {pairs:.6?}"),
            );
        }
    }
    out
}

fn c5_main_theorem() -> Outcome {
    let mut out = Outcome::new();
    let start = Instant::now();
    for (n, ks) in [(6usize, ["3", "2", "1"]), (5, ["5/2", "3/2", "1/2"])] {
        let entry = catalog::schwarzschild_tangherlini(n, 1.0).unwrap();
        for (pi, x) in entry.safe_points.iter().take(3).enumerate() {
            let (frame, b, cb) = frame_bundles(&entry, x, 4);
            for k in ks {
                let k: HalfInt = k.parse().unwrap();
                let gj = gamma_gjms(k, Some(&cb), &frame).unwrap().value;
                let gl = gamma_power_laplacian(k, &b, &frame).unwrap().value;
                out.check(close7(gj, gl), format!("n={n} k={k} point {pi}: {gj:.10e} vs {gl:.10e}"));
            }
        }
    }
    timed(&mut out, Duration::from_secs(30), start);
    out
}

fn c6_constants() -> Outcome {
    let mut out = Outcome::new();
    let four_pi = 4.0 * PI;
    let mut entries = Vec::new();
    for n in [4usize, 6] {
        for name in catalog::NAMES {
            if name == "product_sphere_sphere" && n != 4 {
                continue;
            }
            entries.push(catalog::builtin(name, n, &Default::default()).unwrap());
        }
    }
    for entry in &entries {
        let n = entry.field.dim();
        // Γ(2) = 1, Γ(3) = 2
        let gamma_half_n = if n == 4 { 1.0 } else { 2.0 };
        let top = 2.0 / gamma_half_n * four_pi.powf(-(n as f64) / 2.0);
        let (mut wt, mut ws) = (0.0f64, 0.0f64);
        for x in &entry.safe_points {
            let (frame, _, cb) = frame_bundles(entry, x, 2);
            let g_top = gamma_gjms(HalfInt::integer(n as u32 / 2), Some(&cb), &frame).unwrap().value;
            let g_sub = gamma_gjms(HalfInt::integer(n as u32 / 2 - 1), Some(&cb), &frame).unwrap().value;
            wt = wt.max(rel(g_top, top));
            ws = ws.max(g_sub.abs());
        }
        out.check(wt < 1e-12, format!("{} n={n}: gamma_P(n/2) = 2/Gamma(n/2) (4pi)^(-n/2), worst rel {wt:.1e}", entry.name));
        out.check(ws == 0.0, format!("{} n={n}: gamma_P(n/2-1) = 0, max |value| {ws:e}", entry.name));
    }
    let s2 = catalog::round_sphere(2).unwrap();
    let frame = PointFrame::build(&s2.field, &s2.safe_points[1], 2).unwrap();
    let g = gamma_gjms(HalfInt::integer(1), None, &frame).unwrap().value;
    out.check(rel(g, 2.0 / four_pi) < 1e-14, format!("S^2 Yamabe: {g} vs 2(4pi)^-1 = {}", 2.0 / four_pi));
    let t6 = catalog::schwarzschild_tangherlini(6, 1.0).unwrap();
    for (pi, x) in t6.safe_points.iter().enumerate() {
        let (frame, _, cb) = frame_bundles(&t6, x, 2);
        let g = gamma_gjms(HalfInt::integer(1), Some(&cb), &frame).unwrap().value;
        let want = four_pi.powi(-3) * cb.weyl_sq / 90.0;
        out.check(
            rel(g, want) < 1e-12 && g > 0.0,
            format!("tangherlini n=6 point {pi}: Yamabe gamma {g:.10e} = (4pi)^-3 |W|^2/90"),
        );
    }
    out
}

fn c7_covariance() -> Outcome {
    let mut out = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let bases = [
        catalog::flat(5).unwrap(),
        catalog::round_sphere(4).unwrap(),
        catalog::schwarzschild_tangherlini(5, 1.0).unwrap(),
    ];
    for entry in &bases {
        let coords = entry.field.coords().to_vec();
        let mut worst = [0.0f64; 2];
        for x in entry.safe_points.iter().take(3) {
            for _ in 0..3 {
                let ups = random_upsilon(&mut rng, &coords);
                let u = random_u(&mut rng, &coords);
                for (i, op) in [Operator::Yamabe, Operator::Paneitz].into_iter().enumerate() {
                    let r = covariance_residual(op, &entry.field, &ups, &u, x, 4).unwrap();
                    worst[i] = worst[i].max(r);
                }
            }
        }
        out.check(worst[0] < 1e-6, format!("{} n={}: Yamabe residual {:.1e}", entry.name, entry.field.dim(), worst[0]));
        out.check(worst[1] < 1e-6, format!("{} n={}: Paneitz residual {:.1e}", entry.name, entry.field.dim(), worst[1]));
    }
    for entry in [
        catalog::round_sphere(4).unwrap(),
        catalog::schwarzschild_tangherlini(5, 1.0).unwrap(),
        catalog::product_sphere_sphere().unwrap(),
    ] {
        let mut failed = Vec::new();
        for name in IN::ALL {
            for lambda in [0.5, 2.0, 1.7] {
                let c = weight_scaling_check(name, &entry.field, &entry.safe_points[1], lambda, 4).unwrap();
                if !c.passed {
                    failed.push(format!("{name} at {lambda}"));
                }
            }
        }
        out.check(
            failed.is_empty(),
            format!("{}: weight scaling of all invariants, lambda in {{0.5, 2, 1.7}} {failed:?}", entry.name),
        );
    }
    out
}

fn c8_ambient() -> Outcome {
    let mut out = Outcome::new();
    let u = e("1 + x1*x2 + sin(x1) + x3^2");
    for n in [4usize, 5] {
        let s = catalog::round_sphere(n).unwrap();
        let x = &s.safe_points[1];
        let af = build_ambient(&s.field, ambient_lambda(n as f64 - 1.0, n), x).unwrap();
        let a1 = ambient_laplacian_power(&af, 1, &u, x, 1.0).unwrap();
        let y = yamabe_apply(&s.field, x, &u, 2).unwrap();
        out.check(rel(a1, y) < 1e-6, format!("S^{n} k=1: ambient {a1:.10e}, Yamabe {y:.10e}"));
        let a2 = ambient_laplacian_power(&af, 2, &u, x, 1.0).unwrap();
        let p = einstein_gjms_apply(2, einstein_lambda(n as f64 - 1.0, n), &s.field, x, &u, 4).unwrap();
        out.check(rel(a2, p) < 1e-6, format!("S^{n} k=2: ambient {a2:.10e}, product formula {p:.10e}"));
        let t = t_independence_check(&af, 2, &u, x, 2.5).unwrap();
        out.check(t.passed, format!("S^{n} t-independence: {:.10e} vs {:.10e}", t.at_one, t.at_t));
        let c = extension_independence_check(&af, 2, &u, x, &e("rho*cos(x2) + rho^2*x1")).unwrap();
        out.check(c.passed, format!("S^{n} extension independence: {:.10e} vs {:.10e}", c.base_value, c.perturbed_value));
    }
    let flat = catalog::flat(4).unwrap();
    let x = &flat.safe_points[3];
    let af = build_ambient(&flat.field, 0.0, x).unwrap();
    let w = e("x1^2*x2^2 + x3^3*x4 + exp(x2)");
    for k in [1u32, 2] {
        let a = ambient_laplacian_power(&af, k, &w, x, 1.0).unwrap();
        let d = einstein_gjms_apply(k, 0.0, &flat.field, x, &w, 2 * k as usize).unwrap();
        out.check((a - d).abs() < 1e-7, format!("lambda=0, k={k}: ambient {a:.12e}, Lap^k {d:.12e}"));
    }
    out
}

fn c9_spectral() -> Outcome {
    let mut out = Outcome::new();
    let start = Instant::now();
    for (n, k) in [(2usize, 1u32), (4, 2), (6, 1)] {
        let spectrum = SphereSpectrum::new(n, k, 2000).unwrap();
        let est = zeta_residue_at_1(&spectrum).unwrap();
        let lhs = 2.0 * k as f64 * est.residue;
        let rhs = geometric_side(n, k).unwrap();
        let ok = if rhs.abs() < 1e-12 { lhs.abs() < 1e-5 } else { rel(lhs, rhs) < 1e-4 };
        out.check(ok, format!("S^{n} k={k}: 2k Res = {lhs:.10e}, integral of gamma = {rhs:.10e}"));
        if n == 2 {
            out.check((est.residue - 1.0).abs() < 1e-4, format!("S^2: residue = {:.12} (forced value 1)", est.residue));
        }
    }
    timed(&mut out, Duration::from_secs(20), start);
    out
}

fn c10_flatness_probe() -> Outcome {
    let mut out = Outcome::new();
    let mut entries = Vec::new();
    for n in [5usize, 6] {
        entries.push((catalog::flat(n).unwrap(), FlatnessVerdict::ConformallyFlatConsistent));
        entries.push((catalog::round_sphere(n).unwrap(), FlatnessVerdict::ConformallyFlatConsistent));
        entries.push((catalog::hyperbolic_ball(n).unwrap(), FlatnessVerdict::ConformallyFlatConsistent));
        entries.push((
            catalog::builtin("conformally_flat", n, &Default::default()).unwrap(),
            FlatnessVerdict::ConformallyFlatConsistent,
        ));
        entries.push((catalog::schwarzschild_tangherlini(n, 1.0).unwrap(), FlatnessVerdict::Obstructed));
    }
    for (entry, want) in &entries {
        let p = conformal_flatness_probe(&entry.field, &entry.safe_points, FLATNESS_TOLERANCE).unwrap();
        out.check(
            p.verdict == *want,
            format!("{} n={}: {:?}, max |gamma| {:.2e}", entry.name, entry.field.dim(), p.verdict, p.max_abs_gamma),
        );
    }
    out
}

fn main() {
    let criteria: [(u32, &str, fn() -> Outcome); 10] = [
        (1, "curvature on round spheres", c1_curvature),
        (2, "heat-invariant formulas", c2_heat),
        (3, "Weyl tensor characterization", c3_weyl),
        (4, "FG rule", c4_fg_rule),
        (5, "two formula paths on Tangherlini", c5_main_theorem),
        (6, "closed-form constants", c6_constants),
        (7, "conformal covariance and weights", c7_covariance),
        (8, "ambient construction", c8_ambient),
        (9, "spectral zeta residues", c9_spectral),
        (10, "conformal flatness probe", c10_flatness_probe),
    ];
    let verbose = std::env::args().any(|a| a == "--verbose");
    let mut failed = BTreeSet::new();
    for (id, title, run) in criteria {
        let start = Instant::now();
        let o = run();
        let ok = o.passed();
        let bad: Vec<&String> = o.lines.iter().filter(|(p, _)| !p).map(|(_, s)| s).collect();
        println!(
            "criterion {id:>2}: {}  {title}  ({}/{} checks, {:.2} s)",
            if ok { "PASS" } else { "FAIL" },
            o.lines.len() - bad.len(),
            o.lines.len(),
            start.elapsed().as_secs_f64()
        );
        for s in &bad {
            println!("    failed: {s}");
        }
        if verbose {
            for (_, s) in o.lines.iter().filter(|(p, _)| *p) {
                println!("    ok: {s}");
            }
        }
        if !ok {
            failed.insert(id);
        }
    }
    let known: BTreeSet<u32> = KNOWN_UNATTAINABLE.iter().copied().collect();
    println!("failing criteria {failed:?}, known unattainable {known:?}");
    if failed != known {
        eprintln!("acceptance: failing set differs from the known-unattainable set");
        std::process::exit(1);
    }
}
