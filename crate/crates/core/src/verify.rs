//! Invariant suite over the catalog, run by `riesz-lab verify`.
//!
//! Each row checks one documented property at desk-scale sizes and reports a pass or fail
//! together with the measured quantity. Rows listed as known deviations fail for reasons that
//! are understood (finite-window bias of an estimator) and do not change the suite verdict.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::abscissa::{absolute_abscissa, bohr_cahen_pointwise, bohr_cahen_uniform, default_window, order_at};
use crate::catalog::{catalog_entry, catalog_list, cesaro_eval, eta_oracle, zeta_oracle, CatalogEntry};
use crate::error::Result;
use crate::frequency::{check_bc, check_lc, estimate_l, Frequency, IndexRange, L_ESTIMATE_CAP};
use crate::grid::{linspace, logspace};
use crate::series::{
    riesz_limit_with, riesz_mean, summatory, translate, DirichletSeries, LimitEstimator, RieszSpec,
};
use crate::spaces::{far_left_profile, far_right_decay, log_convexity_check, maximal_ratio, norm_inf_ell, EvalGrid, NormSpec};
use crate::special::{beta_fn, gamma_fn};
use crate::transforms::{
    abel_identity_check, heute_identity_check, laplace_limit, order_raise, perron_summatory, QuadratureConfig,
};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteRow {
    pub name: String,
    pub passed: bool,
    /// Failure explained in the project notes; does not fail the suite.
    pub known_deviation: bool,
    pub detail: String,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub version: String,
    pub rows: Vec<SuiteRow>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed || r.known_deviation)
    }

    /// Fixed-width text table, one row per check.
    pub fn table(&self) -> String {
        let width = self.rows.iter().map(|r| r.name.len()).max().unwrap_or(4).max(5);
        let mut out = format!("{:<width$}  {:<6}  {:>7}  detail\n", "check", "status", "seconds");
        for r in &self.rows {
            let status = match (r.passed, r.known_deviation) {
                (true, _) => "PASS",
                (false, true) => "KNOWN",
                (false, false) => "FAIL",
            };
            out.push_str(&format!("{:<width$}  {:<6}  {:>7.2}  {}\n", r.name, status, r.seconds, r.detail));
        }
        out
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Outcome of one check: failed parts (empty on success), known-deviation parts, summary.
struct Outcome {
    failed: Vec<String>,
    detail: String,
}

impl Outcome {
    fn new(ok: bool, detail: String) -> Self {
        Self { failed: if ok { Vec::new() } else { vec!["main".into()] }, detail }
    }
}

type Check = fn() -> Result<Outcome>;

pub fn run_suite() -> SuiteReport {
    // the last field names failing parts that are documented deviations
    let checks: &[(&str, Check, &[&str])] = &[
        ("frequency: spacing conditions", spacing_conditions, &[]),
        ("frequency: L estimates", l_estimates, &[]),
        ("catalog: oracle reference values", oracle_values, &[]),
        ("catalog: eta and zeta agree", eta_zeta_identity, &[]),
        ("catalog: oracles match Riesz limits", oracles_vs_limits, &[]),
        ("catalog: Cesaro means match eta", cesaro_matches, &[]),
        ("series: translation identity", translation_identity, &[]),
        ("series: order monotonicity", order_monotonicity, &[]),
        ("series: first and second kind limits", kind_consistency, &["sqrtlog-cubic"]),
        ("series: sup bound across orders", sup_bound, &[]),
        ("series: Abel summation identity", abel_identity, &[]),
        ("transforms: gamma and beta", gamma_beta, &[]),
        ("transforms: order raising", order_raising, &[]),
        ("transforms: Perron round trip", perron_round_trip, &[]),
        ("transforms: Laplace forward identity", laplace_forward_identity, &[]),
        ("transforms: Laplace order identity", laplace_order_identity, &[]),
        ("transforms: exponential growth bound", growth_bound, &[]),
        ("abscissa: Bohr-Cahen values and ordering", abscissa_values, &[]),
        ("abscissa: monotone in the order", abscissa_monotone, &[]),
        ("abscissa: first and second kind", abscissa_kinds, &["zeta"]),
        ("abscissa: eta order profile", eta_orders, &[]),
        ("spaces: boundary profiles", boundary_profiles, &[]),
        ("spaces: maximal ratio", maximal_ratios, &[]),
        ("spaces: power-case collapse", power_collapse, &[]),
    ];
    let rows = checks
        .iter()
        .map(|&(name, check, known_parts)| {
            let start = Instant::now();
            let (failed, detail) = match check() {
                Ok(o) => (o.failed, o.detail),
                Err(e) => (vec!["error".into()], format!("error: {e}")),
            };
            let known = !failed.is_empty() && failed.iter().all(|f| known_parts.contains(&f.as_str()));
            SuiteRow {
                name: name.to_string(),
                passed: failed.is_empty(),
                known_deviation: known,
                detail,
                seconds: start.elapsed().as_secs_f64(),
            }
        })
        .collect();
    SuiteReport { version: env!("CARGO_PKG_VERSION").to_string(), rows }
}

fn entry(name: &str) -> Result<CatalogEntry> {
    catalog_entry(name)
}

fn random_finite(rng: &mut StdRng, max_terms: usize, lambda_max: f64) -> Result<(DirichletSeries, Vec<(f64, Complex64)>)> {
    let n = rng.gen_range(1..=max_terms);
    let mut ls: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..lambda_max)).collect();
    ls.sort_by(f64::total_cmp);
    ls.dedup_by(|a, b| (*a - *b).abs() < 1e-3);
    let terms: Vec<(f64, Complex64)> =
        ls.into_iter().map(|l| (l, c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))).collect();
    Ok((DirichletSeries::finite(&terms, "random")?, terms))
}

/// A point inside the region where the series converges and the oracle is valid.
fn inner_abscissa(e: &CatalogEntry) -> f64 {
    e.sigma_c.max(e.oracle_min_re).max(0.0)
}

fn spacing_conditions() -> Result<Outcome> {
    let range = IndexRange::new(2, 10_000);
    let mut ok = true;
    let mut notes = Vec::new();
    for freq in [Frequency::power(), Frequency::ordinary(), Frequency::sqrt_log()] {
        let holds: Vec<bool> = [0.5, 1.0, 2.0].iter().map(|&b| check_bc(&freq, b, range).map(|r| r.holds)).collect::<Result<_>>()?;
        // once (BC) holds it keeps holding for larger β
        let monotone = holds.windows(2).all(|w| !w[0] || w[1]);
        let lc = check_lc(&freq, 1.0, range)?.holds;
        let implied = !holds.iter().any(|h| *h) || lc;
        ok &= monotone && implied;
        notes.push(format!("{}: BC {:?}, LC {lc}", freq.label(), holds));
    }
    Ok(Outcome::new(ok, notes.join("; ")))
}

fn l_estimates() -> Result<Outcome> {
    let p = estimate_l(&Frequency::power(), 10_000, L_ESTIMATE_CAP)?;
    let o = estimate_l(&Frequency::ordinary(), 10_000, L_ESTIMATE_CAP)?;
    Ok(Outcome::new(p.abs() < 0.01 && (o - 1.0).abs() < 0.01, format!("L((n)) = {p:.4}, L((log n)) = {o:.4}")))
}

fn oracle_values() -> Result<Outcome> {
    let checks = [
        (eta_oracle(c(1.0, 0.0))?, 2f64.ln()),
        (eta_oracle(c(0.0, 0.0))?, 0.5),
        (eta_oracle(c(2.0, 0.0))?, PI * PI / 12.0),
        (zeta_oracle(c(2.0, 0.0))?, PI * PI / 6.0),
        (zeta_oracle(c(4.0, 0.0))?, PI.powi(4) / 90.0),
        (entry("geometric")?.oracle(c(1.0, 0.0))?, 1.0 / (1f64.exp() - 1.0)),
    ];
    let worst = checks.iter().map(|(v, want)| (v - want).norm()).fold(0.0, f64::max);
    Ok(Outcome::new(worst < 1e-8, format!("max error {worst:.1e}")))
}

fn eta_zeta_identity() -> Result<Outcome> {
    let mut worst = 0.0f64;
    for s in [c(1.2, 0.0), c(1.5, 3.0), c(2.5, -7.0), c(3.7, 20.0), c(5.0, 1.0)] {
        let factor = 1.0 - (c(2f64.ln(), 0.0) * (1.0 - s)).exp();
        worst = worst.max((eta_oracle(s)? - factor * zeta_oracle(s)?).norm());
    }
    Ok(Outcome::new(worst < 1e-6, format!("max difference {worst:.1e}")))
}

/// Sample points inside the convergence region of an entry.
fn sample_points(e: &CatalogEntry) -> [Complex64; 5] {
    let s0 = inner_abscissa(e);
    [c(s0 + 1.0, 0.0), c(s0 + 1.5, 0.0), c(s0 + 1.0, 2.0), c(s0 + 1.5, -3.0), c(s0 + 2.5, 5.0)]
}

fn schedule(e: &CatalogEntry) -> Vec<f64> {
    let x_max = crate::abscissa::default_x_max(&e.series);
    linspace(x_max / 4.0, x_max, 32)
}

fn oracles_vs_limits() -> Result<Outcome> {
    // first-kind means carry an f'(s)/x term; the 1/x extrapolation removes it
    let spec = RieszSpec::first(1.0)?;
    let mut worst = 0.0f64;
    let mut worst_name = String::new();
    for e in catalog_list().iter().filter(|e| e.has_oracle()) {
        let xs = schedule(e);
        for s in sample_points(e) {
            let r = riesz_limit_with(&e.series, spec, s, &xs, 1e-3, LimitEstimator::InverseX)?;
            let d = (r.limit_estimate - e.oracle(s)?).norm();
            if d > worst {
                worst = d;
                worst_name = e.name.clone();
            }
        }
    }
    Ok(Outcome::new(worst < 1e-3, format!("max deviation {worst:.1e} ({worst_name})")))
}

fn cesaro_matches() -> Result<Outcome> {
    let eta = entry("eta")?;
    let mut worst = 0.0f64;
    for s in [c(0.5, 0.0), c(1.0, 0.0), c(0.3, 3.0)] {
        worst = worst.max((cesaro_eval(&eta.series, s, 10_000)? - eta_oracle(s)?).norm());
    }
    Ok(Outcome::new(worst < 1e-2, format!("max deviation {worst:.1e} at N = 10^4")))
}

fn translation_identity() -> Result<Outcome> {
    let mut rng = StdRng::seed_from_u64(7);
    let mut worst = 0.0f64;
    let mut series: Vec<DirichletSeries> = catalog_list().into_iter().map(|e| e.series).collect();
    for _ in 0..10 {
        series.push(random_finite(&mut rng, 8, 5.0)?.0);
    }
    for d in &series {
        let w = c(rng.gen_range(-0.5..0.5), rng.gen_range(-2.0..2.0));
        let s = c(rng.gen_range(1.5..2.5), rng.gen_range(-2.0..2.0));
        for spec in [RieszSpec::first(1.0)?, RieszSpec::second(0.5)?] {
            let x = 3.0;
            let a = riesz_mean(&translate(d, w), spec, s, x)?;
            let b = riesz_mean(d, spec, s + w, x)?;
            worst = worst.max((a - b).norm() / b.norm().max(1e-300));
        }
    }
    Ok(Outcome::new(worst < 1e-12, format!("max relative difference {worst:.1e}")))
}

fn order_monotonicity() -> Result<Outcome> {
    let cases = [("eta", c(0.5, 0.0)), ("geometric", c(0.5, 1.0)), ("zeta-translate-2", c(-0.5, 0.0)), ("two-term", c(0.0, 0.0))];
    let mut ok = true;
    let mut notes = Vec::new();
    for (name, s) in cases {
        let e = entry(name)?;
        let xs = schedule(&e);
        let base = riesz_limit_with(&e.series, RieszSpec::second(0.0)?, s, &xs, 1e-2, LimitEstimator::LastValue)?;
        let tau = base.tail_delta.max(1e-12);
        for l in [1.0, 2.0] {
            let higher = riesz_limit_with(&e.series, RieszSpec::second(l)?, s, &xs, 1e-2, LimitEstimator::LastValue)?;
            let d = (higher.limit_estimate - base.limit_estimate).norm();
            ok &= !base.converged || d <= 3.0 * tau;
            if l == 2.0 {
                notes.push(format!("{name} {d:.1e} vs 3 tau {:.1e}", 3.0 * tau));
            }
        }
    }
    Ok(Outcome::new(ok, notes.join(", ")))
}

fn kind_consistency() -> Result<Outcome> {
    let tolerance = 1e-3;
    let mut worst = 0.0f64;
    let mut failed = Vec::new();
    let mut notes = Vec::new();
    for e in catalog_list().iter().filter(|e| e.has_oracle()) {
        let xs = schedule(e);
        let s = sample_points(e)[2];
        let first = riesz_limit_with(&e.series, RieszSpec::first(1.0)?, s, &xs, tolerance, LimitEstimator::InverseX)?;
        let second = riesz_limit_with(&e.series, RieszSpec::second(1.0)?, s, &xs, tolerance, LimitEstimator::LastValue)?;
        let gap = (first.limit_estimate - second.limit_estimate).norm();
        if gap > 10.0 * tolerance {
            failed.push(e.name.clone());
            notes.push(format!("{} {gap:.1e}", e.name));
        }
        worst = worst.max(gap);
    }
    let detail = if notes.is_empty() { format!("max gap {worst:.1e}") } else { format!("gap above {:.0e}: {}", 10.0 * tolerance, notes.join(", ")) };
    Ok(Outcome { failed, detail })
}

fn sup_bound() -> Result<Outcome> {
    let mut rng = StdRng::seed_from_u64(3);
    let mut worst = f64::NEG_INFINITY;
    let ys = linspace(1e-3, 8.0, 2001);
    let step = ys[1] - ys[0];
    for _ in 0..20 {
        let (series, terms) = random_finite(&mut rng, 10, 6.0)?;
        let s = c(rng.gen_range(-1.0..1.0), rng.gen_range(-5.0..5.0));
        let p = rng.gen_range(0.0..1.5);
        let q = p + rng.gen_range(0.1..2.0);
        // |d/dy R^p_y| ≤ p Σ |aₙe^{−λₙs}| λₙ / y²
        let mass: f64 = terms.iter().map(|&(l, a)| (a * (-l * s).exp()).norm() * l).sum();
        let mut running = 0.0f64;
        for &y in &ys {
            running = running.max(riesz_mean(&series, RieszSpec::first(p)?, s, y)?.norm());
            let slack = p * mass / (y * y) * step;
            worst = worst.max(riesz_mean(&series, RieszSpec::first(q)?, s, y)?.norm() - running - slack);
        }
    }
    Ok(Outcome::new(worst <= 0.0, format!("max excess {worst:.1e}")))
}

fn abel_identity() -> Result<Outcome> {
    let mut rng = StdRng::seed_from_u64(5);
    let cfg = QuadratureConfig { tolerance: 1e-8, ..Default::default() };
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let (series, terms) = random_finite(&mut rng, 8, 5.0)?;
        let s = c(rng.gen_range(-1.0..1.0), rng.gen_range(-3.0..3.0));
        let w = c(rng.gen_range(-1.0..1.0), rng.gen_range(-3.0..3.0));
        let x = rng.gen_range(0.5..6.0);
        let (lhs, rhs) = abel_identity_check(&series, s, w, x, &cfg)?;
        let scale: f64 = terms.iter().filter(|t| t.0 < x).map(|&(l, a)| (a * (-l * (s + w)).exp()).norm()).sum::<f64>().max(1e-300);
        worst = worst.max((lhs - rhs).norm() / scale);
    }
    Ok(Outcome::new(worst < 1e-6, format!("max relative difference {worst:.1e}")))
}

fn gamma_beta() -> Result<Outcome> {
    let mut rng = StdRng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let z = c(rng.gen_range(1e-6..30.0), rng.gen_range(-20.0..20.0));
        let rhs = z * gamma_fn(z)?;
        worst = worst.max((gamma_fn(z + 1.0)? - rhs).norm() / rhs.norm());
    }
    // B(1/2, 1/2) = π, B(1, q) = 1/q
    let b1 = (beta_fn(c(0.5, 0.0), c(0.5, 0.0))? - PI).norm();
    let b2 = (beta_fn(c(1.0, 0.0), c(3.5, 0.0))? - 1.0 / 3.5).norm();
    Ok(Outcome::new(
        worst < 1e-10 && b1 < 1e-8 && b2 < 1e-8,
        format!("functional equation {worst:.1e}, beta {:.1e}", b1.max(b2)),
    ))
}

fn order_raising() -> Result<Outcome> {
    let mut rng = StdRng::seed_from_u64(9);
    let cfg = QuadratureConfig { tolerance: 1e-7, ..Default::default() };
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let (series, terms) = random_finite(&mut rng, 8, 5.0)?;
        let s = c(rng.gen_range(-1.0..1.0), rng.gen_range(-3.0..3.0));
        let x = rng.gen_range(0.5..6.0);
        for k in [0.0, 0.5, 1.0] {
            for mu in [0.5, 1.0, 2.0] {
                let got = order_raise(&series, k, mu, x, s, &cfg)?.value;
                let want = summatory(&series, k + mu, s, x)?;
                let scale: f64 = terms
                    .iter()
                    .filter(|t| t.0 < x)
                    .map(|&(l, a)| (a * (-l * s).exp()).norm() * (x - l).powf(k + mu))
                    .sum();
                worst = worst.max((got - want).norm() / scale.max(1e-300));
            }
        }
    }
    Ok(Outcome::new(worst < 1e-5, format!("max relative deviation {worst:.1e}")))
}

fn perron_round_trip() -> Result<Outcome> {
    let mut ok = true;
    let mut worst = 0.0f64;
    for e in catalog_list().iter().filter(|e| e.has_oracle() && e.oracle_min_re < 0.0 || e.name == "geometric") {
        let cfg = QuadratureConfig { tolerance: 1e-3, growth_exponent: if e.name == "eta" { 0.5 } else { 0.0 }, ..Default::default() };
        for x in [1.5, 2.3] {
            let got = perron_summatory(|s| e.oracle(s), 2.0, x, &cfg)?;
            let want = summatory(&e.series, 2.0, c(0.0, 0.0), x)?;
            let d = (got.value - want).norm();
            ok &= d <= 1e-3f64.max(10.0 * got.tail_bound);
            worst = worst.max(d);
        }
    }
    Ok(Outcome::new(ok, format!("max deviation {worst:.1e}")))
}

fn laplace_forward_identity() -> Result<Outcome> {
    let mut worst = 0.0f64;
    for name in ["geometric", "two-term", "single-0", "single-1"] {
        let e = entry(name)?;
        let growth = if name == "geometric" { 1.0 } else { 0.0 };
        let cfg = QuadratureConfig { tolerance: 1e-8, growth_exponent: growth, ..Default::default() };
        for s in [c(1.0, 0.5), c(2.0, -3.0)] {
            let lap = laplace_limit(&e.series, 1.0, s, &cfg)?.value;
            worst = worst.max((lap - e.oracle(s)?).norm());
        }
    }
    Ok(Outcome::new(worst < 1e-6, format!("max difference {worst:.1e}")))
}

fn laplace_order_identity() -> Result<Outcome> {
    let mut worst = 0.0f64;
    for e in catalog_list() {
        let s = if e.name == "zeta" { c(1.5, 1.0) } else { c(0.5, 1.0) };
        let series = if e.name == "sqrtlog-cubic" {
            // ~e^100 frequencies lie below the truncation point; use a finite section
            let terms: Vec<(f64, Complex64)> = e.series.terms().take(10_000).map(|t| (t.lambda, t.coeff)).collect();
            DirichletSeries::finite(&terms, "sqrtlog section")?
        } else {
            e.series.clone()
        };
        let orders: &[(f64, f64)] = if e.series.len().is_some() { &[(0.0, 1.0), (0.5, 2.0)] } else { &[(0.0, 1.0), (1.0, 2.0)] };
        for &(p, q) in orders {
            let cfg = QuadratureConfig { tolerance: 1e-9, ..Default::default() };
            let (a, b) = heute_identity_check(&series, p, q, c(3.0, 0.5), s, &cfg)?;
            worst = worst.max((a.value - b.value).norm() / a.value.norm().max(b.value.norm()));
        }
    }
    Ok(Outcome::new(worst < 1e-4, format!("max relative difference {worst:.1e}")))
}

fn growth_bound() -> Result<Outcome> {
    let mut ok = true;
    let mut notes = Vec::new();
    for (name, sigma0) in [("eta", 0.5), ("geometric", 0.5), ("zeta", 1.5), ("zeta-translate-2", 0.5)] {
        let e = entry(name)?;
        let xs = default_window(&e.series, 200);
        let spec = RieszSpec::first(1.0)?;
        let vals: Vec<f64> = xs
            .iter()
            .map(|&x| riesz_mean(&e.series, spec, c(0.0, 0.0), x).map(|v| v.norm().ln() - sigma0 * x))
            .collect::<Result<_>>()?;
        let half = vals.len() / 2;
        let head = vals[..half].iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let tail = vals[half..].iter().copied().fold(f64::NEG_INFINITY, f64::max);
        ok &= tail <= head + 1.0;
        notes.push(format!("{name} {:.2}", tail - head));
    }
    Ok(Outcome::new(ok, format!("tail minus head: {}", notes.join(", "))))
}

fn abscissa_values() -> Result<Outcome> {
    let k0 = RieszSpec::first(0.0)?;
    let mut notes = Vec::new();
    let mut ok = true;
    for (name, want) in [("zeta", 1.0), ("eta", 0.0), ("geometric", 0.0)] {
        let e = entry(name)?;
        let v = bohr_cahen_pointwise(&e.series, k0, &default_window(&e.series, 400))?.value;
        ok &= (v - want).abs() <= 0.05;
        notes.push(format!("{name} {v:.3}"));
    }
    let t_grid = linspace(-20.0, 20.0, 41);
    for e in catalog_list() {
        let xs = default_window(&e.series, 400);
        let sc = bohr_cahen_pointwise(&e.series, k0, &xs)?.value;
        let su = bohr_cahen_uniform(&e.series, k0, &xs, &t_grid)?.value;
        let sa = absolute_abscissa(&e.series, &xs)?.value;
        ok &= su >= sc && sa + 0.05 >= su;
    }
    Ok(Outcome::new(ok, notes.join(", ")))
}

fn abscissa_monotone() -> Result<Outcome> {
    let mut ok = true;
    for e in catalog_list() {
        let xs = default_window(&e.series, 200);
        let a = bohr_cahen_pointwise(&e.series, RieszSpec::first(0.0)?, &xs)?.value;
        let b = bohr_cahen_pointwise(&e.series, RieszSpec::first(1.0)?, &xs)?.value;
        ok &= b <= a + 0.05;
    }
    Ok(Outcome::new(ok, "order-1 estimates within 0.05 of order 0 or below".into()))
}

fn abscissa_kinds() -> Result<Outcome> {
    let mut failed = Vec::new();
    let mut notes = Vec::new();
    for e in catalog_list() {
        let xs = default_window(&e.series, 200);
        let first = bohr_cahen_pointwise(&e.series, RieszSpec::first(1.0)?, &xs)?.value;
        let second = bohr_cahen_pointwise(&e.series, RieszSpec::second(1.0)?, &xs)?.value;
        let gap = if first == second { 0.0 } else { (first - second).abs() };
        if !(gap <= 0.05) {
            failed.push(e.name.clone());
            notes.push(format!("{} {first:.3} vs {second:.3}", e.name));
        }
    }
    let detail = if notes.is_empty() { "all within 0.05".into() } else { format!("gap above 0.05: {}", notes.join(", ")) };
    Ok(Outcome { failed, detail })
}

fn eta_orders() -> Result<Outcome> {
    let ts = logspace(1e2, 1e4, 100);
    let left = order_at(eta_oracle, -1.0, &ts)?.exponent;
    let right = order_at(eta_oracle, 2.0, &ts)?.exponent;
    Ok(Outcome::new(
        (left - 1.5).abs() <= 0.15 && right.abs() <= 0.1,
        format!("exponent {left:.3} at sigma = -1, {right:.3} at sigma = 2"),
    ))
}

fn boundary_profiles() -> Result<Outcome> {
    let ts = linspace(-30.0, 30.0, 241);
    let mut sigmas = logspace(1e-3, 5.0, 10);
    sigmas.reverse();
    let mut ok = true;
    let mut rise = 0.0f64;
    for (name, ell) in [("geometric", 1.0), ("eta", 1.0), ("zeta-translate-2", 0.0), ("two-term", 0.0)] {
        let e = entry(name)?;
        let p = far_left_profile(|s| e.oracle(s), ell, &sigmas, &ts)?;
        rise = rise.max(p.windows(2).map(|w| w[0].value - w[1].value).fold(0.0, f64::max));
    }
    ok &= rise <= 1e-9;
    let mut right = 0.0f64;
    for e in catalog_list().iter().filter(|e| matches!(e.series.first_lambda(), Some(l) if l >= 1.0)) {
        let p = far_right_decay(&e.series, 1.0, &linspace(1.0, 20.0, 5), &ts, RieszSpec::first(2.0)?, 50.0)?;
        right = right.max(p[p.len() - 1].value);
    }
    ok &= right < 1e-3;
    let geo = entry("geometric")?;
    let convex = log_convexity_check(|s| geo.oracle(s), 0.5, 3.0, 11, &ts)?;
    ok &= convex <= 1e-3;
    Ok(Outcome::new(ok, format!("far-left rise {rise:.1e}, far-right at 20 {right:.1e}, convexity excess {convex:.1e}")))
}

fn maximal_ratios() -> Result<Outcome> {
    let grid = EvalGrid::standard((1e-3, 20.0), 10, 30.0, 121)?;
    let xs = logspace(1.0, 1e4, 30);
    let mut worst_single = 0.0f64;
    let mut worst_stab = 0.0f64;
    for name in ["single-0", "single-1", "two-term"] {
        let e = entry(name)?;
        let norm = norm_inf_ell(|s| e.oracle(s), &NormSpec::new(0.0, grid.clone())?)?.value;
        let r = maximal_ratio(&e.series, 0.0, RieszSpec::first(1.0)?, &xs, &grid, Some(norm))?;
        if name.starts_with("single") {
            worst_single = worst_single.max(r.sup_ratio);
        }
        worst_stab = worst_stab.max(r.stabilization(1e3));
    }
    Ok(Outcome::new(
        worst_single <= 1.0 + 1e-12 && worst_stab < 0.01,
        format!("single-term sup ratio {worst_single:.3}, stabilization {worst_stab:.1e}"),
    ))
}

fn power_collapse() -> Result<Outcome> {
    let geo = entry("geometric")?;
    let grid = EvalGrid::standard((1e-2, 10.0), 12, 30.0, 121)?;
    let weighted = norm_inf_ell(|s| geo.oracle(s), &NormSpec::new(1.0, grid.clone())?)?;
    let plain = norm_inf_ell(|s| geo.oracle(s), &NormSpec::new(0.0, grid.clone())?)?;
    let same = (weighted.argmax - plain.argmax).norm() < 1e-12;
    Ok(Outcome::new(
        plain.value.is_finite() && weighted.value.is_finite() && same,
        format!("norms {:.3} (l=1) and {:.3} (l=0), argmax {}", weighted.value, plain.value, plain.argmax),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_marks_known_rows() {
        let report = SuiteReport {
            version: "0".into(),
            rows: vec![
                SuiteRow { name: "a".into(), passed: true, known_deviation: false, detail: String::new(), seconds: 0.0 },
                SuiteRow { name: "b".into(), passed: false, known_deviation: true, detail: String::new(), seconds: 0.0 },
            ],
        };
        assert!(report.all_passed());
        let t = report.table();
        assert!(t.contains("PASS") && t.contains("KNOWN"));
    }
}
