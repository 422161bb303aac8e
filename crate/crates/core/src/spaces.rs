//! Grid diagnostics for the spaces `H∞,ℓ` of functions with `sup |f(s)|/(1+|s|)^ℓ < ∞` on
//! the right half-plane.
//!
//! Every sup here is a maximum over finitely many points and hence a lower bound. Norm
//! estimates carry a slack term, half the largest jump of the weighted modulus between
//! neighbouring grid points, which callers add to the right-hand side of grid inequalities.

use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{is_increasing, linspace, logspace};
use crate::series::{mean_along, DirichletSeries, RieszSpec};

/// Points `σ + it` of a rectangular grid in the right half-plane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalGrid {
    sigma_values: Vec<f64>,
    t_values: Vec<f64>,
    resolution: Resolution,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Resolution {
    pub sigma_count: usize,
    pub t_count: usize,
    /// Largest gap between consecutive `t` values.
    pub t_step: f64,
}

impl EvalGrid {
    /// `sigma_values` increasing and positive, `t_values` increasing and symmetric about 0.
    pub fn new(sigma_values: Vec<f64>, t_values: Vec<f64>) -> Result<Self> {
        if sigma_values.is_empty() || !is_increasing(&sigma_values) || !(sigma_values[0] > 0.0) {
            return Err(Error::InvalidArgument("sigma values must be positive and increasing".into()));
        }
        if t_values.is_empty() || !is_increasing(&t_values) {
            return Err(Error::InvalidArgument("t values must be increasing".into()));
        }
        let n = t_values.len();
        let scale = t_values.iter().fold(1.0f64, |m, t| m.max(t.abs()));
        if (0..n).any(|i| (t_values[i] + t_values[n - 1 - i]).abs() > 1e-12 * scale) {
            return Err(Error::InvalidArgument("t values must be symmetric about 0".into()));
        }
        let t_step = t_values.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
        let resolution = Resolution { sigma_count: sigma_values.len(), t_count: n, t_step };
        Ok(Self { sigma_values, t_values, resolution })
    }

    /// `σ` log-spaced on `[σ_min, σ_max]`, `t` linear on `[−T, T]`.
    pub fn standard(sigma_range: (f64, f64), sigma_count: usize, t_max: f64, t_count: usize) -> Result<Self> {
        let sigmas = if sigma_count == 1 { vec![sigma_range.0] } else { logspace(sigma_range.0, sigma_range.1, sigma_count) };
        Self::new(sigmas, linspace(-t_max, t_max, t_count))
    }

    pub fn sigma_values(&self) -> &[f64] {
        &self.sigma_values
    }

    pub fn t_values(&self) -> &[f64] {
        &self.t_values
    }

    pub fn resolution(&self) -> Resolution {
        self.resolution
    }

    /// Grid points, `t` varying fastest.
    pub fn points(&self) -> Vec<Complex64> {
        self.sigma_values
            .iter()
            .flat_map(|&s| self.t_values.iter().map(move |&t| Complex64::new(s, t)))
            .collect()
    }

    /// Same points shifted right by `u`.
    pub fn shifted(&self, u: f64) -> Result<Self> {
        Self::new(self.sigma_values.iter().map(|s| s + u).collect(), self.t_values.clone())
    }
}

/// Default grid sizes: `σ` log-spaced on `[10⁻³, 20]`, `t` linear on `[−50, 50]`.
pub const DEFAULT_SIGMA_RANGE: (f64, f64) = (1e-3, 20.0);
pub const DEFAULT_SIGMA_COUNT: usize = 60;
pub const DEFAULT_T_MAX: f64 = 50.0;
pub const DEFAULT_T_COUNT: usize = 1001;

impl Default for EvalGrid {
    fn default() -> Self {
        Self::standard(DEFAULT_SIGMA_RANGE, DEFAULT_SIGMA_COUNT, DEFAULT_T_MAX, DEFAULT_T_COUNT)
            .expect("default grid is valid")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormSpec {
    pub ell: f64,
    pub grid: EvalGrid,
}

impl NormSpec {
    pub fn new(ell: f64, grid: EvalGrid) -> Result<Self> {
        if !(ell >= 0.0) {
            return Err(Error::InvalidArgument(format!("ell must be >= 0, got {ell}")));
        }
        Ok(Self { ell, grid })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate {
    pub value: f64,
    pub argmax: Complex64,
    /// Half the largest jump of the weighted modulus between neighbouring grid points.
    pub slack: f64,
    pub grid_used: EvalGrid,
}

fn weight(s: Complex64, ell: f64) -> f64 {
    if ell == 0.0 {
        1.0
    } else {
        (1.0 + s.norm()).powf(ell)
    }
}

fn eval_checked<F>(f: &F, s: Complex64) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    match f(s) {
        Ok(v) if v.re.is_finite() && v.im.is_finite() => Ok(v),
        _ => Err(Error::eval_failure(s)),
    }
}

/// Max and neighbour slack of a row-major table (`t` fastest).
fn max_with_slack(values: &[f64], rows: usize, cols: usize) -> (usize, f64) {
    let mut best = 0;
    let mut jump = 0.0f64;
    for i in 0..rows {
        for j in 0..cols {
            let idx = i * cols + j;
            if values[idx] > values[best] {
                best = idx;
            }
            if j + 1 < cols {
                jump = jump.max((values[idx + 1] - values[idx]).abs());
            }
            if i + 1 < rows {
                jump = jump.max((values[idx + cols] - values[idx]).abs());
            }
        }
    }
    (best, 0.5 * jump)
}

/// `max over the grid of |f(s)|/(1+|s|)^ℓ`.
pub fn norm_inf_ell<F>(f: F, spec: &NormSpec) -> Result<NormEstimate>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    let points = spec.grid.points();
    let values: Vec<f64> = points
        .par_iter()
        .map(|&s| eval_checked(&f, s).map(|v| v.norm() / weight(s, spec.ell)))
        .collect::<Result<_>>()?;
    let (best, slack) = max_with_slack(&values, spec.grid.sigma_values.len(), spec.grid.t_values.len());
    Ok(NormEstimate { value: values[best], argmax: points[best], slack, grid_used: spec.grid.clone() })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfilePoint {
    pub sigma: f64,
    pub value: f64,
}

fn line_sup<F, W>(f: &F, sigma: f64, t_grid: &[f64], w: W) -> Result<f64>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
    W: Fn(Complex64) -> f64 + Sync,
{
    let vals: Vec<f64> = t_grid
        .par_iter()
        .map(|&t| {
            let s = Complex64::new(sigma, t);
            eval_checked(f, s).map(|v| v.norm() / w(s))
        })
        .collect::<Result<_>>()?;
    Ok(vals.into_iter().fold(0.0, f64::max))
}

/// `σ ↦ sup_t |f(σ+it)| / |1+σ+it|^ℓ` for decreasing positive `σ`.
pub fn far_left_profile<F>(f: F, ell: f64, sigmas: &[f64], t_grid: &[f64]) -> Result<Vec<ProfilePoint>>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    if sigmas.is_empty() || sigmas.iter().any(|s| !(*s > 0.0)) || sigmas.windows(2).any(|w| !(w[0] > w[1])) {
        return Err(Error::InvalidArgument("far-left abscissas must be positive and decreasing".into()));
    }
    sigmas
        .iter()
        .map(|&sigma| {
            let value = line_sup(&f, sigma, t_grid, |s| if ell == 0.0 { 1.0 } else { (1.0 + s).norm().powf(ell) })?;
            Ok(ProfilePoint { sigma, value })
        })
        .collect()
}

/// Largest excess of `log L(σᵢ)` over the chord through its neighbours, where
/// `L(σ) = sup_t |f(σ+it)|` on `n_abscissas` equally spaced `σ` in `[σ₁, σ₂]`.
///
/// Boundedness of `f` on the strip is the caller's responsibility; a convex `log L` gives
/// a value `≤ 0`.
pub fn log_convexity_check<F>(f: F, sigma1: f64, sigma2: f64, n_abscissas: usize, t_grid: &[f64]) -> Result<f64>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    if !(0.0 < sigma1 && sigma1 < sigma2) || n_abscissas < 3 {
        return Err(Error::InvalidArgument("need 0 < sigma1 < sigma2 and at least three abscissas".into()));
    }
    let sigmas = linspace(sigma1, sigma2, n_abscissas);
    let logs: Vec<f64> = sigmas
        .iter()
        .map(|&s| line_sup(&f, s, t_grid, |_| 1.0).map(f64::ln))
        .collect::<Result<_>>()?;
    Ok(logs.windows(3).map(|w| w[1] - 0.5 * (w[0] + w[2])).fold(f64::NEG_INFINITY, f64::max))
}

/// `σ ↦ sup_t |R_x(σ+it)| / (1+|t|)^ℓ`, with the limit function replaced by the Riesz mean at `x`.
pub fn far_right_decay(
    series: &DirichletSeries,
    ell: f64,
    sigmas: &[f64],
    t_grid: &[f64],
    spec: RieszSpec,
    x: f64,
) -> Result<Vec<ProfilePoint>> {
    match series.first_lambda() {
        Some(0.0) => return Err(Error::Lambda1Zero),
        _ => {}
    }
    if !(x > 0.0) {
        return Err(Error::NonPositiveX(x));
    }
    let raw: Vec<(f64, Complex64)> = series.terms_below(x).map(|t| (t.lambda, t.coeff)).collect();
    Ok(sigmas
        .iter()
        .map(|&sigma| {
            let value = t_grid
                .par_iter()
                .map(|&t| {
                    let s = Complex64::new(sigma, t);
                    let terms: Vec<(f64, Complex64)> = raw.iter().map(|&(l, a)| (l, a * (-l * s).exp())).collect();
                    mean_along(&terms, spec, &[x])[0].norm() / (1.0 + t.abs()).powf(ell)
                })
                .reduce(|| 0.0, f64::max);
            ProfilePoint { sigma, value }
        })
        .collect())
}

/// `x ↦ max over the grid of |R_x(s)| / (1+|s|)^ℓ` for every `x` in `xs`.
pub fn riesz_norm_trace(series: &DirichletSeries, ell: f64, spec: RieszSpec, xs: &[f64], grid: &EvalGrid) -> Vec<f64> {
    let x_max = xs.iter().copied().fold(0.0, f64::max);
    let raw: Vec<(f64, Complex64)> = series.terms_below(x_max).map(|t| (t.lambda, t.coeff)).collect();
    grid.points()
        .par_iter()
        .map(|&s| {
            let terms: Vec<(f64, Complex64)> = raw.iter().map(|&(l, a)| (l, a * (-l * s).exp())).collect();
            let w = weight(s, ell);
            mean_along(&terms, spec, xs).iter().map(|v| v.norm() / w).collect::<Vec<f64>>()
        })
        .reduce(|| vec![0.0; xs.len()], |a, b| a.iter().zip(&b).map(|(p, q)| p.max(*q)).collect())
}

/// Smallest accepted denominator in ratios of norms.
pub const NORM_FLOOR: f64 = 1e-15;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaximalRatio {
    pub sup_ratio: f64,
    pub limit_norm: f64,
    /// `(x, ‖R_x f‖/‖f‖)`.
    pub trace: Vec<(f64, f64)>,
}

impl MaximalRatio {
    /// Relative growth of the running sup when the window extends past `x_split`.
    pub fn stabilization(&self, x_split: f64) -> f64 {
        let head = self.trace.iter().filter(|p| p.0 <= x_split).map(|p| p.1).fold(0.0, f64::max);
        let all = self.trace.iter().map(|p| p.1).fold(0.0, f64::max);
        if head > 0.0 {
            (all - head) / head
        } else {
            f64::INFINITY
        }
    }
}

/// `sup_x ‖R_x f‖∞,ℓ / ‖f‖∞,ℓ` over `xs`, both norms taken on `grid`.
///
/// `limit_norm` is the grid norm of the limit function; when absent the mean at the largest
/// `x` stands in for it.
pub fn maximal_ratio(
    series: &DirichletSeries,
    ell: f64,
    spec: RieszSpec,
    xs: &[f64],
    grid: &EvalGrid,
    limit_norm: Option<f64>,
) -> Result<MaximalRatio> {
    if !(spec.order() > ell) {
        return Err(Error::InvalidArgument(format!("need k > ell, got k = {}, ell = {ell}", spec.order())));
    }
    if xs.is_empty() || !is_increasing(xs) || !(xs[0] > 0.0) {
        return Err(Error::InvalidArgument("x grid must be positive and increasing".into()));
    }
    let norms = riesz_norm_trace(series, ell, spec, xs, grid);
    let denom = limit_norm.unwrap_or(norms[norms.len() - 1]);
    if !(denom > NORM_FLOOR) {
        return Err(Error::ZeroNorm { floor: NORM_FLOOR });
    }
    let trace: Vec<(f64, f64)> = xs.iter().zip(&norms).map(|(&x, n)| (x, n / denom)).collect();
    let sup_ratio = trace.iter().map(|p| p.1).fold(0.0, f64::max);
    Ok(MaximalRatio { sup_ratio, limit_norm: denom, trace })
}

/// A series together with an independent evaluation of its limit function.
#[derive(Clone, Copy)]
pub struct Member<'a> {
    pub series: &'a DirichletSeries,
    pub limit: &'a (dyn Fn(Complex64) -> Result<Complex64> + Sync),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApproxReport {
    pub x0: f64,
    /// `(x, max over members and grid of |f(u+s) − R_x f(u+s)|/(1+|s|)^ℓ)`.
    pub deviations: Vec<(f64, f64)>,
}

/// Smallest grid `x₀` with `‖f(u+·) − R_x f(u+·)‖∞,ℓ ≤ ε` for all grid `x ≥ x₀` and all members.
pub fn uniform_riesz_approx(
    members: &[Member<'_>],
    ell: f64,
    spec: RieszSpec,
    u: f64,
    eps: f64,
    xs: &[f64],
    grid: &EvalGrid,
) -> Result<ApproxReport> {
    if !(spec.order() > ell) || !(u > 0.0) || !(eps > 0.0) {
        return Err(Error::InvalidArgument("need k > ell, u > 0 and eps > 0".into()));
    }
    if xs.is_empty() || !is_increasing(xs) || !(xs[0] > 0.0) {
        return Err(Error::InvalidArgument("x grid must be positive and increasing".into()));
    }
    let x_max = xs[xs.len() - 1];
    let points = grid.points();
    let mut dev = vec![0.0f64; xs.len()];
    for m in members {
        let raw: Vec<(f64, Complex64)> = m.series.terms_below(x_max).map(|t| (t.lambda, t.coeff)).collect();
        let per_point: Vec<Vec<f64>> = points
            .par_iter()
            .map(|&s| {
                let z = s + u;
                let f = eval_checked(&m.limit, z)?;
                let terms: Vec<(f64, Complex64)> = raw.iter().map(|&(l, a)| (l, a * (-l * z).exp())).collect();
                let w = weight(s, ell);
                Ok(mean_along(&terms, spec, xs).iter().map(|r| (f - r).norm() / w).collect())
            })
            .collect::<Result<_>>()?;
        for row in per_point {
            for (d, v) in dev.iter_mut().zip(row) {
                *d = d.max(v);
            }
        }
    }
    let deviations: Vec<(f64, f64)> = xs.iter().copied().zip(dev.iter().copied()).collect();
    // first index after the last violation
    match dev.iter().rposition(|&d| !(d <= eps)) {
        None => Ok(ApproxReport { x0: xs[0], deviations }),
        Some(i) if i + 1 < xs.len() => Ok(ApproxReport { x0: xs[i + 1], deviations }),
        Some(_) => Err(Error::NotReached { largest_deviation: dev.iter().copied().fold(0.0, f64::max) }),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoefficientBound {
    pub n: usize,
    /// `|Σ_{n≤N} aₙ|`
    pub lhs: f64,
    /// `(λ_{N+1}/(λ_{N+1} − λ_N))^k ‖f‖∞,ℓ`; the factor is 1 past the last frequency.
    pub rhs_shape: f64,
}

impl CoefficientBound {
    pub fn ratio(&self) -> f64 {
        self.lhs / self.rhs_shape
    }
}

/// Compares partial sums of coefficients with the shape of their bound for `N = 1..=n_max`.
pub fn coefficient_bound_check(series: &DirichletSeries, k: f64, n_max: usize, limit_norm: f64) -> Result<Vec<CoefficientBound>> {
    let terms: Vec<_> = series.terms().take(n_max + 1).collect();
    let mut out = Vec::with_capacity(n_max);
    let mut partial = Complex64::new(0.0, 0.0);
    for n in 1..=n_max.min(terms.len()) {
        partial += terms[n - 1].coeff;
        let factor = match terms.get(n) {
            Some(next) => {
                let gap = next.lambda - terms[n - 1].lambda;
                (next.lambda / gap).powf(k)
            }
            None => 1.0,
        };
        out.push(CoefficientBound { n, lhs: partial.norm(), rhs_shape: factor * limit_norm });
    }
    Ok(out)
}

/// CSV text with a header row.
pub fn to_csv(header: (&str, &str), rows: &[(f64, f64)]) -> String {
    let mut out = format!("{},{}\n", header.0, header.1);
    for (a, b) in rows {
        let _ = writeln!(out, "{a:e},{b:e}");
    }
    out
}

pub fn profile_csv(rows: &[ProfilePoint]) -> String {
    to_csv(("sigma", "value"), &rows.iter().map(|p| (p.sigma, p.value)).collect::<Vec<_>>())
}
