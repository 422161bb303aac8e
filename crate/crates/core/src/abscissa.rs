//! Abscissa estimates from the growth of Riesz means, order-of-growth fits and a
//! uniform-convergence probe on cones.
//!
//! The limsup in `σ = limsup log|R_x(0)|/x` is replaced by the maximum over the tail half of a
//! finite window `[x_min, x_max]`, i.e. over samples with `x ≥ (x_min + x_max)/2`. When every
//! mean in the tail vanishes the estimate is `-inf`.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{extended_f64, is_increasing, linspace};
use crate::series::{mean_along, tail_start, DirichletSeries, RieszKind, RieszSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AbscissaKind {
    Pointwise,
    Uniform,
    Absolute,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlopeSample {
    pub x: f64,
    /// `log|·|/x`; `-inf` where the mean vanishes.
    #[serde(with = "extended_f64")]
    pub slope: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AbscissaEstimate {
    #[serde(with = "extended_f64")]
    pub value: f64,
    pub kind: AbscissaKind,
    pub riesz_order: f64,
    pub riesz_kind: RieszKind,
    pub window: (f64, f64),
    pub slope_trace: Vec<SlopeSample>,
    /// The limsup formula is exact only for non-negative abscissas; below zero the value is
    /// an upper bound.
    pub upper_bound_only: bool,
}

impl AbscissaEstimate {
    fn from_values(kind: AbscissaKind, spec: RieszSpec, xs: &[f64], moduli: &[f64]) -> Self {
        let slope_trace: Vec<SlopeSample> = xs
            .iter()
            .zip(moduli)
            .map(|(&x, &m)| SlopeSample { x, slope: if m > 0.0 { m.ln() / x } else { f64::NEG_INFINITY } })
            .collect();
        let window = (xs[0], xs[xs.len() - 1]);
        let value = tail_max(&slope_trace, window);
        Self {
            value,
            kind,
            riesz_order: spec.order(),
            riesz_kind: spec.kind(),
            window,
            slope_trace,
            upper_bound_only: !(value >= 0.0),
        }
    }
}

fn tail_max(trace: &[SlopeSample], window: (f64, f64)) -> f64 {
    let mid = 0.5 * (window.0 + window.1);
    trace.iter().filter(|s| s.x >= mid).map(|s| s.slope).fold(f64::NEG_INFINITY, f64::max)
}

/// Factor by which a window has to stretch (`x_max / x_min`).
pub const MIN_WINDOW_RATIO: f64 = 100.0;

fn check_window(xs: &[f64]) -> Result<()> {
    if xs.len() < 2 || !is_increasing(xs) {
        return Err(Error::InvalidArgument("abscissa window must be a strictly increasing grid".into()));
    }
    if !(xs[0] > 0.0) {
        return Err(Error::NonPositiveX(xs[0]));
    }
    if xs[xs.len() - 1] / xs[0] < MIN_WINDOW_RATIO * (1.0 - 1e-12) {
        return Err(Error::InvalidArgument(format!(
            "abscissa window [{}, {}] spans less than two decades",
            xs[0],
            xs[xs.len() - 1]
        )));
    }
    Ok(())
}

/// Upper end of the default window: the frequency at term 10⁶, capped at 400. Finite series
/// are cheap at any `x` and use 400, or twice their last frequency if that is larger, so that
/// `log|R_x|/x` has decayed from the constant term.
pub fn default_x_max(series: &DirichletSeries) -> f64 {
    const TERMS: usize = 1_000_000;
    const CAP: f64 = 400.0;
    match series.len() {
        Some(_) => {
            let last = series.terms().last().map_or(0.0, |t| t.lambda);
            (2.0 * last).max(CAP)
        }
        None => series.frequency().get(TERMS).unwrap_or(CAP).min(CAP),
    }
}

/// Linear window over two decades ending at [`default_x_max`].
pub fn default_window(series: &DirichletSeries, samples: usize) -> Vec<f64> {
    let x_max = default_x_max(series);
    linspace(x_max / MIN_WINDOW_RATIO, x_max, samples.max(2))
}

fn rotated_terms(series: &DirichletSeries, x_max: f64, t: f64) -> Vec<(f64, Complex64)> {
    series
        .terms_below(x_max)
        .map(|term| {
            let v = if t == 0.0 || term.lambda == 0.0 { term.coeff } else { term.coeff * Complex64::cis(-term.lambda * t) };
            (term.lambda, v)
        })
        .collect()
}

/// `sup over the tail of log|R_x(0)|/x`.
pub fn bohr_cahen_pointwise(series: &DirichletSeries, spec: RieszSpec, xs: &[f64]) -> Result<AbscissaEstimate> {
    check_window(xs)?;
    let terms = rotated_terms(series, xs[xs.len() - 1], 0.0);
    let moduli: Vec<f64> = mean_along(&terms, spec, xs).iter().map(|v| v.norm()).collect();
    Ok(AbscissaEstimate::from_values(AbscissaKind::Pointwise, spec, xs, &moduli))
}

/// As [`bohr_cahen_pointwise`] with `|R_x(0)|` replaced by `max_t |R_x(it)|` over `t_grid ∪ {0}`.
pub fn bohr_cahen_uniform(
    series: &DirichletSeries,
    spec: RieszSpec,
    xs: &[f64],
    t_grid: &[f64],
) -> Result<AbscissaEstimate> {
    check_window(xs)?;
    if t_grid.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidArgument("t grid must be finite".into()));
    }
    let x_max = xs[xs.len() - 1];
    let mut ts: Vec<f64> = t_grid.to_vec();
    if !ts.contains(&0.0) {
        ts.push(0.0);
    }
    let moduli = ts
        .par_iter()
        .map(|&t| {
            let terms = rotated_terms(series, x_max, t);
            mean_along(&terms, spec, xs).iter().map(|v| v.norm()).collect::<Vec<f64>>()
        })
        .reduce(|| vec![0.0; xs.len()], |a, b| a.iter().zip(&b).map(|(x, y)| x.max(*y)).collect());
    Ok(AbscissaEstimate::from_values(AbscissaKind::Uniform, spec, xs, &moduli))
}

/// Tail sup of `log(Σ_{λₙ<x} |aₙ|)/x`.
pub fn absolute_abscissa(series: &DirichletSeries, xs: &[f64]) -> Result<AbscissaEstimate> {
    check_window(xs)?;
    let x_max = xs[xs.len() - 1];
    let terms: Vec<(f64, Complex64)> =
        series.terms_below(x_max).map(|t| (t.lambda, Complex64::new(t.coeff.norm(), 0.0))).collect();
    let spec = RieszSpec::first(0.0)?;
    let moduli: Vec<f64> = mean_along(&terms, spec, xs).iter().map(|v| v.re).collect();
    Ok(AbscissaEstimate::from_values(AbscissaKind::Absolute, spec, xs, &moduli))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderEstimate {
    pub sigma: f64,
    /// Fitted slope, clipped below at 0.
    pub exponent: f64,
    /// Slope before clipping.
    pub slope: f64,
    pub fit_range: (f64, f64),
    /// Max deviation of `log|f|` from the fitted line.
    pub residual: f64,
}

/// Least-squares slope of `log|f(σ+it)|` against `log t`.
pub fn order_at<F>(f: F, sigma: f64, t_grid: &[f64]) -> Result<OrderEstimate>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    if t_grid.len() < 2 || !is_increasing(t_grid) {
        return Err(Error::InvalidArgument("order fit needs an increasing t grid with two points".into()));
    }
    if t_grid[0] < 10.0 {
        return Err(Error::InvalidArgument(format!("order fit needs t_min >= 10, got {}", t_grid[0])));
    }
    let points: Vec<(f64, f64)> = t_grid
        .par_iter()
        .map(|&t| {
            let s = Complex64::new(sigma, t);
            let v = f(s).map_err(|_| Error::eval_failure(s))?;
            let m = v.norm();
            if !(m > 0.0) || !m.is_finite() {
                return Err(Error::eval_failure(s));
            }
            Ok((t.ln(), m.ln()))
        })
        .collect::<Result<_>>()?;
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = points.iter().map(|p| (p.1 - intercept - slope * p.0).abs()).fold(0.0, f64::max);
    Ok(OrderEstimate {
        sigma,
        exponent: slope.max(0.0),
        slope,
        fit_range: (t_grid[0], t_grid[t_grid.len() - 1]),
        residual,
    })
}

/// Cone `{s₀ + r e^{iθ} : r ≥ 0, |θ| ≤ γ}` opening to the right.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConeSpec {
    apex: Complex64,
    half_angle: f64,
}

impl ConeSpec {
    pub fn new(apex: Complex64, half_angle: f64) -> Result<Self> {
        if !(half_angle > 0.0 && half_angle < FRAC_PI_2) {
            return Err(Error::InvalidArgument(format!("cone half-angle must lie in (0, pi/2), got {half_angle}")));
        }
        Ok(Self { apex, half_angle })
    }

    pub fn apex(&self) -> Complex64 {
        self.apex
    }

    pub fn half_angle(&self) -> f64 {
        self.half_angle
    }

    /// Apex plus `per_ray` points on each of `rays` equally spread rays, out to distance `radius`.
    pub fn sample_points(&self, rays: usize, per_ray: usize, radius: f64) -> Vec<Complex64> {
        let rays = rays.max(3);
        let mut pts = vec![self.apex];
        for j in 0..rays {
            let theta = -self.half_angle + 2.0 * self.half_angle * j as f64 / (rays - 1) as f64;
            for i in 1..=per_ray {
                let r = radius * i as f64 / per_ray as f64;
                pts.push(self.apex + Complex64::from_polar(r, theta));
            }
        }
        pts
    }
}

/// Distance from the apex covered by [`cone_uniformity`].
pub const CONE_RADIUS: f64 = 2.0;
/// Points per ray used by [`cone_uniformity`].
pub const CONE_POINTS_PER_RAY: usize = 4;

/// Max over sampled cone points of `max_{x,x'} |S_x(s) − S_{x'}(s)|` over the last quartile of `xs`.
///
/// Rays below three are raised to three; an empty grid gives 0.
pub fn cone_uniformity(series: &DirichletSeries, cone: ConeSpec, xs: &[f64], ray_samples: usize) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    let mut sorted = xs.to_vec();
    sorted.sort_by(f64::total_cmp);
    let tail = &sorted[tail_start(sorted.len())..];
    let x_max = sorted[sorted.len() - 1];
    let raw: Vec<(f64, Complex64)> = series.terms_below(x_max).map(|t| (t.lambda, t.coeff)).collect();
    let spec = RieszSpec::first(0.0).expect("order 0");
    cone.sample_points(ray_samples, CONE_POINTS_PER_RAY, CONE_RADIUS)
        .par_iter()
        .map(|&s| {
            let terms: Vec<(f64, Complex64)> = raw.iter().map(|&(l, a)| (l, a * (-l * s).exp())).collect();
            let values = mean_along(&terms, spec, tail);
            let mut osc = 0.0f64;
            for (i, a) in values.iter().enumerate() {
                for b in &values[i + 1..] {
                    osc = osc.max((a - b).norm());
                }
            }
            osc
        })
        .reduce(|| 0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frequency::Frequency;
    use crate::grid::logspace;
    use crate::series::Coefficients;

    fn ordinary(coeffs: Coefficients) -> DirichletSeries {
        DirichletSeries::new(Frequency::ordinary(), coeffs, None, "t").unwrap()
    }

    fn first(k: f64) -> RieszSpec {
        RieszSpec::first(k).unwrap()
    }

    #[test]
    fn pointwise_examples() {
        let x_max = 1e6f64.ln();
        let xs = linspace(x_max / 100.0, x_max, 120);
        let zeta = bohr_cahen_pointwise(&ordinary(Coefficients::Ones), first(0.0), &xs).unwrap();
        assert!((zeta.value - 1.0).abs() < 0.05, "{}", zeta.value);
        let eta = bohr_cahen_pointwise(&ordinary(Coefficients::Alternating), first(0.0), &xs).unwrap();
        assert!(eta.value.abs() < 0.05, "{}", eta.value);
        let geo = DirichletSeries::new(Frequency::power(), Coefficients::Ones, None, "g").unwrap();
        let xs = linspace(4.0, 400.0, 200);
        let g = bohr_cahen_pointwise(&geo, first(0.0), &xs).unwrap();
        assert!(g.value.abs() < 0.05, "{}", g.value);
    }

    #[test]
    fn value_is_tail_sup_of_trace() {
        let xs = linspace(0.1, 10.0, 50);
        let e = bohr_cahen_pointwise(&ordinary(Coefficients::Ones), first(1.0), &xs).unwrap();
        let want = e.slope_trace.iter().filter(|s| s.x >= 5.05).map(|s| s.slope).fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(e.value, want);
    }

    #[test]
    fn window_must_span_two_decades() {
        let xs = linspace(1.0, 50.0, 10);
        assert!(bohr_cahen_pointwise(&ordinary(Coefficients::Ones), first(0.0), &xs).is_err());
    }

    #[test]
    fn zero_series_gives_minus_infinity() {
        let zero = ordinary(Coefficients::Table(vec![Complex64::new(0.0, 0.0); 50]));
        let xs = linspace(0.05, 5.0, 30);
        assert_eq!(absolute_abscissa(&zero, &xs).unwrap().value, f64::NEG_INFINITY);
        assert_eq!(bohr_cahen_pointwise(&zero, first(0.0), &xs).unwrap().value, f64::NEG_INFINITY);
        let json = serde_json::to_string(&absolute_abscissa(&zero, &xs).unwrap()).unwrap();
        assert!(json.contains("\"-inf\""));
    }

    #[test]
    fn uniform_and_absolute_examples() {
        let single = DirichletSeries::finite(&[(1.0, Complex64::new(1.0, 0.0))], "single").unwrap();
        let xs = linspace(0.2, 20.0, 60);
        let ts = linspace(-10.0, 10.0, 21);
        for k in [0.0, 1.0, 2.5] {
            let u = bohr_cahen_uniform(&single, first(k), &xs, &ts).unwrap();
            assert!(u.value <= 0.0);
        }
        let x_max = 1e5f64.ln();
        let xs = linspace(x_max / 100.0, x_max, 60);
        let ts = linspace(-20.0, 20.0, 41);
        let zeta = ordinary(Coefficients::Ones);
        let u = bohr_cahen_uniform(&zeta, first(0.0), &xs, &ts).unwrap();
        let p = bohr_cahen_pointwise(&zeta, first(0.0), &xs).unwrap();
        assert!((u.value - 1.0).abs() < 0.05);
        assert!(u.value >= p.value);
        let eta = ordinary(Coefficients::Alternating);
        let a = absolute_abscissa(&eta, &xs).unwrap();
        assert!((a.value - 1.0).abs() < 0.05);
        let geo = DirichletSeries::new(Frequency::power(), Coefficients::Ones, None, "g").unwrap();
        let a = absolute_abscissa(&geo, &linspace(4.0, 400.0, 100)).unwrap();
        assert!(a.value.abs() < 0.05);
    }

    #[test]
    fn order_of_constant_and_power() {
        let ts = logspace(10.0, 1e3, 40);
        let c = order_at(|_| Ok(Complex64::new(1.0, 0.0)), 0.5, &ts).unwrap();
        assert_eq!(c.exponent, 0.0);
        assert!(c.residual < 1e-12);
        let p = order_at(|s: Complex64| Ok(s * s), 0.0, &ts).unwrap();
        assert!((p.exponent - 2.0).abs() < 1e-6);
        let decaying = order_at(|s: Complex64| Ok(1.0 / s), 1.0, &ts).unwrap();
        assert_eq!(decaying.exponent, 0.0);
        assert!(decaying.slope < -0.9);
        assert!(order_at(|_| Ok(Complex64::new(1.0, 0.0)), 0.5, &[1.0, 20.0]).is_err());
        let failing = order_at(|_| Err(Error::Domain("x".into())), 0.5, &ts);
        assert!(matches!(failing, Err(Error::EvaluationFailure { .. })));
    }

    #[test]
    fn cone_examples() {
        let single = DirichletSeries::finite(&[(1.0, Complex64::new(1.0, 0.0))], "single").unwrap();
        let cone = ConeSpec::new(Complex64::new(0.5, 0.0), std::f64::consts::FRAC_PI_4).unwrap();
        assert_eq!(cone_uniformity(&single, cone, &linspace(1.5, 10.0, 20), 9), 0.0);
        assert!(ConeSpec::new(Complex64::new(0.0, 0.0), FRAC_PI_2).is_err());
        let pts = cone.sample_points(9, 4, 2.0);
        assert_eq!(pts.len(), 37);
        for p in pts.iter().skip(1) {
            let d = p - cone.apex();
            assert!(d.arg().abs() <= cone.half_angle() + 1e-12);
        }
    }
}
