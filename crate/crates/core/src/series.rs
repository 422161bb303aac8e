//! General Dirichlet series `Σ aₙ e^{−λₙ s}` and their Riesz means.
//!
//! All sums use the open cutoff `λₙ < x`; a term sitting exactly at `x` is excluded.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frequency::{Frequency, FrequencyJson};

/// Coefficient provider `n ↦ aₙ` (1-based).
#[derive(Clone)]
pub enum Coefficients {
    /// `aₙ = 1`
    Ones,
    /// `aₙ = (−1)^(n+1)`
    Alternating,
    /// Finite table; the series ends with the table.
    Table(Vec<Complex64>),
    /// Caller supplied rule, defined for every index.
    Rule(Arc<dyn Fn(usize) -> Complex64 + Send + Sync>),
}

impl Coefficients {
    pub fn get(&self, n: usize) -> Option<Complex64> {
        match self {
            Coefficients::Ones => Some(Complex64::new(1.0, 0.0)),
            Coefficients::Alternating => {
                Some(Complex64::new(if n % 2 == 1 { 1.0 } else { -1.0 }, 0.0))
            }
            Coefficients::Table(t) => t.get(n.checked_sub(1)?).copied(),
            Coefficients::Rule(f) => Some(f(n)),
        }
    }

    pub fn len(&self) -> Option<usize> {
        match self {
            Coefficients::Table(t) => Some(t.len()),
            _ => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }
}

impl fmt::Debug for Coefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficients::Ones => write!(f, "Ones"),
            Coefficients::Alternating => write!(f, "Alternating"),
            Coefficients::Table(t) => write!(f, "Table({} entries)", t.len()),
            Coefficients::Rule(_) => write!(f, "Rule(..)"),
        }
    }
}

/// One term `aₙ e^{−λₙ s}` before the exponential is applied.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub index: usize,
    pub lambda: f64,
    pub coeff: Complex64,
}

#[derive(Debug, Clone)]
pub struct DirichletSeries {
    frequency: Frequency,
    coefficients: Coefficients,
    /// Accumulated translation `w`: the effective coefficients are `aₙ e^{−λₙ w}`.
    shift: Complex64,
    germ_order: Option<f64>,
    label: String,
}

impl DirichletSeries {
    pub fn new(
        frequency: Frequency,
        coefficients: Coefficients,
        germ_order: Option<f64>,
        label: impl Into<String>,
    ) -> Result<Self> {
        if let Some(m) = germ_order {
            if !(m >= 0.0) {
                return Err(Error::InvalidArgument(format!("germ order must be >= 0, got {m}")));
            }
        }
        if let (Some(nc), Some(nf)) = (coefficients.len(), frequency.len()) {
            if nc > nf {
                return Err(Error::RangeExceeded { index: nc, available: nf });
            }
        }
        Ok(Self { frequency, coefficients, shift: Complex64::new(0.0, 0.0), germ_order, label: label.into() })
    }

    /// Finite series `Σ cⱼ e^{−μⱼ s}` from `(μⱼ, cⱼ)` pairs with increasing `μⱼ`.
    pub fn finite(terms: &[(f64, Complex64)], label: impl Into<String>) -> Result<Self> {
        let freq = Frequency::finite(terms.iter().map(|t| t.0).collect(), "custom")?;
        Self::new(freq, Coefficients::Table(terms.iter().map(|t| t.1).collect()), None, label)
    }

    pub fn frequency(&self) -> &Frequency {
        &self.frequency
    }

    pub fn coefficients(&self) -> &Coefficients {
        &self.coefficients
    }

    pub fn germ_order(&self) -> Option<f64> {
        self.germ_order
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn shift(&self) -> Complex64 {
        self.shift
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Number of terms for a finite series.
    pub fn len(&self) -> Option<usize> {
        match (self.coefficients.len(), self.frequency.len()) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (Some(a), None) => Some(a),
            (None, Some(b)) => Some(b),
            (None, None) => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    /// Effective coefficient `aₙ e^{−λₙ w}` including any translation.
    pub fn coefficient(&self, n: usize) -> Result<Complex64> {
        let lambda = self.frequency.get(n)?;
        let a = self
            .coefficients
            .get(n)
            .ok_or(Error::RangeExceeded { index: n, available: self.coefficients.len().unwrap_or(0) })?;
        Ok(self.apply_shift(a, lambda))
    }

    fn apply_shift(&self, a: Complex64, lambda: f64) -> Complex64 {
        if self.shift == Complex64::new(0.0, 0.0) || lambda == 0.0 {
            a
        } else {
            a * (-lambda * self.shift).exp()
        }
    }

    /// Terms in order of increasing frequency, ending with the series.
    pub fn terms(&self) -> impl Iterator<Item = Term> + '_ {
        let limit = self.len().unwrap_or(usize::MAX);
        self.frequency.iter().take(limit).map_while(move |(n, lambda)| {
            let a = self.coefficients.get(n)?;
            Some(Term { index: n, lambda, coeff: self.apply_shift(a, lambda) })
        })
    }

    /// Terms with `λₙ < x`.
    pub fn terms_below(&self, x: f64) -> impl Iterator<Item = Term> + '_ {
        self.terms().take_while(move |t| t.lambda < x)
    }

    pub fn first_lambda(&self) -> Option<f64> {
        self.terms().next().map(|t| t.lambda)
    }

    pub fn to_json(&self) -> Option<SeriesJson> {
        let coefficients = match &self.coefficients {
            Coefficients::Ones => CoefficientsJson { kind: CoefficientKind::Ones, data: serde_json::Value::Null },
            Coefficients::Alternating => {
                CoefficientsJson { kind: CoefficientKind::Alternating, data: serde_json::Value::Null }
            }
            Coefficients::Table(t) => CoefficientsJson {
                kind: CoefficientKind::Table,
                data: serde_json::to_value(t.iter().map(|c| [c.re, c.im]).collect::<Vec<_>>()).ok()?,
            },
            Coefficients::Rule(_) => return None,
        };
        if self.shift != Complex64::new(0.0, 0.0) {
            return None;
        }
        Some(SeriesJson {
            label: self.label.clone(),
            frequency: self.frequency.to_json(),
            coefficients,
            germ_order: self.germ_order,
        })
    }

    pub fn from_json(json: &SeriesJson) -> Result<Self> {
        let frequency = Frequency::from_json(&json.frequency)?;
        let coefficients = match json.coefficients.kind {
            CoefficientKind::Ones => Coefficients::Ones,
            CoefficientKind::Alternating => Coefficients::Alternating,
            CoefficientKind::Table => Coefficients::Table(parse_table(&json.coefficients.data)?),
            CoefficientKind::Expr => {
                let spec: ExprData = serde_json::from_value(json.coefficients.data.clone())
                    .map_err(|e| Error::Parse(format!("expr coefficients: {e}")))?;
                let terms = match (spec.terms, frequency.len()) {
                    (Some(t), Some(f)) => t.min(f),
                    (Some(t), None) => t,
                    (None, Some(f)) => f,
                    (None, None) => DEFAULT_EXPR_TERMS,
                };
                Coefficients::Table(spec.materialize(terms)?)
            }
        };
        Self::new(frequency, coefficients, json.germ_order, json.label.clone())
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let json: SeriesJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json(&json)
    }
}

/// Coefficient expressions without an explicit `terms` bound over an unbounded frequency are
/// tabulated up to this many terms.
pub const DEFAULT_EXPR_TERMS: usize = 100_000;

fn parse_table(data: &serde_json::Value) -> Result<Vec<Complex64>> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Entry {
        Real(f64),
        Pair([f64; 2]),
    }
    let entries: Vec<Entry> =
        serde_json::from_value(data.clone()).map_err(|e| Error::Parse(format!("coefficient table: {e}")))?;
    Ok(entries
        .into_iter()
        .map(|e| match e {
            Entry::Real(r) => Complex64::new(r, 0.0),
            Entry::Pair([re, im]) => Complex64::new(re, im),
        })
        .collect())
}

#[derive(Debug, Clone, Deserialize)]
struct ExprData {
    re: String,
    #[serde(default)]
    im: Option<String>,
    #[serde(default)]
    terms: Option<usize>,
}

impl ExprData {
    fn materialize(&self, terms: usize) -> Result<Vec<Complex64>> {
        let parse = |src: &str| -> Result<meval::Expr> {
            src.parse::<meval::Expr>().map_err(|e| Error::Parse(format!("expression `{src}`: {e}")))
        };
        let re = parse(&self.re)?.bind("n").map_err(|e| Error::Parse(e.to_string()))?;
        let im = match &self.im {
            Some(src) => Some(parse(src)?.bind("n").map_err(|e| Error::Parse(e.to_string()))?),
            None => None,
        };
        let mut out = Vec::with_capacity(terms);
        for n in 1..=terms {
            let x = n as f64;
            let c = Complex64::new(re(x), im.as_ref().map_or(0.0, |f| f(x)));
            if !(c.re.is_finite() && c.im.is_finite()) {
                return Err(Error::Parse(format!("coefficient expression is not finite at n = {n}")));
            }
            out.push(c);
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoefficientKind {
    Table,
    Alternating,
    Ones,
    Expr,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientsJson {
    pub kind: CoefficientKind,
    #[serde(default)]
    pub data: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub label: String,
    pub frequency: FrequencyJson,
    pub coefficients: CoefficientsJson,
    #[serde(default)]
    pub germ_order: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum RieszKind {
    /// weights `(1 − λₙ/x)^k`
    #[default]
    First,
    /// weights `(1 − e^{λₙ−x})^k`
    Second,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RieszSpec {
    order: f64,
    kind: RieszKind,
}

impl RieszSpec {
    pub fn new(order: f64, kind: RieszKind) -> Result<Self> {
        if !(order >= 0.0) || !order.is_finite() {
            return Err(Error::InvalidArgument(format!("Riesz order must be >= 0, got {order}")));
        }
        Ok(Self { order, kind })
    }

    pub fn first(order: f64) -> Result<Self> {
        Self::new(order, RieszKind::First)
    }

    pub fn second(order: f64) -> Result<Self> {
        Self::new(order, RieszKind::Second)
    }

    pub fn order(&self) -> f64 {
        self.order
    }

    pub fn kind(&self) -> RieszKind {
        self.kind
    }

    /// Weight of a term at `λ < x`.
    pub fn weight(&self, lambda: f64, x: f64) -> f64 {
        if self.order == 0.0 {
            return 1.0;
        }
        let base = match self.kind {
            RieszKind::First => 1.0 - lambda / x,
            RieszKind::Second => -(lambda - x).exp_m1(),
        };
        pow(base, self.order)
    }
}

fn pow(base: f64, k: f64) -> f64 {
    if k.fract() == 0.0 && k.abs() < 64.0 {
        base.powi(k as i32)
    } else {
        base.powf(k)
    }
}

fn term_value(t: &Term, s: Complex64) -> Complex64 {
    if t.lambda == 0.0 || s == Complex64::new(0.0, 0.0) {
        t.coeff
    } else {
        t.coeff * (-t.lambda * s).exp()
    }
}

/// `S_x(s) = Σ_{λₙ<x} aₙ e^{−λₙ s}`.
pub fn partial_sum(series: &DirichletSeries, s: Complex64, x: f64) -> Result<Complex64> {
    if x.is_nan() {
        return Err(Error::InvalidArgument("x is NaN".into()));
    }
    Ok(series.terms_below(x).map(|t| term_value(&t, s)).sum())
}

/// Riesz mean `R_x^{λ,k}(s)` of the requested kind.
pub fn riesz_mean(series: &DirichletSeries, spec: RieszSpec, s: Complex64, x: f64) -> Result<Complex64> {
    if !(x > 0.0) {
        return Err(Error::NonPositiveX(x));
    }
    Ok(series.terms_below(x).map(|t| term_value(&t, s) * spec.weight(t.lambda, x)).sum())
}

/// Summatory function `S_x^{λ,k}(s) = Σ_{λₙ<x} aₙ e^{−λₙ s}(x − λₙ)^k`.
pub fn summatory(series: &DirichletSeries, k: f64, s: Complex64, x: f64) -> Result<Complex64> {
    if !(x > 0.0) {
        return Err(Error::NonPositiveX(x));
    }
    if !(k >= 0.0) {
        return Err(Error::InvalidArgument(format!("order must be >= 0, got {k}")));
    }
    Ok(series.terms_below(x).map(|t| term_value(&t, s) * pow(x - t.lambda, k)).sum())
}

/// Series with coefficients `aₙ e^{−λₙ w}` over the same frequency.
pub fn translate(series: &DirichletSeries, w: Complex64) -> DirichletSeries {
    let mut out = series.clone();
    out.shift += w;
    out
}

/// Riesz means along an increasing grid of `x`, evaluated with one pass over the terms.
///
/// The terms `aₙ e^{−λₙ s}` below `max(xs)` are computed once; means at each `x` are then
/// reduced in parallel in a fixed order.
pub fn riesz_trajectory(
    series: &DirichletSeries,
    spec: RieszSpec,
    s: Complex64,
    xs: &[f64],
) -> Result<Vec<Complex64>> {
    if xs.iter().any(|&x| !(x > 0.0)) {
        return Err(Error::NonPositiveX(xs.iter().copied().find(|&x| !(x > 0.0)).unwrap_or(f64::NAN)));
    }
    let x_max = xs.iter().copied().fold(0.0, f64::max);
    let terms: Vec<(f64, Complex64)> = series.terms_below(x_max).map(|t| (t.lambda, term_value(&t, s))).collect();
    Ok(mean_along(&terms, spec, xs))
}

/// Riesz means of precomputed terms `(λₙ, aₙe^{−λₙs})` at each `x`.
pub(crate) fn mean_along(terms: &[(f64, Complex64)], spec: RieszSpec, xs: &[f64]) -> Vec<Complex64> {
    if spec.order() == 0.0 {
        // cumulative sums; xs may be unsorted
        let mut prefix = Vec::with_capacity(terms.len() + 1);
        let mut acc = Complex64::new(0.0, 0.0);
        prefix.push(acc);
        for (_, v) in terms {
            acc += v;
            prefix.push(acc);
        }
        return xs
            .iter()
            .map(|&x| {
                let count = terms.partition_point(|(l, _)| *l < x);
                prefix[count]
            })
            .collect();
    }
    xs.par_iter()
        .map(|&x| {
            let count = terms.partition_point(|(l, _)| *l < x);
            terms[..count].iter().map(|(l, v)| v * spec.weight(*l, x)).sum()
        })
        .collect()
}

/// How [`riesz_limit`] turns the sampled trajectory into a limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum LimitEstimator {
    /// The mean at the largest `x`.
    #[default]
    LastValue,
    /// Polynomial extrapolation in `1/x` of degree `⌈k⌉` through the means at
    /// `x, x(1 − 1/(4m)), …, x(1 − m/(4m))`, evaluated at `1/x = 0`.
    ///
    /// First-kind means of a series whose limit continues analytically to the left behave like
    /// `f(s) + Σ_{j≤k} cⱼ x^{−j}` plus exponentially small terms (integer `k`), so the
    /// extrapolation removes the algebraic bias.
    InverseX,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub samples: Vec<(f64, Complex64)>,
    pub limit_estimate: Complex64,
    /// Max of `|estimate(x) − limit_estimate|` over the last quartile of the schedule.
    pub tail_delta: f64,
    pub converged: bool,
    pub estimator: LimitEstimator,
}

/// Samples the Riesz mean along `schedule` and estimates its limit.
pub fn riesz_limit(
    series: &DirichletSeries,
    spec: RieszSpec,
    s: Complex64,
    schedule: &[f64],
    tolerance: f64,
) -> Result<ConvergenceReport> {
    riesz_limit_with(series, spec, s, schedule, tolerance, LimitEstimator::LastValue)
}

pub fn riesz_limit_with(
    series: &DirichletSeries,
    spec: RieszSpec,
    s: Complex64,
    schedule: &[f64],
    tolerance: f64,
    estimator: LimitEstimator,
) -> Result<ConvergenceReport> {
    if schedule.is_empty() {
        return Err(Error::ScheduleEmpty);
    }
    if !(tolerance > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tolerance}")));
    }
    if schedule.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidArgument("schedule must be strictly increasing".into()));
    }
    let x_max = *schedule.last().unwrap_or(&0.0);
    let terms: Vec<(f64, Complex64)> = series.terms_below(x_max).map(|t| (t.lambda, term_value(&t, s))).collect();
    let values = mean_along(&terms, spec, schedule);
    let samples: Vec<(f64, Complex64)> = schedule.iter().copied().zip(values.iter().copied()).collect();
    let quartile = tail_start(schedule.len());

    let estimates: Vec<Complex64> = match estimator {
        LimitEstimator::LastValue => values[quartile..].to_vec(),
        LimitEstimator::InverseX => schedule[quartile..]
            .iter()
            .map(|&x| extrapolate_inverse_x(&terms, spec, x))
            .collect(),
    };
    let limit_estimate = *estimates.last().unwrap_or(&Complex64::new(0.0, 0.0));
    let tail_delta = estimates.iter().map(|v| (v - limit_estimate).norm()).fold(0.0, f64::max);
    Ok(ConvergenceReport { samples, limit_estimate, tail_delta, converged: tail_delta < tolerance, estimator })
}

/// Index where the last quartile of `n` samples starts.
pub(crate) fn tail_start(n: usize) -> usize {
    (n * 3 / 4).min(n.saturating_sub(1))
}

fn extrapolate_inverse_x(terms: &[(f64, Complex64)], spec: RieszSpec, x: f64) -> Complex64 {
    let degree = spec.order().ceil().max(1.0) as usize;
    let nodes: Vec<f64> = (0..=degree).map(|j| x * (1.0 - j as f64 / (4.0 * degree as f64))).collect();
    let values = mean_along(terms, spec, &nodes);
    let us: Vec<f64> = nodes.iter().map(|x| 1.0 / x).collect();
    // Lagrange interpolation at u = 0
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, v) in values.iter().enumerate() {
        let mut w = 1.0;
        for (j, uj) in us.iter().enumerate() {
            if i != j {
                w *= uj / (uj - us[i]);
            }
        }
        acc += v * w;
    }
    acc
}

/// Residuals `((λ_{N+1}−λ_N)/λ_{N+1})^k (Σ_{n≤N} aₙe^{−λₙs} − C)` for `N = 1..=n_max`.
pub fn remark_basic_iii_check(
    series: &DirichletSeries,
    k: f64,
    s: Complex64,
    limit: Complex64,
    n_max: usize,
) -> Result<Vec<(usize, f64)>> {
    let mut out = Vec::with_capacity(n_max);
    let mut partial = Complex64::new(0.0, 0.0);
    let mut terms = series.terms();
    let mut current = terms.next();
    for n in 1..=n_max {
        let Some(t) = current else { break };
        partial += term_value(&t, s);
        let next_lambda = match terms.next() {
            Some(next) => {
                current = Some(next);
                next.lambda
            }
            None => {
                current = None;
                // finite series: the partial sum is final, the weight is irrelevant
                out.push((n, (partial - limit).norm()));
                continue;
            }
        };
        if next_lambda == 0.0 {
            return Err(Error::ZeroLambda { index: n + 1 });
        }
        let w = pow((next_lambda - t.lambda) / next_lambda, k);
        out.push((n, w * (partial - limit).norm()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn power_ones() -> DirichletSeries {
        DirichletSeries::new(Frequency::power(), Coefficients::Ones, None, "geometric").unwrap()
    }

    fn eta() -> DirichletSeries {
        DirichletSeries::new(Frequency::ordinary(), Coefficients::Alternating, None, "eta").unwrap()
    }

    #[test]
    fn partial_sum_examples() {
        let d = power_ones();
        assert_eq!(partial_sum(&d, c(0.0), 1.0).unwrap(), c(0.0));
        assert_eq!(partial_sum(&d, c(0.0), 3.5).unwrap(), c(3.0));
        let v = partial_sum(&d, c(2f64.ln()), 2.5).unwrap();
        assert!((v - 0.75).norm() < 1e-15);
        // open cutoff: x = λ₃ excludes the third term
        assert_eq!(partial_sum(&d, c(0.0), 3.0).unwrap(), c(2.0));
    }

    #[test]
    fn riesz_mean_examples() {
        let d = power_ones();
        let v = riesz_mean(&d, RieszSpec::first(1.0).unwrap(), c(0.0), 2.5).unwrap();
        assert!((v - 0.8).norm() < 1e-15);
        let single = DirichletSeries::finite(&[(0.0, Complex64::new(2.0, -1.0))], "single").unwrap();
        for k in [0.0, 0.5, 3.0] {
            for x in [0.1, 7.0] {
                assert_eq!(riesz_mean(&single, RieszSpec::first(k).unwrap(), c(1.3), x).unwrap(), Complex64::new(2.0, -1.0));
            }
        }
        assert_eq!(riesz_mean(&d, RieszSpec::first(1.0).unwrap(), c(0.0), 0.0), Err(Error::NonPositiveX(0.0)));
        let zero = riesz_mean(&d, RieszSpec::second(0.0).unwrap(), c(0.5), 4.2).unwrap();
        assert_eq!(zero, partial_sum(&d, c(0.5), 4.2).unwrap());
    }

    #[test]
    fn summatory_examples() {
        let single = DirichletSeries::finite(&[(1.0, c(1.0))], "single").unwrap();
        assert!((summatory(&single, 2.0, c(0.0), 3.0).unwrap() - 4.0).norm() < 1e-15);
        assert_eq!(summatory(&single, 2.0, c(0.0), 0.5).unwrap(), c(0.0));
    }

    #[test]
    fn translation_examples() {
        let d = power_ones();
        let t = translate(&d, c(2f64.ln()));
        for n in 1..10 {
            let want = 2f64.powi(-(n as i32));
            assert!((t.coefficient(n).unwrap() - want).norm() < 1e-15);
        }
        let same = translate(&d, c(0.0));
        assert_eq!(same.coefficient(5).unwrap(), c(1.0));
    }

    #[test]
    fn riesz_limit_examples() {
        let single = DirichletSeries::finite(&[(0.0, Complex64::new(0.3, 0.4))], "single").unwrap();
        let rep = riesz_limit(&single, RieszSpec::first(1.0).unwrap(), c(1.0), &[1.0, 2.0, 4.0], 1e-12).unwrap();
        assert!(rep.converged);
        assert_eq!(rep.limit_estimate, Complex64::new(0.3, 0.4));

        let xs: Vec<f64> = (1..=40).map(|i| 5.0 * i as f64).collect();
        let rep = riesz_limit_with(&power_ones(), RieszSpec::first(1.0).unwrap(), c(1.0), &xs, 1e-6, LimitEstimator::InverseX).unwrap();
        let want = 1.0 / (std::f64::consts::E - 1.0);
        assert!((rep.limit_estimate - want).norm() < 1e-6);
        assert!(rep.converged);

        assert_eq!(riesz_limit(&single, RieszSpec::first(1.0).unwrap(), c(0.0), &[], 1e-3).unwrap_err(), Error::ScheduleEmpty);
    }

    #[test]
    fn eta_limit_at_one() {
        let x_max = 1e4f64.ln();
        let xs: Vec<f64> = (1..=20).map(|i| x_max * i as f64 / 20.0).collect();
        let rep = riesz_limit_with(&eta(), RieszSpec::first(1.0).unwrap(), c(1.0), &xs, 1e-3, LimitEstimator::InverseX).unwrap();
        assert!((rep.limit_estimate - 2f64.ln()).norm() < 1e-3, "{}", rep.limit_estimate);
        // the plain estimator carries the η'(1)/x bias
        let plain = riesz_limit(&eta(), RieszSpec::first(1.0).unwrap(), c(1.0), &xs, 1e-3).unwrap();
        assert!((plain.limit_estimate - 2f64.ln()).norm() > 1e-2);
    }

    #[test]
    fn trajectory_matches_pointwise_means() {
        let d = eta();
        let xs = [0.5, 1.0, 2.2, 3.0, 5.5];
        for spec in [RieszSpec::first(0.0).unwrap(), RieszSpec::first(1.5).unwrap(), RieszSpec::second(2.0).unwrap()] {
            let s = Complex64::new(0.3, 2.0);
            let traj = riesz_trajectory(&d, spec, s, &xs).unwrap();
            for (x, v) in xs.iter().zip(traj) {
                let direct = riesz_mean(&d, spec, s, *x).unwrap();
                assert!((v - direct).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn remark_iii_residuals() {
        let single = DirichletSeries::finite(&[(1.0, c(2.0))], "single").unwrap();
        let r = remark_basic_iii_check(&single, 1.0, c(0.0), c(2.0), 3).unwrap();
        assert!(r.iter().all(|(_, v)| *v == 0.0));

        let d = power_ones();
        let limit = c(1.0 / (std::f64::consts::E - 1.0));
        let r = remark_basic_iii_check(&d, 1.0, c(1.0), limit, 30).unwrap();
        for (n, v) in &r {
            // |Σ_{j≤N} e^{−j} − 1/(e−1)| = e^{−N}/(e−1), weight 1/(N+1)
            let want = (-(*n as f64)).exp() / (std::f64::consts::E - 1.0) / (*n as f64 + 1.0);
            assert!((v - want).abs() < 1e-15 + 1e-12 * want);
        }

        let zero_first = DirichletSeries::finite(&[(0.0, c(1.0)), (0.5, c(1.0))], "z").unwrap();
        assert!(remark_basic_iii_check(&zero_first, 1.0, c(0.0), c(2.0), 2).is_ok());
    }

    #[test]
    fn json_schema() {
        let text = r#"{"label":"eta","frequency":{"label":"ordinary","prefix":[],"generator":{"kind":"log"}},
                       "coefficients":{"kind":"alternating","data":null},"germ_order":null}"#;
        let d = DirichletSeries::from_json_str(text).unwrap();
        assert_eq!(d.coefficient(4).unwrap(), c(-1.0));
        let text = r#"{"label":"t","frequency":{"label":"f","prefix":[1,2,3],"generator":{"kind":"none"}},
                       "coefficients":{"kind":"table","data":[1.0,[0.0,2.0],3]},"germ_order":1.0}"#;
        let d = DirichletSeries::from_json_str(text).unwrap();
        assert_eq!(d.coefficient(2).unwrap(), Complex64::new(0.0, 2.0));
        assert_eq!(d.len(), Some(3));
        let back = DirichletSeries::from_json(&d.to_json().unwrap()).unwrap();
        assert_eq!(back.coefficient(3).unwrap(), c(3.0));
        let text = r#"{"label":"e","frequency":{"label":"p","prefix":[],"generator":{"kind":"power"}},
                       "coefficients":{"kind":"expr","data":{"re":"1/n^2","terms":50}}}"#;
        let d = DirichletSeries::from_json_str(text).unwrap();
        assert!((d.coefficient(3).unwrap() - 1.0 / 9.0).norm() < 1e-15);
        assert_eq!(d.len(), Some(50));
        assert!(DirichletSeries::from_json_str("{").is_err());
    }
}
