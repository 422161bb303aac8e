//! Named test series with independent evaluations of their limit functions.
//!
//! `eta_oracle` accelerates the alternating series directly and never touches the ζ
//! routines at moderate heights, so the two oracles can be checked against each other
//! through `η(s) = (1 − 2^{1−s}) ζ(s)`.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frequency::{Frequency, Generator};
use crate::series::{Coefficients, DirichletSeries, SeriesJson};

/// `B_{2j}/(2j)!` for `j = 1..=25`.
const BERNOULLI_OVER_FACTORIAL: [f64; 25] = [
    0.083_333_333_333_333_33,
    -0.001_388_888_888_888_889,
    3.306_878_306_878_307e-5,
    -8.267_195_767_195_768e-7,
    2.087_675_698_786_81e-8,
    -5.284_190_138_687_493e-10,
    1.3382536530684679e-11,
    -3.3896802963225829e-13,
    8.586_062_056_277_845e-15,
    -2.174_868_698_558_062e-16,
    5.5090028283602295e-18,
    -1.3954464685812523e-19,
    3.534_707_039_629_467e-21,
    -8.953_517_427_037_547e-23,
    2.267_952_452_337_683e-24,
    -5.744_790_668_872_202e-26,
    1.455_172_475_614_865e-27,
    -3.6859949406653102e-29,
    9.336_734_257_095_045e-31,
    -2.365_022_415_700_63e-32,
    5.990_671_762_482_134e-34,
    -1.5174548844682903e-35,
    3.843_758_125_454_189e-37,
    -9.736353072646691e-39,
    2.466247044200681e-40,
];

/// Heights up to which the alternating acceleration is used for η.
const BORWEIN_MAX_HEIGHT: f64 = 40.0;
const BORWEIN_MIN_RE: f64 = -3.0;

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// `n^{−s}` for integer `n ≥ 1`.
fn npow(n: f64, s: Complex64) -> Complex64 {
    (-s * n.ln()).exp()
}

/// ζ(s) by direct summation with an Euler–Maclaurin tail; valid for every `s ≠ 1`.
fn zeta_em(s: Complex64) -> Complex64 {
    let big_n = (s.norm() / 2.0).ceil().max(0.0) + 12.0 + (-s.re).max(0.0);
    let n_terms = big_n as usize;
    let mut sum = Complex64::new(0.0, 0.0);
    for n in 1..n_terms {
        sum += npow(n as f64, s);
    }
    let nn = n_terms as f64;
    let n_pow = npow(nn, s);
    sum += nn * n_pow / (s - 1.0) + 0.5 * n_pow;
    // Σ c_j s(s+1)…(s+2j−2) N^{−s−2j+1}
    let mut rising = s; // s(s+1)…(s+2j−2), starts at j = 1
    let mut n_factor = n_pow / nn; // N^{−s−1}
    for (j, c) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        let term = *c * rising * n_factor;
        sum += term;
        if term.norm() < 1e-17 * sum.norm() {
            break;
        }
        let jj = (j + 1) as f64;
        rising *= (s + 2.0 * jj - 1.0) * (s + 2.0 * jj);
        n_factor /= nn * nn;
    }
    sum
}

/// Borwein's acceleration of `Σ (−1)^{k} (k+1)^{−s}` with `n` terms.
fn eta_borwein(s: Complex64, n: usize) -> Complex64 {
    let nf = n as f64;
    // dₖ = n Σ_{i≤k} (n+i−1)! 4^i / ((n−i)! (2i)!), normalised by d_n on the fly
    let mut e = 1.0f64;
    let mut d = Vec::with_capacity(n + 1);
    let mut acc = e;
    d.push(acc);
    for i in 1..=n {
        let fi = i as f64;
        e *= 4.0 * (nf + fi - 1.0) * (nf - fi + 1.0) / ((2.0 * fi) * (2.0 * fi - 1.0));
        acc += e;
        d.push(acc);
    }
    let dn = d[n];
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..n {
        let w = (dn - d[k]) / dn;
        let t = w * npow((k + 1) as f64, s);
        if k % 2 == 0 {
            sum += t;
        } else {
            sum -= t;
        }
    }
    sum
}

fn borwein_terms(s: Complex64) -> usize {
    (0.9 * s.im.abs()).ceil() as usize + 30 + (2.0 * (-s.re).max(0.0)).ceil() as usize
}

/// η(s) = Σ (−1)^{n+1} n^{−s}, continued to the whole plane.
///
/// Near the real axis (`|im s| ≤ 40`, `re s ≥ −3`) the alternating series is accelerated
/// directly; higher up η is evaluated as `(1 − 2^{1−s}) ζ(s)` with Euler–Maclaurin.
pub fn eta_oracle(s: Complex64) -> Result<Complex64> {
    if !(s.re.is_finite() && s.im.is_finite()) {
        return Err(Error::eval_failure(s));
    }
    if s.im.abs() <= BORWEIN_MAX_HEIGHT && s.re >= BORWEIN_MIN_RE {
        let n = borwein_terms(s);
        let a = eta_borwein(s, n);
        let b = eta_borwein(s, n + 12);
        if (a - b).norm() > 1e-9 * b.norm().max(1.0) {
            return Err(Error::PrecisionLoss { re: s.re, im: s.im });
        }
        return Ok(b);
    }
    let factor = one() - (Complex64::new(2f64.ln(), 0.0) * (one() - s)).exp();
    Ok(factor * zeta_em(s))
}

/// Riemann ζ on `re s > 1.1` by direct summation with an Euler–Maclaurin tail.
pub fn zeta_oracle(s: Complex64) -> Result<Complex64> {
    if !(s.re > 1.1) {
        return Err(Error::Domain(format!("zeta oracle requires re s > 1.1, got {s}")));
    }
    Ok(zeta_em(s))
}

/// Cesàro evaluation `(1/N) Σ_{n≤N} Σ_{j≤n} aⱼ j^{−s}` of an ordinary Dirichlet series.
pub fn cesaro_eval(series: &DirichletSeries, s: Complex64, big_n: usize) -> Result<Complex64> {
    if big_n == 0 {
        return Err(Error::InvalidArgument("Cesàro evaluation needs N >= 1".into()));
    }
    let freq = series.frequency();
    let checked = freq.prefix().len().min(8);
    let ordinary = match freq.generator() {
        Some(Generator::Log) => true,
        _ => checked > 0 && (1..=checked).all(|n| freq.get(n).is_ok_and(|l| (l - (n as f64).ln()).abs() < 1e-12)),
    };
    if !ordinary {
        return Err(Error::WrongFrequency);
    }
    let mut partial = Complex64::new(0.0, 0.0);
    let mut total = Complex64::new(0.0, 0.0);
    let mut terms = series.terms();
    for _ in 1..=big_n {
        if let Some(t) = terms.next() {
            partial += t.coeff * (-t.lambda * s).exp();
        }
        total += partial;
    }
    Ok(total / big_n as f64)
}

/// Where a recorded fact comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    /// Stated in the literature on Riesz summation of Dirichlet series.
    Published,
    /// Follows immediately from the definitions.
    Elementary,
    /// Obtained by an independent numerical computation.
    Computed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnownFact {
    pub statement: String,
    pub source: Source,
    /// Whether a desk-scale computation can check the fact.
    pub testable: bool,
}

impl KnownFact {
    fn new(statement: &str, source: Source, testable: bool) -> Self {
        Self { statement: statement.into(), source, testable }
    }
}

pub type Oracle = Arc<dyn Fn(Complex64) -> Result<Complex64> + Send + Sync>;

#[derive(Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub series: DirichletSeries,
    oracle: Option<Oracle>,
    /// The oracle is only evaluated for `re s > oracle_min_re`.
    pub oracle_min_re: f64,
    /// Abscissa of convergence of the series (`-inf` for finite sums).
    pub sigma_c: f64,
    /// Abscissa of absolute convergence.
    pub sigma_a: f64,
    pub known_facts: Vec<KnownFact>,
}

impl fmt::Debug for CatalogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CatalogEntry")
            .field("name", &self.name)
            .field("series", &self.series)
            .field("has_oracle", &self.oracle.is_some())
            .field("oracle_min_re", &self.oracle_min_re)
            .finish()
    }
}

impl CatalogEntry {
    pub fn has_oracle(&self) -> bool {
        self.oracle.is_some()
    }

    /// Evaluates the limit function; refuses points outside the validity region.
    pub fn oracle(&self, s: Complex64) -> Result<Complex64> {
        let f = self.oracle.as_ref().ok_or_else(|| Error::InvalidArgument(format!("{} has no oracle", self.name)))?;
        if !(s.re > self.oracle_min_re) {
            return Err(Error::Domain(format!(
                "{} oracle is valid for re s > {}, got {s}",
                self.name, self.oracle_min_re
            )));
        }
        f(s)
    }

    /// Oracle as an infallible closure for grid sweeps; failures become NaN.
    pub fn limit_fn(&self) -> impl Fn(Complex64) -> Complex64 + Sync + '_ {
        move |s| self.oracle(s).unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    }

    pub fn to_json(&self) -> CatalogEntryJson {
        let inf_to_null = |v: f64| if v.is_finite() { Some(v) } else { None };
        CatalogEntryJson {
            name: self.name.clone(),
            series: self.series.to_json(),
            has_oracle: self.has_oracle(),
            oracle_min_re: inf_to_null(self.oracle_min_re),
            sigma_c: inf_to_null(self.sigma_c),
            sigma_a: inf_to_null(self.sigma_a),
            known_facts: self.known_facts.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntryJson {
    pub name: String,
    pub series: Option<SeriesJson>,
    pub has_oracle: bool,
    /// `null` stands for `-inf`.
    pub oracle_min_re: Option<f64>,
    pub sigma_c: Option<f64>,
    pub sigma_a: Option<f64>,
    pub known_facts: Vec<KnownFact>,
}

/// `1/(e^s − 1) = Σ_{n≥1} e^{−ns}`.
pub fn geometric_limit(s: Complex64) -> Complex64 {
    one() / s.exp_m1()
}

trait ExpM1 {
    fn exp_m1(self) -> Self;
}

impl ExpM1 for Complex64 {
    fn exp_m1(self) -> Self {
        if self.norm() < 1e-5 {
            self + 0.5 * self * self
        } else {
            self.exp() - 1.0
        }
    }
}

fn single(lambda: f64, name: &str) -> CatalogEntry {
    let series = DirichletSeries::finite(&[(lambda, one())], name).expect("single term");
    let oracle: Oracle = Arc::new(move |s: Complex64| Ok((-lambda * s).exp()));
    CatalogEntry {
        name: name.into(),
        series,
        oracle: Some(oracle),
        oracle_min_re: f64::NEG_INFINITY,
        sigma_c: f64::NEG_INFINITY,
        sigma_a: f64::NEG_INFINITY,
        known_facts: vec![
            KnownFact::new("finite sum: every abscissa is -inf", Source::Elementary, true),
            KnownFact::new("Riesz means equal the term once x > lambda_1", Source::Elementary, true),
        ],
    }
}

fn geometric() -> CatalogEntry {
    let series = DirichletSeries::new(Frequency::power(), Coefficients::Ones, Some(0.0), "geometric").expect("geometric");
    CatalogEntry {
        name: "geometric".into(),
        series,
        oracle: Some(Arc::new(|s| Ok(geometric_limit(s)))),
        oracle_min_re: 0.0,
        sigma_c: 0.0,
        sigma_a: 0.0,
        known_facts: vec![
            KnownFact::new("limit function 1/(e^s - 1) on re s > 0", Source::Elementary, true),
            KnownFact::new("sigma_c = sigma_u = sigma_a = 0", Source::Elementary, true),
            KnownFact::new("for lambda = (n) the spaces H_inf,l all coincide with H_inf", Source::Published, false),
        ],
    }
}

fn eta() -> CatalogEntry {
    let series = DirichletSeries::new(Frequency::ordinary(), Coefficients::Alternating, Some(0.0), "eta").expect("eta");
    CatalogEntry {
        name: "eta".into(),
        series,
        oracle: Some(Arc::new(eta_oracle)),
        oracle_min_re: f64::NEG_INFINITY,
        sigma_c: 0.0,
        sigma_a: 1.0,
        known_facts: vec![
            KnownFact::new("eta is entire; the series converges on re s > 0", Source::Published, true),
            KnownFact::new("order mu_eta(sigma) = 1/2 - sigma for sigma < 0", Source::Published, true),
            KnownFact::new("order mu_eta(sigma) = 0 for sigma > 1", Source::Published, true),
            KnownFact::new("eta belongs to H_inf,l((log n)) for l > 1/2", Source::Published, false),
            KnownFact::new(
                "eta is not in H_inf,l((log n)) for l < 1/2 (Bohr's inequality); not decidable on a finite grid",
                Source::Published,
                false,
            ),
            KnownFact::new("eta(1) = log 2, eta(0) = 1/2, eta(2) = pi^2/12", Source::Computed, true),
        ],
    }
}

fn zeta() -> CatalogEntry {
    let series = DirichletSeries::new(Frequency::ordinary(), Coefficients::Ones, None, "zeta").expect("zeta");
    CatalogEntry {
        name: "zeta".into(),
        series,
        oracle: Some(Arc::new(zeta_oracle)),
        oracle_min_re: 1.1,
        sigma_c: 1.0,
        sigma_a: 1.0,
        known_facts: vec![
            KnownFact::new("pointwise limit of sum n^-s on re s > 1", Source::Published, true),
            KnownFact::new("sigma_c = sigma_a = 1", Source::Elementary, true),
        ],
    }
}

fn zeta_translate(shift: f64) -> CatalogEntry {
    let coeffs = Coefficients::Rule(Arc::new(move |n: usize| Complex64::new((n as f64).powf(-shift), 0.0)));
    let name = format!("zeta-translate-{shift}");
    let series = DirichletSeries::new(Frequency::ordinary(), coeffs, Some(0.0), name.clone()).expect("zeta translate");
    CatalogEntry {
        name,
        series,
        oracle: Some(Arc::new(move |s: Complex64| zeta_oracle(s + shift))),
        oracle_min_re: 1.1 - shift,
        sigma_c: 1.0 - shift,
        sigma_a: 1.0 - shift,
        known_facts: vec![
            KnownFact::new("limit function zeta(s + shift)", Source::Elementary, true),
            KnownFact::new("bounded on re s > 0 by zeta(shift)", Source::Elementary, true),
        ],
    }
}

/// Terms of the absolutely convergent sqrt-log sample series used by its oracle.
const SQRTLOG_ORACLE_TERMS: usize = 20_000;

fn sqrt_log_sample() -> CatalogEntry {
    let coeffs = Coefficients::Rule(Arc::new(|n: usize| Complex64::new((n as f64).powi(-3), 0.0)));
    let series =
        DirichletSeries::new(Frequency::sqrt_log(), coeffs, Some(0.0), "sqrtlog-cubic").expect("sqrt-log series");
    let oracle: Oracle = Arc::new(|s: Complex64| {
        if s.re < 0.0 {
            return Err(Error::Domain("sqrt-log oracle needs re s >= 0".into()));
        }
        // |tail| <= Σ_{n>N} n^{-3} < 1/(2N²)
        let mut acc = Complex64::new(0.0, 0.0);
        for n in (1..=SQRTLOG_ORACLE_TERMS).rev() {
            let x = n as f64;
            acc += x.powi(-3) * (-x.ln().sqrt() * s).exp();
        }
        Ok(acc)
    });
    CatalogEntry {
        name: "sqrtlog-cubic".into(),
        series,
        oracle: Some(oracle),
        oracle_min_re: -1e-12,
        sigma_c: f64::NEG_INFINITY,
        sigma_a: f64::NEG_INFINITY,
        known_facts: vec![
            KnownFact::new("(sqrt(log n)) satisfies (LC) but not (BC)", Source::Published, true),
            KnownFact::new("L((sqrt(log n))) = +inf", Source::Elementary, true),
            KnownFact::new("coefficients n^-3 make the series absolutely convergent on re s >= 0", Source::Elementary, true),
        ],
    }
}

fn two_term() -> CatalogEntry {
    let series = DirichletSeries::finite(&[(1.0, Complex64::new(2.0, 0.0)), (2.0, Complex64::new(3.0, 0.0))], "two-term")
        .expect("two-term");
    CatalogEntry {
        name: "two-term".into(),
        series,
        oracle: Some(Arc::new(|s: Complex64| Ok(2.0 * (-s).exp() + 3.0 * (-2.0 * s).exp()))),
        oracle_min_re: f64::NEG_INFINITY,
        sigma_c: f64::NEG_INFINITY,
        sigma_a: f64::NEG_INFINITY,
        known_facts: vec![KnownFact::new("f(s) = 2e^-s + 3e^-2s", Source::Elementary, true)],
    }
}

/// All named entries.
pub fn catalog_list() -> Vec<CatalogEntry> {
    vec![
        single(0.0, "single-0"),
        single(1.0, "single-1"),
        two_term(),
        geometric(),
        eta(),
        zeta(),
        zeta_translate(2.0),
        sqrt_log_sample(),
    ]
}

pub fn catalog_entry(name: &str) -> Result<CatalogEntry> {
    catalog_list()
        .into_iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::UnknownCatalogEntry(name.to_string()))
}
