//! Plumbing shared by the `riesz-lab` binary: argument parsing, inputs, artifacts, exit codes.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::catalog::{catalog_entry, Oracle};
use crate::error::{Error, Result};
use crate::grid::linspace;
use crate::series::{partial_sum, DirichletSeries};
use crate::spaces::EvalGrid;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;

/// Exit status for an error: numerical failures give 2, everything else 1.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::TruncationTooSmall { .. }
        | Error::TailDominates { .. }
        | Error::SingularityUnresolved { .. }
        | Error::NotReached { .. }
        | Error::PrecisionLoss { .. }
        | Error::EvaluationFailure { .. }
        | Error::ZeroNorm { .. }
        | Error::ToleranceFailure(_) => EXIT_NUMERICAL,
        _ => EXIT_VALIDATION,
    }
}

/// Parses `a+bi`, `a-bi`, `a`, `bi`, `i` and `-i` (spaces ignored, `j` accepted for `i`).
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let bad = || Error::Parse(format!("`{text}` is not a complex number of the form a+bi"));
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect::<String>().replace('j', "i");
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // split at the last sign that is not the leading one or part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len()).rev().find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re_part, im_part) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("", body),
    };
    let re = if re_part.is_empty() { 0.0 } else { re_part.parse::<f64>().map_err(|_| bad())? };
    let im = match im_part {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other.parse::<f64>().map_err(|_| bad())?,
    };
    if !re.is_finite() || !im.is_finite() {
        return Err(bad());
    }
    Ok(Complex64::new(re, im))
}

pub fn format_complex(z: Complex64) -> String {
    if z.im < 0.0 || (z.im == 0.0 && z.im.is_sign_negative()) {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

fn parse_fields(text: &str, n: usize, what: &str) -> Result<Vec<String>> {
    let parts: Vec<String> = text.split(':').map(|p| p.trim().to_string()).collect();
    if parts.len() != n {
        return Err(Error::Parse(format!("{what} `{text}` needs {n} colon-separated fields")));
    }
    Ok(parts)
}

fn parse_num<T: std::str::FromStr>(text: &str, what: &str) -> Result<T> {
    text.parse().map_err(|_| Error::Parse(format!("bad {what} `{text}`")))
}

/// `lo:hi:count`, log-spaced.
pub fn parse_sigma_grid(text: &str) -> Result<(f64, f64, usize)> {
    let p = parse_fields(text, 3, "sigma grid")?;
    let (lo, hi, n) = (parse_num(&p[0], "sigma")?, parse_num(&p[1], "sigma")?, parse_num(&p[2], "count")?);
    if !(lo > 0.0 && hi >= lo && n >= 1) {
        return Err(Error::InvalidArgument(format!("sigma grid `{text}` needs 0 < lo <= hi and count >= 1")));
    }
    Ok((lo, hi, n))
}

/// `T:count`, linear on `[−T, T]`.
pub fn parse_t_grid(text: &str) -> Result<(f64, usize)> {
    let p = parse_fields(text, 2, "t grid")?;
    let (t, n) = (parse_num(&p[0], "T")?, parse_num(&p[1], "count")?);
    if !(t >= 0.0 && n >= 1) {
        return Err(Error::InvalidArgument(format!("t grid `{text}` needs T >= 0 and count >= 1")));
    }
    Ok((t, n))
}

pub fn eval_grid(sigma: &str, t: &str) -> Result<EvalGrid> {
    let (lo, hi, ns) = parse_sigma_grid(sigma)?;
    let (t_max, nt) = parse_t_grid(t)?;
    EvalGrid::standard((lo, hi), ns, t_max, nt)
}

pub fn t_values(t: &str) -> Result<Vec<f64>> {
    let (t_max, nt) = parse_t_grid(t)?;
    Ok(linspace(-t_max, t_max, nt))
}

/// A series together with its limit function when one is known.
pub struct Input {
    pub name: String,
    pub series: DirichletSeries,
    pub limit: Option<Oracle>,
}

impl Input {
    /// Catalog entry by name.
    pub fn catalog(name: &str) -> Result<Self> {
        let e = catalog_entry(name)?;
        let limit = if e.has_oracle() {
            let entry = e.clone();
            Some(Arc::new(move |s| entry.oracle(s)) as Oracle)
        } else {
            None
        };
        Ok(Self { name: e.name, series: e.series, limit })
    }

    /// Series JSON file.
    pub fn file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
        Ok(Self::from_series(DirichletSeries::from_json_str(&text)?))
    }

    /// Wraps a series; a finite series is its own limit function.
    pub fn from_series(series: DirichletSeries) -> Self {
        let limit = series.len().map(|_| {
            let s2 = series.clone();
            Arc::new(move |s| partial_sum(&s2, s, f64::INFINITY)) as Oracle
        });
        Self { name: series.label().to_string(), series, limit }
    }

    pub fn limit(&self) -> Result<&Oracle> {
        self.limit
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument(format!("no limit function is known for `{}`", self.name)))
    }
}

/// Output envelope: every artifact records the tool version and the full parameter set.
#[derive(Debug, Serialize)]
pub struct Artifact<T: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub result: T,
}

impl<T: Serialize> Artifact<T> {
    pub fn new(command: &str, parameters: BTreeMap<String, String>, result: T) -> Self {
        Self { tool: "riesz-lab", version: env!("CARGO_PKG_VERSION"), command: command.into(), parameters, result }
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Writes `text` to `path`, or to stdout when no path is given.
pub fn emit(text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", p.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

/// Applies `RIESZ_LAB_THREADS` to the global rayon pool.
pub fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var("RIESZ_LAB_THREADS") else { return Ok(()) };
    let n: usize = v.trim().parse().map_err(|_| Error::Parse(format!("RIESZ_LAB_THREADS must be a positive integer, got `{v}`")))?;
    if n == 0 {
        return Err(Error::InvalidArgument("RIESZ_LAB_THREADS must be positive".into()));
    }
    // a second initialisation in the same process is harmless
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        let cases = [
            ("1+0i", (1.0, 0.0)),
            ("0.5-3i", (0.5, -3.0)),
            ("2", (2.0, 0.0)),
            ("-i", (0.0, -1.0)),
            ("3.5i", (0.0, 3.5)),
            ("1e-3+2e+1i", (1e-3, 20.0)),
            ("-1 + i", (-1.0, 1.0)),
        ];
        for (text, (re, im)) in cases {
            assert_eq!(parse_complex(text).unwrap(), Complex64::new(re, im), "{text}");
        }
        for bad in ["", "i+1", "1+2", "abc", "1++2i"] {
            assert!(parse_complex(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::UnknownCatalogEntry("x".into())), EXIT_VALIDATION);
        assert_eq!(exit_code(&Error::TailDominates { tail_bound: 1.0, tolerance: 0.1 }), EXIT_NUMERICAL);
    }

    #[test]
    fn grids() {
        assert_eq!(parse_sigma_grid("0.01:10:5").unwrap(), (0.01, 10.0, 5));
        assert!(parse_sigma_grid("0:1:3").is_err());
        assert_eq!(parse_t_grid("30:61").unwrap(), (30.0, 61));
        assert!(parse_t_grid("30").is_err());
    }
}
