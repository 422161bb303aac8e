use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use riesz_lab::abscissa::{absolute_abscissa, bohr_cahen_pointwise, bohr_cahen_uniform, default_x_max, AbscissaEstimate};
use riesz_lab::catalog::{catalog_entry, catalog_list};
use riesz_lab::cli::{
    configure_threads, emit, eval_grid, exit_code, format_complex, parse_complex, t_values, Artifact, Input, EXIT_NUMERICAL,
    EXIT_OK,
};
use riesz_lab::grid::linspace;
use riesz_lab::series::{riesz_limit_with, summatory};
use riesz_lab::spaces::{norm_inf_ell, NormSpec};
use riesz_lab::transforms::{perron_summatory, recover_coefficients, QuadratureConfig};
use riesz_lab::verify::run_suite;
use riesz_lab::{Complex64, Error, LimitEstimator, Result, RieszKind, RieszSpec};

/// Terms below the largest `x` a command will sum.
const TERM_BUDGET: usize = 5_000_000;

#[derive(Parser)]
#[command(name = "riesz-lab", version, about = "Riesz means, abscissas and Perron inversion for general Dirichlet series")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Riesz limit of a series at one point
    Eval(EvalArgs),
    /// Bohr-Cahen abscissa estimates
    Abscissa(AbscissaArgs),
    /// Summatory function from the limit function by Perron's formula
    Perron(PerronArgs),
    /// First coefficients from the limit function
    Recover(RecoverArgs),
    /// Weighted sup norm of the limit function on a grid
    Norm(NormArgs),
    /// List catalog entries, or print one as JSON
    Catalog(CatalogArgs),
    /// Run the invariant suite over the catalog
    Verify(VerifyArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Catalog entry name
    #[arg(long, conflicts_with = "input", required_unless_present = "input")]
    catalog: Option<String>,
    /// Series JSON file
    #[arg(long)]
    input: Option<PathBuf>,
}

impl InputArgs {
    fn load(&self) -> Result<Input> {
        match (&self.catalog, &self.input) {
            (Some(name), _) => Input::catalog(name),
            (None, Some(path)) => Input::file(path),
            (None, None) => Err(Error::InvalidArgument("one of --catalog or --input is required".into())),
        }
    }

    fn describe(&self) -> String {
        match (&self.catalog, &self.input) {
            (Some(name), _) => format!("catalog:{name}"),
            (None, Some(path)) => format!("file:{}", path.display()),
            _ => String::new(),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    First,
    Second,
}

impl From<Kind> for RieszKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::First => RieszKind::First,
            Kind::Second => RieszKind::Second,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Estimator {
    /// mean at the largest x
    Last,
    /// extrapolation in 1/x
    InverseX,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Which {
    Pointwise,
    Uniform,
    Absolute,
    All,
}

#[derive(Args)]
struct Output {
    /// Write the artifact here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value_t = 1.0)]
    k: f64,
    #[arg(long, value_enum, default_value = "first")]
    kind: Kind,
    /// Point a+bi
    #[arg(long, allow_hyphen_values = true)]
    s: String,
    /// Largest x of the schedule; defaults to the series' window
    #[arg(long)]
    x_max: Option<f64>,
    /// Number of schedule points on [x_max/4, x_max]
    #[arg(long, default_value_t = 64)]
    samples: usize,
    #[arg(long, default_value_t = 1e-3)]
    tolerance: f64,
    /// Defaults to inverse-x for the first kind and last for the second
    #[arg(long, value_enum)]
    estimator: Option<Estimator>,
    /// Also write the sampled trajectory as CSV (x, re, im)
    #[arg(long)]
    trajectory: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct AbscissaArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value_t = 0.0)]
    k: f64,
    #[arg(long, value_enum, default_value = "first")]
    kind: Kind,
    #[arg(long)]
    x_max: Option<f64>,
    #[arg(long, default_value_t = 400)]
    samples: usize,
    #[arg(long, value_enum, default_value = "pointwise")]
    which: Which,
    /// t grid `T:count` for the uniform estimate
    #[arg(long, default_value = "20:41")]
    grid_t: String,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct QuadArgs {
    #[arg(long, default_value_t = 2.0)]
    k: f64,
    /// Perron contour abscissa; defaults to 1/x
    #[arg(long)]
    contour_c: Option<f64>,
    /// Truncation height; chosen from the tail bound when absent
    #[arg(long = "truncation-T")]
    truncation_t: Option<f64>,
    #[arg(long, default_value_t = 1e-3)]
    tolerance: f64,
    /// Growth exponent of the limit function on the contour
    #[arg(long, default_value_t = 0.0)]
    ell: f64,
    /// Accept orders below 1
    #[arg(long)]
    allow_low_order: bool,
}

impl QuadArgs {
    fn config(&self) -> QuadratureConfig {
        QuadratureConfig {
            truncation_t: self.truncation_t,
            contour_c: self.contour_c,
            tolerance: self.tolerance,
            growth_exponent: self.ell,
            allow_low_order: self.allow_low_order,
            ..Default::default()
        }
    }

    fn record(&self, p: &mut BTreeMap<String, String>) {
        p.insert("k".into(), self.k.to_string());
        p.insert("contour_c".into(), self.contour_c.map_or("1/x".into(), |c| c.to_string()));
        p.insert("truncation_T".into(), self.truncation_t.map_or("auto".into(), |t| t.to_string()));
        p.insert("tolerance".into(), self.tolerance.to_string());
        p.insert("ell".into(), self.ell.to_string());
        p.insert("allow_low_order".into(), self.allow_low_order.to_string());
    }
}

#[derive(Args)]
struct PerronArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Comma-separated x values
    #[arg(long, value_delimiter = ',', required = true)]
    x: Vec<f64>,
    #[command(flatten)]
    quad: QuadArgs,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct RecoverArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Number of coefficients
    #[arg(long, default_value_t = 5)]
    n: usize,
    #[command(flatten)]
    quad: QuadArgs,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct NormArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value_t = 0.0)]
    ell: f64,
    /// `lo:hi:count`, log-spaced
    #[arg(long, default_value = "0.001:20:60")]
    grid_sigma: String,
    /// `T:count`, linear on [-T, T]
    #[arg(long, default_value = "50:1001")]
    grid_t: String,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct CatalogArgs {
    /// Print this entry as JSON
    name: Option<String>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct VerifyArgs {
    /// Also write the report as JSON
    #[arg(long)]
    out: Option<PathBuf>,
}

fn params(input: &InputArgs) -> BTreeMap<String, String> {
    BTreeMap::from([("input".to_string(), input.describe())])
}

fn check_budget(input: &Input, x_max: f64) -> Result<()> {
    if x_max.is_nan() || x_max <= 0.0 || x_max.is_infinite() {
        return Err(Error::NonPositiveX(x_max));
    }
    if input.series.terms_below(x_max).take(TERM_BUDGET + 1).count() > TERM_BUDGET {
        return Err(Error::InvalidArgument(format!(
            "more than {TERM_BUDGET} terms of `{}` lie below x = {x_max}; choose a smaller --x-max",
            input.name
        )));
    }
    Ok(())
}

fn write<T: Serialize>(command: &str, p: BTreeMap<String, String>, result: T, out: &Output) -> Result<()> {
    emit(&Artifact::new(command, p, result).to_json()?, out.out.as_deref())
}

#[derive(Serialize)]
struct EvalResult {
    s: String,
    limit: String,
    limit_re: f64,
    limit_im: f64,
    tail_delta: f64,
    converged: bool,
    x_max: f64,
}

fn eval(a: &EvalArgs) -> Result<i32> {
    let input = a.input.load()?;
    let s = parse_complex(&a.s)?;
    let spec = RieszSpec::new(a.k, a.kind.into())?;
    let x_max = a.x_max.unwrap_or_else(|| default_x_max(&input.series));
    check_budget(&input, x_max)?;
    if a.samples < 2 {
        return Err(Error::InvalidArgument("--samples must be at least 2".into()));
    }
    let estimator = match a.estimator.unwrap_or(match a.kind {
        Kind::First => Estimator::InverseX,
        Kind::Second => Estimator::Last,
    }) {
        Estimator::Last => LimitEstimator::LastValue,
        Estimator::InverseX => LimitEstimator::InverseX,
    };
    let schedule = linspace(x_max / 4.0, x_max, a.samples);
    let r = riesz_limit_with(&input.series, spec, s, &schedule, a.tolerance, estimator)?;

    let mut p = params(&a.input);
    p.insert("k".into(), a.k.to_string());
    p.insert("kind".into(), format!("{:?}", RieszKind::from(a.kind)).to_lowercase());
    p.insert("s".into(), format_complex(s));
    p.insert("x_max".into(), x_max.to_string());
    p.insert("samples".into(), a.samples.to_string());
    p.insert("tolerance".into(), a.tolerance.to_string());
    p.insert("estimator".into(), format!("{estimator:?}"));
    if let Some(path) = &a.trajectory {
        let mut csv = String::from("x,re,im\n");
        for (x, v) in &r.samples {
            csv.push_str(&format!("{x},{},{}\n", v.re, v.im));
        }
        emit(&csv, Some(path))?;
    }
    let converged = r.converged;
    let result = EvalResult {
        s: format_complex(s),
        limit: format_complex(r.limit_estimate),
        limit_re: r.limit_estimate.re,
        limit_im: r.limit_estimate.im,
        tail_delta: r.tail_delta,
        converged,
        x_max,
    };
    write("eval", p, result, &a.output)?;
    Ok(if converged { EXIT_OK } else { EXIT_NUMERICAL })
}

fn abscissa(a: &AbscissaArgs) -> Result<i32> {
    let input = a.input.load()?;
    let spec = RieszSpec::new(a.k, a.kind.into())?;
    let x_max = a.x_max.unwrap_or_else(|| default_x_max(&input.series));
    check_budget(&input, x_max)?;
    let xs = linspace(x_max / 100.0, x_max, a.samples.max(2));
    let mut estimates: Vec<AbscissaEstimate> = Vec::new();
    if matches!(a.which, Which::Pointwise | Which::All) {
        estimates.push(bohr_cahen_pointwise(&input.series, spec, &xs)?);
    }
    if matches!(a.which, Which::Uniform | Which::All) {
        estimates.push(bohr_cahen_uniform(&input.series, spec, &xs, &t_values(&a.grid_t)?)?);
    }
    if matches!(a.which, Which::Absolute | Which::All) {
        estimates.push(absolute_abscissa(&input.series, &xs)?);
    }
    let mut p = params(&a.input);
    p.insert("k".into(), a.k.to_string());
    p.insert("kind".into(), format!("{:?}", RieszKind::from(a.kind)).to_lowercase());
    p.insert("x_max".into(), x_max.to_string());
    p.insert("samples".into(), a.samples.to_string());
    p.insert("grid_t".into(), a.grid_t.clone());
    write("abscissa", p, estimates, &a.output)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct PerronRow {
    x: f64,
    value: String,
    value_re: f64,
    value_im: f64,
    tail_bound: f64,
    /// Direct summatory function from the coefficients, for comparison.
    direct: String,
    difference: f64,
}

fn perron(a: &PerronArgs) -> Result<i32> {
    let input = a.input.load()?;
    let f = input.limit()?;
    let cfg = a.quad.config();
    let mut rows = Vec::new();
    for &x in &a.x {
        check_budget(&input, x)?;
        let r = perron_summatory(|s| f(s), a.quad.k, x, &cfg)?;
        let direct = summatory(&input.series, a.quad.k, Complex64::new(0.0, 0.0), x)?;
        rows.push(PerronRow {
            x,
            value: format_complex(r.value),
            value_re: r.value.re,
            value_im: r.value.im,
            tail_bound: r.tail_bound,
            direct: format_complex(direct),
            difference: (r.value - direct).norm(),
        });
    }
    let mut p = params(&a.input);
    a.quad.record(&mut p);
    p.insert("x".into(), a.x.iter().map(f64::to_string).collect::<Vec<_>>().join(","));
    write("perron", p, rows, &a.output)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct RecoveredCoefficient {
    n: usize,
    lambda: f64,
    recovered: String,
    stored: Option<String>,
}

fn recover(a: &RecoverArgs) -> Result<i32> {
    let input = a.input.load()?;
    let f = input.limit()?;
    if a.n == 0 {
        return Err(Error::InvalidArgument("--n must be positive".into()));
    }
    let freq = input.series.frequency();
    let coeffs = recover_coefficients(|s| f(s), freq, a.quad.k, a.n, &a.quad.config())?;
    let rows = coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| {
            Ok(RecoveredCoefficient {
                n: i + 1,
                lambda: freq.get(i + 1)?,
                recovered: format_complex(*c),
                stored: input.series.coefficient(i + 1).ok().map(format_complex),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut p = params(&a.input);
    a.quad.record(&mut p);
    p.insert("n".into(), a.n.to_string());
    write("recover", p, rows, &a.output)?;
    Ok(EXIT_OK)
}

fn norm(a: &NormArgs) -> Result<i32> {
    let input = a.input.load()?;
    let f = input.limit()?;
    let spec = NormSpec::new(a.ell, eval_grid(&a.grid_sigma, &a.grid_t)?)?;
    let est = norm_inf_ell(|s| f(s), &spec)?;
    let mut p = params(&a.input);
    p.insert("ell".into(), a.ell.to_string());
    p.insert("grid_sigma".into(), a.grid_sigma.clone());
    p.insert("grid_t".into(), a.grid_t.clone());
    #[derive(Serialize)]
    struct NormResult {
        value: f64,
        argmax: String,
        slack: f64,
    }
    write("norm", p, NormResult { value: est.value, argmax: format_complex(est.argmax), slack: est.slack }, &a.output)?;
    Ok(EXIT_OK)
}

fn catalog(a: &CatalogArgs) -> Result<i32> {
    match &a.name {
        Some(name) => {
            let entry = catalog_entry(name)?;
            let p = BTreeMap::from([("name".to_string(), name.clone())]);
            write("catalog", p, entry.to_json(), &a.output)?;
        }
        None => {
            let names: Vec<String> = catalog_list().into_iter().map(|e| e.name).collect();
            emit(&names.join("\n"), a.output.out.as_deref())?;
        }
    }
    Ok(EXIT_OK)
}

fn verify(a: &VerifyArgs) -> Result<i32> {
    let report = run_suite();
    print!("{}", report.table());
    let ok = report.all_passed();
    println!("{}", if ok { "suite passed" } else { "suite FAILED" });
    if let Some(path) = &a.out {
        emit(&Artifact::new("verify", BTreeMap::new(), &report).to_json()?, Some(path))?;
    }
    Ok(if ok { EXIT_OK } else { EXIT_NUMERICAL })
}

fn run(cli: &Cli) -> Result<i32> {
    configure_threads()?;
    match &cli.command {
        Command::Eval(a) => eval(a),
        Command::Abscissa(a) => abscissa(a),
        Command::Perron(a) => perron(a),
        Command::Recover(a) => recover(a),
        Command::Norm(a) => norm(a),
        Command::Catalog(a) => catalog(a),
        Command::Verify(a) => verify(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // --help and --version are not errors
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let code = match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    };
    ExitCode::from(code as u8)
}
