//! C interface to `riesz-lab`.
//!
//! Series are opaque `RlSeries` handles created by one of the `rl_series_*` constructors and
//! released with `rl_series_free`. Every call returns an `RlStatus`; on failure the message
//! of the most recent error on the calling thread is available from `rl_last_error`.
//! Complex numbers cross the boundary as separate real and imaginary parts.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use riesz_lab::abscissa::{bohr_cahen_pointwise, default_window};
use riesz_lab::cli::Input;
use riesz_lab::grid::linspace;
use riesz_lab::series::{riesz_limit_with, riesz_mean};
use riesz_lab::transforms::{perron_summatory, QuadratureConfig};
use riesz_lab::{Complex64, DirichletSeries, Error, LimitEstimator, RieszKind, RieszSpec};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    UnknownEntry = 4,
    Domain = 5,
    /// A numerical tolerance was not met.
    Numerical = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RlKind {
    First = 0,
    Second = 1,
}

/// Opaque series handle.
pub struct RlSeries {
    input: Input,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(err: &Error) -> RlStatus {
    match err {
        Error::Parse(_) => RlStatus::Parse,
        Error::UnknownCatalogEntry(_) => RlStatus::UnknownEntry,
        Error::Domain(_) => RlStatus::Domain,
        e if riesz_lab::cli::exit_code(e) == riesz_lab::cli::EXIT_NUMERICAL => RlStatus::Numerical,
        _ => RlStatus::InvalidArgument,
    }
}

enum Failure {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

/// Runs `body`, converting errors and panics into a status and a stored message.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> RlStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => RlStatus::Ok,
        Ok(Err(Failure::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            RlStatus::NullPointer
        }
        Ok(Err(Failure::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            RlStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure::Lib(Error::Parse(format!("{what} is not valid UTF-8"))))
}

unsafe fn handle<'a>(h: *const RlSeries) -> Result<&'a RlSeries, Failure> {
    h.as_ref().ok_or(Failure::Null("series handle"))
}

unsafe fn out<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or(Failure::Null(what))
}

fn spec(k: f64, kind: RlKind) -> Result<RieszSpec, Failure> {
    let kind = match kind {
        RlKind::First => RieszKind::First,
        RlKind::Second => RieszKind::Second,
    };
    Ok(RieszSpec::new(k, kind)?)
}

fn boxed(input: Input) -> *mut RlSeries {
    Box::into_raw(Box::new(RlSeries { input }))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn rl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the last error message of this thread into `buf` (NUL-terminated, truncated to
/// `len`) and returns the full message length excluding the terminator.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn rl_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr(), buf.cast::<u8>(), n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Opens a catalog entry by name. The handle carries the entry's limit function.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rl_series_catalog(name: *const c_char, out_handle: *mut *mut RlSeries) -> RlStatus {
    guard(|| {
        let name = str_arg(name, "name")?;
        let slot = out(out_handle, "out")?;
        *slot = boxed(Input::catalog(name)?);
        Ok(())
    })
}

/// Reads a series JSON file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rl_series_from_file(path: *const c_char, out_handle: *mut *mut RlSeries) -> RlStatus {
    guard(|| {
        let path = str_arg(path, "path")?;
        let slot = out(out_handle, "out")?;
        *slot = boxed(Input::file(Path::new(path))?);
        Ok(())
    })
}

/// Finite series `Σ (re[i] + i·im[i]) e^{−lambda[i] s}` with strictly increasing `lambda`.
///
/// # Safety
/// `lambda`, `re` and `im` must each point to `n` readable doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rl_series_finite(
    lambda: *const f64,
    re: *const f64,
    im: *const f64,
    n: usize,
    out_handle: *mut *mut RlSeries,
) -> RlStatus {
    guard(|| {
        if n > 0 && (lambda.is_null() || re.is_null() || im.is_null()) {
            return Err(Failure::Null("term arrays"));
        }
        let slot = out(out_handle, "out")?;
        let terms: Vec<(f64, Complex64)> = (0..n).map(|i| (*lambda.add(i), Complex64::new(*re.add(i), *im.add(i)))).collect();
        let input = Input::from_series(DirichletSeries::finite(&terms, "ffi")?);
        *slot = boxed(input);
        Ok(())
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `h` must come from an `rl_series_*` constructor and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn rl_series_free(h: *mut RlSeries) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Riesz mean of order `k` at `s` and `x`.
///
/// # Safety
/// `h` must be a live handle and the output pointers valid.
#[no_mangle]
pub unsafe extern "C" fn rl_riesz_mean(
    h: *const RlSeries,
    k: f64,
    kind: RlKind,
    s_re: f64,
    s_im: f64,
    x: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> RlStatus {
    guard(|| {
        let h = handle(h)?;
        let v = riesz_mean(&h.input.series, spec(k, kind)?, Complex64::new(s_re, s_im), x)?;
        *out(out_re, "out_re")? = v.re;
        *out(out_im, "out_im")? = v.im;
        Ok(())
    })
}

/// Limit of the Riesz means sampled at `samples` points of `[x_max/4, x_max]`. First-kind
/// means are extrapolated in `1/x`. `converged` reports whether the last-quartile spread is
/// below `tolerance`; non-convergence is not an error.
///
/// # Safety
/// `h` must be a live handle and the output pointers valid.
#[no_mangle]
pub unsafe extern "C" fn rl_riesz_limit(
    h: *const RlSeries,
    k: f64,
    kind: RlKind,
    s_re: f64,
    s_im: f64,
    x_max: f64,
    samples: usize,
    tolerance: f64,
    out_re: *mut f64,
    out_im: *mut f64,
    out_tail: *mut f64,
    out_converged: *mut bool,
) -> RlStatus {
    guard(|| {
        let h = handle(h)?;
        if samples < 2 {
            return Err(Error::InvalidArgument("samples must be at least 2".into()).into());
        }
        let estimator = match kind {
            RlKind::First => LimitEstimator::InverseX,
            RlKind::Second => LimitEstimator::LastValue,
        };
        let xs = linspace(x_max / 4.0, x_max, samples);
        let r = riesz_limit_with(&h.input.series, spec(k, kind)?, Complex64::new(s_re, s_im), &xs, tolerance, estimator)?;
        *out(out_re, "out_re")? = r.limit_estimate.re;
        *out(out_im, "out_im")? = r.limit_estimate.im;
        *out(out_tail, "out_tail")? = r.tail_delta;
        *out(out_converged, "out_converged")? = r.converged;
        Ok(())
    })
}

/// Pointwise Bohr–Cahen estimate over the default window of the series.
///
/// # Safety
/// `h` must be a live handle and `out_value` valid.
#[no_mangle]
pub unsafe extern "C" fn rl_abscissa(h: *const RlSeries, k: f64, kind: RlKind, samples: usize, out_value: *mut f64) -> RlStatus {
    guard(|| {
        let h = handle(h)?;
        let xs = default_window(&h.input.series, samples);
        *out(out_value, "out_value")? = bohr_cahen_pointwise(&h.input.series, spec(k, kind)?, &xs)?.value;
        Ok(())
    })
}

/// Limit function at `s` (catalog oracle, or the sum itself for a finite series).
///
/// # Safety
/// `h` must be a live handle and the output pointers valid.
#[no_mangle]
pub unsafe extern "C" fn rl_limit(h: *const RlSeries, s_re: f64, s_im: f64, out_re: *mut f64, out_im: *mut f64) -> RlStatus {
    guard(|| {
        let h = handle(h)?;
        let v = h.input.limit()?(Complex64::new(s_re, s_im))?;
        *out(out_re, "out_re")? = v.re;
        *out(out_im, "out_im")? = v.im;
        Ok(())
    })
}

/// Summatory function `S_x^k(0)` from the limit function by Perron's formula with default
/// contour and truncation. Returns `RL_STATUS_NUMERICAL` when the tail bound exceeds
/// `tolerance`.
///
/// # Safety
/// `h` must be a live handle and the output pointers valid.
#[no_mangle]
pub unsafe extern "C" fn rl_perron(
    h: *const RlSeries,
    k: f64,
    x: f64,
    tolerance: f64,
    out_re: *mut f64,
    out_im: *mut f64,
    out_tail: *mut f64,
) -> RlStatus {
    guard(|| {
        let h = handle(h)?;
        let f = h.input.limit()?;
        let cfg = QuadratureConfig { tolerance, ..Default::default() };
        let r = perron_summatory(|s| f(s), k, x, &cfg)?;
        *out(out_re, "out_re")? = r.value.re;
        *out(out_im, "out_im")? = r.value.im;
        *out(out_tail, "out_tail")? = r.tail_bound;
        Ok(())
    })
}
