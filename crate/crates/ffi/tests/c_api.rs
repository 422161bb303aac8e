use std::ffi::{c_char, CString};
use std::ptr;

use riesz_lab_ffi::*;

fn last_error() -> String {
    let mut buf = vec![0 as c_char; 256];
    let n = unsafe { rl_last_error(buf.as_mut_ptr(), buf.len()) };
    let bytes: Vec<u8> = buf[..n.min(255)].iter().map(|&c| c as u8).collect();
    String::from_utf8(bytes).unwrap()
}

fn catalog(name: &str) -> *mut RlSeries {
    let name = CString::new(name).unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { rl_series_catalog(name.as_ptr(), &mut h) }, RlStatus::Ok);
    assert!(!h.is_null());
    h
}

#[test]
fn geometric_limit_through_the_handle() {
    let h = catalog("geometric");
    let (mut re, mut im, mut tail, mut conv) = (0.0, 0.0, 0.0, false);
    let st = unsafe { rl_riesz_limit(h, 1.0, RlKind::First, 1.0, 0.0, 200.0, 64, 1e-3, &mut re, &mut im, &mut tail, &mut conv) };
    assert_eq!(st, RlStatus::Ok);
    assert!(conv);
    assert!((re - 1.0 / (1f64.exp() - 1.0)).abs() < 1e-9 && im.abs() < 1e-12);

    let (mut lre, mut lim) = (0.0, 0.0);
    assert_eq!(unsafe { rl_limit(h, 1.0, 0.0, &mut lre, &mut lim) }, RlStatus::Ok);
    assert!((lre - re).abs() < 1e-9);
    unsafe { rl_series_free(h) };
}

#[test]
fn finite_series_mean_and_perron() {
    // 1 + e^{-s}
    let lambda = [0.0, 1.0];
    let re = [1.0, 1.0];
    let im = [0.0, 0.0];
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { rl_series_finite(lambda.as_ptr(), re.as_ptr(), im.as_ptr(), 2, &mut h) }, RlStatus::Ok);

    // first kind, k = 1, s = 0, x = 2: 1 + (1 − 1/2) = 1.5
    let (mut vr, mut vi) = (0.0, 0.0);
    assert_eq!(unsafe { rl_riesz_mean(h, 1.0, RlKind::First, 0.0, 0.0, 2.0, &mut vr, &mut vi) }, RlStatus::Ok);
    assert!((vr - 1.5).abs() < 1e-15 && vi == 0.0);

    // S_x^2(0) = x² + (x − 1)² at x = 2.5
    let (mut pr, mut pi, mut tail) = (0.0, 0.0, 0.0);
    assert_eq!(unsafe { rl_perron(h, 2.0, 2.5, 1e-3, &mut pr, &mut pi, &mut tail) }, RlStatus::Ok);
    assert!((pr - 8.5).abs() < 1e-3, "{pr}");
    assert!(tail >= 0.0);
    unsafe { rl_series_free(h) };
}

#[test]
fn abscissa_of_zeta() {
    let h = catalog("zeta");
    let mut v = 0.0;
    assert_eq!(unsafe { rl_abscissa(h, 0.0, RlKind::First, 400, &mut v) }, RlStatus::Ok);
    assert!((v - 1.0).abs() < 0.05, "{v}");
    unsafe { rl_series_free(h) };
}

#[test]
fn error_codes_and_messages() {
    let name = CString::new("no-such-series").unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { rl_series_catalog(name.as_ptr(), &mut h) }, RlStatus::UnknownEntry);
    assert!(h.is_null());
    assert!(last_error().contains("no-such-series"));

    assert_eq!(unsafe { rl_series_catalog(ptr::null(), &mut h) }, RlStatus::NullPointer);
    let (mut a, mut b) = (0.0, 0.0);
    assert_eq!(unsafe { rl_riesz_mean(ptr::null(), 1.0, RlKind::First, 0.0, 0.0, 1.0, &mut a, &mut b) }, RlStatus::NullPointer);

    // decreasing frequencies
    let lambda = [1.0, 0.5];
    let one = [1.0, 1.0];
    assert_eq!(unsafe { rl_series_finite(lambda.as_ptr(), one.as_ptr(), one.as_ptr(), 2, &mut h) }, RlStatus::InvalidArgument);

    // zeta oracle refuses re s ≤ 1.1
    let z = catalog("zeta");
    assert_eq!(unsafe { rl_limit(z, 0.5, 0.0, &mut a, &mut b) }, RlStatus::Domain);
    // negative order
    assert_eq!(unsafe { rl_riesz_mean(z, -1.0, RlKind::First, 2.0, 0.0, 3.0, &mut a, &mut b) }, RlStatus::InvalidArgument);
    unsafe { rl_series_free(z) };

    // truncated copy keeps the terminator and reports the full length
    let mut small = [1 as c_char; 4];
    let n = unsafe { rl_last_error(small.as_mut_ptr(), small.len()) };
    assert!(n > 3);
    assert_eq!(small[3], 0);
}

#[test]
fn perron_tail_failure_is_numerical() {
    let h = catalog("geometric");
    let (mut a, mut b, mut t) = (0.0, 0.0, 0.0);
    // a tolerance no truncation can meet
    let st = unsafe { rl_perron(h, 1.0, 1.5, 1e-300, &mut a, &mut b, &mut t) };
    assert_eq!(st, RlStatus::Numerical, "{}", last_error());
    unsafe { rl_series_free(h) };
}

#[test]
fn free_null_is_harmless() {
    unsafe { rl_series_free(ptr::null_mut()) };
}

#[test]
fn version_string() {
    let v = unsafe { std::ffi::CStr::from_ptr(rl_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_is_valid_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/riesz_lab.h");
    let Ok(out) = std::process::Command::new("cc").args(["-fsyntax-only", "-x", "c", "-std=c99", "-Wall", "-Werror", header]).output() else {
        eprintln!("no C compiler; skipping");
        return;
    };
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn c_program_links_and_runs() {
    let dir = env!("CARGO_MANIFEST_DIR");
    // the static library sits next to this test binary's profile directory
    let lib_dir = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).parent().unwrap().join("debug");
    if !lib_dir.join("libriesz_lab_ffi.a").exists() {
        eprintln!("static library not built for this profile; skipping");
        return;
    }
    let exe = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("ffi_smoke");
    let Ok(out) = std::process::Command::new("cc")
        .arg(format!("{dir}/tests/c/smoke.c"))
        .arg(format!("-I{dir}/include"))
        .arg(lib_dir.join("libriesz_lab_ffi.a"))
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .output()
    else {
        eprintln!("no C compiler; skipping");
        return;
    };
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let run = std::process::Command::new(&exe).output().unwrap();
    assert!(run.status.success(), "exit {:?}", run.status.code());
    assert!(String::from_utf8_lossy(&run.stdout).contains("0.69"));
}
