use std::ffi::{CStr, CString};
use std::ptr;

use sothardy_ffi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = sothardy_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn circle(json: &str) -> *mut SothardyCircle {
    let mut h = ptr::null_mut();
    let status = unsafe { sothardy_circle_from_json(cstr(json).as_ptr(), 0, &mut h) };
    assert_eq!(status, SothardyStatus::Ok);
    h
}

fn disk(json: &str) -> *mut SothardyDisk {
    let mut h = ptr::null_mut();
    let status = unsafe { sothardy_disk_from_json(cstr(json).as_ptr(), 0, &mut h) };
    assert_eq!(status, SothardyStatus::Ok);
    h
}

fn take_string(p: *mut std::ffi::c_char) -> String {
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned();
    unsafe { sothardy_string_free(p) };
    s
}

#[test]
fn shape_and_fourier_coefficients() {
    let h = circle(r#"{"type":"fourier_polynomial","coeffs":{"-1":[[[1,0],[0,0]]],"2":[[[0,0],[0,2.5]]]}}"#);
    let (mut rows, mut cols) = (0, 0);
    assert_eq!(unsafe { sothardy_circle_shape(h, &mut rows, &mut cols) }, SothardyStatus::Ok);
    assert_eq!((rows, cols), (1, 2));

    let mut buf = [f64::NAN; 4];
    assert_eq!(
        unsafe { sothardy_circle_fourier_coefficient(h, 2, 16, buf.as_mut_ptr(), buf.len()) },
        SothardyStatus::Ok
    );
    let expect = [0.0, 0.0, 0.0, 2.5];
    for (a, b) in buf.iter().zip(expect) {
        assert!((a - b).abs() < 1e-14, "{buf:?}");
    }
    assert_eq!(
        unsafe { sothardy_circle_fourier_coefficient(h, -1, 16, buf.as_mut_ptr(), buf.len()) },
        SothardyStatus::Ok
    );
    assert!((buf[0] - 1.0).abs() < 1e-14 && buf[1].abs() < 1e-14);
    unsafe { sothardy_circle_free(h) };
}

#[test]
fn small_buffers_are_rejected() {
    let h = circle(r#"{"type":"rotation_symbol","dim":3}"#);
    let mut buf = [0.0; 17];
    let status = unsafe { sothardy_circle_eval(h, 1.0, 0.0, buf.as_mut_ptr(), buf.len()) };
    assert_eq!(status, SothardyStatus::BufferTooSmall);
    assert!(last_error().contains("18"));
    unsafe { sothardy_circle_free(h) };
}

#[test]
fn poisson_and_disk_evaluation_agree() {
    let h = circle(r#"{"type":"matrix_polynomial","dim":2,"degree":3,"seed":5}"#);
    let mut d = ptr::null_mut();
    assert_eq!(unsafe { sothardy_disk_from_circle(h, &mut d) }, SothardyStatus::Ok);
    let (mut a, mut b) = ([0.0; 8], [0.0; 8]);
    unsafe {
        assert_eq!(sothardy_circle_poisson(h, 0.3, -0.4, a.as_mut_ptr(), 8), SothardyStatus::Ok);
        assert_eq!(sothardy_disk_eval(d, 0.3, -0.4, b.as_mut_ptr(), 8), SothardyStatus::Ok);
        sothardy_disk_free(d);
        sothardy_circle_free(h);
    }
    assert_eq!(a, b);
}

#[test]
fn norms_of_the_rotation_symbol() {
    let h = circle(r#"{"type":"rotation_symbol","dim":4}"#);
    let mut v = 0.0;
    unsafe {
        for p in [1.0, 2.0, 3.5, f64::INFINITY] {
            assert_eq!(sothardy_circle_lp_sot_norm(h, p, 64, &mut v), SothardyStatus::Ok);
            assert!((v - 1.0).abs() < 1e-12, "p = {p}: {v}");
        }
        assert_eq!(sothardy_circle_strong_l2_norm(h, 64, &mut v), SothardyStatus::Ok);
        assert!((v - 1.0).abs() < 1e-12);
        assert_eq!(sothardy_circle_lp_sot_norm(h, 0.5, 64, &mut v), SothardyStatus::InvalidArgument);
        sothardy_circle_free(h);
    }
}

#[test]
fn evaluation_functional_norm_below_one() {
    let d = disk(r#"{"type":"evaluation_functional","dim":6}"#);
    let mut v = 0.0;
    unsafe {
        assert_eq!(sothardy_disk_hp_norm(d, 2.0, 6, 256, &mut v), SothardyStatus::Ok);
        sothardy_disk_free(d);
    }
    let r: f64 = 1.0 - 2f64.powi(-6);
    let closed = ((1.0 - r.powi(12)) / (1.0 - r * r)).sqrt();
    assert!((v - closed).abs() < 1e-10, "{v} vs {closed}");
}

#[test]
fn json_roundtrip_through_handles() {
    let h = circle(r#"{"type":"arc_multiplier","dim":3}"#);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { sothardy_circle_to_json(h, &mut s) }, SothardyStatus::Ok);
    let json = take_string(s);
    let g = circle(&json);
    let (mut a, mut b) = ([0.0; 18], [0.0; 18]);
    let z = (0.6f64, 0.8f64);
    unsafe {
        sothardy_circle_eval(h, z.0, z.1, a.as_mut_ptr(), 18);
        sothardy_circle_eval(g, z.0, z.1, b.as_mut_ptr(), 18);
        sothardy_circle_free(h);
        sothardy_circle_free(g);
    }
    assert_eq!(a, b);

    let d = disk(r#"{"type":"diagonal_disk","dim":2}"#);
    assert_eq!(unsafe { sothardy_disk_to_json(d, &mut s) }, SothardyStatus::Ok);
    let doc: serde_json::Value = serde_json::from_str(&take_string(s)).unwrap();
    assert!(doc["type"].is_string());
    unsafe { sothardy_disk_free(d) };
}

#[test]
fn error_codes_and_messages() {
    let mut h = ptr::null_mut();
    unsafe {
        assert_eq!(sothardy_circle_from_json(ptr::null(), 0, &mut h), SothardyStatus::NullPointer);
        assert_eq!(
            sothardy_circle_from_json(cstr(r#"{"type":"spiral"}"#).as_ptr(), 0, &mut h),
            SothardyStatus::Schema
        );
        assert!(last_error().contains("$.type"));
        assert_eq!(
            sothardy_circle_from_json(cstr(r#"{"type":"diagonal_disk","dim":2}"#).as_ptr(), 0, &mut h),
            SothardyStatus::InvalidArgument
        );
        let bad = [0xffu8, 0];
        assert_eq!(sothardy_circle_from_json(bad.as_ptr().cast(), 0, &mut h), SothardyStatus::InvalidUtf8);
        assert!(h.is_null());

        let c = circle(r#"{"type":"rotation_symbol","dim":2}"#);
        let mut buf = [0.0; 8];
        assert_eq!(sothardy_circle_poisson(c, 1.0, 0.0, buf.as_mut_ptr(), 8), SothardyStatus::Domain);
        assert_eq!(sothardy_circle_fourier_coefficient(c, 0, 1, buf.as_mut_ptr(), 8), SothardyStatus::InvalidArgument);
        assert_eq!(sothardy_circle_shape(c, ptr::null_mut(), ptr::null_mut()), SothardyStatus::NullPointer);
        assert_eq!(sothardy_circle_shape(c, &mut 0, &mut 0), SothardyStatus::Ok);
        assert!(sothardy_last_error_message().is_null());
        sothardy_circle_free(c);
        sothardy_circle_free(ptr::null_mut());
        sothardy_string_free(ptr::null_mut());
    }
}

fn run(command: &str, spec: &str, claim: Option<&str>, opts: &SothardyRunOptions) -> (SothardyStatus, String, bool) {
    let (command, spec) = (cstr(command), cstr(spec));
    let claim = claim.map(cstr);
    let mut out = ptr::null_mut();
    let mut passed = false;
    let status = unsafe {
        sothardy_run(
            command.as_ptr(),
            spec.as_ptr(),
            claim.as_ref().map_or(ptr::null(), |c| c.as_ptr()),
            opts,
            &mut out,
            &mut passed,
        )
    };
    let text = if out.is_null() { String::new() } else { take_string(out) };
    (status, text, passed)
}

#[test]
fn verify_reports_match_the_command_line() {
    let opts = sothardy_run_options_default();
    let (status, text, passed) = run("verify", r#"{"type":"rotation_symbol","dim":2}"#, Some("adjoint"), &opts);
    assert_eq!(status, SothardyStatus::Ok);
    assert!(passed);
    let report: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(report["claim"], "adjoint");
    assert_eq!(report["verdict"]["passed"], true);

    let again = run("verify", r#"{"type":"rotation_symbol","dim":2}"#, Some("adjoint"), &opts);
    assert_eq!(again.1, text);

    let (status, _, _) = run("verify", r#"{"type":"rotation_symbol","dim":2}"#, None, &opts);
    assert_eq!(status, SothardyStatus::Validation);
    let (status, _, _) = run("verify", r#"{"type":"rotation_symbol","dim":2}"#, Some("magic"), &opts);
    assert_eq!(status, SothardyStatus::InvalidArgument);
}

#[test]
fn run_options_reach_the_command() {
    let mut opts = sothardy_run_options_default();
    opts.has_zeta = true;
    opts.zeta_re = 0.5;
    opts.csv = true;
    let (status, text, passed) = run("poisson", r#"{"type":"rotation_symbol","dim":2}"#, None, &opts);
    assert_eq!(status, SothardyStatus::Ok);
    assert!(passed);
    assert!(text.lines().count() >= 3, "{text}");

    let mut opts = sothardy_run_options_default();
    opts.grid = 16;
    opts.p = f64::INFINITY;
    let (status, text, _) = run("norm", r#"{"type":"arc_multiplier","dim":2}"#, None, &opts);
    assert_eq!(status, SothardyStatus::Ok);
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["p"], "inf");

    let (status, _, _) = run("poisson", r#"{"type":"rotation_symbol","dim":2}"#, None, &sothardy_run_options_default());
    assert_eq!(status, SothardyStatus::Validation);
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(sothardy_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
