//! C ABI for `sothardy-core`.
//!
//! Functions are built from JSON spec documents into opaque handles. Every
//! entry point returns a [`SothardyStatus`]; on failure the message is kept in
//! a thread-local slot readable through [`sothardy_last_error_message`].
//!
//! Matrices cross the boundary as row-major arrays of interleaved
//! `(re, im)` doubles, so a `rows x cols` value needs `2 * rows * cols` slots.
//! Strings returned by the library are released with [`sothardy_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use sothardy::cli::{circle_json, disk_json, parse_spec, run_spec, Claim, Command, Format, RunConfig};
use sothardy::gallery::GalleryObject;
use sothardy::norms::{hp_disk_norm, l2_strong_norm, lp_sot_norm, Exponent};
use sothardy::transforms::{fourier_coefficient, strong_poisson};
use sothardy::{eval_circle, eval_disk, make_grid, CircleFunction, DiskFunction, HardyError, MatrixValue, RadiusLadder, C64};

/// Status codes returned by every entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SothardyStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    BufferTooSmall = 3,
    InvalidArgument = 10,
    InvalidValue = 11,
    Domain = 12,
    NotRepresentable = 13,
    ShapeMismatch = 14,
    Precondition = 15,
    ConvergenceFailure = 16,
    Schema = 17,
    Validation = 18,
    Io = 19,
    Panic = 99,
}

impl From<&HardyError> for SothardyStatus {
    fn from(err: &HardyError) -> Self {
        match err {
            HardyError::InvalidArgument(_) => SothardyStatus::InvalidArgument,
            HardyError::InvalidValue(_) => SothardyStatus::InvalidValue,
            HardyError::Domain(_) => SothardyStatus::Domain,
            HardyError::NotRepresentable(_) => SothardyStatus::NotRepresentable,
            HardyError::ShapeMismatch { .. } => SothardyStatus::ShapeMismatch,
            HardyError::Precondition(_) => SothardyStatus::Precondition,
            HardyError::ConvergenceFailure(_) => SothardyStatus::ConvergenceFailure,
            HardyError::Schema { .. } => SothardyStatus::Schema,
            HardyError::Validation(_) => SothardyStatus::Validation,
            HardyError::Io(_) => SothardyStatus::Io,
        }
    }
}

/// A function on the unit circle.
pub struct SothardyCircle {
    inner: CircleFunction,
}

/// A function on the open unit disk.
pub struct SothardyDisk {
    inner: DiskFunction,
}

/// Options for [`sothardy_run`]. Zero selects the per-command default; so
/// does NaN for `tol`.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct SothardyRunOptions {
    pub grid: u32,
    pub ladder: u32,
    /// Norm exponent; `INFINITY` selects the sup norm.
    pub p: f64,
    pub seed: u64,
    pub tol: f64,
    pub has_zeta: bool,
    pub zeta_re: f64,
    pub zeta_im: f64,
    /// Render the CSV table instead of JSON.
    pub csv: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(SothardyStatus, String);

impl From<HardyError> for Failure {
    fn from(err: HardyError) -> Self {
        Failure(SothardyStatus::from(&err), err.to_string())
    }
}

type FfiResult<T> = std::result::Result<T, Failure>;

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn guard(body: impl FnOnce() -> FfiResult<()>) -> SothardyStatus {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => SothardyStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {message}"));
            SothardyStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(SothardyStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> FfiResult<&'a str> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| Failure(SothardyStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> FfiResult<&'a T> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> FfiResult<()> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_matrix(m: &MatrixValue, out: *mut f64, len: usize) -> FfiResult<()> {
    if out.is_null() {
        return Err(null("output buffer"));
    }
    let (rows, cols) = m.shape();
    let need = 2 * rows * cols;
    if len < need {
        return Err(Failure(
            SothardyStatus::BufferTooSmall,
            format!("buffer holds {len} doubles, {need} needed"),
        ));
    }
    let buf = std::slice::from_raw_parts_mut(out, need);
    for i in 0..rows {
        for j in 0..cols {
            let z = m.get(i, j);
            buf[2 * (i * cols + j)] = z.re;
            buf[2 * (i * cols + j) + 1] = z.im;
        }
    }
    Ok(())
}

unsafe fn write_string(s: String, out: *mut *mut c_char) -> FfiResult<()> {
    let c = CString::new(s).map_err(|e| Failure(SothardyStatus::InvalidValue, e.to_string()))?;
    write_out(out, c.into_raw(), "output string")
}

fn exponent(p: f64) -> FfiResult<Exponent> {
    if p == f64::INFINITY {
        Ok(Exponent::INF)
    } else {
        Ok(Exponent::finite(p)?)
    }
}

fn parse_object(json: &str, seed: u64) -> FfiResult<GalleryObject> {
    Ok(parse_spec(json.as_bytes(), seed)?.build()?)
}

/// Message of the last failure on this thread, or null. The pointer stays
/// valid until the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn sothardy_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn sothardy_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and must not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sothardy_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a circle function from a spec document. Specs that describe a disk
/// function are rejected with `InvalidArgument`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sothardy_circle_from_json(
    json: *const c_char,
    seed: u64,
    out: *mut *mut SothardyCircle,
) -> SothardyStatus {
    guard(|| match parse_object(read_str(json, "json")?, seed)? {
        GalleryObject::Circle(inner) => write_out(out, Box::into_raw(Box::new(SothardyCircle { inner })), "out"),
        GalleryObject::Disk(_) => Err(Failure(
            SothardyStatus::InvalidArgument,
            "spec describes a disk function".into(),
        )),
    })
}

/// Builds a disk function from a spec document. Circle specs are extended
/// to the disk by the strong Poisson integral.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sothardy_disk_from_json(
    json: *const c_char,
    seed: u64,
    out: *mut *mut SothardyDisk,
) -> SothardyStatus {
    guard(|| {
        let inner = match parse_object(read_str(json, "json")?, seed)? {
            GalleryObject::Circle(f) => DiskFunction::poisson_extension(f),
            GalleryObject::Disk(h) => h,
        };
        write_out(out, Box::into_raw(Box::new(SothardyDisk { inner })), "out")
    })
}

/// Strong Poisson extension of a circle function.
///
/// # Safety
/// `circle` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sothardy_disk_from_circle(
    circle: *const SothardyCircle,
    out: *mut *mut SothardyDisk,
) -> SothardyStatus {
    guard(|| {
        let inner = DiskFunction::poisson_extension(deref(circle, "circle")?.inner.clone());
        write_out(out, Box::into_raw(Box::new(SothardyDisk { inner })), "out")
    })
}

/// # Safety
/// `circle` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sothardy_circle_free(circle: *mut SothardyCircle) {
    if !circle.is_null() {
        drop(Box::from_raw(circle));
    }
}

/// # Safety
/// `disk` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sothardy_disk_free(disk: *mut SothardyDisk) {
    if !disk.is_null() {
        drop(Box::from_raw(disk));
    }
}

/// # Safety
/// `circle` must be a live handle; `rows` and `cols` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn sothardy_circle_shape(
    circle: *const SothardyCircle,
    rows: *mut usize,
    cols: *mut usize,
) -> SothardyStatus {
    guard(|| {
        let (r, c) = deref(circle, "circle")?.inner.shape();
        write_out(rows, r, "rows")?;
        write_out(cols, c, "cols")
    })
}

/// # Safety
/// `disk` must be a live handle; `rows` and `cols` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn sothardy_disk_shape(
    disk: *const SothardyDisk,
    rows: *mut usize,
    cols: *mut usize,
) -> SothardyStatus {
    guard(|| {
        let (r, c) = deref(disk, "disk")?.inner.shape();
        write_out(rows, r, "rows")?;
        write_out(cols, c, "cols")
    })
}

/// Value at the point `re + i im` of the unit circle.
///
/// # Safety
/// `circle` must be a live handle and `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn sothardy_circle_eval(
    circle: *const SothardyCircle,
    re: f64,
    im: f64,
    out: *mut f64,
    len: usize,
) -> SothardyStatus {
    guard(|| {
        let value = eval_circle(&deref(circle, "circle")?.inner, C64::new(re, im))?;
        write_matrix(&value, out, len)
    })
}

/// Value at the point `re + i im` of the open disk.
///
/// # Safety
/// `disk` must be a live handle and `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn sothardy_disk_eval(
    disk: *const SothardyDisk,
    re: f64,
    im: f64,
    out: *mut f64,
    len: usize,
) -> SothardyStatus {
    guard(|| {
        let value = eval_disk(&deref(disk, "disk")?.inner, C64::new(re, im))?;
        write_matrix(&value, out, len)
    })
}

/// Fourier coefficient of index `n` by trapezoidal quadrature on `grid_n` nodes.
///
/// # Safety
/// `circle` must be a live handle and `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn sothardy_circle_fourier_coefficient(
    circle: *const SothardyCircle,
    n: i64,
    grid_n: usize,
    out: *mut f64,
    len: usize,
) -> SothardyStatus {
    guard(|| {
        let value = fourier_coefficient(&deref(circle, "circle")?.inner, n, &make_grid(grid_n)?)?;
        write_matrix(&value, out, len)
    })
}

/// Strong Poisson integral at `re + i im` in the open disk.
///
/// # Safety
/// `circle` must be a live handle and `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn sothardy_circle_poisson(
    circle: *const SothardyCircle,
    re: f64,
    im: f64,
    out: *mut f64,
    len: usize,
) -> SothardyStatus {
    guard(|| {
        let value = strong_poisson(&deref(circle, "circle")?.inner, C64::new(re, im))?;
        write_matrix(&value, out, len)
    })
}

/// `L^p_sot` norm on a grid of `grid_n` nodes; `p = INFINITY` gives the sup norm.
///
/// # Safety
/// `circle` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sothardy_circle_lp_sot_norm(
    circle: *const SothardyCircle,
    p: f64,
    grid_n: usize,
    out: *mut f64,
) -> SothardyStatus {
    guard(|| {
        let value = lp_sot_norm(&deref(circle, "circle")?.inner, exponent(p)?, &make_grid(grid_n)?)?;
        write_out(out, value, "out")
    })
}

/// Strong `L^2` norm on a grid of `grid_n` nodes.
///
/// # Safety
/// `circle` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sothardy_circle_strong_l2_norm(
    circle: *const SothardyCircle,
    grid_n: usize,
    out: *mut f64,
) -> SothardyStatus {
    guard(|| {
        let value = l2_strong_norm(&deref(circle, "circle")?.inner, &make_grid(grid_n)?)?;
        write_out(out, value, "out")
    })
}

/// `H^p` norm over the radii `1 - 2^-k`, `k = 1..=ladder_k`; writes the
/// supremum over the ladder.
///
/// # Safety
/// `disk` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sothardy_disk_hp_norm(
    disk: *const SothardyDisk,
    p: f64,
    ladder_k: usize,
    grid_n: usize,
    out: *mut f64,
) -> SothardyStatus {
    guard(|| {
        let profile = hp_disk_norm(
            &deref(disk, "disk")?.inner,
            exponent(p)?,
            &RadiusLadder::new(ladder_k)?,
            &make_grid(grid_n)?,
        )?;
        write_out(out, profile.final_value, "out")
    })
}

/// Serializes a circle function as a spec document.
///
/// # Safety
/// `circle` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sothardy_circle_to_json(
    circle: *const SothardyCircle,
    out: *mut *mut c_char,
) -> SothardyStatus {
    guard(|| write_string(circle_json(&deref(circle, "circle")?.inner).to_string(), out))
}

/// Serializes a disk function as a spec document.
///
/// # Safety
/// `disk` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sothardy_disk_to_json(disk: *const SothardyDisk, out: *mut *mut c_char) -> SothardyStatus {
    guard(|| write_string(disk_json(&deref(disk, "disk")?.inner).to_string(), out))
}

/// Defaults: every resolution from the command, `p = 2`, seed 0.
#[no_mangle]
pub extern "C" fn sothardy_run_options_default() -> SothardyRunOptions {
    SothardyRunOptions {
        grid: 0,
        ladder: 0,
        p: 2.0,
        seed: 0,
        tol: f64::NAN,
        has_zeta: false,
        zeta_re: 0.0,
        zeta_im: 0.0,
        csv: false,
    }
}

fn parse_command(s: &str) -> FfiResult<Command> {
    Ok(match s {
        "fourier" => Command::Fourier,
        "poisson" => Command::Poisson,
        "norm" => Command::Norm,
        "boundary" => Command::Boundary,
        "gallery" => Command::Gallery,
        "verify" => Command::Verify,
        other => return Err(Failure(SothardyStatus::InvalidArgument, format!("unknown command {other:?}"))),
    })
}

fn parse_claim(s: &str) -> FfiResult<Claim> {
    Ok(match s {
        "isometry" => Claim::Isometry,
        "contraction" => Claim::Contraction,
        "adjoint" => Claim::Adjoint,
        "roundtrip" => Claim::Roundtrip,
        "containment" => Claim::Containment,
        "poisson_convergence" => Claim::PoissonConvergence,
        other => return Err(Failure(SothardyStatus::InvalidArgument, format!("unknown claim {other:?}"))),
    })
}

/// Runs a command-line command on an in-memory spec and returns the rendered
/// artifact. `claim` is required for `verify` and may be null otherwise.
/// `passed` is false when a verification or boundary extraction failed; the
/// status is still `Ok` in that case.
///
/// # Safety
/// String arguments must be NUL-terminated or null where allowed; `options`
/// may be null for the defaults; `out` and `passed` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn sothardy_run(
    command: *const c_char,
    spec_json: *const c_char,
    claim: *const c_char,
    options: *const SothardyRunOptions,
    out: *mut *mut c_char,
    passed: *mut bool,
) -> SothardyStatus {
    guard(|| {
        let command = parse_command(read_str(command, "command")?)?;
        let spec_json = read_str(spec_json, "spec_json")?;
        let opts = options.as_ref().copied().unwrap_or_else(|| sothardy_run_options_default());
        if out.is_null() || passed.is_null() {
            return Err(null("output pointer"));
        }
        let mut config = RunConfig::new(command, "<memory>");
        config.grid_n = (opts.grid > 0).then_some(opts.grid as usize);
        config.ladder_k = (opts.ladder > 0).then_some(opts.ladder as usize);
        config.p = exponent(opts.p)?;
        config.seed = opts.seed;
        config.tol = (!opts.tol.is_nan() && opts.tol != 0.0).then_some(opts.tol);
        config.zeta = opts.has_zeta.then(|| C64::new(opts.zeta_re, opts.zeta_im));
        config.format = if opts.csv { Format::Csv } else { Format::Json };
        if !claim.is_null() {
            config.claim = Some(parse_claim(read_str(claim, "claim")?)?);
        }
        let spec = parse_spec(spec_json.as_bytes(), config.seed)?;
        let outcome = run_spec(&config, &spec)?;
        let bytes = outcome.artifact.render(config.format)?;
        let text = String::from_utf8(bytes).map_err(|e| Failure(SothardyStatus::InvalidUtf8, e.to_string()))?;
        write_string(text, out)?;
        write_out(passed, outcome.passed, "passed")
    })
}
