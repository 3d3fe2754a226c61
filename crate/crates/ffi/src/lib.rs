//! C ABI over the certificate engines.
//!
//! Every fallible function returns an `i32` status (`RS_OK` on success) and
//! writes its result through an out-pointer. On failure the message is
//! available from [`rs_last_error`] until the next call on the same thread.
//! Strings handed out by this library must be released with
//! [`rs_string_free`]; handles with their matching `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;
use restricted_series::cli::parse_region;
use restricted_series::engines::verify::verify_certificate;
use restricted_series::engines::{approximate, EngineParams, PrefixConstraint, TheoremChoice};
use restricted_series::geometry::classify_lambda;
use restricted_series::oracle::{best_prefix_error, Strategy};
use restricted_series::{Certificate, CoefficientSet, Error, RegionSpec, Turns};

pub const RS_OK: i32 = 0;
/// Malformed arguments.
pub const RS_ERR_INVALID_INPUT: i32 = 1;
/// A theorem's hypothesis does not hold for the inputs.
pub const RS_ERR_NOT_APPLICABLE: i32 = 2;
/// The computation itself failed (budget, horizon, verification).
pub const RS_ERR_INTERNAL: i32 = 3;
pub const RS_ERR_NULL_POINTER: i32 = 4;
pub const RS_ERR_PANIC: i32 = 5;

pub const RS_THEOREM_AUTO: i32 = 0;
pub const RS_THEOREM_1: i32 = 1;
pub const RS_THEOREM_2: i32 = 2;
pub const RS_THEOREM_3: i32 = 3;

/// Finite coefficient set Λ.
pub struct RsLambda(CoefficientSet);

/// Region accumulating at a boundary point ζ.
pub struct RsRegion(RegionSpec);

pub struct RsCertificate(Certificate);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status(e: &Error) -> i32 {
    if e.is_hypothesis_failure() {
        RS_ERR_NOT_APPLICABLE
    } else if matches!(e, Error::InvalidInput(_)) {
        RS_ERR_INVALID_INPUT
    } else {
        RS_ERR_INTERNAL
    }
}

/// Runs `f`, recording errors and catching panics.
fn guard(f: impl FnOnce() -> Result<(), (i32, String)>) -> i32 {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RS_OK,
        Ok(Err((code, msg))) => {
            set_error(msg);
            code
        }
        Err(_) => {
            set_error("panic inside restricted_series".into());
            RS_ERR_PANIC
        }
    }
}

fn lib_err(e: Error) -> (i32, String) {
    (status(&e), format!("{}: {e}", e.reason_code()))
}

fn null(name: &str) -> (i32, String) {
    (RS_ERR_NULL_POINTER, format!("{name} is null"))
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, (i32, String)> {
    if p.is_null() {
        return Err(null(name));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (RS_ERR_INVALID_INPUT, format!("{name} is not UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, name: &str) -> Result<&'a T, (i32, String)> {
    p.as_ref().ok_or_else(|| null(name))
}

unsafe fn write_out<T>(out: *mut T, value: T, name: &str) -> Result<(), (i32, String)> {
    if out.is_null() {
        return Err(null(name));
    }
    out.write(value);
    Ok(())
}

fn to_c_string(s: String) -> Result<*mut c_char, (i32, String)> {
    CString::new(s).map(CString::into_raw).map_err(|_| (RS_ERR_INTERNAL, "string contains NUL".into()))
}

/// Message of the last failed call on this thread, or null. Owned by the
/// library; do not free.
#[no_mangle]
pub extern "C" fn rs_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn rs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds Λ from `n` interleaved `(re, im)` pairs.
///
/// # Safety
/// `re_im` must point to `2 * n` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rs_lambda_new(re_im: *const f64, n: usize, out: *mut *mut RsLambda) -> i32 {
    guard(|| {
        if re_im.is_null() {
            return Err(null("re_im"));
        }
        let raw = std::slice::from_raw_parts(re_im, 2 * n);
        let set = CoefficientSet::new(raw.chunks_exact(2).map(|p| Complex64::new(p[0], p[1]))).map_err(lib_err)?;
        write_out(out, Box::into_raw(Box::new(RsLambda(set))), "out")
    })
}

/// # Safety
/// `lambda` must come from [`rs_lambda_new`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn rs_lambda_free(lambda: *mut RsLambda) {
    if !lambda.is_null() {
        drop(Box::from_raw(lambda));
    }
}

/// Classification of Λ as a JSON string (free with [`rs_string_free`]).
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn rs_lambda_classify_json(lambda: *const RsLambda, out: *mut *mut c_char) -> i32 {
    guard(|| {
        let l = ref_arg(lambda, "lambda")?;
        let json = serde_json::to_string(&classify_lambda(&l.0)).map_err(|e| (RS_ERR_INTERNAL, e.to_string()))?;
        write_out(out, to_c_string(json)?, "out")
    })
}

/// Region from a spec such as `disk:0.95,0.1` and an angle such as
/// `turns:1/4 exact`. A null `spec` selects `disk:0.95,0.1`.
///
/// # Safety
/// Strings must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rs_region_parse(spec: *const c_char, zeta: *const c_char, out: *mut *mut RsRegion) -> i32 {
    guard(|| {
        let spec = if spec.is_null() { None } else { Some(str_arg(spec, "spec")?) };
        let zeta = Turns::parse(str_arg(zeta, "zeta")?).map_err(lib_err)?;
        let region = parse_region(spec, &zeta).map_err(lib_err)?;
        write_out(out, Box::into_raw(Box::new(RsRegion(region))), "out")
    })
}

/// # Safety
/// `region` must come from [`rs_region_parse`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn rs_region_free(region: *mut RsRegion) {
    if !region.is_null() {
        drop(Box::from_raw(region));
    }
}

/// Runs an engine (`RS_THEOREM_*`) for target `w` and accuracy `eps`, with
/// `prefix_len` fixed leading coefficients given as interleaved pairs
/// (`prefix` may be null when `prefix_len` is 0).
///
/// # Safety
/// Pointers must be valid; `prefix` must hold `2 * prefix_len` doubles.
#[no_mangle]
pub unsafe extern "C" fn rs_approximate(
    lambda: *const RsLambda,
    region: *const RsRegion,
    theorem: i32,
    w_re: f64,
    w_im: f64,
    eps: f64,
    prefix: *const f64,
    prefix_len: usize,
    out: *mut *mut RsCertificate,
) -> i32 {
    guard(|| {
        let l = ref_arg(lambda, "lambda")?;
        let r = ref_arg(region, "region")?;
        let choice = match theorem {
            RS_THEOREM_AUTO => TheoremChoice::Auto,
            RS_THEOREM_1 => TheoremChoice::One,
            RS_THEOREM_2 => TheoremChoice::Two,
            RS_THEOREM_3 => TheoremChoice::Three,
            t => return Err((RS_ERR_INVALID_INPUT, format!("unknown theorem selector {t}"))),
        };
        let values = if prefix_len == 0 {
            Vec::new()
        } else {
            if prefix.is_null() {
                return Err(null("prefix"));
            }
            std::slice::from_raw_parts(prefix, 2 * prefix_len).chunks_exact(2).map(|p| Complex64::new(p[0], p[1])).collect()
        };
        let res = approximate(
            choice,
            &l.0,
            &r.0,
            &PrefixConstraint::new(values),
            Complex64::new(w_re, w_im),
            eps,
            &EngineParams::default(),
        )
        .map_err(lib_err)?;
        write_out(out, Box::into_raw(Box::new(RsCertificate(res.certificate))), "out")
    })
}

/// Parses a certificate from JSON.
///
/// # Safety
/// `json` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rs_certificate_from_json(json: *const c_char, out: *mut *mut RsCertificate) -> i32 {
    guard(|| {
        let cert: Certificate =
            serde_json::from_str(str_arg(json, "json")?).map_err(|e| (RS_ERR_INVALID_INPUT, e.to_string()))?;
        write_out(out, Box::into_raw(Box::new(RsCertificate(cert))), "out")
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn rs_certificate_to_json(cert: *const RsCertificate, out: *mut *mut c_char) -> i32 {
    guard(|| {
        let c = ref_arg(cert, "cert")?;
        let json = serde_json::to_string(&c.0).map_err(|e| (RS_ERR_INTERNAL, e.to_string()))?;
        write_out(out, to_c_string(json)?, "out")
    })
}

/// `ε − achieved error − tail bound` as recorded in the certificate.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn rs_certificate_margin(cert: *const RsCertificate, out: *mut f64) -> i32 {
    guard(|| write_out(out, ref_arg(cert, "cert")?.0.margin(), "out"))
}

/// # Safety
/// `cert` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn rs_certificate_free(cert: *mut RsCertificate) {
    if !cert.is_null() {
        drop(Box::from_raw(cert));
    }
}

/// Independent re-check. `valid` receives 1 or 0 and `margin` the recomputed
/// margin; either may be null.
///
/// # Safety
/// Handle pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn rs_verify(
    lambda: *const RsLambda,
    cert: *const RsCertificate,
    region: *const RsRegion,
    valid: *mut i32,
    margin: *mut f64,
) -> i32 {
    guard(|| {
        let report = verify_certificate(&ref_arg(lambda, "lambda")?.0, &ref_arg(cert, "cert")?.0, &ref_arg(region, "region")?.0);
        if !valid.is_null() {
            valid.write(i32::from(report.valid));
        }
        if !margin.is_null() {
            margin.write(report.margin);
        }
        Ok(())
    })
}

/// Exact minimum of `|Σ_{n<len} λ_n τⁿ − w|` by exhaustive search.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn rs_oracle_best_error(
    lambda: *const RsLambda,
    tau_re: f64,
    tau_im: f64,
    w_re: f64,
    w_im: f64,
    len: usize,
    out: *mut f64,
) -> i32 {
    guard(|| {
        let l = ref_arg(lambda, "lambda")?;
        let r = best_prefix_error(&l.0, Complex64::new(tau_re, tau_im), Complex64::new(w_re, w_im), len, Strategy::Auto)
            .map_err(lib_err)?;
        write_out(out, r.best_error, "out")
    })
}
