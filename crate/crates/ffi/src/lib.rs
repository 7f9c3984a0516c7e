//! C ABI for the engine: opaque parameter handles, status codes, and
//! JSON report strings.
//!
//! Every function returning a string allocates it with
//! [`dsv_string_free`] as the matching deallocator. All pointers must be
//! valid or null; null inputs are rejected with `DSV_ERR_NULL` rather
//! than dereferenced.

use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use dsv_core::report::{
    case_report, classify_report, jacobi_report, structure_report, verify_maps_report, ClassifyKind,
};
use dsv_core::{parse_rat, Error, HalfInt, Mode, ModularConfig, Params};

/// Status codes returned by every fallible entry point.
pub const DSV_OK: c_int = 0;
/// A required pointer argument was null.
pub const DSV_ERR_NULL: c_int = 1;
/// An argument failed to parse (rational literal, shift, or mode).
pub const DSV_ERR_PARSE: c_int = 2;
/// The parameters are outside the requested map's coset.
pub const DSV_ERR_INCOMPATIBLE: c_int = 3;
/// The computation ran but a verification check did not pass; the JSON
/// report is still produced.
pub const DSV_ERR_FAILED: c_int = 4;
/// Internal error (modular mismatch, allocation failure, panic).
pub const DSV_ERR_INTERNAL: c_int = 5;

/// Opaque parameter handle; create with `dsv_params_new`, release with
/// `dsv_params_free`.
pub struct DsvParams {
    inner: Params,
}

fn status_of(e: &Error) -> c_int {
    match e {
        Error::ParameterIncompatible(_) => DSV_ERR_INCOMPATIBLE,
        Error::PreconditionViolated(_) => DSV_ERR_PARSE,
        _ => DSV_ERR_INTERNAL,
    }
}

/// # Safety
/// `ptr` must be a valid, NUL-terminated C string.
unsafe fn read_str<'a>(ptr: *const c_char) -> Option<&'a str> {
    if ptr.is_null() {
        return None;
    }
    CStr::from_ptr(ptr).to_str().ok()
}

fn write_string(out: *mut *mut c_char, text: String) -> c_int {
    match CString::new(text) {
        Ok(s) => {
            unsafe { *out = s.into_raw() };
            DSV_OK
        }
        Err(_) => DSV_ERR_INTERNAL,
    }
}

/// Parses the three parameters (rational literals; `s` must be "0" or
/// "1/2") into a new handle stored in `*out`.
///
/// # Safety
/// String arguments must be valid NUL-terminated C strings; `out` must
/// be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dsv_params_new(
    lambda: *const c_char,
    mu: *const c_char,
    s: *const c_char,
    out: *mut *mut DsvParams,
) -> c_int {
    if out.is_null() {
        return DSV_ERR_NULL;
    }
    let (Some(lambda), Some(mu), Some(s)) = (read_str(lambda), read_str(mu), read_str(s)) else {
        return DSV_ERR_NULL;
    };
    let (Some(lambda), Some(mu)) = (parse_rat(lambda), parse_rat(mu)) else {
        return DSV_ERR_PARSE;
    };
    let s = match s {
        "0" => HalfInt::ZERO,
        "1/2" => HalfInt::HALF,
        _ => return DSV_ERR_PARSE,
    };
    match Params::new(lambda, mu, s) {
        Ok(p) => {
            *out = Box::into_raw(Box::new(DsvParams { inner: p }));
            DSV_OK
        }
        Err(e) => status_of(&e),
    }
}

/// Releases a handle created by `dsv_params_new`. Null is a no-op.
///
/// # Safety
/// `p` must be null or a pointer previously returned by
/// `dsv_params_new` that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn dsv_params_free(p: *mut DsvParams) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Releases a string returned by any report function. Null is a no-op.
///
/// # Safety
/// `s` must be null or a string previously returned by a report
/// function that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn dsv_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

unsafe fn with_report(
    p: *const DsvParams,
    out: *mut *mut c_char,
    f: impl FnOnce(&Params) -> Result<(String, bool), Error>,
) -> c_int {
    if p.is_null() || out.is_null() {
        return DSV_ERR_NULL;
    }
    let params = &(*p).inner;
    let result = catch_unwind(AssertUnwindSafe(|| f(params)));
    match result {
        Ok(Ok((json, passed))) => {
            let status = write_string(out, json);
            if status != DSV_OK {
                status
            } else if passed {
                DSV_OK
            } else {
                DSV_ERR_FAILED
            }
        }
        Ok(Err(e)) => status_of(&e),
        Err(_) => DSV_ERR_INTERNAL,
    }
}

fn to_json<T: serde::Serialize>(report: &T) -> Result<String, Error> {
    serde_json::to_string(report)
        .map_err(|e| Error::PreconditionViolated(format!("serialization: {e}")))
}

/// Writes the case-split report for the handle's parameters.
///
/// # Safety
/// `p` and `out` must be valid pointers as documented on
/// `dsv_params_new` and `dsv_string_free`.
#[no_mangle]
pub unsafe extern "C" fn dsv_case_json(p: *const DsvParams, out: *mut *mut c_char) -> c_int {
    with_report(p, out, |params| Ok((to_json(&case_report(params))?, true)))
}

/// Checks the Jacobi identity on the window of the given radius.
///
/// # Safety
/// As for `dsv_case_json`.
#[no_mangle]
pub unsafe extern "C" fn dsv_jacobi_json(
    p: *const DsvParams,
    window: i64,
    out: *mut *mut c_char,
) -> c_int {
    with_report(p, out, |params| {
        let report = jacobi_report(params, window);
        let ok = report.ok;
        Ok((to_json(&report)?, ok))
    })
}

/// Center / derived / abelianization / centralizer report on the window.
///
/// # Safety
/// As for `dsv_case_json`.
#[no_mangle]
pub unsafe extern "C" fn dsv_structure_json(
    p: *const DsvParams,
    window: i64,
    margin: i64,
    out: *mut *mut c_char,
) -> c_int {
    with_report(p, out, |params| {
        let report = structure_report(params, window, margin)?;
        let ok = report.consistent;
        Ok((to_json(&report)?, ok))
    })
}

/// Residual verification of the exceptional maps defined at the
/// parameters; `DSV_ERR_INCOMPATIBLE` when none is.
///
/// # Safety
/// As for `dsv_case_json`.
#[no_mangle]
pub unsafe extern "C" fn dsv_verify_maps_json(
    p: *const DsvParams,
    window: i64,
    out: *mut *mut c_char,
) -> c_int {
    with_report(p, out, |params| {
        let report = verify_maps_report(params, window)?;
        let ok = report.ok;
        Ok((to_json(&report)?, ok))
    })
}

unsafe fn classify(
    p: *const DsvParams,
    kind: ClassifyKind,
    window: i64,
    mode: c_int,
    seed: u64,
    out: *mut *mut c_char,
) -> c_int {
    with_report(p, out, |params| {
        let mode = match mode {
            0 => Mode::Full,
            1 => Mode::Graded,
            other => {
                return Err(Error::PreconditionViolated(format!(
                    "mode must be 0 (full) or 1 (graded), got {other}"
                )))
            }
        };
        let cfg = ModularConfig::from_seed(seed);
        let report = classify_report(kind, params, window, mode, &cfg)?;
        let passed = report.passed();
        Ok((to_json(&report)?, passed))
    })
}

/// Classifies skew-symmetric biderivations; `mode` is 0 for full, 1 for
/// graded.
///
/// # Safety
/// As for `dsv_case_json`.
#[no_mangle]
pub unsafe extern "C" fn dsv_classify_bider_json(
    p: *const DsvParams,
    window: i64,
    mode: c_int,
    seed: u64,
    out: *mut *mut c_char,
) -> c_int {
    classify(p, ClassifyKind::Biderivation, window, mode, seed, out)
}

/// Classifies linear commuting maps; `mode` is 0 for full, 1 for graded.
///
/// # Safety
/// As for `dsv_case_json`.
#[no_mangle]
pub unsafe extern "C" fn dsv_classify_commuting_json(
    p: *const DsvParams,
    window: i64,
    mode: c_int,
    seed: u64,
    out: *mut *mut c_char,
) -> c_int {
    classify(p, ClassifyKind::Commuting, window, mode, seed, out)
}
