//! C ABI over `sumsetlab`.
//!
//! Every fallible call returns a [`SumsetlabStatus`] and writes its result
//! through an out-pointer. On failure the message is available from
//! [`sumsetlab_last_error`] until the next call on the same thread. Handles
//! are opaque and must be released with their `_free` function; strings
//! returned by the library are released with [`sumsetlab_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use serde_json::Value;
use sumsetlab::exact::Exponent;
use sumsetlab::functional::{parse_function, ExactFunction};
use sumsetlab::group::{format_point_set, parse_point_set, sumset, PointSet};
use sumsetlab::search::{
    alpha_estimate, beta_estimate, gamma_estimate, parse_box, EstimateReport, SearchConfig, TOOL_VERSION,
};
use sumsetlab::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SumsetlabStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    Precondition = 5,
    SizeLimit = 6,
    Overflow = 7,
    Io = 8,
    Panic = 9,
}

/// Opaque finite subset of a group.
pub struct SumsetlabPointSet(PointSet);

/// Opaque finitely supported function with exact non-negative weights.
pub struct SumsetlabFunction(ExactFunction);

/// Opaque estimate with its witness and configuration.
pub struct SumsetlabReport(EstimateReport);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Failure(SumsetlabStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Parse { .. } | Error::Json(_) => SumsetlabStatus::Parse,
            Error::Precondition(_) | Error::ContextMismatch(_) | Error::Empty(_) => SumsetlabStatus::Precondition,
            Error::SizeBound { .. } | Error::SearchSpace(_) => SumsetlabStatus::SizeLimit,
            Error::Overflow(_) => SumsetlabStatus::Overflow,
            Error::Io(_) => SumsetlabStatus::Io,
            _ => SumsetlabStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn null() -> Failure {
    Failure(SumsetlabStatus::NullArgument, "null argument".into())
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SumsetlabStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            SumsetlabStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            SumsetlabStatus::Panic
        }
    }
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null());
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| Failure(SumsetlabStatus::InvalidUtf8, e.to_string()))
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(null)
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

fn owned_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|e| Failure(SumsetlabStatus::InvalidArgument, e.to_string()))
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure(SumsetlabStatus::InvalidArgument, msg.into())
}

/// Search configuration from a JSON object. Absent keys keep their defaults.
fn config_from_json(s: Option<&str>) -> Result<SearchConfig, Failure> {
    let mut cfg = SearchConfig::default();
    let Some(s) = s else { return Ok(cfg) };
    let v: Value = serde_json::from_str(s).map_err(Error::from)?;
    let obj = v.as_object().ok_or_else(|| invalid("config must be a JSON object"))?;
    let uint = |key: &str, x: &Value| x.as_u64().ok_or_else(|| invalid(format!("{key} must be a non-negative integer")));
    let string = |key: &str, x: &Value| {
        x.as_str()
            .map(str::to_owned)
            .ok_or_else(|| invalid(format!("{key} must be a string")))
    };
    for (key, x) in obj {
        match key.as_str() {
            "p" => cfg.p = Exponent::parse(&string(key, x)?)?,
            "variant" => cfg.variant = string(key, x)?.parse()?,
            "strategy" => cfg.strategy = string(key, x)?.parse()?,
            "box" => cfg.bounds = parse_box(&string(key, x)?)?,
            "max_card" => cfg.max_card = uint(key, x)? as usize,
            "seed" => cfg.seed = uint(key, x)?,
            "threads" => cfg.threads = uint(key, x)? as usize,
            "budget_ms" => cfg.budget_ms = Some(uint(key, x)?),
            "node_ceiling" => cfg.node_ceiling = uint(key, x)?,
            "restarts" => cfg.restarts = uint(key, x)? as usize,
            other => return Err(invalid(format!("unknown config key `{other}`"))),
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sumsetlab_version() -> *const c_char {
    static VERSION: &[u8] = concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes();
    debug_assert_eq!(&VERSION[..VERSION.len() - 1], TOOL_VERSION.as_bytes());
    VERSION.as_ptr().cast()
}

/// Message of the last failed call on this thread, or "" after a success.
/// Valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn sumsetlab_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must be null or a string returned by this library, released once.
#[no_mangle]
pub unsafe extern "C" fn sumsetlab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a point set in the text format (`group <rank> [mod ...]` header,
/// one point per line).
///
/// # Safety
/// `text_in` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sumsetlab_point_set_parse(
    text_in: *const c_char,
    out: *mut *mut SumsetlabPointSet,
) -> SumsetlabStatus {
    guard(|| {
        let set = parse_point_set(text(text_in)?)?;
        put(out, SumsetlabPointSet(set))
    })
}

/// Builds a subset of Z from `len` integers.
///
/// # Safety
/// `values` must point to `len` readable integers (or be null with `len == 0`).
#[no_mangle]
pub unsafe extern "C" fn sumsetlab_point_set_from_ints(
    values: *const i64,
    len: usize,
    out: *mut *mut SumsetlabPointSet,
) -> SumsetlabStatus {
    guard(|| {
        let slice = if len == 0 {
            &[][..]
        } else if values.is_null() {
            return Err(null());
        } else {
            std::slice::from_raw_parts(values, len)
        };
        put(out, SumsetlabPointSet(PointSet::from_ints(slice)))
    })
}

/// Number of points, or 0 for a null handle.
///
/// # Safety
/// `set` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sumsetlab_point_set_len(set: *const SumsetlabPointSet) -> usize {
    set.as_ref().map_or(0, |s| s.0.len())
}

/// Formats a set in the text format. Free the result with `sumsetlab_string_free`.
///
/// # Safety
/// `set` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sumsetlab_point_set_format(
    set: *const SumsetlabPointSet,
    out: *mut *mut c_char,
) -> SumsetlabStatus {
    guard(|| {
        let s = handle(set)?;
        if out.is_null() {
            return Err(null());
        }
        *out = owned_string(format_point_set(&s.0))?;
        Ok(())
    })
}

/// # Safety
/// `a` and `b` must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sumsetlab_sumset(
    a: *const SumsetlabPointSet,
    b: *const SumsetlabPointSet,
    out: *mut *mut SumsetlabPointSet,
) -> SumsetlabStatus {
    guard(|| {
        let s = sumset(&handle(a)?.0, &handle(b)?.0)?;
        put(out, SumsetlabPointSet(s))
    })
}

/// # Safety
/// `set` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sumsetlab_point_set_free(set: *mut SumsetlabPointSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Parses a function in the text format (`group` header, then one point
/// followed by its weight per line).
///
/// # Safety
/// `text_in` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sumsetlab_function_parse(
    text_in: *const c_char,
    out: *mut *mut SumsetlabFunction,
) -> SumsetlabStatus {
    guard(|| {
        let f = parse_function(text(text_in)?)?;
        put(out, SumsetlabFunction(f))
    })
}

/// # Safety
/// `f` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sumsetlab_function_free(f: *mut SumsetlabFunction) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

unsafe fn estimate_set(
    set: *const SumsetlabPointSet,
    config_json: *const c_char,
    out: *mut *mut SumsetlabReport,
    run: fn(&PointSet, &SearchConfig) -> sumsetlab::Result<EstimateReport>,
) -> SumsetlabStatus {
    guard(|| {
        let u = handle(set)?;
        let cfg = config_from_json(if config_json.is_null() { None } else { Some(text(config_json)?) })?;
        put(out, SumsetlabReport(run(&u.0, &cfg)?))
    })
}

/// Estimates beta of `set`. `config_json` may be null for defaults; otherwise
/// a JSON object with any of `p`, `variant`, `strategy`, `box`, `max_card`,
/// `seed`, `threads`, `budget_ms`, `node_ceiling`, `restarts`.
///
/// # Safety
/// `set` must be a live handle, `config_json` null or NUL-terminated, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn sumsetlab_estimate_beta(
    set: *const SumsetlabPointSet,
    config_json: *const c_char,
    out: *mut *mut SumsetlabReport,
) -> SumsetlabStatus {
    estimate_set(set, config_json, out, beta_estimate)
}

/// Estimates alpha of `set`; configuration as for `sumsetlab_estimate_beta`.
///
/// # Safety
/// As for `sumsetlab_estimate_beta`.
#[no_mangle]
pub unsafe extern "C" fn sumsetlab_estimate_alpha(
    set: *const SumsetlabPointSet,
    config_json: *const c_char,
    out: *mut *mut SumsetlabReport,
) -> SumsetlabStatus {
    estimate_set(set, config_json, out, alpha_estimate)
}

/// Estimates gamma of `f`; configuration as for `sumsetlab_estimate_beta`.
///
/// # Safety
/// `f` must be a live handle, `config_json` null or NUL-terminated, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn sumsetlab_estimate_gamma(
    f: *const SumsetlabFunction,
    config_json: *const c_char,
    out: *mut *mut SumsetlabReport,
) -> SumsetlabStatus {
    guard(|| {
        let f = handle(f)?;
        let cfg = config_from_json(if config_json.is_null() { None } else { Some(text(config_json)?) })?;
        put(out, SumsetlabReport(gamma_estimate(&f.0, &cfg)?))
    })
}

/// Floating-point value of the estimate, or NaN for a null handle.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sumsetlab_report_value(report: *const SumsetlabReport) -> f64 {
    report.as_ref().map_or(f64::NAN, |r| r.0.value_float)
}

/// Whether the exhaustive window was fully scanned; false for a null handle.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sumsetlab_report_complete(report: *const SumsetlabReport) -> bool {
    report.as_ref().is_some_and(|r| r.0.complete)
}

/// Full report as JSON. Free the result with `sumsetlab_string_free`.
///
/// # Safety
/// `report` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sumsetlab_report_json(
    report: *const SumsetlabReport,
    out: *mut *mut c_char,
) -> SumsetlabStatus {
    guard(|| {
        let r = handle(report)?;
        if out.is_null() {
            return Err(null());
        }
        let json = serde_json::to_string(&r.0.to_json(None)).map_err(Error::from)?;
        *out = owned_string(json)?;
        Ok(())
    })
}

/// # Safety
/// `report` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sumsetlab_report_free(report: *mut SumsetlabReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}
