//! C ABI for the intersieve library.
//!
//! Polynomials travel as opaque handles; structured results come back as
//! JSON strings in the library's canonical encoding. Every fallible call
//! returns a status code; the thread-local message from the last failure is
//! available through [`intersieve_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use num_bigint::BigInt;

use intersieve::classify::{deligne_certify, rank_estimate};
use intersieve::diffset::{solve_exact, ForbiddenSet};
use intersieve::error::Error;
use intersieve::expsum::complete_sum_mod_p;
use intersieve::padic::intersectivity_scan;
use intersieve::parse::parse_polynomial;
use intersieve::poly::IntPolynomial;
use intersieve::report;
use intersieve::sieve::SieveProfile;

/// Status codes for every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntersieveStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidArgument = 4,
    BudgetExceeded = 5,
    InternalError = 6,
}

/// Opaque polynomial handle.
pub struct IntersievePoly {
    inner: IntPolynomial,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg).unwrap_or_else(|_| CString::new("invalid error text").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> IntersieveStatus {
    match e {
        Error::Syntax { .. } => IntersieveStatus::ParseError,
        Error::BudgetExceeded { .. }
        | Error::MaxGammaExceeded { .. }
        | Error::ResolutionInsufficient { .. } => IntersieveStatus::BudgetExceeded,
        _ => IntersieveStatus::InvalidArgument,
    }
}

fn write_string(out: *mut *mut c_char, s: String) -> IntersieveStatus {
    if out.is_null() {
        set_error("output pointer is null".into());
        return IntersieveStatus::NullPointer;
    }
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            IntersieveStatus::Ok
        }
        Err(_) => {
            set_error("result contained an interior NUL byte".into());
            IntersieveStatus::InternalError
        }
    }
}

/// Message from the most recent failure on this thread, or NULL. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn intersieve_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map(|c| c.as_ptr())
            .unwrap_or(ptr::null())
    })
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn intersieve_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr() as *const c_char
}

/// Frees a string returned by this library.
///
/// # Safety
/// `s` must have been produced by an intersieve call and not freed before.
#[no_mangle]
pub unsafe extern "C" fn intersieve_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a polynomial from the text grammar. `num_vars_hint < 0` infers
/// the ambient dimension from the variables used.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn intersieve_poly_parse(
    text: *const c_char,
    num_vars_hint: i32,
    out: *mut *mut IntersievePoly,
) -> IntersieveStatus {
    if text.is_null() || out.is_null() {
        set_error("null pointer argument".into());
        return IntersieveStatus::NullPointer;
    }
    let Ok(text) = CStr::from_ptr(text).to_str() else {
        set_error("polynomial text is not UTF-8".into());
        return IntersieveStatus::InvalidUtf8;
    };
    let hint = if num_vars_hint < 0 {
        None
    } else {
        Some(num_vars_hint as usize)
    };
    match parse_polynomial(text, hint) {
        Ok(p) => {
            *out = Box::into_raw(Box::new(IntersievePoly { inner: p }));
            IntersieveStatus::Ok
        }
        Err(e) => {
            set_error(e.to_string());
            status_of(&e)
        }
    }
}

/// Frees a polynomial handle.
///
/// # Safety
/// `p` must come from `intersieve_poly_parse` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn intersieve_poly_free(p: *mut IntersievePoly) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Ambient variable count.
///
/// # Safety
/// `p` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn intersieve_poly_num_vars(p: *const IntersievePoly) -> i32 {
    if p.is_null() {
        return -1;
    }
    (*p).inner.num_vars() as i32
}

/// Total degree; -1 for the zero polynomial.
///
/// # Safety
/// `p` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn intersieve_poly_degree(p: *const IntersievePoly) -> i64 {
    if p.is_null() {
        return -1;
    }
    (*p).inner.degree().map(i64::from).unwrap_or(-1)
}

/// Canonical JSON form of the polynomial.
///
/// # Safety
/// `p` must be a live handle; free the string with `intersieve_string_free`.
#[no_mangle]
pub unsafe extern "C" fn intersieve_poly_to_json(
    p: *const IntersievePoly,
    out: *mut *mut c_char,
) -> IntersieveStatus {
    if p.is_null() {
        set_error("null polynomial handle".into());
        return IntersieveStatus::NullPointer;
    }
    let v = report::poly_json(&(*p).inner);
    write_string(out, report::to_canonical_string(&v))
}

/// Exact value at an integer point, as a decimal string.
///
/// # Safety
/// `point` must reference `len` readable values; other pointers live.
#[no_mangle]
pub unsafe extern "C" fn intersieve_poly_evaluate(
    p: *const IntersievePoly,
    point: *const i64,
    len: usize,
    out: *mut *mut c_char,
) -> IntersieveStatus {
    if p.is_null() || point.is_null() {
        set_error("null pointer argument".into());
        return IntersieveStatus::NullPointer;
    }
    let coords: Vec<BigInt> = std::slice::from_raw_parts(point, len)
        .iter()
        .map(|&v| BigInt::from(v))
        .collect();
    match (*p).inner.evaluate(&coords, None) {
        Ok(v) => write_string(out, v.to_string()),
        Err(e) => {
            set_error(e.to_string());
            status_of(&e)
        }
    }
}

/// Deligne certification, rank of the top part, and the intersectivity
/// scan, as one JSON object.
///
/// # Safety
/// `p` must be a live handle; free the string with `intersieve_string_free`.
#[no_mangle]
pub unsafe extern "C" fn intersieve_classify_json(
    p: *const IntersievePoly,
    prime_bound: u64,
    point_budget: u64,
    out: *mut *mut c_char,
) -> IntersieveStatus {
    if p.is_null() {
        set_error("null polynomial handle".into());
        return IntersieveStatus::NullPointer;
    }
    let h = &(*p).inner;
    let deligne = deligne_certify(h, point_budget);
    let rank = match h.degree().filter(|&k| k >= 1) {
        Some(k) => match rank_estimate(&h.homogeneous_part(k), point_budget) {
            Ok(r) => Some(r),
            Err(e) => {
                set_error(e.to_string());
                return status_of(&e);
            }
        },
        None => None,
    };
    let inter = intersectivity_scan(h, prime_bound, 2_000_000);
    let v = serde_json_value(&deligne, rank.as_ref(), &inter, h);
    write_string(out, report::to_canonical_string(&v))
}

fn serde_json_value(
    deligne: &intersieve::classify::ClassificationVerdict,
    rank: Option<&intersieve::classify::RankEstimate>,
    inter: &intersieve::padic::IntersectivityVerdict,
    h: &IntPolynomial,
) -> serde_json::Value {
    serde_json::json!({
        "poly": report::poly_json(h),
        "deligne": report::verdict_json(deligne),
        "rank": rank.map(report::rank_json),
        "intersective": report::intersectivity_json(inter),
    })
}

/// Complete exponential sum over `F_p^l`. `bound_out` receives NaN when the
/// square-root cancellation bound does not apply.
///
/// # Safety
/// All pointers must be valid; `p` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn intersieve_complete_sum(
    p: *const IntersievePoly,
    prime: u64,
    point_budget: u64,
    re_out: *mut f64,
    im_out: *mut f64,
    bound_out: *mut f64,
) -> IntersieveStatus {
    if p.is_null() || re_out.is_null() || im_out.is_null() || bound_out.is_null() {
        set_error("null pointer argument".into());
        return IntersieveStatus::NullPointer;
    }
    match complete_sum_mod_p(&(*p).inner, prime, point_budget) {
        Ok(rep) => {
            *re_out = rep.value.re;
            *im_out = rep.value.im;
            *bound_out = rep.bound.unwrap_or(f64::NAN);
            IntersieveStatus::Ok
        }
        Err(e) => {
            set_error(e.to_string());
            status_of(&e)
        }
    }
}

/// Sieve profile (gamma, j, exact weight) as JSON.
///
/// # Safety
/// `p` must be a live handle; free the string with `intersieve_string_free`.
#[no_mangle]
pub unsafe extern "C" fn intersieve_sieve_profile_json(
    p: *const IntersievePoly,
    y: u64,
    max_gamma: u32,
    point_budget: u64,
    out: *mut *mut c_char,
) -> IntersieveStatus {
    if p.is_null() {
        set_error("null polynomial handle".into());
        return IntersieveStatus::NullPointer;
    }
    match SieveProfile::build(&(*p).inner, y, max_gamma, point_budget) {
        Ok(profile) => write_string(
            out,
            report::to_canonical_string(&report::profile_json(&profile)),
        ),
        Err(e) => {
            set_error(e.to_string());
            status_of(&e)
        }
    }
}

/// Exact D(X, N) with witness, as JSON. `xs` lists the forbidden positive
/// differences.
///
/// # Safety
/// `xs` must reference `n_xs` readable values; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn intersieve_diffset_exact_json(
    xs: *const u64,
    n_xs: usize,
    n: u64,
    node_budget: u64,
    out: *mut *mut c_char,
) -> IntersieveStatus {
    if xs.is_null() && n_xs > 0 {
        set_error("null forbidden-set pointer".into());
        return IntersieveStatus::NullPointer;
    }
    let values: Vec<i64> = if n_xs == 0 {
        Vec::new()
    } else {
        std::slice::from_raw_parts(xs, n_xs)
            .iter()
            .map(|&v| v as i64)
            .collect()
    };
    let set = ForbiddenSet::from_values(values);
    match solve_exact(&set, n, node_budget) {
        Ok(res) => write_string(
            out,
            report::to_canonical_string(&report::exact_json(n, &res)),
        ),
        Err(e) => {
            set_error(e.to_string());
            status_of(&e)
        }
    }
}
