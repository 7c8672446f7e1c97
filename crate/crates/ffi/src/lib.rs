//! C ABI for `toric-whb`.
//!
//! Objects are opaque handles created by `twhb_*_new`/`twhb_*_from_*` and
//! released with the matching `twhb_*_free`. Every fallible call returns a
//! [`TwhbStatus`] and writes its result through an out-pointer; on failure
//! `twhb_last_error` describes what went wrong on the calling thread.
//! Strings returned through `char **` are owned by the caller and must be
//! released with [`twhb_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use serde_json::json;
use toric_whb::bundle::projectivize;
use toric_whb::catalog::{construction, BundleId, Variety};
use toric_whb::cox::{decide_smooth_monomial_partials, is_homogeneous, is_wild_fiberwise, CoxForm};
use toric_whb::primitive::{is_fano, primitive_relations, relation_records};
use toric_whb::whb::admissible_prime_set;
use toric_whb::{BundleSpec, Error, Fan, TorusDivisor, TotalSpaceFan};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwhbStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Input = 4,
    InvalidFan = 5,
    Budget = 6,
    /// Output buffer too small; the needed length was still written.
    BufferTooSmall = 7,
    Internal = 8,
    Panic = 9,
}

/// An immutable fan.
pub struct TwhbFan {
    fan: Fan,
}

/// A projectivized split bundle: its summands and total-space fan.
pub struct TwhbBundle {
    spec: BundleSpec,
    total: TotalSpaceFan,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

struct Failure(TwhbStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Parse(_) | Error::Json(_) => TwhbStatus::Parse,
            Error::InvalidFan(_) => TwhbStatus::InvalidFan,
            Error::Budget { .. } => TwhbStatus::Budget,
            Error::Internal(_) => TwhbStatus::Internal,
            _ => TwhbStatus::Input,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(TwhbStatus::NullPointer, format!("{what} is null"))
}

/// Runs `body`, converting errors and panics into a status code.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> TwhbStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            TwhbStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("panic inside toric-whb");
            TwhbStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(TwhbStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn out_arg<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn fan_arg<'a>(p: *const TwhbFan) -> Result<&'a Fan, Failure> {
    p.as_ref().map(|h| &h.fan).ok_or_else(|| null("fan"))
}

unsafe fn bundle_arg<'a>(p: *const TwhbBundle) -> Result<&'a TwhbBundle, Failure> {
    p.as_ref().ok_or_else(|| null("bundle"))
}

fn c_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Failure(TwhbStatus::Internal, "string contains NUL".into()))
}

/// Negative means "not given".
fn opt<T: TryFrom<i64>>(x: i64) -> Option<T> {
    if x < 0 {
        None
    } else {
        T::try_from(x).ok()
    }
}

/// Message for the last failed call on this thread, or NULL. Valid until the
/// next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn twhb_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn twhb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a fan file (`{"dim", "rays", "max_cones"}`). Structural errors are
/// reported; smoothness and completeness are checked by `twhb_fan_is_valid`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn twhb_fan_from_json(json: *const c_char, out: *mut *mut TwhbFan) -> TwhbStatus {
    guard(|| {
        let text = str_arg(json, "json")?;
        let out = out_arg(out, "out")?;
        let fan = Fan::from_json(text)?;
        *out = Box::into_raw(Box::new(TwhbFan { fan }));
        Ok(())
    })
}

/// A named catalog fan. Pass -1 for parameters that do not apply.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn twhb_fan_from_catalog(
    name: *const c_char,
    d: i64,
    a: i64,
    b: i64,
    alpha: i64,
    out: *mut *mut TwhbFan,
) -> TwhbStatus {
    guard(|| {
        let name = str_arg(name, "name")?;
        let out = out_arg(out, "out")?;
        let fan = Variety::from_name(name, opt(d), opt(a), opt(b), opt(alpha))?.fan()?;
        *out = Box::into_raw(Box::new(TwhbFan { fan }));
        Ok(())
    })
}

/// # Safety
/// `fan` must come from this library, or be NULL.
#[no_mangle]
pub unsafe extern "C" fn twhb_fan_free(fan: *mut TwhbFan) {
    if !fan.is_null() {
        drop(Box::from_raw(fan));
    }
}

/// Dimension, ray count and Picard number.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn twhb_fan_shape(
    fan: *const TwhbFan,
    dim: *mut usize,
    num_rays: *mut usize,
    picard_number: *mut usize,
) -> TwhbStatus {
    guard(|| {
        let fan = fan_arg(fan)?;
        *out_arg(dim, "dim")? = fan.dim();
        *out_arg(num_rays, "num_rays")? = fan.num_rays();
        *out_arg(picard_number, "picard_number")? = fan.picard_number();
        Ok(())
    })
}

/// Whether the fan is smooth and complete. On `false` the reason is
/// available from `twhb_last_error` even though the call succeeded.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn twhb_fan_is_valid(fan: *const TwhbFan, out: *mut bool) -> TwhbStatus {
    let mut summary = None;
    let status = guard(|| {
        let fan = fan_arg(fan)?;
        let v = fan.validate();
        *out_arg(out, "out")? = v.passed();
        if !v.passed() {
            summary = Some(v.summary());
        }
        Ok(())
    });
    if let Some(s) = summary {
        set_last_error(s);
    }
    status
}

/// Whether every primitive relation has positive degree.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn twhb_fan_is_fano(fan: *const TwhbFan, out: *mut bool) -> TwhbStatus {
    guard(|| {
        let fan = fan_arg(fan)?;
        fan.ensure_valid()?;
        *out_arg(out, "out")? = is_fano(fan)?;
        Ok(())
    })
}

/// The fan file as a JSON string.
///
/// # Safety
/// All pointers must be valid; free the result with `twhb_string_free`.
#[no_mangle]
pub unsafe extern "C" fn twhb_fan_to_json(fan: *const TwhbFan, out: *mut *mut c_char) -> TwhbStatus {
    guard(|| {
        let fan = fan_arg(fan)?;
        let out = out_arg(out, "out")?;
        *out = c_string(fan.to_json()?)?;
        Ok(())
    })
}

/// Primitive relations as a JSON array of
/// `{collection, target, coeffs, degree, extremal}` with zero-based ray indices.
///
/// # Safety
/// All pointers must be valid; free the result with `twhb_string_free`.
#[no_mangle]
pub unsafe extern "C" fn twhb_fan_relations_json(fan: *const TwhbFan, out: *mut *mut c_char) -> TwhbStatus {
    guard(|| {
        let fan = fan_arg(fan)?;
        let out = out_arg(out, "out")?;
        fan.ensure_valid()?;
        let records = relation_records(&primitive_relations(fan)?)?;
        let text = serde_json::to_string(&records).map_err(Error::from)?;
        *out = c_string(text)?;
        Ok(())
    })
}

/// Admissible primes up to `p_max`, ascending. Writes at most `cap` primes
/// into `primes` and the full count into `len`.
///
/// # Safety
/// `primes` must have room for `cap` values (it may be NULL when `cap` is 0).
#[no_mangle]
pub unsafe extern "C" fn twhb_fan_admissible_primes(
    fan: *const TwhbFan,
    p_max: u64,
    primes: *mut u64,
    cap: usize,
    len: *mut usize,
) -> TwhbStatus {
    guard(|| {
        let fan = fan_arg(fan)?;
        let len = out_arg(len, "len")?;
        fan.ensure_valid()?;
        let found = admissible_prime_set(fan, p_max)?;
        *len = found.len();
        if found.len() > cap {
            return Err(Failure(
                TwhbStatus::BufferTooSmall,
                format!("{} primes, buffer holds {cap}", found.len()),
            ));
        }
        if !found.is_empty() {
            if primes.is_null() {
                return Err(null("primes"));
            }
            ptr::copy_nonoverlapping(found.as_ptr(), primes, found.len());
        }
        Ok(())
    })
}

/// Builds `P(O + O(E_1) + ... + O(E_r))` over `base`. `coeffs` holds the `r`
/// summands row by row, each with one coefficient per base ray.
///
/// # Safety
/// `coeffs` must point to `num_summands * num_rays(base)` values.
#[no_mangle]
pub unsafe extern "C" fn twhb_bundle_new(
    base: *const TwhbFan,
    coeffs: *const i64,
    num_summands: usize,
    out: *mut *mut TwhbBundle,
) -> TwhbStatus {
    guard(|| {
        let base = fan_arg(base)?;
        let out = out_arg(out, "out")?;
        if coeffs.is_null() && num_summands > 0 {
            return Err(null("coeffs"));
        }
        let n = base.num_rays();
        let summands = (0..num_summands)
            .map(|j| TorusDivisor::from_i64(std::slice::from_raw_parts(coeffs.add(j * n), n)))
            .collect();
        let spec = BundleSpec::new(base.clone(), summands)?;
        let total = projectivize(&spec)?;
        *out = Box::into_raw(Box::new(TwhbBundle { spec, total }));
        Ok(())
    })
}

/// A named catalog bundle. If `equation` is not NULL it receives the
/// bundle's hypersurface equation in text form.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn twhb_bundle_from_catalog(
    name: *const c_char,
    d: i64,
    a: i64,
    b: i64,
    out: *mut *mut TwhbBundle,
    equation: *mut *mut c_char,
) -> TwhbStatus {
    guard(|| {
        let name = str_arg(name, "name")?;
        let out = out_arg(out, "out")?;
        let pb = construction(BundleId::from_name(name, opt(d), opt(a), opt(b))?)?;
        let total = pb.total_space()?;
        if let Some(eq) = equation.as_mut() {
            *eq = c_string(pb.equation.clone())?;
        }
        *out = Box::into_raw(Box::new(TwhbBundle { spec: pb.spec, total }));
        Ok(())
    })
}

/// # Safety
/// `bundle` must come from this library, or be NULL.
#[no_mangle]
pub unsafe extern "C" fn twhb_bundle_free(bundle: *mut TwhbBundle) {
    if !bundle.is_null() {
        drop(Box::from_raw(bundle));
    }
}

/// A copy of the total-space fan as a new fan handle.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn twhb_bundle_total_fan(bundle: *const TwhbBundle, out: *mut *mut TwhbFan) -> TwhbStatus {
    guard(|| {
        let bundle = bundle_arg(bundle)?;
        let out = out_arg(out, "out")?;
        *out = Box::into_raw(Box::new(TwhbFan { fan: bundle.total.fan.clone() }));
        Ok(())
    })
}

/// Number of nontrivial summands `r`.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn twhb_bundle_rank(bundle: *const TwhbBundle, r: *mut usize) -> TwhbStatus {
    guard(|| {
        *out_arg(r, "r")? = bundle_arg(bundle)?.spec.r();
        Ok(())
    })
}

/// Checks a hypersurface given in text form (`X3*X4*Y1^2+...`, where `Xi`
/// is a lifted base ray and `Yj` a fiber ray) over `F_p`. The JSON result has
/// `homogeneous`, and when homogeneous also `wildness` and `smoothness`.
///
/// # Safety
/// All pointers must be valid; free the result with `twhb_string_free`.
#[no_mangle]
pub unsafe extern "C" fn twhb_bundle_check_equation(
    bundle: *const TwhbBundle,
    equation: *const c_char,
    p: u64,
    out: *mut *mut c_char,
) -> TwhbStatus {
    guard(|| {
        let bundle = bundle_arg(bundle)?;
        let text = str_arg(equation, "equation")?;
        let out = out_arg(out, "out")?;
        let t = &bundle.total;
        let form = CoxForm::parse_on_bundle(t, text, p)?;
        let report = if is_homogeneous(&t.fan, &form)?.is_none() {
            json!({ "homogeneous": false })
        } else {
            json!({
                "homogeneous": true,
                "wildness": is_wild_fiberwise(t, &form, p)?,
                "smoothness": decide_smooth_monomial_partials(&t.fan, &form)?,
            })
        };
        *out = c_string(report.to_string())?;
        Ok(())
    })
}
