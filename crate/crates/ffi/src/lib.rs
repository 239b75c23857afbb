//! C interface. Polytopes are opaque handles; reports are returned as
//! NUL-terminated JSON strings owned by the caller and released with
//! `pm_string_free`. Every call returns a `PmStatus`; on failure the message
//! is available from `pm_last_error` on the same thread.

use polymass::analysis::Analysis;
use polymass::rat;
use polymass::{report, verify, Error, Polytope};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

/// Opaque polytope handle.
pub struct PmPolytope {
    inner: Polytope,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PmStatus {
    Ok = 0,
    Counterexample = 1,
    Parse = 2,
    Validation = 3,
    NullPointer = 4,
    InvalidUtf8 = 5,
    Panic = 6,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn fail(e: Error) -> PmStatus {
    set_error(&e.to_string());
    match e.exit_code() {
        1 => PmStatus::Counterexample,
        2 => PmStatus::Parse,
        _ => PmStatus::Validation,
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, PmStatus> {
    if s.is_null() {
        set_error("null pointer argument");
        return Err(PmStatus::NullPointer);
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        PmStatus::InvalidUtf8
    })
}

unsafe fn write_out(out: *mut *mut c_char, text: String) -> PmStatus {
    match CString::new(text) {
        Ok(c) => {
            *out = c.into_raw();
            PmStatus::Ok
        }
        Err(_) => {
            set_error("output contains a NUL byte");
            PmStatus::InvalidUtf8
        }
    }
}

/// Runs `f`, converting panics into `PmStatus::Panic`.
fn guard(f: impl FnOnce() -> PmStatus) -> PmStatus {
    std::panic::catch_unwind(std::panic::AssertUnwindSafe(f)).unwrap_or_else(|_| {
        set_error("internal panic");
        PmStatus::Panic
    })
}

unsafe fn json_call(p: *const PmPolytope, out: *mut *mut c_char, f: impl FnOnce(&Polytope) -> polymass::Result<serde_json::Value>) -> PmStatus {
    if p.is_null() || out.is_null() {
        set_error("null pointer argument");
        return PmStatus::NullPointer;
    }
    *out = ptr::null_mut();
    guard(|| match f(&(*p).inner) {
        Ok(v) => write_out(out, v.to_string()),
        Err(e) => fail(e),
    })
}

/// Message of the last failed call on this thread. Valid until the next call.
#[no_mangle]
pub extern "C" fn pm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses a polytope document.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pm_polytope_from_json(json: *const c_char, out: *mut *mut PmPolytope) -> PmStatus {
    if out.is_null() {
        set_error("null pointer argument");
        return PmStatus::NullPointer;
    }
    *out = ptr::null_mut();
    let text = match read_str(json) {
        Ok(t) => t,
        Err(s) => return s,
    };
    guard(|| match Polytope::from_json(text) {
        Ok(p) => {
            *out = Box::into_raw(Box::new(PmPolytope { inner: p }));
            PmStatus::Ok
        }
        Err(e) => fail(e),
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `p` must come from `pm_polytope_from_json` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pm_polytope_free(p: *mut PmPolytope) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Dimension of the ambient space, or 0 for null.
///
/// # Safety
/// `p` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pm_polytope_dim(p: *const PmPolytope) -> usize {
    p.as_ref().map_or(0, |p| p.inner.dim())
}

/// Number of facets, or 0 for null.
///
/// # Safety
/// `p` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pm_polytope_nfacets(p: *const PmPolytope) -> usize {
    p.as_ref().map_or(0, |p| p.inner.nfacets())
}

/// Full analysis report.
///
/// # Safety
/// `p` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pm_analyze_json(p: *const PmPolytope, out: *mut *mut c_char) -> PmStatus {
    json_call(p, out, |p| report::analysis_report(&Analysis::new(p.clone())?))
}

/// Basis of mass linear functions with their coefficients.
///
/// # Safety
/// `p` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pm_mass_linear_json(p: *const PmPolytope, out: *mut *mut c_char) -> PmStatus {
    json_call(p, out, |p| report::mass_linear_report(&Analysis::new(p.clone())?, None))
}

/// Lattice report of a smooth polytope.
///
/// # Safety
/// `p` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pm_toric_json(p: *const PmPolytope, out: *mut *mut c_char) -> PmStatus {
    json_call(p, out, |p| report::toric_report(&Analysis::new(p.clone())?))
}

/// Center of mass at the support numbers given as a JSON array of rationals
/// (`[[num, den], ...]` or plain integers).
///
/// # Safety
/// `p` must be a live handle, `kappa_json` a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pm_center_of_mass_json(p: *const PmPolytope, kappa_json: *const c_char, out: *mut *mut c_char) -> PmStatus {
    let text = match read_str(kappa_json) {
        Ok(t) => t,
        Err(s) => return s,
    };
    json_call(p, out, |p| {
        let v: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let kappa = rat::vec_from_json(&v).map_err(Error::Parse)?;
        let c = polymass::kpoly::center_of_mass(p, &kappa)?;
        Ok(rat::vec_to_json(&c))
    })
}

/// Runs a property suite on a corpus preset. `passed` receives 1 or 0.
///
/// # Safety
/// `property` and `preset` must be NUL-terminated strings; `passed` and `out` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn pm_verify_json(
    property: *const c_char,
    preset: *const c_char,
    count: usize,
    seed: u64,
    passed: *mut i32,
    out: *mut *mut c_char,
) -> PmStatus {
    if passed.is_null() || out.is_null() {
        set_error("null pointer argument");
        return PmStatus::NullPointer;
    }
    *out = ptr::null_mut();
    let (name, preset) = match (read_str(property), read_str(preset)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(s), _) | (_, Err(s)) => return s,
    };
    guard(|| {
        let prop = match verify::find(name) {
            Ok(p) => p,
            Err(e) => return fail(e),
        };
        let corpus = match prop.suite {
            verify::Suite::YGrid => Vec::new(),
            verify::Suite::Corpus(_) => match verify::corpus_from_preset(preset, Some(count), seed) {
                Ok(c) => c,
                Err(e) => return fail(e),
            },
        };
        let outcome = verify::run(prop, &corpus, 2);
        *passed = outcome.passed() as i32;
        write_out(out, outcome.to_json().to_string())
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
