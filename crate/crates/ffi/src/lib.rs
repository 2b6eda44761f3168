//! C ABI over `origami_spectrum`.
//!
//! Every function returns an [`OsStatus`]; on failure a message is available
//! from [`os_last_error_message`] on the same thread. Handles are opaque and
//! must be released with their `_free` function. Strings returned by the
//! library are released with [`os_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use origami_spectrum::cf::{CFExpansion, QuadraticSurd};
use origami_spectrum::orbit::{b7, OrbitGraph};
use origami_spectrum::spectrum::lagrange;
use origami_spectrum::subshift::{gap_first, gap_second, l_sigma_periodic, ABWord};
use origami_spectrum::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ParseError = 3,
    ComputationError = 4,
    Panic = 5,
}

/// Orbit graph handle.
pub struct OsOrbit {
    graph: OrbitGraph,
}

/// Exact value handle.
pub struct OsValue {
    value: QuadraticSurd,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> OsStatus {
    match e {
        Error::Parse(_) | Error::EmptyExpansion | Error::ZeroEntry => OsStatus::ParseError,
        Error::UnknownVertex(_) | Error::OutOfRange(_) | Error::Rational | Error::NotInXi => {
            OsStatus::InvalidArgument
        }
        _ => OsStatus::ComputationError,
    }
}

/// Runs `f`, converting errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), (OsStatus, String)>) -> OsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => OsStatus::Ok,
        Ok(Err((s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            OsStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (OsStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (OsStatus, String) {
    (OsStatus::NullPointer, format!("null pointer: {what}"))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, (OsStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (OsStatus::ParseError, format!("{what} is not UTF-8")))
}

unsafe fn orbit_arg<'a>(p: *const OsOrbit) -> Result<&'a OrbitGraph, (OsStatus, String)> {
    p.as_ref().map(|o| &o.graph).ok_or_else(|| null("orbit"))
}

unsafe fn value_arg<'a>(p: *const OsValue) -> Result<&'a QuadraticSurd, (OsStatus, String)> {
    p.as_ref().map(|v| &v.value).ok_or_else(|| null("value"))
}

unsafe fn put<T>(out: *mut T, v: T, what: &str) -> Result<(), (OsStatus, String)> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(v);
    Ok(())
}

fn boxed(value: QuadraticSurd) -> *mut OsValue {
    Box::into_raw(Box::new(OsValue { value }))
}

/// Message of the last failed call on this thread; empty if none. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn os_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Derives the 36-element orbit and stores a new handle in `*out`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle pointer.
#[no_mangle]
pub unsafe extern "C" fn os_orbit_b7(out: *mut *mut OsOrbit) -> OsStatus {
    guard(|| {
        let graph = b7().map_err(lib_err)?.clone();
        put(out, Box::into_raw(Box::new(OsOrbit { graph })), "out")
    })
}

/// One-vertex orbit of the torus, giving classical values.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle pointer.
#[no_mangle]
pub unsafe extern "C" fn os_orbit_torus(out: *mut *mut OsOrbit) -> OsStatus {
    guard(|| {
        let graph = OrbitGraph::torus();
        put(out, Box::into_raw(Box::new(OsOrbit { graph })), "out")
    })
}

/// Releases an orbit handle. Null is ignored.
///
/// # Safety
/// `orbit` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn os_orbit_free(orbit: *mut OsOrbit) {
    if !orbit.is_null() {
        drop(Box::from_raw(orbit));
    }
}

/// # Safety
/// `orbit` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn os_orbit_vertex_count(orbit: *const OsOrbit, out: *mut usize) -> OsStatus {
    guard(|| put(out, orbit_arg(orbit)?.len(), "out"))
}

fn vertex(g: &OrbitGraph, v: usize) -> Result<usize, (OsStatus, String)> {
    if v < g.len() {
        Ok(v)
    } else {
        Err(lib_err(Error::UnknownVertex(v)))
    }
}

/// Horizontal multiplicity of vertex `v`.
///
/// # Safety
/// `orbit` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn os_orbit_multiplicity(
    orbit: *const OsOrbit,
    v: usize,
    out: *mut u32,
) -> OsStatus {
    guard(|| {
        let g = orbit_arg(orbit)?;
        put(out, g.multiplicity(vertex(g, v)?), "out")
    })
}

/// Width of the cusp containing vertex `v`.
///
/// # Safety
/// `orbit` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn os_orbit_cusp_width(
    orbit: *const OsOrbit,
    v: usize,
    out: *mut usize,
) -> OsStatus {
    guard(|| {
        let g = orbit_arg(orbit)?;
        put(out, g.cusp_width(vertex(g, v)?), "out")
    })
}

fn parse_alpha(s: &str) -> Result<CFExpansion, (OsStatus, String)> {
    s.parse().map_err(lib_err)
}

/// `L(start, alpha)` with `alpha` written as a continued fraction such as
/// `[;(1,3)]`.
///
/// # Safety
/// `orbit` must be a live handle, `alpha` a NUL-terminated string and `out`
/// a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn os_lagrange(
    orbit: *const OsOrbit,
    start: usize,
    alpha: *const c_char,
    out: *mut *mut OsValue,
) -> OsStatus {
    guard(|| {
        let g = orbit_arg(orbit)?;
        let a = parse_alpha(str_arg(alpha, "alpha")?)?;
        let v = lagrange(g, start, &a).map_err(lib_err)?;
        put(out, boxed(v.value), "out")
    })
}

/// Minimum of `L(start, alpha)` over all starts; the smallest minimising
/// start is written to `out_start` when it is not null.
///
/// # Safety
/// As for [`os_lagrange`]; `out_start` may be null.
#[no_mangle]
pub unsafe extern "C" fn os_lagrange_min(
    orbit: *const OsOrbit,
    alpha: *const c_char,
    out_start: *mut usize,
    out: *mut *mut OsValue,
) -> OsStatus {
    guard(|| {
        let g = orbit_arg(orbit)?;
        let a = parse_alpha(str_arg(alpha, "alpha")?)?;
        let mut best: Option<(usize, QuadraticSurd)> = None;
        for s in 0..g.len() {
            let v = lagrange(g, s, &a).map_err(lib_err)?.value;
            if best.as_ref().is_none_or(|b| v < b.1) {
                best = Some((s, v));
            }
        }
        let (s, v) = best.ok_or_else(|| (OsStatus::InvalidArgument, "empty orbit".into()))?;
        if !out_start.is_null() {
            out_start.write(s);
        }
        put(out, boxed(v), "out")
    })
}

/// `L^sigma` of the periodic word `word^inf`, e.g. `ab^3`.
///
/// # Safety
/// `word` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn os_l_sigma(word: *const c_char, out: *mut *mut OsValue) -> OsStatus {
    guard(|| {
        let w: ABWord = str_arg(word, "word")?.parse().map_err(lib_err)?;
        put(out, boxed(l_sigma_periodic(&w).map_err(lib_err)?), "out")
    })
}

unsafe fn put_gap(
    left: QuadraticSurd,
    right: QuadraticSurd,
    out_left: *mut *mut OsValue,
    out_right: *mut *mut OsValue,
) -> Result<(), (OsStatus, String)> {
    if out_left.is_null() || out_right.is_null() {
        return Err(null("out"));
    }
    out_left.write(boxed(left));
    out_right.write(boxed(right));
    Ok(())
}

/// Endpoints of the first-generation gap `G_k` (`G_0 = (phi1, phi2)`).
///
/// # Safety
/// `out_left` and `out_right` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn os_gap_first(
    k: usize,
    out_left: *mut *mut OsValue,
    out_right: *mut *mut OsValue,
) -> OsStatus {
    guard(|| {
        let g = gap_first(k).map_err(lib_err)?;
        put_gap(g.left, g.right, out_left, out_right)
    })
}

/// Endpoints of the second-generation gap `G_{k,n}`, `k, n >= 1`.
///
/// # Safety
/// `out_left` and `out_right` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn os_gap_second(
    k: usize,
    n: usize,
    out_left: *mut *mut OsValue,
    out_right: *mut *mut OsValue,
) -> OsStatus {
    guard(|| {
        let g = gap_second(k, n).map_err(lib_err)?;
        put_gap(g.left, g.right, out_left, out_right)
    })
}

/// # Safety
/// `value` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn os_value_to_f64(value: *const OsValue, out: *mut f64) -> OsStatus {
    guard(|| put(out, value_arg(value)?.to_f64(), "out"))
}

/// Writes -1, 0 or 1 to `out` as `a` is less than, equal to or greater than `b`.
///
/// # Safety
/// `a`, `b` must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn os_value_compare(
    a: *const OsValue,
    b: *const OsValue,
    out: *mut i32,
) -> OsStatus {
    guard(|| {
        let o = value_arg(a)?.cmp(value_arg(b)?);
        put(out, o as i32, "out")
    })
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s)
        .map(CString::into_raw)
        .unwrap_or(ptr::null_mut())
}

/// Exact form `(p+q*sqrt(d))/r`; null on failure. Free with [`os_string_free`].
///
/// # Safety
/// `value` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn os_value_surd_string(value: *const OsValue) -> *mut c_char {
    let mut s = ptr::null_mut();
    guard(|| {
        s = owned_string(value_arg(value)?.to_string());
        Ok(())
    });
    s
}

/// Decimal rounded to `digits` places with its bound, e.g. `10.692677±5e-7`;
/// null on failure. Free with [`os_string_free`].
///
/// # Safety
/// `value` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn os_value_decimal_string(
    value: *const OsValue,
    digits: u32,
) -> *mut c_char {
    let mut s = ptr::null_mut();
    guard(|| {
        s = owned_string(value_arg(value)?.to_decimal_with_bound(digits));
        Ok(())
    });
    s
}

/// Releases a value handle. Null is ignored.
///
/// # Safety
/// `value` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn os_value_free(value: *mut OsValue) {
    if !value.is_null() {
        drop(Box::from_raw(value));
    }
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn os_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
