//! C interface to `fastgh`.
//!
//! Every call returns a [`FastghStatus`]. On failure a message is kept per
//! thread and can be read with [`fastgh_last_error`]. Rules and
//! interpolants are opaque handles released with their `_free` functions.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fastgh::{BarycentricInterpolant, Error, FreudPotential, QuadratureRule};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FastghStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Convergence = 3,
    Regime = 4,
    BufferTooSmall = 5,
    Internal = 6,
}

/// Opaque quadrature rule.
pub struct FastghRule(QuadratureRule);

/// Opaque barycentric interpolant.
pub struct FastghInterp(BarycentricInterpolant);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> FastghStatus {
    match e {
        Error::Domain(_) | Error::InvalidPotential(_) | Error::IndexOutOfRange { .. } => {
            FastghStatus::InvalidArgument
        }
        Error::Convergence { .. } | Error::Resolution { .. } | Error::SupportSolve { .. } | Error::Eigen => {
            FastghStatus::Convergence
        }
        Error::Regime { .. } | Error::UnsupportedRegime { .. } => FastghStatus::Regime,
        _ => FastghStatus::Internal,
    }
}

fn guard<F: FnOnce() -> Result<(), FastghStatus>>(f: F) -> FastghStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FastghStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            FastghStatus::Internal
        }
    }
}

fn fail(e: Error) -> FastghStatus {
    set_error(&e.to_string());
    status_of(&e)
}

fn null(what: &str) -> FastghStatus {
    set_error(&format!("{what} is null"));
    FastghStatus::NullPointer
}

/// Message for the most recent failure on this thread, or an empty string.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn fastgh_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Gauss-Hermite rule with `n` nodes.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn fastgh_hermite_rule(n: usize, subsample: bool, out: *mut *mut FastghRule) -> FastghStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let r = fastgh::hermite_rule(n, subsample).map_err(fail)?;
        // SAFETY: checked non-null above; caller owns the storage.
        unsafe { *out = Box::into_raw(Box::new(FastghRule(r))) };
        Ok(())
    })
}

/// Gauss rule for `e^{-V(x)}`, `V` given by `len` monomial coefficients,
/// constant first, monic of even degree.
///
/// # Safety
/// `coeffs` must point to `len` readable doubles and `out` to writable
/// storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn fastgh_freud_rule(
    coeffs: *const f64,
    len: usize,
    n: usize,
    subsample: bool,
    out: *mut *mut FastghRule,
) -> FastghStatus {
    guard(|| {
        if coeffs.is_null() {
            return Err(null("coeffs"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        // SAFETY: caller guarantees `len` readable elements.
        let c = unsafe { std::slice::from_raw_parts(coeffs, len) };
        let r = fastgh::freud_rule_general(c, n, subsample).map_err(fail)?;
        // SAFETY: checked non-null above.
        unsafe { *out = Box::into_raw(Box::new(FastghRule(r))) };
        Ok(())
    })
}

/// Number of stored nodes (0 for a null handle).
///
/// # Safety
/// `rule` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fastgh_rule_len(rule: *const FastghRule) -> usize {
    // SAFETY: caller guarantees a live handle or null.
    unsafe { rule.as_ref() }.map_or(0, |r| r.0.len())
}

/// Size of the full rule, counting skipped nodes.
///
/// # Safety
/// `rule` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fastgh_rule_size(rule: *const FastghRule) -> usize {
    // SAFETY: as above.
    unsafe { rule.as_ref() }.map_or(0, |r| r.0.n)
}

/// Nodes omitted on each side by subsampling.
///
/// # Safety
/// `rule` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fastgh_rule_trivial_skipped(rule: *const FastghRule) -> usize {
    // SAFETY: as above.
    unsafe { rule.as_ref() }.map_or(0, |r| r.0.trivial_skipped)
}

/// Copies nodes and weights into caller buffers of capacity `cap`. Either
/// buffer may be null to skip it.
///
/// # Safety
/// `rule` must be a live handle; non-null buffers must hold `cap` doubles.
#[no_mangle]
pub unsafe extern "C" fn fastgh_rule_copy(
    rule: *const FastghRule,
    nodes: *mut f64,
    weights: *mut f64,
    cap: usize,
) -> FastghStatus {
    guard(|| {
        // SAFETY: caller guarantees a live handle or null.
        let r = unsafe { rule.as_ref() }.ok_or_else(|| null("rule"))?;
        let len = r.0.len();
        if cap < len {
            set_error(&format!("buffer holds {cap} values, rule has {len}"));
            return Err(FastghStatus::BufferTooSmall);
        }
        // SAFETY: buffers hold at least `cap >= len` doubles.
        unsafe {
            if !nodes.is_null() {
                ptr::copy_nonoverlapping(r.0.nodes.as_ptr(), nodes, len);
            }
            if !weights.is_null() {
                ptr::copy_nonoverlapping(r.0.weights.as_ptr(), weights, len);
            }
        }
        Ok(())
    })
}

/// Releases a rule. Null is ignored.
///
/// # Safety
/// `rule` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fastgh_rule_free(rule: *mut FastghRule) {
    if !rule.is_null() {
        // SAFETY: handle came from Box::into_raw in this crate.
        drop(unsafe { Box::from_raw(rule) });
    }
}

/// Interpolant through `(nodes[k], samples[k])`, ascending nodes, damped by
/// `e^{-V/2}` in weighted evaluation with `V` given as in
/// [`fastgh_freud_rule`] (already normalized: `V(0) = V'(0) = 0`).
///
/// # Safety
/// `nodes` and `samples` must hold `len` doubles, `coeffs` `coeffs_len`
/// doubles, and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fastgh_interp_new(
    nodes: *const f64,
    samples: *const f64,
    len: usize,
    coeffs: *const f64,
    coeffs_len: usize,
    out: *mut *mut FastghInterp,
) -> FastghStatus {
    guard(|| {
        if nodes.is_null() || samples.is_null() || coeffs.is_null() {
            return Err(null("input array"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        // SAFETY: lengths guaranteed by the caller.
        let (x, f, c) = unsafe {
            (
                std::slice::from_raw_parts(nodes, len),
                std::slice::from_raw_parts(samples, len),
                std::slice::from_raw_parts(coeffs, coeffs_len),
            )
        };
        let v = FreudPotential::new(c.to_vec()).map_err(fail)?;
        let p = BarycentricInterpolant::new(x.to_vec(), f.to_vec(), v).map_err(fail)?;
        // SAFETY: checked non-null above.
        unsafe { *out = Box::into_raw(Box::new(FastghInterp(p))) };
        Ok(())
    })
}

/// Evaluates the interpolant at `x`, times `e^{-V(x)/2}` when `weighted`.
///
/// # Safety
/// `interp` must be a live handle and `value` writable.
#[no_mangle]
pub unsafe extern "C" fn fastgh_interp_eval(
    interp: *const FastghInterp,
    x: f64,
    weighted: bool,
    value: *mut f64,
) -> FastghStatus {
    guard(|| {
        // SAFETY: caller guarantees a live handle or null.
        let p = unsafe { interp.as_ref() }.ok_or_else(|| null("interp"))?;
        if value.is_null() {
            return Err(null("value"));
        }
        let y = if weighted { p.0.eval_weighted(x) } else { p.0.eval(x) };
        // SAFETY: checked non-null above.
        unsafe { *value = y };
        Ok(())
    })
}

/// Releases an interpolant. Null is ignored.
///
/// # Safety
/// `interp` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fastgh_interp_free(interp: *mut FastghInterp) {
    if !interp.is_null() {
        // SAFETY: handle came from Box::into_raw in this crate.
        drop(unsafe { Box::from_raw(interp) });
    }
}

/// `Ai(x)` and `Ai'(x)`; either output may be null.
///
/// # Safety
/// Non-null outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn fastgh_airy(x: f64, ai: *mut f64, aip: *mut f64) -> FastghStatus {
    guard(|| {
        let a = fastgh::airy_ai(x).map_err(fail)?;
        let d = fastgh::airy_ai_prime(x).map_err(fail)?;
        // SAFETY: non-null outputs are writable per the contract.
        unsafe {
            if !ai.is_null() {
                *ai = a;
            }
            if !aip.is_null() {
                *aip = d;
            }
        }
        Ok(())
    })
}
