// Copyright 2026 The qubound Developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


//! C ABI for `qubound`.
//!
//! Objects cross the boundary as opaque handles created by a `*_from_json`
//! or `qb_run_chain` call and released with the matching `*_free`. Every
//! fallible function returns a [`QbStatus`]; on failure the message is
//! available from [`qb_last_error`] on the same thread. Strings returned to
//! the caller are owned by the caller and must be released with
//! [`qb_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qubound::bounds::{check_corollary1, check_sen, check_t1a, check_t1b, BoundReport, Status};
use qubound::seqchain::{run_chain, AnglesReport, ChainInstance, ChainTrace};
use qubound::seqdecode::{holevo_quantity, CqChannel};
use qubound::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QbStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Validation = 4,
    VanishingBranch = 5,
    Resource = 6,
    Precondition = 7,
    Numeric = 8,
    BufferTooSmall = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QbBound {
    T1a = 0,
    T1b = 1,
    Sen = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QbBoundStatus {
    Checked = 0,
    Vacuous = 1,
    Skipped = 2,
}

/// Both sides of one inequality. `margin = lhs - rhs`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QbBoundResult {
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub tolerance: f64,
    pub satisfied: bool,
    pub status: QbBoundStatus,
}

/// A state and projector chain.
pub struct QbInstance {
    inner: ChainInstance,
}

/// The record of one chain run.
pub struct QbTrace {
    inner: ChainTrace,
}

/// A classical-quantum channel.
pub struct QbChannel {
    inner: CqChannel,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> QbStatus {
    match e {
        Error::Json(_) => QbStatus::Parse,
        Error::Shape(_) | Error::Validation(_) => QbStatus::Validation,
        Error::VanishingBranch { .. } => QbStatus::VanishingBranch,
        Error::Resource(_) => QbStatus::Resource,
        Error::Precondition(_) => QbStatus::Precondition,
        Error::NoConvergence(_) => QbStatus::Numeric,
        Error::Csv(_) | Error::Io(_) => QbStatus::Validation,
    }
}

/// Runs `f`, recording errors and panics in the thread's last-error slot.
fn guard(f: impl FnOnce() -> Result<(), (QbStatus, String)>) -> QbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            QbStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("panic inside qubound");
            QbStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (QbStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (QbStatus, String) {
    (QbStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, (QbStatus, String)> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| (QbStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), (QbStatus, String)> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, (QbStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

fn bound_result(r: &BoundReport) -> QbBoundResult {
    QbBoundResult {
        lhs: r.lhs,
        rhs: r.rhs,
        margin: r.margin,
        tolerance: r.tolerance,
        satisfied: r.satisfied,
        status: match r.status {
            Status::Checked => QbBoundStatus::Checked,
            Status::Vacuous => QbBoundStatus::Vacuous,
            Status::Skipped => QbBoundStatus::Skipped,
        },
    }
}

/// Message of the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next `qb_*` call on the same thread.
#[no_mangle]
pub extern "C" fn qb_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses an instance `{"rho": ..., "projectors": [...]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qb_instance_from_json(json: *const c_char, out: *mut *mut QbInstance) -> QbStatus {
    guard(|| {
        let text = read_str(json, "json")?;
        let inner: ChainInstance =
            serde_json::from_str(text).map_err(|e| (QbStatus::Parse, e.to_string()))?;
        write_out(out, Box::into_raw(Box::new(QbInstance { inner })), "out")
    })
}

/// # Safety
/// `inst` must come from [`qb_instance_from_json`] and not be used again.
#[no_mangle]
pub unsafe extern "C" fn qb_instance_free(inst: *mut QbInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Hilbert space dimension and chain length.
///
/// # Safety
/// `inst` must be a live handle; `dim` and `len` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn qb_instance_shape(inst: *const QbInstance, dim: *mut usize, len: *mut usize) -> QbStatus {
    guard(|| {
        let inst = deref(inst, "instance")?;
        write_out(dim, inst.inner.rho.dim(), "dim")?;
        write_out(len, inst.inner.projectors.len(), "len")
    })
}

/// Runs the chain. With `purify` set a mixed initial state is replaced by
/// its purification, which makes the angles available.
///
/// # Safety
/// `inst` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qb_run_chain(inst: *const QbInstance, purify: bool, out: *mut *mut QbTrace) -> QbStatus {
    guard(|| {
        let inst = deref(inst, "instance")?;
        let mut chain = inst.inner.to_chain().map_err(lib_err)?;
        if purify && inst.inner.rho.as_pure().is_none() {
            chain = chain.purified().map_err(lib_err)?;
        }
        let inner = run_chain(&chain).map_err(lib_err)?;
        write_out(out, Box::into_raw(Box::new(QbTrace { inner })), "out")
    })
}

/// # Safety
/// `trace` must come from [`qb_run_chain`] and not be used again.
#[no_mangle]
pub unsafe extern "C" fn qb_trace_free(trace: *mut QbTrace) {
    if !trace.is_null() {
        drop(Box::from_raw(trace));
    }
}

/// Success probability of the all-`P_i` branch and `‖ρ - ρ_N‖_1`.
///
/// # Safety
/// `trace` must be a live handle; the outputs valid pointers.
#[no_mangle]
pub unsafe extern "C" fn qb_trace_summary(
    trace: *const QbTrace,
    success: *mut f64,
    trace_distance: *mut f64,
    epsilon_sum: *mut f64,
) -> QbStatus {
    guard(|| {
        let t = &deref(trace, "trace")?.inner;
        write_out(success, t.success_probability, "success")?;
        write_out(trace_distance, t.trace_distance, "trace_distance")?;
        write_out(epsilon_sum, t.epsilon_sum(), "epsilon_sum")
    })
}

/// Copies `ε_1 … ε_N` into `buf`. `needed` receives `N`; when `cap < N`
/// nothing is copied and `QB_STATUS_BUFFER_TOO_SMALL` is returned.
///
/// # Safety
/// `trace` must be a live handle, `needed` valid, and `buf` valid for `cap`
/// writes (it may be null when `cap` is 0).
#[no_mangle]
pub unsafe extern "C" fn qb_trace_epsilons(
    trace: *const QbTrace,
    buf: *mut f64,
    cap: usize,
    needed: *mut usize,
) -> QbStatus {
    guard(|| {
        let eps = &deref(trace, "trace")?.inner.epsilons;
        write_out(needed, eps.len(), "needed")?;
        if cap < eps.len() {
            return Err((
                QbStatus::BufferTooSmall,
                format!("buffer holds {cap}, need {}", eps.len()),
            ));
        }
        if !eps.is_empty() {
            if buf.is_null() {
                return Err(null("buf"));
            }
            ptr::copy_nonoverlapping(eps.as_ptr(), buf, eps.len());
        }
        Ok(())
    })
}

/// Evaluates one of the chain bounds on a trace. `bound` is a [`QbBound`]
/// value; anything else is a validation error.
///
/// # Safety
/// `trace` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qb_check_bound(trace: *const QbTrace, bound: u32, out: *mut QbBoundResult) -> QbStatus {
    guard(|| {
        let t = &deref(trace, "trace")?.inner;
        let r = match bound {
            b if b == QbBound::T1a as u32 => check_t1a(t),
            b if b == QbBound::T1b as u32 => check_t1b(t),
            b if b == QbBound::Sen as u32 => check_sen(t),
            other => return Err((QbStatus::Validation, format!("unknown bound id {other}"))),
        };
        write_out(out, bound_result(&r), "out")
    })
}

/// Operator form `P_1⋯P_N⋯P_1 ⪰ I - 4Σ(I - P_i)` on the instance's projectors.
///
/// # Safety
/// `inst` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qb_corollary1(inst: *const QbInstance, out: *mut QbBoundResult) -> QbStatus {
    guard(|| {
        let inst = deref(inst, "instance")?;
        let r = check_corollary1(&inst.inner.projectors).map_err(lib_err)?;
        write_out(out, bound_result(&r), "out")
    })
}

/// JSON record of a trace: the angle report for pure runs, otherwise the
/// probabilities and distances alone.
///
/// # Safety
/// `trace` must be a live handle and `out` a valid pointer. Release the
/// string with [`qb_string_free`].
#[no_mangle]
pub unsafe extern "C" fn qb_trace_to_json(trace: *const QbTrace, out: *mut *mut c_char) -> QbStatus {
    guard(|| {
        let t = &deref(trace, "trace")?.inner;
        let value = match AnglesReport::from_trace(t) {
            Some(r) => serde_json::to_value(r),
            None => Ok(serde_json::json!({
                "stepProb": t.step_probabilities,
                "epsilons": t.epsilons,
                "success": t.success_probability,
                "traceDistance": t.trace_distance,
            })),
        }
        .map_err(|e| (QbStatus::Parse, e.to_string()))?;
        let s = CString::new(value.to_string()).map_err(|e| (QbStatus::InvalidUtf8, e.to_string()))?;
        write_out(out, s.into_raw(), "out")
    })
}

/// # Safety
/// `s` must come from a `qb_*` function returning an owned string.
#[no_mangle]
pub unsafe extern "C" fn qb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a channel `{"prior": [...], "outputs": [...]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qb_channel_from_json(json: *const c_char, out: *mut *mut QbChannel) -> QbStatus {
    guard(|| {
        let text = read_str(json, "json")?;
        let inner: CqChannel = serde_json::from_str(text).map_err(|e| (QbStatus::Parse, e.to_string()))?;
        write_out(out, Box::into_raw(Box::new(QbChannel { inner })), "out")
    })
}

/// # Safety
/// `ch` must come from [`qb_channel_from_json`] and not be used again.
#[no_mangle]
pub unsafe extern "C" fn qb_channel_free(ch: *mut QbChannel) {
    if !ch.is_null() {
        drop(Box::from_raw(ch));
    }
}

/// Holevo quantity `χ` in bits.
///
/// # Safety
/// `ch` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qb_channel_holevo(ch: *const QbChannel, out: *mut f64) -> QbStatus {
    guard(|| {
        let ch = deref(ch, "channel")?;
        let chi = holevo_quantity(&ch.inner).map_err(lib_err)?;
        write_out(out, chi, "out")
    })
}
