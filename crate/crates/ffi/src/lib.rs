//! C ABI for `srkbench`.
//!
//! Spaces are opaque handles created with [`srk_space_new`] and released with
//! [`srk_space_free`]. Every fallible call returns an [`SrkStatus`]; on failure
//! [`srk_last_error`] describes the error of the calling thread. Big integers
//! and JSON documents are written as NUL-terminated strings into caller
//! buffers: when the buffer is too small the call returns
//! `SRK_STATUS_BUFFER_TOO_SMALL` and stores the required size (including the
//! terminator) in `*needed`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use srkbench::graph::{self, Budgets, PowerGraphSpec};
use srkbench::verify::{self, Suite, VerifyOptions};
use srkbench::{bounds, counting, Error, SrkParams};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SrkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    BudgetExceeded = 3,
    Precondition = 4,
    BufferTooSmall = 5,
    MissingEntry = 6,
    Internal = 7,
    Panic = 8,
}

/// Resource limits; see [`srk_default_budgets`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SrkBudgets {
    pub max_vertices: u64,
    pub max_ball: u64,
    pub max_nodes: u64,
}

impl From<SrkBudgets> for Budgets {
    fn from(b: SrkBudgets) -> Self {
        Budgets { max_vertices: b.max_vertices, max_ball: b.max_ball, max_nodes: b.max_nodes }
    }
}

/// Opaque sum-rank space.
pub struct SrkSpace {
    params: SrkParams,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> SrkStatus {
    match e {
        Error::NotPrime(_)
        | Error::NotPrimePower(_)
        | Error::FieldTooLarge { .. }
        | Error::ShapeMismatch(_)
        | Error::InvalidParams(_)
        | Error::Json(_) => SrkStatus::InvalidArgument,
        Error::BudgetExceeded { .. } => SrkStatus::BudgetExceeded,
        Error::Precondition(_) => SrkStatus::Precondition,
        Error::MissingRamseyEntry { .. } => SrkStatus::MissingEntry,
        Error::Invariant(_) | Error::Io(_) | Error::Csv(_) => SrkStatus::Internal,
    }
}

/// Runs `f`, turning errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), SrkStatus>) -> SrkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            SrkStatus::Ok
        }
        Ok(Err(status)) => status,
        Err(_) => {
            set_last_error("panic inside srkbench");
            SrkStatus::Panic
        }
    }
}

fn fail(e: Error) -> SrkStatus {
    set_last_error(&e.to_string());
    status_of(&e)
}

fn null(what: &str) -> SrkStatus {
    set_last_error(&format!("{what} is null"));
    SrkStatus::NullPointer
}

unsafe fn space_ref<'a>(space: *const SrkSpace) -> Result<&'a SrkSpace, SrkStatus> {
    space.as_ref().ok_or_else(|| null("space"))
}

unsafe fn budgets_or_default(budgets: *const SrkBudgets) -> Budgets {
    budgets.as_ref().map_or_else(Budgets::default, |b| (*b).into())
}

/// Copies `text` and a terminator into `buf`.
unsafe fn write_string(text: &str, buf: *mut c_char, len: usize, needed: *mut usize) -> Result<(), SrkStatus> {
    let required = text.len() + 1;
    if !needed.is_null() {
        *needed = required;
    }
    if buf.is_null() || len < required {
        set_last_error(&format!("buffer of {len} bytes is too small; {required} needed"));
        return Err(SrkStatus::BufferTooSmall);
    }
    ptr::copy_nonoverlapping(text.as_ptr(), buf as *mut u8, text.len());
    *buf.add(text.len()) = 0;
    Ok(())
}

#[no_mangle]
pub extern "C" fn srk_default_budgets() -> SrkBudgets {
    let b = Budgets::default();
    SrkBudgets { max_vertices: b.max_vertices, max_ball: b.max_ball, max_nodes: b.max_nodes }
}

/// Message of the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn srk_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Creates the space over GF(`q`) with `t` blocks of shape `n[i] × m[i]`.
///
/// # Safety
/// `n` and `m` must point to `t` readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn srk_space_new(
    q: u32,
    n: *const usize,
    m: *const usize,
    t: usize,
    out: *mut *mut SrkSpace,
) -> SrkStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        if n.is_null() || m.is_null() {
            return Err(null("block dimensions"));
        }
        let n = std::slice::from_raw_parts(n, t).to_vec();
        let m = std::slice::from_raw_parts(m, t).to_vec();
        let params = SrkParams::with_order(q, n, m).map_err(fail)?;
        *out = Box::into_raw(Box::new(SrkSpace { params }));
        Ok(())
    })
}

/// Releases a space; null is ignored.
///
/// # Safety
/// `space` must come from [`srk_space_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn srk_space_free(space: *mut SrkSpace) {
    if !space.is_null() {
        drop(Box::from_raw(space));
    }
}

/// Number of elements of the space, as a decimal string.
///
/// # Safety
/// `space` must be a live handle; `buf` must hold `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn srk_space_size(
    space: *const SrkSpace,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> SrkStatus {
    guard(|| {
        let s = space_ref(space)?;
        write_string(&counting::space_size(&s.params).to_string(), buf, len, needed)
    })
}

/// Ball volume `V(k)` as a decimal string.
///
/// # Safety
/// As for [`srk_space_size`].
#[no_mangle]
pub unsafe extern "C" fn srk_ball_volume(
    space: *const SrkSpace,
    k: usize,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> SrkStatus {
    guard(|| {
        let s = space_ref(space)?;
        write_string(&counting::ball_volume(&s.params, k).to_string(), buf, len, needed)
    })
}

/// GV lower bound `⌈|V| / V(d − 1)⌉` as a decimal string.
///
/// # Safety
/// As for [`srk_space_size`].
#[no_mangle]
pub unsafe extern "C" fn srk_gv_lower(
    space: *const SrkSpace,
    d: usize,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> SrkStatus {
    guard(|| {
        let s = space_ref(space)?;
        let gv = bounds::gv_lower(&s.params, d).map_err(fail)?;
        write_string(&gv.to_string(), buf, len, needed)
    })
}

/// Statistics of the `k`-th power graph as a JSON object with fields
/// `num_vertices`, `D`, `T`, `Delta` (decimal strings) and `eps_star`.
/// `budgets` may be null for the defaults.
///
/// # Safety
/// As for [`srk_space_size`]; `budgets` is null or readable.
#[no_mangle]
pub unsafe extern "C" fn srk_graph_stats_json(
    space: *const SrkSpace,
    k: usize,
    budgets: *const SrkBudgets,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> SrkStatus {
    guard(|| {
        let s = space_ref(space)?;
        let spec = PowerGraphSpec::new(s.params.clone(), k);
        let stats = graph::graph_stats(&spec, &budgets_or_default(budgets)).map_err(fail)?;
        let text = serde_json::to_string(&stats).map_err(|e| fail(e.into()))?;
        write_string(&text, buf, len, needed)
    })
}

/// Exact independence number of the `k`-th power graph, i.e. the largest
/// code with minimum distance `k + 1`.
///
/// # Safety
/// `space` must be a live handle, `out` writable, `budgets` null or readable.
#[no_mangle]
pub unsafe extern "C" fn srk_alpha(
    space: *const SrkSpace,
    k: usize,
    budgets: *const SrkBudgets,
    out: *mut u64,
) -> SrkStatus {
    guard(|| {
        let s = space_ref(space)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let spec = PowerGraphSpec::new(s.params.clone(), k);
        let r = graph::max_independent_set(&spec, &budgets_or_default(budgets)).map_err(fail)?;
        *out = r.size as u64;
        Ok(())
    })
}

/// Runs a named verification suite; `*passed` is 1 when every check passed.
///
/// # Safety
/// `name` must be a NUL-terminated string and `passed` writable.
#[no_mangle]
pub unsafe extern "C" fn srk_verify(name: *const c_char, passed: *mut i32) -> SrkStatus {
    guard(|| {
        if name.is_null() || passed.is_null() {
            return Err(null("argument"));
        }
        let name = CStr::from_ptr(name)
            .to_str()
            .map_err(|_| fail(Error::InvalidParams("suite name is not UTF-8".into())))?;
        let suite: Suite = name.parse().map_err(fail)?;
        let report = verify::run_suite(suite, &VerifyOptions::default()).map_err(fail)?;
        if !report.passed() {
            set_last_error(&format!("{} of {} checks failed", report.failures, report.checks));
        }
        *passed = report.passed() as i32;
        Ok(())
    })
}
