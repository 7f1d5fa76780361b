//! C ABI over the mindgraph library.
//!
//! All functions return [`MgStatus`]; results come back through out
//! pointers. Handles are opaque and must be released with the matching
//! `_free` function. Strings returned by the library are NUL-terminated,
//! UTF-8, and owned by the caller until passed to [`mg_string_free`].
//! On any non-`Ok` status, [`mg_last_error`] yields a human-readable
//! message valid until the next call on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use mindgraph::scenario::{apply_override, emit_scenario, parse_scenario};
use mindgraph::{emit_results, run_with_echo, EmitOptions, OutputFormat, ScenarioConfig};
use mindgraph::{TimeVaryingGraph, Window};

/// Status codes returned by every API function.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MgStatus {
    MgOk = 0,
    /// A required pointer argument was NULL.
    MgNullPointer = 1,
    /// An input string was not valid UTF-8.
    MgInvalidUtf8 = 2,
    /// Input text failed to parse or validate.
    MgParseError = 3,
    /// The operation failed at run time (bad entity, domain, etc.).
    MgRuntimeError = 4,
    /// A panic was caught at the boundary; state may be inconsistent.
    MgInternalError = 5,
}

/// Opaque time-varying graph handle.
pub struct MgTvg {
    inner: TimeVaryingGraph,
}

/// Opaque scenario handle.
pub struct MgScenario {
    inner: ScenarioConfig,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn fail(status: MgStatus, msg: &str) -> MgStatus {
    set_last_error(msg);
    status
}

/// Message for the most recent failure on this thread. Never NULL;
/// empty before any failure. Valid until the next library call on the
/// same thread. Do not free.
#[no_mangle]
pub extern "C" fn mg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Frees a string previously returned by this library.
///
/// # Safety
/// `s` must be NULL or a pointer obtained from this library that has
/// not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn mg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, MgStatus> {
    if ptr.is_null() {
        return Err(fail(MgStatus::MgNullPointer, "NULL string argument"));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|e| fail(MgStatus::MgInvalidUtf8, &e.to_string()))
}

fn write_out<T>(out: *mut T, value: T) -> MgStatus {
    if out.is_null() {
        return fail(MgStatus::MgNullPointer, "NULL out pointer");
    }
    unsafe { out.write(value) };
    MgStatus::MgOk
}

fn into_c_string(s: String, out: *mut *mut c_char) -> MgStatus {
    match CString::new(s) {
        Ok(c) => write_out(out, c.into_raw()),
        Err(e) => fail(MgStatus::MgInternalError, &e.to_string()),
    }
}

fn guard(f: impl FnOnce() -> MgStatus) -> MgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(MgStatus::MgInternalError, "panic caught at FFI boundary"),
    }
}

/// Parses the textual graph format into a new handle.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mg_tvg_parse(text: *const c_char, out: *mut *mut MgTvg) -> MgStatus {
    guard(|| {
        let text = match read_str(text) {
            Ok(t) => t,
            Err(status) => return status,
        };
        match TimeVaryingGraph::from_text(text) {
            Ok(tvg) => write_out(out, Box::into_raw(Box::new(MgTvg { inner: tvg }))),
            Err(e) => fail(MgStatus::MgParseError, &e.to_string()),
        }
    })
}

/// Releases a graph handle.
///
/// # Safety
/// `tvg` must be NULL or an unfreed handle from [`mg_tvg_parse`].
#[no_mangle]
pub unsafe extern "C" fn mg_tvg_free(tvg: *mut MgTvg) {
    if !tvg.is_null() {
        drop(Box::from_raw(tvg));
    }
}

/// Serializes the graph back to its textual format.
///
/// # Safety
/// `tvg` must be a valid handle; `out` a valid pointer. The returned
/// string must be released with [`mg_string_free`].
#[no_mangle]
pub unsafe extern "C" fn mg_tvg_to_text(tvg: *const MgTvg, out: *mut *mut c_char) -> MgStatus {
    guard(|| {
        let Some(tvg) = tvg.as_ref() else {
            return fail(MgStatus::MgNullPointer, "NULL graph handle");
        };
        into_c_string(tvg.inner.to_text(), out)
    })
}

/// Number of entities in the graph.
///
/// # Safety
/// `tvg` must be a valid handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mg_tvg_n_entities(tvg: *const MgTvg, out: *mut usize) -> MgStatus {
    guard(|| {
        let Some(tvg) = tvg.as_ref() else {
            return fail(MgStatus::MgNullPointer, "NULL graph handle");
        };
        write_out(out, tvg.inner.n_entities())
    })
}

/// Lifetime of the graph as a half-open interval `[start, end)`.
///
/// # Safety
/// `tvg` must be a valid handle; `start` and `end` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn mg_tvg_lifetime(
    tvg: *const MgTvg,
    start: *mut u64,
    end: *mut u64,
) -> MgStatus {
    guard(|| {
        let Some(tvg) = tvg.as_ref() else {
            return fail(MgStatus::MgNullPointer, "NULL graph handle");
        };
        let Window { start: s, end: e } = tvg.inner.lifetime();
        let status = write_out(start, s);
        if status != MgStatus::MgOk {
            return status;
        }
        write_out(end, e)
    })
}

/// Whether the edge `{u, v}` is present at time `t`.
///
/// # Safety
/// `tvg` must be a valid handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mg_tvg_presence(
    tvg: *const MgTvg,
    u: usize,
    v: usize,
    t: u64,
    out: *mut bool,
) -> MgStatus {
    guard(|| {
        let Some(tvg) = tvg.as_ref() else {
            return fail(MgStatus::MgNullPointer, "NULL graph handle");
        };
        match tvg.inner.presence((u, v), t) {
            Ok(p) => write_out(out, p),
            Err(e) => fail(MgStatus::MgRuntimeError, &e.to_string()),
        }
    })
}

/// Earliest arrival time from `src` to `dst` departing at or after
/// `t_start`. Sets `*found` to false (and leaves `*arrival` untouched)
/// when no journey exists.
///
/// # Safety
/// `tvg` must be a valid handle; `found` and `arrival` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn mg_tvg_foremost_arrival(
    tvg: *const MgTvg,
    src: usize,
    dst: usize,
    t_start: u64,
    found: *mut bool,
    arrival: *mut u64,
) -> MgStatus {
    guard(|| {
        let Some(tvg) = tvg.as_ref() else {
            return fail(MgStatus::MgNullPointer, "NULL graph handle");
        };
        if arrival.is_null() {
            return fail(MgStatus::MgNullPointer, "NULL out pointer");
        }
        match tvg.inner.foremost_journey(src, dst, t_start) {
            Ok(Some(j)) => {
                arrival.write(j.arrival);
                write_out(found, true)
            }
            Ok(None) => write_out(found, false),
            Err(e) => fail(MgStatus::MgRuntimeError, &e.to_string()),
        }
    })
}

/// Parses scenario text into a new handle.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mg_scenario_parse(
    text: *const c_char,
    out: *mut *mut MgScenario,
) -> MgStatus {
    guard(|| {
        let text = match read_str(text) {
            Ok(t) => t,
            Err(status) => return status,
        };
        match parse_scenario(text) {
            Ok(cfg) => write_out(out, Box::into_raw(Box::new(MgScenario { inner: cfg }))),
            Err(e) => fail(MgStatus::MgParseError, &e.to_string()),
        }
    })
}

/// Releases a scenario handle.
///
/// # Safety
/// `scenario` must be NULL or an unfreed handle from [`mg_scenario_parse`].
#[no_mangle]
pub unsafe extern "C" fn mg_scenario_free(scenario: *mut MgScenario) {
    if !scenario.is_null() {
        drop(Box::from_raw(scenario));
    }
}

/// Overrides one scenario key with a new value, as `--set` does on the
/// command line.
///
/// # Safety
/// `scenario` must be a valid handle; `key` and `value` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn mg_scenario_set(
    scenario: *mut MgScenario,
    key: *const c_char,
    value: *const c_char,
) -> MgStatus {
    guard(|| {
        let Some(scenario) = scenario.as_mut() else {
            return fail(MgStatus::MgNullPointer, "NULL scenario handle");
        };
        let (key, value) = match (read_str(key), read_str(value)) {
            (Ok(k), Ok(v)) => (k, v),
            (Err(status), _) | (_, Err(status)) => return status,
        };
        match apply_override(&mut scenario.inner, key, value) {
            Ok(()) => MgStatus::MgOk,
            Err(e) => fail(MgStatus::MgParseError, &e.to_string()),
        }
    })
}

/// Emits the scenario in its canonical textual form.
///
/// # Safety
/// `scenario` must be a valid handle; `out` a valid pointer. The
/// returned string must be released with [`mg_string_free`].
#[no_mangle]
pub unsafe extern "C" fn mg_scenario_to_text(
    scenario: *const MgScenario,
    out: *mut *mut c_char,
) -> MgStatus {
    guard(|| {
        let Some(scenario) = scenario.as_ref() else {
            return fail(MgStatus::MgNullPointer, "NULL scenario handle");
        };
        into_c_string(emit_scenario(&scenario.inner), out)
    })
}

/// Runs the scenario and returns the full trajectory as JSON. The
/// output carries no timestamp, so identical inputs give identical
/// bytes.
///
/// # Safety
/// `scenario` must be a valid handle; `out` a valid pointer. The
/// returned string must be released with [`mg_string_free`].
#[no_mangle]
pub unsafe extern "C" fn mg_scenario_run_json(
    scenario: *const MgScenario,
    out: *mut *mut c_char,
) -> MgStatus {
    guard(|| {
        let Some(scenario) = scenario.as_ref() else {
            return fail(MgStatus::MgNullPointer, "NULL scenario handle");
        };
        if let Err(e) = scenario.inner.validate() {
            return fail(MgStatus::MgParseError, &e.to_string());
        }
        let echo = emit_scenario(&scenario.inner);
        let tr = match run_with_echo(&scenario.inner, echo) {
            Ok(tr) => tr,
            Err(e) => return fail(MgStatus::MgRuntimeError, &e.to_string()),
        };
        let opts = EmitOptions { timestamp: false, force_opinion_columns: false };
        let mut buf = Vec::new();
        if let Err(e) = emit_results(&tr, OutputFormat::Json, &opts, &mut buf) {
            return fail(MgStatus::MgRuntimeError, &e.to_string());
        }
        match String::from_utf8(buf) {
            Ok(s) => into_c_string(s, out),
            Err(e) => fail(MgStatus::MgInternalError, &e.to_string()),
        }
    })
}
