//! C ABI for the biplan planner: opaque handles, integer status codes, and
//! JSON strings at the boundary. All returned strings are owned by Rust and
//! must be released with `biplan_string_free`.

use std::ffi::{c_char, c_int, CStr, CString};
use std::ptr;

use biplan::freespace::{compute_free_space, Config, FreeSpace, Workspace};
use biplan::io::{PlanFile, WorkspaceFile};
use biplan::plan::{to_timed, validate_decoupled, validate_timed, DecoupledPlan};
use biplan::planner::plan_min_sum_with_plan;
use biplan::scalar::Scalar;

/// Status codes shared by all entry points.
pub const BIPLAN_OK: c_int = 0;
/// Parse or geometry error.
pub const BIPLAN_ERR_PARSE: c_int = 1;
/// Well-formed negative answer (infeasible instance, failed validation).
pub const BIPLAN_NEGATIVE: c_int = 2;
/// Null pointer or invalid UTF-8 argument.
pub const BIPLAN_ERR_ARGUMENT: c_int = 3;

/// Opaque workspace instance: geometry, free space and the two terminals.
pub struct BiplanWorkspace {
    workspace: Workspace,
    free: FreeSpace,
    start: Config,
    goal: Config,
}

/// Opaque plan: exact cost plus the decoupled move sequence.
pub struct BiplanPlan {
    cost: Scalar,
    plan: DecoupledPlan,
}

fn cstr_arg<'a>(ptr: *const c_char) -> Option<&'a str> {
    if ptr.is_null() {
        return None;
    }
    unsafe { CStr::from_ptr(ptr) }.to_str().ok()
}

fn into_cstring(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// Parses a workspace instance from JSON (schema v1).
///
/// # Safety
/// `json` must be a valid NUL-terminated string; `out` must be a valid
/// pointer. On success `*out` owns a workspace handle to be released with
/// [`biplan_workspace_free`].
#[no_mangle]
pub unsafe extern "C" fn biplan_workspace_parse_json(
    json: *const c_char,
    out: *mut *mut BiplanWorkspace,
) -> c_int {
    if out.is_null() {
        return BIPLAN_ERR_ARGUMENT;
    }
    unsafe { *out = ptr::null_mut() };
    let Some(json) = cstr_arg(json) else {
        return BIPLAN_ERR_ARGUMENT;
    };
    let file = match WorkspaceFile::parse(json) {
        Ok(f) => f,
        Err(_) => return BIPLAN_ERR_PARSE,
    };
    let (workspace, start, goal) = match file.to_instance() {
        Ok(i) => i,
        Err(_) => return BIPLAN_ERR_PARSE,
    };
    let free = match compute_free_space(&workspace) {
        Ok(f) => f,
        Err(_) => return BIPLAN_ERR_PARSE,
    };
    let handle = Box::new(BiplanWorkspace {
        workspace,
        free,
        start,
        goal,
    });
    unsafe { *out = Box::into_raw(handle) };
    BIPLAN_OK
}

/// Releases a workspace handle. Null is ignored.
///
/// # Safety
/// `w` must have come from [`biplan_workspace_parse_json`] and not be freed
/// twice.
#[no_mangle]
pub unsafe extern "C" fn biplan_workspace_free(w: *mut BiplanWorkspace) {
    if !w.is_null() {
        drop(unsafe { Box::from_raw(w) });
    }
}

/// Number of vertices of the workspace polygon (diagnostic).
///
/// # Safety
/// `w` must be a live workspace handle.
#[no_mangle]
pub unsafe extern "C" fn biplan_workspace_vertex_count(w: *const BiplanWorkspace) -> c_int {
    if w.is_null() {
        return -1;
    }
    let w = unsafe { &*w };
    w.workspace.vertex_count() as c_int
}

/// Runs the exact min-sum planner between the instance's start and goal.
/// Returns `BIPLAN_OK` with a plan handle in `*out`, `BIPLAN_NEGATIVE` when
/// the instance is infeasible (no handle), or an error code.
///
/// # Safety
/// `w` must be a live workspace handle; `out` must be valid. A returned plan
/// must be released with [`biplan_plan_free`].
#[no_mangle]
pub unsafe extern "C" fn biplan_plan_min_sum(
    w: *const BiplanWorkspace,
    use_heuristic: bool,
    out: *mut *mut BiplanPlan,
) -> c_int {
    if w.is_null() || out.is_null() {
        return BIPLAN_ERR_ARGUMENT;
    }
    unsafe { *out = ptr::null_mut() };
    let w = unsafe { &*w };
    match plan_min_sum_with_plan(&w.free, &w.start, &w.goal, use_heuristic) {
        Ok((result, Some(plan))) => {
            let handle = Box::new(BiplanPlan {
                cost: result.cost,
                plan,
            });
            unsafe { *out = Box::into_raw(handle) };
            BIPLAN_OK
        }
        Ok((_, None)) => BIPLAN_NEGATIVE,
        Err(_) => BIPLAN_ERR_PARSE,
    }
}

/// Releases a plan handle. Null is ignored.
///
/// # Safety
/// `p` must have come from [`biplan_plan_min_sum`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn biplan_plan_free(p: *mut BiplanPlan) {
    if !p.is_null() {
        drop(unsafe { Box::from_raw(p) });
    }
}

/// Exact plan cost as a `"p/q"` string; free with [`biplan_string_free`].
///
/// # Safety
/// `p` must be a live plan handle.
#[no_mangle]
pub unsafe extern "C" fn biplan_plan_cost_string(p: *const BiplanPlan) -> *mut c_char {
    if p.is_null() {
        return ptr::null_mut();
    }
    let p = unsafe { &*p };
    into_cstring(p.cost.to_string())
}

/// Serializes the plan (including its timed form) to JSON; free the string
/// with [`biplan_string_free`].
///
/// # Safety
/// `p` must be a live plan handle.
#[no_mangle]
pub unsafe extern "C" fn biplan_plan_to_json(p: *const BiplanPlan) -> *mut c_char {
    if p.is_null() {
        return ptr::null_mut();
    }
    let p = unsafe { &*p };
    let timed = match to_timed(&p.plan) {
        Ok(t) => t,
        Err(_) => return ptr::null_mut(),
    };
    let file = PlanFile::from_plan(&p.cost, &p.plan, Some(&timed));
    into_cstring(file.to_json())
}

/// Validates a plan JSON document against a workspace. Returns `BIPLAN_OK`
/// when valid, `BIPLAN_NEGATIVE` when violations were found (the report JSON
/// is stored in `*report_out` if non-null), or an error code.
///
/// # Safety
/// `w` must be a live workspace handle, `plan_json` a valid NUL-terminated
/// string. A string stored in `*report_out` must be freed with
/// [`biplan_string_free`].
#[no_mangle]
pub unsafe extern "C" fn biplan_validate_plan_json(
    w: *const BiplanWorkspace,
    plan_json: *const c_char,
    timed: bool,
    report_out: *mut *mut c_char,
) -> c_int {
    if w.is_null() {
        return BIPLAN_ERR_ARGUMENT;
    }
    if !report_out.is_null() {
        unsafe { *report_out = ptr::null_mut() };
    }
    let Some(json) = cstr_arg(plan_json) else {
        return BIPLAN_ERR_ARGUMENT;
    };
    let w = unsafe { &*w };
    let file = match PlanFile::parse(json) {
        Ok(f) => f,
        Err(_) => return BIPLAN_ERR_PARSE,
    };
    let plan = match file.to_decoupled() {
        Ok(p) => p,
        Err(_) => return BIPLAN_ERR_PARSE,
    };
    let mut report = validate_decoupled(&w.free, &plan);
    if timed {
        let tp = match file.to_timed() {
            Ok(Some(tp)) => tp,
            Ok(None) => match to_timed(&plan) {
                Ok(tp) => tp,
                Err(_) => return BIPLAN_ERR_PARSE,
            },
            Err(_) => return BIPLAN_ERR_PARSE,
        };
        report
            .violations
            .extend(validate_timed(&w.free, &tp).violations);
    }
    if !report_out.is_null() {
        let json = serde_json::to_string(&report).unwrap_or_default();
        unsafe { *report_out = into_cstring(json) };
    }
    if report.ok() {
        BIPLAN_OK
    } else {
        BIPLAN_NEGATIVE
    }
}

/// Library version; free with [`biplan_string_free`].
#[no_mangle]
pub extern "C" fn biplan_version() -> *mut c_char {
    into_cstring(env!("CARGO_PKG_VERSION").to_string())
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must have been returned by a biplan function and not freed before.
#[no_mangle]
pub unsafe extern "C" fn biplan_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}
