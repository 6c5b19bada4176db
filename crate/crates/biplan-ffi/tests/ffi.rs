//! Round-trip the C ABI from Rust: parse an instance, plan, validate.

use std::ffi::{CStr, CString};
use std::ptr;

use biplan_ffi::*;

const RECT_INSTANCE: &str = r#"{
    "v": 1,
    "outer": [["0","0"],["5","0"],["5","4"],["0","4"]],
    "holes": [],
    "start": {"a": ["1","1"], "b": ["4","1"]},
    "goal": {"a": ["4","3"], "b": ["1","3"]}
}"#;

fn parse(json: &str) -> *mut BiplanWorkspace {
    let json = CString::new(json).unwrap();
    let mut handle: *mut BiplanWorkspace = ptr::null_mut();
    let code = unsafe { biplan_workspace_parse_json(json.as_ptr(), &mut handle) };
    assert_eq!(code, BIPLAN_OK);
    assert!(!handle.is_null());
    handle
}

#[test]
fn plan_and_validate_through_the_abi() {
    let w = parse(RECT_INSTANCE);
    assert_eq!(unsafe { biplan_workspace_vertex_count(w) }, 4);

    let mut plan: *mut BiplanPlan = ptr::null_mut();
    let code = unsafe { biplan_plan_min_sum(w, false, &mut plan) };
    assert_eq!(code, BIPLAN_OK);
    assert!(!plan.is_null());

    let cost = unsafe { biplan_plan_cost_string(plan) };
    assert!(!cost.is_null());
    let cost_str = unsafe { CStr::from_ptr(cost) }.to_str().unwrap().to_owned();
    assert_eq!(cost_str, "10");
    unsafe { biplan_string_free(cost) };

    let json = unsafe { biplan_plan_to_json(plan) };
    assert!(!json.is_null());
    let json_str = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_owned();
    unsafe { biplan_string_free(json) };

    // The emitted plan validates, timed form included.
    let plan_json = CString::new(json_str).unwrap();
    let mut report: *mut std::ffi::c_char = ptr::null_mut();
    let code = unsafe { biplan_validate_plan_json(w, plan_json.as_ptr(), true, &mut report) };
    assert_eq!(code, BIPLAN_OK);
    assert!(!report.is_null());
    let report_str = unsafe { CStr::from_ptr(report) }.to_str().unwrap();
    assert!(report_str.contains("\"violations\":[]"));
    unsafe { biplan_string_free(report) };

    unsafe { biplan_plan_free(plan) };
    unsafe { biplan_workspace_free(w) };
}

#[test]
fn infeasible_instance_reports_negative() {
    // Two chambers joined by a sub-unit corridor: start and goal on
    // opposite sides.
    let json = r#"{
        "v": 1,
        "outer": [["0","0"],["3","0"],["3","1"],["5","1"],["5","0"],["8","0"],
                  ["8","3"],["5","3"],["5","3/2"],["3","3/2"],["3","3"],["0","3"]],
        "holes": [],
        "start": {"a": ["1","1"], "b": ["1","2"]},
        "goal": {"a": ["7","1"], "b": ["7","2"]}
    }"#;
    let w = parse(json);
    let mut plan: *mut BiplanPlan = ptr::null_mut();
    let code = unsafe { biplan_plan_min_sum(w, false, &mut plan) };
    assert_eq!(code, BIPLAN_NEGATIVE);
    assert!(plan.is_null());
    unsafe { biplan_workspace_free(w) };
}

#[test]
fn argument_errors() {
    let mut handle: *mut BiplanWorkspace = ptr::null_mut();
    assert_eq!(
        unsafe { biplan_workspace_parse_json(ptr::null(), &mut handle) },
        BIPLAN_ERR_ARGUMENT
    );
    let bad = CString::new("not json").unwrap();
    assert_eq!(
        unsafe { biplan_workspace_parse_json(bad.as_ptr(), &mut handle) },
        BIPLAN_ERR_PARSE
    );
    let version = biplan_version();
    assert!(!version.is_null());
    unsafe { biplan_string_free(version) };
}
