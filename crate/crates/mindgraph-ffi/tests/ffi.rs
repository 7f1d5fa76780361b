//! Exercises the C ABI the way a foreign caller would: raw pointers,
//! status codes, and explicit frees.

use std::ffi::{c_char, CStr, CString};
use std::ptr;

use mindgraph_ffi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take_string(p: *mut c_char) -> String {
    assert!(!p.is_null());
    let s = CStr::from_ptr(p).to_str().unwrap().to_owned();
    mg_string_free(p);
    s
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(mg_last_error()).to_str().unwrap().to_owned() }
}

const GRAPH: &str = "tvg 4 0 10\n0 1 0 3\n1 2 2 5\n2 3 6 8\n";

#[test]
fn tvg_round_trip_and_queries() {
    unsafe {
        let text = cstr(GRAPH);
        let mut tvg: *mut MgTvg = ptr::null_mut();
        assert_eq!(mg_tvg_parse(text.as_ptr(), &mut tvg), MgStatus::MgOk);
        assert!(!tvg.is_null());

        let mut n = 0usize;
        assert_eq!(mg_tvg_n_entities(tvg, &mut n), MgStatus::MgOk);
        assert_eq!(n, 4);

        let (mut start, mut end) = (99u64, 99u64);
        assert_eq!(mg_tvg_lifetime(tvg, &mut start, &mut end), MgStatus::MgOk);
        assert_eq!((start, end), (0, 10));

        let mut present = false;
        assert_eq!(mg_tvg_presence(tvg, 0, 1, 2, &mut present), MgStatus::MgOk);
        assert!(present);
        assert_eq!(mg_tvg_presence(tvg, 0, 1, 3, &mut present), MgStatus::MgOk);
        assert!(!present);

        let mut out: *mut c_char = ptr::null_mut();
        assert_eq!(mg_tvg_to_text(tvg, &mut out), MgStatus::MgOk);
        assert_eq!(take_string(out), GRAPH);

        mg_tvg_free(tvg);
    }
}

#[test]
fn foremost_arrival_found_and_missing() {
    unsafe {
        let text = cstr(GRAPH);
        let mut tvg: *mut MgTvg = ptr::null_mut();
        assert_eq!(mg_tvg_parse(text.as_ptr(), &mut tvg), MgStatus::MgOk);

        let mut found = false;
        let mut arrival = 0u64;
        assert_eq!(
            mg_tvg_foremost_arrival(tvg, 0, 3, 0, &mut found, &mut arrival),
            MgStatus::MgOk
        );
        assert!(found);
        assert_eq!(arrival, 6);

        // Edge 0-1 is gone by the time anything reaches node 3.
        arrival = 123;
        assert_eq!(
            mg_tvg_foremost_arrival(tvg, 3, 0, 0, &mut found, &mut arrival),
            MgStatus::MgOk
        );
        assert!(!found);
        assert_eq!(arrival, 123);

        assert_eq!(
            mg_tvg_foremost_arrival(tvg, 0, 9, 0, &mut found, &mut arrival),
            MgStatus::MgRuntimeError
        );
        assert!(last_error().contains("9"));

        mg_tvg_free(tvg);
    }
}

#[test]
fn parse_errors_surface_code_and_message() {
    unsafe {
        let mut tvg: *mut MgTvg = ptr::null_mut();
        assert_eq!(mg_tvg_parse(ptr::null(), &mut tvg), MgStatus::MgNullPointer);
        assert!(tvg.is_null());

        let bad = cstr("tvg 2 0 5\n0 0 1 2\n");
        assert_eq!(mg_tvg_parse(bad.as_ptr(), &mut tvg), MgStatus::MgParseError);
        assert!(tvg.is_null());
        assert!(!last_error().is_empty());
    }
}

const SCENARIO: &str = "\
n_agents = 6
horizon = 40
seed = 7
topology = complete
initial_opinions = uniform 7
mu = 0.5
eps_min = 1.0
eps_max = 1.0
";

#[test]
fn scenario_run_is_deterministic_and_overridable() {
    unsafe {
        let text = cstr(SCENARIO);
        let mut scn: *mut MgScenario = ptr::null_mut();
        assert_eq!(mg_scenario_parse(text.as_ptr(), &mut scn), MgStatus::MgOk);

        let mut out: *mut c_char = ptr::null_mut();
        assert_eq!(mg_scenario_run_json(scn, &mut out), MgStatus::MgOk);
        let first = take_string(out);
        assert_eq!(mg_scenario_run_json(scn, &mut out), MgStatus::MgOk);
        let second = take_string(out);
        assert_eq!(first, second);
        assert!(first.contains("\"samples\""));

        let key = cstr("seed");
        let value = cstr("8");
        assert_eq!(mg_scenario_set(scn, key.as_ptr(), value.as_ptr()), MgStatus::MgOk);
        assert_eq!(mg_scenario_run_json(scn, &mut out), MgStatus::MgOk);
        let reseeded = take_string(out);
        assert_ne!(first, reseeded);

        let bad_value = cstr("not-a-number");
        assert_eq!(
            mg_scenario_set(scn, key.as_ptr(), bad_value.as_ptr()),
            MgStatus::MgParseError
        );

        assert_eq!(mg_scenario_to_text(scn, &mut out), MgStatus::MgOk);
        let echoed = take_string(out);
        assert!(echoed.contains("seed = 8"));

        mg_scenario_free(scn);
    }
}

#[test]
fn scenario_parse_reports_missing_fields() {
    unsafe {
        let text = cstr("n_agents = 3\n");
        let mut scn: *mut MgScenario = ptr::null_mut();
        assert_eq!(mg_scenario_parse(text.as_ptr(), &mut scn), MgStatus::MgParseError);
        assert!(scn.is_null());
        assert!(last_error().contains("E_MISSING_FIELD"));
    }
}

#[test]
fn null_handles_are_rejected_not_crashed() {
    unsafe {
        let mut n = 0usize;
        assert_eq!(mg_tvg_n_entities(ptr::null(), &mut n), MgStatus::MgNullPointer);
        let mut out: *mut c_char = ptr::null_mut();
        assert_eq!(mg_scenario_run_json(ptr::null(), &mut out), MgStatus::MgNullPointer);
        mg_tvg_free(ptr::null_mut());
        mg_scenario_free(ptr::null_mut());
        mg_string_free(ptr::null_mut());
    }
}
