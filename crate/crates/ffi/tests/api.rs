use std::ffi::{CStr, CString};
use std::ptr;

use ddl_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut std::ffi::c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    ddl_string_free(s);
    out
}

unsafe fn last_error() -> String {
    CStr::from_ptr(ddl_last_error()).to_str().unwrap().to_owned()
}

#[test]
fn formula_round_trip() {
    unsafe {
        let mut f = ptr::null_mut();
        assert_eq!(ddl_formula_parse(c("O(~B / A | B)").as_ptr(), &mut f), DDL_OK);
        let mut s = ptr::null_mut();
        assert_eq!(ddl_formula_render(f, &mut s), DDL_OK);
        assert_eq!(take(s), "O(~B / A | B)");
        ddl_formula_free(f);
    }
}

#[test]
fn parse_error_sets_message() {
    unsafe {
        let mut f = ptr::null_mut();
        assert_eq!(ddl_formula_parse(c("p & ").as_ptr(), &mut f), DDL_ERR_PARSE);
        assert!(f.is_null());
        assert!(last_error().contains("byte 4"), "{}", last_error());
        assert_eq!(ddl_formula_parse(ptr::null(), &mut f), DDL_ERR_NULL);
    }
}

#[test]
fn evaluation_through_handles() {
    unsafe {
        let mut m = ptr::null_mut();
        assert_eq!(ddl_model_parse(c("worlds 2\nrel 0>=0 1>=1 1>=0\nval p = {1}\n").as_ptr(), &mut m), DDL_OK);
        let mut n = 0u32;
        assert_eq!(ddl_model_world_count(m, &mut n), DDL_OK);
        assert_eq!(n, 2);

        let mut f = ptr::null_mut();
        ddl_formula_parse(c("O(p / T)").as_ptr(), &mut f);
        let mut bits = 0u16;
        assert_eq!(ddl_truth_set(f, m, DDL_RULE_OPT, &mut bits), DDL_OK);
        assert_eq!(bits, 0b11);
        let mut valid = false;
        assert_eq!(ddl_valid_in_model(f, m, DDL_RULE_MAX, &mut valid), DDL_OK);
        assert!(valid);
        assert_eq!(ddl_truth_set(f, m, 7, &mut bits), DDL_ERR_RANGE);

        let mut schema = ptr::null_mut();
        ddl_formula_parse(c("[]?f -> ?f").as_ptr(), &mut schema);
        assert_eq!(ddl_valid_on_frame(schema, m, DDL_RULE_LEWIS, &mut valid), DDL_OK);
        assert!(valid);
        assert_eq!(ddl_valid_in_model(schema, m, DDL_RULE_MAX, &mut valid), DDL_ERR_EVAL);
        assert_eq!(ddl_valid_on_frame(f, m, DDL_RULE_MAX, &mut valid), DDL_ERR_EVAL);

        let mut holds = false;
        assert_eq!(ddl_check_property(m, DDL_PROP_TRANSITIVE, &mut holds), DDL_OK);
        assert!(holds);
        assert_eq!(ddl_check_property(m, 99, &mut holds), DDL_ERR_RANGE);

        let mut s = ptr::null_mut();
        assert_eq!(ddl_model_serialize(m, &mut s), DDL_OK);
        assert_eq!(take(s), "worlds 2\nrel 0>=0 1>=0 1>=1\nval p = {1}\n");

        ddl_formula_free(f);
        ddl_formula_free(schema);
        ddl_model_free(m);
    }
}

#[test]
fn model_errors_and_null_out() {
    unsafe {
        let mut m = ptr::null_mut();
        assert_eq!(ddl_model_parse(c("worlds 2\nrel 0>=5\n").as_ptr(), &mut m), DDL_ERR_MODEL);
        assert!(last_error().contains("out of range"));
        assert_eq!(ddl_model_parse(c("worlds 1\nrel\n").as_ptr(), ptr::null_mut()), DDL_ERR_NULL);
        ddl_model_free(ptr::null_mut());
        ddl_formula_free(ptr::null_mut());
        ddl_string_free(ptr::null_mut());
    }
}

#[test]
fn grid_json() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(ddl_paradox_grid_json(3, true, &mut s), DDL_OK);
        let json = take(s);
        assert!(json.contains("\"verdict\": \"unsat_up_to_bound\"") && json.contains("\"all_match\""), "{json}");
        assert_eq!(ddl_paradox_grid_json(9, true, &mut s), DDL_ERR_RANGE);
    }
}
