//! C interface to `ddl-core`.
//!
//! Formulas and models cross the boundary as opaque handles. Every function
//! returns a status code (`DDL_OK` or a negative `DDL_ERR_*`) and writes its
//! result through an out-pointer. After an error, `ddl_last_error` returns a
//! message for the calling thread.
//!
//! Strings returned by the library must be released with `ddl_string_free`,
//! handles with `ddl_formula_free` / `ddl_model_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use ddl_core::casestudy::{self, CaseConfig};
use ddl_core::report::to_json;
use ddl_core::semantics::{truth_set, valid_in_model, valid_on_frame, Assignment};
use ddl_core::{parse, parse_model, serialize_model, EvalRule, Formula, PreferenceModel, RelationProperty};

pub const DDL_OK: i32 = 0;
pub const DDL_ERR_NULL: i32 = -1;
pub const DDL_ERR_UTF8: i32 = -2;
pub const DDL_ERR_PARSE: i32 = -3;
pub const DDL_ERR_MODEL: i32 = -4;
pub const DDL_ERR_EVAL: i32 = -5;
pub const DDL_ERR_RANGE: i32 = -6;
pub const DDL_ERR_PANIC: i32 = -7;

pub const DDL_RULE_OPT: u32 = 0;
pub const DDL_RULE_MAX: u32 = 1;
pub const DDL_RULE_LEWIS: u32 = 2;

// Property codes follow RelationProperty::ALL.
pub const DDL_PROP_REFLEXIVE: u32 = 0;
pub const DDL_PROP_TOTAL: u32 = 1;
pub const DDL_PROP_TRANSITIVE: u32 = 2;
pub const DDL_PROP_QUASI_TRANSITIVE: u32 = 3;
pub const DDL_PROP_ACYCLIC: u32 = 4;
pub const DDL_PROP_SUZUMURA: u32 = 5;
pub const DDL_PROP_FERRERS: u32 = 6;
pub const DDL_PROP_INTERVAL_ORDER: u32 = 7;
pub const DDL_PROP_OPT_LIMITED: u32 = 8;
pub const DDL_PROP_MAX_LIMITED: u32 = 9;
pub const DDL_PROP_OPT_SMOOTH: u32 = 10;
pub const DDL_PROP_MAX_SMOOTH: u32 = 11;

/// Opaque parsed formula.
pub struct DdlFormula(Formula);

/// Opaque preference model.
pub struct DdlModel(PreferenceModel);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).expect("no interior nul"));
}

struct Fail(i32, String);

type FfiResult = Result<(), Fail>;

fn guard(f: impl FnOnce() -> FfiResult) -> i32 {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            DDL_OK
        }
        Ok(Err(Fail(code, msg))) => {
            set_error(msg);
            code
        }
        Err(_) => {
            set_error("internal panic");
            DDL_ERR_PANIC
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(DDL_ERR_NULL, format!("null pointer: {what}"))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(DDL_ERR_UTF8, format!("{what} is not valid UTF-8")))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> FfiResult {
    if out.is_null() {
        return Err(null("out"));
    }
    out.write(value);
    Ok(())
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("no interior nul").into_raw()
}

fn rule(code: u32) -> Result<EvalRule, Fail> {
    EvalRule::ALL
        .get(code as usize)
        .copied()
        .ok_or_else(|| Fail(DDL_ERR_RANGE, format!("unknown rule code {code}")))
}

/// Message for the last failing call on this thread; empty after success.
/// The pointer stays valid until the next call into the library.
#[no_mangle]
pub extern "C" fn ddl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ddl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a formula.
///
/// # Safety
/// `text` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ddl_formula_parse(text: *const c_char, out: *mut *mut DdlFormula) -> i32 {
    guard(|| {
        let text = read_str(text, "text")?;
        let f = parse(text).map_err(|e| Fail(DDL_ERR_PARSE, e.to_string()))?;
        write_out(out, Box::into_raw(Box::new(DdlFormula(f))))
    })
}

/// Canonical text of a formula; free with `ddl_string_free`.
///
/// # Safety
/// `formula` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ddl_formula_render(formula: *const DdlFormula, out: *mut *mut c_char) -> i32 {
    guard(|| {
        let f = deref(formula, "formula")?;
        write_out(out, to_c_string(f.0.to_string()))
    })
}

/// # Safety
/// `formula` must be null or a live handle; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn ddl_formula_free(formula: *mut DdlFormula) {
    if !formula.is_null() {
        drop(Box::from_raw(formula));
    }
}

/// Parses a model file's text.
///
/// # Safety
/// `text` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ddl_model_parse(text: *const c_char, out: *mut *mut DdlModel) -> i32 {
    guard(|| {
        let text = read_str(text, "text")?;
        let m = parse_model(text).map_err(|e| Fail(DDL_ERR_MODEL, e.to_string()))?;
        write_out(out, Box::into_raw(Box::new(DdlModel(m))))
    })
}

/// Model file text; free with `ddl_string_free`.
///
/// # Safety
/// `model` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ddl_model_serialize(model: *const DdlModel, out: *mut *mut c_char) -> i32 {
    guard(|| {
        let m = deref(model, "model")?;
        write_out(out, to_c_string(serialize_model(&m.0)))
    })
}

/// # Safety
/// `model` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ddl_model_world_count(model: *const DdlModel, out: *mut u32) -> i32 {
    guard(|| {
        let m = deref(model, "model")?;
        write_out(out, m.0.world_count() as u32)
    })
}

/// # Safety
/// `model` must be null or a live handle; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn ddl_model_free(model: *mut DdlModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Worlds where the formula is true, as a bitmask (bit i = world i).
/// Atoms without a valuation denote the empty set.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ddl_truth_set(
    formula: *const DdlFormula,
    model: *const DdlModel,
    rule_code: u32,
    out: *mut u16,
) -> i32 {
    guard(|| {
        let f = deref(formula, "formula")?;
        let m = deref(model, "model")?;
        let set = truth_set(&f.0, &m.0, &Assignment::new(), rule(rule_code)?)
            .map_err(|e| Fail(DDL_ERR_EVAL, e.to_string()))?;
        write_out(out, set.bits())
    })
}

/// Whether a metavariable-free formula is true at every world.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ddl_valid_in_model(
    formula: *const DdlFormula,
    model: *const DdlModel,
    rule_code: u32,
    out: *mut bool,
) -> i32 {
    guard(|| {
        let f = deref(formula, "formula")?;
        let m = deref(model, "model")?;
        let v = valid_in_model(&f.0, &m.0, rule(rule_code)?).map_err(|e| Fail(DDL_ERR_EVAL, e.to_string()))?;
        write_out(out, v)
    })
}

/// Whether a schema (metavariables only) is valid on the model's frame;
/// the valuation is ignored.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ddl_valid_on_frame(
    schema: *const DdlFormula,
    model: *const DdlModel,
    rule_code: u32,
    out: *mut bool,
) -> i32 {
    guard(|| {
        let f = deref(schema, "schema")?;
        let m = deref(model, "model")?;
        let v = valid_on_frame(&f.0, m.0.betterness(), rule(rule_code)?)
            .map_err(|e| Fail(DDL_ERR_EVAL, e.to_string()))?;
        write_out(out, v.is_valid())
    })
}

/// Whether the model's betterness relation has a property (`DDL_PROP_*`).
///
/// # Safety
/// `model` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ddl_check_property(model: *const DdlModel, property: u32, out: *mut bool) -> i32 {
    guard(|| {
        let m = deref(model, "model")?;
        let p = RelationProperty::ALL
            .get(property as usize)
            .ok_or_else(|| Fail(DDL_ERR_RANGE, format!("unknown property code {property}")))?;
        write_out(out, p.holds(m.0.betterness()))
    })
}

/// JSON report of the mere addition grid up to `max_n` worlds (1..=5, or
/// up to 7 with isomorph rejection); free with `ddl_string_free`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ddl_paradox_grid_json(max_n: u32, iso_reject: bool, out: *mut *mut c_char) -> i32 {
    guard(|| {
        let cap = if iso_reject { 7 } else { 5 };
        if max_n == 0 || max_n > cap {
            return Err(Fail(DDL_ERR_RANGE, format!("max_n {max_n} out of range 1..={cap}")));
        }
        let cfg = CaseConfig { max_n: max_n as usize, iso_reject, timeout: None };
        write_out(out, to_c_string(to_json(&casestudy::run_grid(&cfg))))
    })
}
