//! C ABI over the core library: opaque handles, integer status codes, and
//! a thread-local last-error message. The header `include/cla.h` mirrors
//! this surface.
//!
//! Conventions:
//! - Every fallible call returns a `cla_status`; on failure the message is
//!   available from [`cla_last_error`] until the next call on the thread.
//! - Handles are created by `*_new`/`*_parse`/`*_sample` and released by
//!   the matching `*_free`; freeing null is a no-op.
//! - Strings returned as `char*` are owned by the caller and released with
//!   [`cla_string_free`].
//! - Assignments bind a formula's free variables in name order, 0-based.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use libc::{c_char, c_int, size_t};

use cla_core::error::Error;
use cla_core::eval::Evaluator;
use cla_core::inference::{
    eliminate, prob_in_interval, EliminationConfig, Interval, ProbMethod,
};
use cla_core::logic::{parse_formula, Formula, IdentityPattern, Signature, Var};
use cla_core::measure::{sample_structure, ContinuousStructure, DensityModel};
use cla_core::rng::derive_seed;

pub const CLA_OK: c_int = 0;
/// Validation or configuration failure.
pub const CLA_ERR_INVALID: c_int = 2;
/// Numeric or runtime failure (including empty aggregations).
pub const CLA_ERR_NUMERIC: c_int = 3;
/// An internal invariant was violated; the handle states are unchanged.
pub const CLA_ERR_PANIC: c_int = 4;

pub struct ClaModel(DensityModel);
pub struct ClaFormula(Formula);
pub struct ClaStructure(ContinuousStructure);
pub struct ClaEvaluator {
    evaluator: Evaluator,
    arity: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let stored = CString::new(message).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(stored));
}

fn clear_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

fn status_of(e: &Error) -> c_int {
    match e.exit_code() {
        3 => CLA_ERR_NUMERIC,
        _ => CLA_ERR_INVALID,
    }
}

fn fail(e: Error) -> c_int {
    let code = status_of(&e);
    set_error(e.to_string());
    code
}

fn invalid(message: impl Into<String>) -> c_int {
    set_error(message.into());
    CLA_ERR_INVALID
}

/// Runs a closure, translating panics into `CLA_ERR_PANIC`.
fn guarded(f: impl FnOnce() -> c_int) -> c_int {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(code) => code,
        Err(_) => {
            set_error("internal panic".into());
            CLA_ERR_PANIC
        }
    }
}

unsafe fn text<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, c_int> {
    if ptr.is_null() {
        return Err(invalid(format!("{what} is null")));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| invalid(format!("{what} is not valid UTF-8")))
}

unsafe fn handle<'a, T>(ptr: *const T, what: &str) -> Result<&'a T, c_int> {
    ptr.as_ref()
        .ok_or_else(|| invalid(format!("{what} handle is null")))
}

unsafe fn out_slot<'a, T>(ptr: *mut T, what: &str) -> Result<&'a mut T, c_int> {
    ptr.as_mut()
        .ok_or_else(|| invalid(format!("{what} output pointer is null")))
}

unsafe fn elements<'a>(ptr: *const size_t, len: size_t, what: &str) -> Result<&'a [usize], c_int> {
    if len == 0 {
        return Ok(&[]);
    }
    if ptr.is_null() {
        return Err(invalid(format!("{what} is null")));
    }
    Ok(std::slice::from_raw_parts(ptr, len))
}

fn declared(formula: &Formula) -> Vec<Var> {
    formula.free_var_tuple()
}

fn resolve_pattern(json: Option<&str>, vars: &[Var]) -> Result<IdentityPattern, c_int> {
    match json {
        None => Ok(IdentityPattern::all_distinct(vars.len())),
        Some(text) => {
            let pattern: IdentityPattern =
                serde_json::from_str(text).map_err(|e| fail(Error::Json(e)))?;
            if pattern.size() != vars.len() {
                return Err(invalid(format!(
                    "pattern covers {} positions but the formula has {} free variables",
                    pattern.size(),
                    vars.len()
                )));
            }
            Ok(pattern)
        }
    }
}

/// The last error message on this thread, or null. Borrowed; valid until
/// the next library call on the same thread.
#[no_mangle]
pub extern "C" fn cla_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map_or(std::ptr::null(), |s| s.as_ptr())
    })
}

/// The library version as a static string.
#[no_mangle]
pub extern "C" fn cla_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Builds a density model from a signature JSON document and an optional
/// densities JSON document (null for the all-uniform model).
///
/// # Safety
/// `signature_json` (and `model_json` when non-null) must be NUL-terminated
/// strings; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cla_model_new(
    signature_json: *const c_char,
    model_json: *const c_char,
    out: *mut *mut ClaModel,
) -> c_int {
    guarded(|| {
        let result = (|| -> Result<*mut ClaModel, c_int> {
            let out_check = out;
            if out_check.is_null() {
                return Err(invalid("model output pointer is null"));
            }
            let sig_text = text(signature_json, "signature JSON")?;
            let signature = Signature::from_json(sig_text).map_err(fail)?;
            let model = if model_json.is_null() {
                DensityModel::uniform(signature)
            } else {
                let model_text = text(model_json, "model JSON")?;
                DensityModel::from_json(signature, model_text).map_err(fail)?
            };
            Ok(Box::into_raw(Box::new(ClaModel(model))))
        })();
        match result {
            Ok(ptr) => {
                *out = ptr;
                CLA_OK
            }
            Err(code) => code,
        }
    })
}

/// # Safety
/// `model` must be null or a pointer returned by [`cla_model_new`].
#[no_mangle]
pub unsafe extern "C" fn cla_model_free(model: *mut ClaModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Parses a formula against the model's signature.
///
/// # Safety
/// `model` must be a live model handle, `formula_text` a NUL-terminated
/// string, and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cla_formula_parse(
    model: *const ClaModel,
    formula_text: *const c_char,
    out: *mut *mut ClaFormula,
) -> c_int {
    guarded(|| {
        let result = (|| -> Result<*mut ClaFormula, c_int> {
            if out.is_null() {
                return Err(invalid("formula output pointer is null"));
            }
            let model = handle(model, "model")?;
            let src = text(formula_text, "formula text")?;
            let formula = parse_formula(src, model.0.signature()).map_err(fail)?;
            Ok(Box::into_raw(Box::new(ClaFormula(formula))))
        })();
        match result {
            Ok(ptr) => {
                *out = ptr;
                CLA_OK
            }
            Err(code) => code,
        }
    })
}

/// # Safety
/// `formula` must be null or a live formula handle.
#[no_mangle]
pub unsafe extern "C" fn cla_formula_free(formula: *mut ClaFormula) {
    if !formula.is_null() {
        drop(Box::from_raw(formula));
    }
}

/// The formula's canonical text, owned by the caller (release with
/// [`cla_string_free`]); null if the handle is null.
///
/// # Safety
/// `formula` must be null or a live formula handle.
#[no_mangle]
pub unsafe extern "C" fn cla_formula_display(formula: *const ClaFormula) -> *mut c_char {
    match formula.as_ref() {
        Some(f) => CString::new(f.0.to_string())
            .map(CString::into_raw)
            .unwrap_or(std::ptr::null_mut()),
        None => std::ptr::null_mut(),
    }
}

/// 1 if the formula contains no aggregation or quantifier, 0 if it does,
/// -1 if the handle is null.
///
/// # Safety
/// `formula` must be null or a live formula handle.
#[no_mangle]
pub unsafe extern "C" fn cla_formula_is_aggregation_free(formula: *const ClaFormula) -> c_int {
    match formula.as_ref() {
        Some(f) => c_int::from(f.0.is_aggregation_free()),
        None => -1,
    }
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn cla_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Samples the structure with the given index from the seed's family.
///
/// # Safety
/// `model` must be a live model handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cla_structure_sample(
    model: *const ClaModel,
    n: size_t,
    seed: u64,
    index: u64,
    out: *mut *mut ClaStructure,
) -> c_int {
    guarded(|| {
        let result = (|| -> Result<*mut ClaStructure, c_int> {
            if out.is_null() {
                return Err(invalid("structure output pointer is null"));
            }
            let model = handle(model, "model")?;
            let structure = sample_structure(&model.0, n, seed, index).map_err(fail)?;
            Ok(Box::into_raw(Box::new(ClaStructure(structure))))
        })();
        match result {
            Ok(ptr) => {
                *out = ptr;
                CLA_OK
            }
            Err(code) => code,
        }
    })
}

/// # Safety
/// `structure` must be null or a live structure handle.
#[no_mangle]
pub unsafe extern "C" fn cla_structure_free(structure: *mut ClaStructure) {
    if !structure.is_null() {
        drop(Box::from_raw(structure));
    }
}

/// Domain size of a structure; 0 if the handle is null.
///
/// # Safety
/// `structure` must be null or a live structure handle.
#[no_mangle]
pub unsafe extern "C" fn cla_structure_size(structure: *const ClaStructure) -> size_t {
    structure.as_ref().map_or(0, |s| s.0.n())
}

/// Reads one relation cell (0-based elements).
///
/// # Safety
/// `model` and `structure` must be live handles, `relation` a
/// NUL-terminated string, `tuple` an array of `tuple_len` elements, and
/// `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cla_structure_value(
    model: *const ClaModel,
    structure: *const ClaStructure,
    relation: *const c_char,
    tuple: *const size_t,
    tuple_len: size_t,
    out: *mut f64,
) -> c_int {
    guarded(|| {
        let result = (|| -> Result<f64, c_int> {
            let model = handle(model, "model")?;
            let structure = handle(structure, "structure")?;
            let name = text(relation, "relation name")?;
            let tuple = elements(tuple, tuple_len, "tuple")?;
            let sig = model.0.signature();
            let idx = sig
                .index_of(name)
                .ok_or_else(|| invalid(format!("unknown relation `{name}`")))?;
            let arity = sig.relations()[idx].arity;
            if tuple.len() != arity {
                return Err(invalid(format!(
                    "relation `{name}` has arity {arity} but the tuple has {} entries",
                    tuple.len()
                )));
            }
            let n = structure.0.n();
            if let Some(&e) = tuple.iter().find(|&&e| e >= n) {
                return Err(invalid(format!(
                    "element {e} outside a domain of size {n}"
                )));
            }
            Ok(structure.0.value(idx, tuple))
        })();
        match result {
            Ok(v) => {
                match out_slot(out, "value") {
                    Ok(slot) => *slot = v,
                    Err(code) => return code,
                }
                CLA_OK
            }
            Err(code) => code,
        }
    })
}

/// Compiles a formula for repeated evaluation. The assignment order is the
/// formula's free variables in name order.
///
/// # Safety
/// `model` and `formula` must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cla_evaluator_new(
    model: *const ClaModel,
    formula: *const ClaFormula,
    out: *mut *mut ClaEvaluator,
) -> c_int {
    guarded(|| {
        let result = (|| -> Result<*mut ClaEvaluator, c_int> {
            if out.is_null() {
                return Err(invalid("evaluator output pointer is null"));
            }
            let model = handle(model, "model")?;
            let formula = handle(formula, "formula")?;
            let vars = declared(&formula.0);
            let evaluator =
                Evaluator::new(model.0.signature(), &formula.0, &vars).map_err(fail)?;
            Ok(Box::into_raw(Box::new(ClaEvaluator {
                evaluator,
                arity: vars.len(),
            })))
        })();
        match result {
            Ok(ptr) => {
                *out = ptr;
                CLA_OK
            }
            Err(code) => code,
        }
    })
}

/// # Safety
/// `evaluator` must be null or a live evaluator handle.
#[no_mangle]
pub unsafe extern "C" fn cla_evaluator_free(evaluator: *mut ClaEvaluator) {
    if !evaluator.is_null() {
        drop(Box::from_raw(evaluator));
    }
}

/// Number of assignment slots the evaluator expects; 0 on a null handle.
///
/// # Safety
/// `evaluator` must be null or a live evaluator handle.
#[no_mangle]
pub unsafe extern "C" fn cla_evaluator_arity(evaluator: *const ClaEvaluator) -> size_t {
    evaluator.as_ref().map_or(0, |e| e.arity)
}

/// Evaluates on a structure at a 0-based assignment.
///
/// # Safety
/// `evaluator` and `structure` must be live handles, `assignment` an array
/// of `len` elements, and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cla_evaluator_eval(
    evaluator: *const ClaEvaluator,
    structure: *const ClaStructure,
    assignment: *const size_t,
    len: size_t,
    out: *mut f64,
) -> c_int {
    guarded(|| {
        let result = (|| -> Result<f64, c_int> {
            let evaluator = handle(evaluator, "evaluator")?;
            let structure = handle(structure, "structure")?;
            let assignment = elements(assignment, len, "assignment")?;
            evaluator
                .evaluator
                .eval(&structure.0, assignment)
                .map_err(fail)
        })();
        match result {
            Ok(v) => {
                match out_slot(out, "value") {
                    Ok(slot) => *slot = v,
                    Err(code) => return code,
                }
                CLA_OK
            }
            Err(code) => code,
        }
    })
}

/// Interval probability of an aggregation-free formula at an identity
/// pattern (`pattern_json` null means all-distinct; blocks are 1-based
/// positions into the free variables in name order). `use_monte_carlo`
/// zero selects quadrature with `budget` cells per axis, nonzero selects
/// Monte Carlo with `budget` samples.
///
/// # Safety
/// `model` and `formula` must be live handles; `pattern_json` must be null
/// or a NUL-terminated string; `out_alpha` and `out_half_width` must be
/// valid pointers.
#[no_mangle]
pub unsafe extern "C" fn cla_prob_in_interval(
    model: *const ClaModel,
    formula: *const ClaFormula,
    pattern_json: *const c_char,
    lo: f64,
    hi: f64,
    use_monte_carlo: c_int,
    budget: size_t,
    seed: u64,
    out_alpha: *mut f64,
    out_half_width: *mut f64,
) -> c_int {
    guarded(|| {
        let result = (|| -> Result<(f64, f64), c_int> {
            let model = handle(model, "model")?;
            let formula = handle(formula, "formula")?;
            let pattern_text = if pattern_json.is_null() {
                None
            } else {
                Some(text(pattern_json, "pattern JSON")?)
            };
            let vars = declared(&formula.0);
            let pattern = resolve_pattern(pattern_text, &vars)?;
            let interval = Interval::new(lo, hi).map_err(fail)?;
            let method = if use_monte_carlo == 0 {
                ProbMethod::Quadrature { cells: budget }
            } else {
                ProbMethod::MonteCarlo { samples: budget }
            };
            let estimate =
                prob_in_interval(&model.0, &formula.0, &vars, &pattern, interval, method, seed)
                    .map_err(fail)?;
            Ok((estimate.alpha, estimate.half_width))
        })();
        match result {
            Ok((alpha, half_width)) => {
                match (out_slot(out_alpha, "alpha"), out_slot(out_half_width, "half width")) {
                    (Ok(a), Ok(h)) => {
                        *a = alpha;
                        *h = half_width;
                        CLA_OK
                    }
                    (Err(code), _) | (_, Err(code)) => code,
                }
            }
            Err(code) => code,
        }
    })
}

/// Replaces aggregations and quantifiers by their limits, yielding a new
/// formula handle and a bound on the construction's value error.
///
/// # Safety
/// `model` and `formula` must be live handles; `pattern_json` must be null
/// or a NUL-terminated string; `out_formula` and `out_value_error` must be
/// valid pointers.
#[no_mangle]
pub unsafe extern "C" fn cla_eliminate(
    model: *const ClaModel,
    formula: *const ClaFormula,
    pattern_json: *const c_char,
    grid_nodes: size_t,
    quad_cells: size_t,
    mc_samples: size_t,
    support_resolution: size_t,
    seed: u64,
    out_formula: *mut *mut ClaFormula,
    out_value_error: *mut f64,
) -> c_int {
    guarded(|| {
        let result = (|| -> Result<(*mut ClaFormula, f64), c_int> {
            if out_formula.is_null() {
                return Err(invalid("formula output pointer is null"));
            }
            let model = handle(model, "model")?;
            let formula = handle(formula, "formula")?;
            let pattern_text = if pattern_json.is_null() {
                None
            } else {
                Some(text(pattern_json, "pattern JSON")?)
            };
            let vars = declared(&formula.0);
            let pattern = resolve_pattern(pattern_text, &vars)?;
            let config = EliminationConfig {
                grid_nodes,
                quad_cells,
                mc_samples,
                support_resolution,
                seed: derive_seed(seed, "elimination"),
            };
            let result = eliminate(&model.0, &formula.0, &vars, &pattern, &config).map_err(fail)?;
            Ok((
                Box::into_raw(Box::new(ClaFormula(result.formula))),
                result.value_error,
            ))
        })();
        match result {
            Ok((ptr, value_error)) => {
                match out_slot(out_value_error, "value error") {
                    Ok(slot) => *slot = value_error,
                    Err(code) => {
                        drop(Box::from_raw(ptr));
                        return code;
                    }
                }
                *out_formula = ptr;
                CLA_OK
            }
            Err(code) => code,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CString;
    use std::ptr;

    const SIG: &str = r#"{"relations":[{"name":"E","arity":2},{"name":"R","arity":1},{"name":"Q","arity":1}]}"#;

    fn c(text: &str) -> CString {
        CString::new(text).unwrap()
    }

    fn model() -> *mut ClaModel {
        let sig = c(SIG);
        let mut out = ptr::null_mut();
        let code = unsafe { cla_model_new(sig.as_ptr(), ptr::null(), &mut out) };
        assert_eq!(code, CLA_OK);
        assert!(!out.is_null());
        out
    }

    #[test]
    fn model_formula_eval_round_trip() {
        unsafe {
            let model = model();
            let src = c("am{y}(E(x, y))");
            let mut formula = ptr::null_mut();
            assert_eq!(cla_formula_parse(model, src.as_ptr(), &mut formula), CLA_OK);
            assert_eq!(cla_formula_is_aggregation_free(formula), 0);

            let shown = cla_formula_display(formula);
            assert_eq!(CStr::from_ptr(shown).to_str().unwrap(), "am{y}(E(x, y))");
            cla_string_free(shown);

            let mut structure = ptr::null_mut();
            assert_eq!(cla_structure_sample(model, 20, 7, 0, &mut structure), CLA_OK);
            assert_eq!(cla_structure_size(structure), 20);

            let mut evaluator = ptr::null_mut();
            assert_eq!(cla_evaluator_new(model, formula, &mut evaluator), CLA_OK);
            assert_eq!(cla_evaluator_arity(evaluator), 1);

            let assignment = [0usize];
            let mut value = f64::NAN;
            assert_eq!(
                cla_evaluator_eval(evaluator, structure, assignment.as_ptr(), 1, &mut value),
                CLA_OK
            );
            assert!((0.0..=1.0).contains(&value));

            // Cross-check against a direct cell read: the mean excludes x.
            let mut cell = f64::NAN;
            let rel = c("E");
            let tuple = [0usize, 1usize];
            assert_eq!(
                cla_structure_value(model, structure, rel.as_ptr(), tuple.as_ptr(), 2, &mut cell),
                CLA_OK
            );
            assert!((0.0..=1.0).contains(&cell));

            cla_evaluator_free(evaluator);
            cla_structure_free(structure);
            cla_formula_free(formula);
            cla_model_free(model);
        }
    }

    #[test]
    fn prob_and_eliminate() {
        unsafe {
            let model = model();
            let src = c("min2(R(x), Q(x))");
            let mut formula = ptr::null_mut();
            assert_eq!(cla_formula_parse(model, src.as_ptr(), &mut formula), CLA_OK);

            let mut alpha = 0.0;
            let mut half_width = 0.0;
            let code = cla_prob_in_interval(
                model,
                formula,
                ptr::null(),
                0.0,
                0.5,
                0,
                256,
                0,
                &mut alpha,
                &mut half_width,
            );
            assert_eq!(code, CLA_OK);
            assert!((alpha - 0.75).abs() <= half_width + 1e-12);
            cla_formula_free(formula);

            let src = c("am{y}(E(x, y))");
            let mut formula = ptr::null_mut();
            assert_eq!(cla_formula_parse(model, src.as_ptr(), &mut formula), CLA_OK);
            let mut limit = ptr::null_mut();
            let mut value_error = f64::NAN;
            let code = cla_eliminate(
                model,
                formula,
                ptr::null(),
                17,
                256,
                20_000,
                512,
                0,
                &mut limit,
                &mut value_error,
            );
            assert_eq!(code, CLA_OK);
            assert_eq!(cla_formula_is_aggregation_free(limit), 1);
            let shown = cla_formula_display(limit);
            assert_eq!(CStr::from_ptr(shown).to_str().unwrap(), "0.5");
            cla_string_free(shown);
            assert!(value_error > 0.0 && value_error < 0.01);

            cla_formula_free(limit);
            cla_formula_free(formula);
            cla_model_free(model);
        }
    }

    #[test]
    fn errors_set_messages_and_codes() {
        unsafe {
            let sig = c("not json");
            let mut out = ptr::null_mut();
            assert_eq!(cla_model_new(sig.as_ptr(), ptr::null(), &mut out), CLA_ERR_INVALID);
            let message = cla_last_error();
            assert!(!message.is_null());

            let model = model();
            let src = c("am{y}(Missing(x, y))");
            let mut formula = ptr::null_mut();
            assert_eq!(
                cla_formula_parse(model, src.as_ptr(), &mut formula),
                CLA_ERR_INVALID
            );
            let message = CStr::from_ptr(cla_last_error()).to_str().unwrap();
            assert!(message.contains("Missing"), "{message}");

            // Empty aggregation is a numeric/runtime failure.
            let src = c("am{y}(E(x, y))");
            assert_eq!(cla_formula_parse(model, src.as_ptr(), &mut formula), CLA_OK);
            let mut structure = ptr::null_mut();
            assert_eq!(cla_structure_sample(model, 1, 0, 0, &mut structure), CLA_OK);
            let mut evaluator = ptr::null_mut();
            assert_eq!(cla_evaluator_new(model, formula, &mut evaluator), CLA_OK);
            let assignment = [0usize];
            let mut value = 0.0;
            assert_eq!(
                cla_evaluator_eval(evaluator, structure, assignment.as_ptr(), 1, &mut value),
                CLA_ERR_NUMERIC
            );

            cla_evaluator_free(evaluator);
            cla_structure_free(structure);
            cla_formula_free(formula);
            cla_model_free(model);

            // Null handles are rejected, not dereferenced.
            assert_eq!(
                cla_formula_parse(ptr::null(), src.as_ptr(), &mut formula),
                CLA_ERR_INVALID
            );
            assert_eq!(cla_formula_is_aggregation_free(ptr::null()), -1);
            cla_model_free(ptr::null_mut());
            cla_formula_free(ptr::null_mut());
            cla_structure_free(ptr::null_mut());
            cla_evaluator_free(ptr::null_mut());
            cla_string_free(ptr::null_mut());
        }
    }

    #[test]
    fn version_is_exposed() {
        let v = unsafe { CStr::from_ptr(cla_version()) };
        assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
    }
}
