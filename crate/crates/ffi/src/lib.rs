//! C interface to `ctrlsynth`.
//!
//! Models, formulas and synthesis results are opaque handles created by the
//! `*_parse` / `cs_synthesize` functions and released with the matching
//! `*_free`. Every fallible call returns a [`CsStatus`]; on failure a
//! description is available from [`cs_last_error_message`] on the same
//! thread. Strings returned through out-parameters are owned by the caller
//! and must be released with [`cs_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ctrlsynth::formula::{parse_formula, Formula};
use ctrlsynth::lts::{parse_model, KripkeLTS, ModelError};
use ctrlsynth::relations::{greatest_partial_bisimulation, greatest_simulation};
use ctrlsynth::semantics::satisfies;
use ctrlsynth::synthesis::{synthesize, Outcome, SynthesisResult};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    ValidationError = 4,
    /// The requested part of a synthesis result does not exist, e.g. the
    /// controlled system of a failed synthesis.
    NoResult = 5,
    Panic = 6,
}

/// Statistics of one synthesis run.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CsStats {
    pub iterations: usize,
    pub arcs_initial: usize,
    pub arcs_final: usize,
    pub nodes: usize,
}

/// A parsed plant model.
pub struct CsModel(KripkeLTS);

/// A parsed requirement formula.
pub struct CsFormula(Formula);

/// The outcome of a synthesis run.
pub struct CsSynthesis(SynthesisResult);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).unwrap_or_default());
}

type Result<T> = std::result::Result<T, CsStatus>;

fn fail<T>(status: CsStatus, msg: impl Into<String>) -> Result<T> {
    set_error(msg);
    Err(status)
}

/// Runs `f`, turning errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<()>) -> CsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            CsStatus::Ok
        }
        Ok(Err(status)) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal error: {msg}"));
            CsStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str> {
    if p.is_null() {
        return fail(CsStatus::NullPointer, format!("{what} is null"));
    }
    match CStr::from_ptr(p).to_str() {
        Ok(s) => Ok(s),
        Err(e) => fail(CsStatus::InvalidUtf8, format!("{what}: {e}")),
    }
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T> {
    match p.as_ref() {
        Some(r) => Ok(r),
        None => fail(CsStatus::NullPointer, format!("{what} is null")),
    }
}

unsafe fn out_ref<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T> {
    match p.as_mut() {
        Some(r) => Ok(r),
        None => fail(CsStatus::NullPointer, format!("{what} is null")),
    }
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " "))
        .unwrap_or_default()
        .into_raw()
}

/// Parses a model in the text format. On success stores a new handle in
/// `*out`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cs_model_parse(text: *const c_char, out: *mut *mut CsModel) -> CsStatus {
    guard(|| {
        let slot = out_ref(out, "out")?;
        *slot = ptr::null_mut();
        let m = parse_model(read_str(text, "model text")?).or_else(|e| {
            let status = match e {
                ModelError::Syntax { .. } => CsStatus::ParseError,
                _ => CsStatus::ValidationError,
            };
            fail(status, e.to_string())
        })?;
        *slot = Box::into_raw(Box::new(CsModel(m)));
        Ok(())
    })
}

/// Serializes a model back to the text format.
///
/// # Safety
/// `model` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cs_model_to_text(
    model: *const CsModel,
    out: *mut *mut c_char,
) -> CsStatus {
    guard(|| {
        let slot = out_ref(out, "out")?;
        *slot = ptr::null_mut();
        *slot = c_string(handle(model, "model")?.0.serialize());
        Ok(())
    })
}

/// # Safety
/// `model` must be null or a handle from [`cs_model_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cs_model_free(model: *mut CsModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Parses a requirement formula.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cs_formula_parse(
    text: *const c_char,
    out: *mut *mut CsFormula,
) -> CsStatus {
    guard(|| {
        let slot = out_ref(out, "out")?;
        *slot = ptr::null_mut();
        let f = parse_formula(read_str(text, "formula text")?)
            .or_else(|e| fail(CsStatus::ParseError, e.to_string()))?;
        *slot = Box::into_raw(Box::new(CsFormula(f)));
        Ok(())
    })
}

/// # Safety
/// `formula` must be null or a handle from [`cs_formula_parse`] not yet
/// freed.
#[no_mangle]
pub unsafe extern "C" fn cs_formula_free(formula: *mut CsFormula) {
    if !formula.is_null() {
        drop(Box::from_raw(formula));
    }
}

/// Stores in `*holds` whether the initial state of `model` satisfies
/// `formula`.
///
/// # Safety
/// Handles must be live and `holds` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cs_check(
    model: *const CsModel,
    formula: *const CsFormula,
    holds: *mut bool,
) -> CsStatus {
    guard(|| {
        let m = &handle(model, "model")?.0;
        let f = &handle(formula, "formula")?.0;
        let slot = out_ref(holds, "holds")?;
        *slot = satisfies(m, m.initial(), f)
            .or_else(|e| fail(CsStatus::ValidationError, e.to_string()))?;
        Ok(())
    })
}

/// Runs synthesis. A negative verdict is not an error: the call returns
/// `Ok` and [`cs_synthesis_succeeded`] reports the verdict.
///
/// # Safety
/// Handles must be live and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cs_synthesize(
    model: *const CsModel,
    formula: *const CsFormula,
    out: *mut *mut CsSynthesis,
) -> CsStatus {
    guard(|| {
        let slot = out_ref(out, "out")?;
        *slot = ptr::null_mut();
        let res = synthesize(&handle(model, "model")?.0, &handle(formula, "formula")?.0);
        *slot = Box::into_raw(Box::new(CsSynthesis(res)));
        Ok(())
    })
}

/// True when the synthesis produced a controlled system. False for a null
/// handle.
///
/// # Safety
/// `synthesis` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cs_synthesis_succeeded(synthesis: *const CsSynthesis) -> bool {
    synthesis.as_ref().is_some_and(|s| s.0.is_success())
}

/// # Safety
/// `synthesis` must be a live handle and `stats` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cs_synthesis_stats(
    synthesis: *const CsSynthesis,
    stats: *mut CsStats,
) -> CsStatus {
    guard(|| {
        let s = &handle(synthesis, "synthesis")?.0.stats;
        *out_ref(stats, "stats")? = CsStats {
            iterations: s.iterations,
            arcs_initial: s.arcs_initial,
            arcs_final: s.arcs_final,
            nodes: s.nodes,
        };
        Ok(())
    })
}

/// The controlled system in the model text format. Returns `NoResult` when
/// synthesis failed.
///
/// # Safety
/// `synthesis` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cs_synthesis_controlled_text(
    synthesis: *const CsSynthesis,
    out: *mut *mut c_char,
) -> CsStatus {
    guard(|| {
        let slot = out_ref(out, "out")?;
        *slot = ptr::null_mut();
        match &handle(synthesis, "synthesis")?.0.outcome {
            Outcome::Success(c) => {
                *slot = c_string(c.to_text());
                Ok(())
            }
            Outcome::Failure(_) => {
                fail(CsStatus::NoResult, "synthesis failed; no controlled system")
            }
        }
    })
}

/// The failure witness as `state <name> obligation <formula>`. Returns
/// `NoResult` when synthesis succeeded.
///
/// # Safety
/// `synthesis` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cs_synthesis_witness_text(
    synthesis: *const CsSynthesis,
    out: *mut *mut c_char,
) -> CsStatus {
    guard(|| {
        let slot = out_ref(out, "out")?;
        *slot = ptr::null_mut();
        match &handle(synthesis, "synthesis")?.0.outcome {
            Outcome::Failure(w) => {
                *slot = c_string(format!(
                    "state {} obligation {}",
                    w.plant_name, w.obligation
                ));
                Ok(())
            }
            Outcome::Success(_) => fail(CsStatus::NoResult, "synthesis succeeded; no witness"),
        }
    })
}

/// # Safety
/// `synthesis` must be null or a handle from [`cs_synthesize`] not yet
/// freed.
#[no_mangle]
pub unsafe extern "C" fn cs_synthesis_free(synthesis: *mut CsSynthesis) {
    if !synthesis.is_null() {
        drop(Box::from_raw(synthesis));
    }
}

/// Stores in `*related` whether `a` is simulated by `b`.
///
/// # Safety
/// Handles must be live and `related` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cs_simulates(
    a: *const CsModel,
    b: *const CsModel,
    related: *mut bool,
) -> CsStatus {
    guard(|| {
        let (a, b) = (&handle(a, "a")?.0, &handle(b, "b")?.0);
        *out_ref(related, "related")? = greatest_simulation(a, b).is_some();
        Ok(())
    })
}

/// Stores in `*related` whether `a` is related to `b` by partial
/// bisimulation. Returns `ValidationError` when the models disagree on
/// which events are uncontrollable.
///
/// # Safety
/// Handles must be live and `related` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cs_partially_bisimilar(
    a: *const CsModel,
    b: *const CsModel,
    related: *mut bool,
) -> CsStatus {
    guard(|| {
        let (a, b) = (&handle(a, "a")?.0, &handle(b, "b")?.0);
        let slot = out_ref(related, "related")?;
        let rel = greatest_partial_bisimulation(a, b)
            .or_else(|e| fail(CsStatus::ValidationError, e.to_string()))?;
        *slot = rel.is_some();
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Description of the last failed call on this thread, or an empty string.
/// The pointer stays valid until the next call into this library on the
/// same thread.
#[no_mangle]
pub extern "C" fn cs_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}
