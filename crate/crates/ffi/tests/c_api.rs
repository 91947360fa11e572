use std::ffi::{CStr, CString};
use std::ptr;

use ctrlsynth_ffi::*;

const PRINTER: &str = include_str!("../../core/fixtures/printer.klts");
const UNCONTROLLABLE: &str = include_str!("../../core/fixtures/uncontrollable.klts");

fn model(text: &str) -> *mut CsModel {
    let text = CString::new(text).unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(
        unsafe { cs_model_parse(text.as_ptr(), &mut m) },
        CsStatus::Ok
    );
    assert!(!m.is_null());
    m
}

fn formula(text: &str) -> *mut CsFormula {
    let text = CString::new(text).unwrap();
    let mut f = ptr::null_mut();
    assert_eq!(
        unsafe { cs_formula_parse(text.as_ptr(), &mut f) },
        CsStatus::Ok
    );
    f
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(cs_last_error_message()) }
        .to_str()
        .unwrap()
        .to_string()
}

fn take_string(p: *mut std::ffi::c_char) -> String {
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
    unsafe { cs_string_free(p) };
    s
}

#[test]
fn printer_synthesis_round_trip() {
    let m = model(PRINTER);
    let f = formula("inv([refill] green)");
    let mut holds = true;
    assert_eq!(unsafe { cs_check(m, f, &mut holds) }, CsStatus::Ok);
    assert!(!holds);

    let mut s = ptr::null_mut();
    assert_eq!(unsafe { cs_synthesize(m, f, &mut s) }, CsStatus::Ok);
    assert!(unsafe { cs_synthesis_succeeded(s) });
    let mut stats = CsStats::default();
    assert_eq!(unsafe { cs_synthesis_stats(s, &mut stats) }, CsStatus::Ok);
    assert_eq!(
        stats,
        CsStats {
            iterations: 1,
            arcs_initial: 10,
            arcs_final: 6,
            nodes: 6
        }
    );
    let mut text = ptr::null_mut();
    assert_eq!(
        unsafe { cs_synthesis_controlled_text(s, &mut text) },
        CsStatus::Ok
    );
    let controlled = model(&take_string(text));
    assert_eq!(unsafe { cs_check(controlled, f, &mut holds) }, CsStatus::Ok);
    assert!(holds);

    let mut related = false;
    assert_eq!(
        unsafe { cs_partially_bisimilar(controlled, m, &mut related) },
        CsStatus::Ok
    );
    assert!(related);
    assert_eq!(
        unsafe { cs_simulates(m, controlled, &mut related) },
        CsStatus::Ok
    );
    assert!(!related);

    let mut witness = ptr::null_mut();
    assert_eq!(
        unsafe { cs_synthesis_witness_text(s, &mut witness) },
        CsStatus::NoResult
    );
    assert!(witness.is_null());

    unsafe {
        cs_synthesis_free(s);
        cs_model_free(controlled);
        cs_model_free(m);
        cs_formula_free(f);
    }
}

#[test]
fn failure_exposes_witness() {
    let m = model(UNCONTROLLABLE);
    let f = formula("inv([u] marked)");
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { cs_synthesize(m, f, &mut s) }, CsStatus::Ok);
    assert!(!unsafe { cs_synthesis_succeeded(s) });
    let mut text = ptr::null_mut();
    assert_eq!(
        unsafe { cs_synthesis_controlled_text(s, &mut text) },
        CsStatus::NoResult
    );
    assert!(!last_error().is_empty());
    assert_eq!(
        unsafe { cs_synthesis_witness_text(s, &mut text) },
        CsStatus::Ok
    );
    assert_eq!(
        take_string(text),
        "state q1 obligation inv([u] marked) && marked"
    );
    unsafe {
        cs_synthesis_free(s);
        cs_model_free(m);
        cs_formula_free(f);
    }
}

#[test]
fn error_codes() {
    let mut m = ptr::null_mut();
    assert_eq!(
        unsafe { cs_model_parse(ptr::null(), &mut m) },
        CsStatus::NullPointer
    );
    let text = CString::new("state a\ninit a\n").unwrap();
    assert_eq!(
        unsafe { cs_model_parse(text.as_ptr(), ptr::null_mut()) },
        CsStatus::NullPointer
    );

    let bad = CString::new("state a\nfrobnicate\n").unwrap();
    assert_eq!(
        unsafe { cs_model_parse(bad.as_ptr(), &mut m) },
        CsStatus::ParseError
    );
    assert!(m.is_null());
    assert!(last_error().contains("line 2"), "{}", last_error());

    let invalid = CString::new("state a\ninit a\ntrans a e b\n").unwrap();
    assert_eq!(
        unsafe { cs_model_parse(invalid.as_ptr(), &mut m) },
        CsStatus::ValidationError
    );

    let not_utf8 = [0xffu8, 0xfe, 0];
    assert_eq!(
        unsafe { cs_model_parse(not_utf8.as_ptr().cast(), &mut m) },
        CsStatus::InvalidUtf8
    );

    let mut f = ptr::null_mut();
    let good = CString::new("p || [a] q").unwrap();
    assert_eq!(
        unsafe { cs_formula_parse(good.as_ptr(), &mut f) },
        CsStatus::Ok
    );
    unsafe { cs_formula_free(f) };
    let bad = CString::new("[a] q || r").unwrap();
    assert_eq!(
        unsafe { cs_formula_parse(bad.as_ptr(), &mut f) },
        CsStatus::ParseError
    );
    assert!(f.is_null());

    let mut holds = false;
    assert_eq!(
        unsafe { cs_check(ptr::null(), ptr::null(), &mut holds) },
        CsStatus::NullPointer
    );
    assert!(!unsafe { cs_synthesis_succeeded(ptr::null()) });
    unsafe {
        cs_model_free(ptr::null_mut());
        cs_formula_free(ptr::null_mut());
        cs_synthesis_free(ptr::null_mut());
        cs_string_free(ptr::null_mut());
    }
}

#[test]
fn uncontrollable_mismatch_is_a_validation_error() {
    let a = model("state s\ninit s\nevent u uncontrollable\n");
    let b = model("state s\ninit s\nevent u controllable\n");
    let mut related = true;
    assert_eq!(
        unsafe { cs_partially_bisimilar(a, b, &mut related) },
        CsStatus::ValidationError
    );
    assert!(last_error().contains("uncontrollable"));
    assert_eq!(unsafe { cs_simulates(a, b, &mut related) }, CsStatus::Ok);
    assert!(related);
    let mut text = ptr::null_mut();
    assert_eq!(unsafe { cs_model_to_text(a, &mut text) }, CsStatus::Ok);
    assert!(take_string(text).contains("event u uncontrollable"));
    unsafe {
        cs_model_free(a);
        cs_model_free(b);
    }
}

#[test]
fn last_error_is_per_thread() {
    let bad = CString::new("(").unwrap();
    let mut f = ptr::null_mut();
    assert_eq!(
        unsafe { cs_formula_parse(bad.as_ptr(), &mut f) },
        CsStatus::ParseError
    );
    let here = last_error();
    assert!(!here.is_empty());
    let there = std::thread::spawn(last_error).join().unwrap();
    assert_eq!(there, "");
}
