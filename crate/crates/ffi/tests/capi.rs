// Copyright 2026 The spinmem Authors
// SPDX-License-Identifier: Apache-2.0

use std::ffi::{CStr, CString};
use std::ptr;

use spinmem_ffi::*;

fn last_error() -> String {
    let p = sm_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn analytic_calls() {
    let mut n = 0usize;
    assert_eq!(sm_min_chain_length(1.0, 1e-2, SM_CONVENTION_PROBABILITY, &mut n), SmStatus::Ok);
    assert_eq!(n, 4);
    assert!(sm_last_error_message().is_null());

    let (mut re, mut im) = (0.0, 0.0);
    assert_eq!(sm_a1(1, 0, 0.6, &mut re, &mut im), SmStatus::Ok);
    assert!((re - 0.0).abs() < 1e-15 && (im + 0.6f64.sin()).abs() < 1e-15);
    assert_eq!(sm_a1(0, 0, 0.6, &mut re, &mut im), SmStatus::InvalidArgument);
    assert!(last_error().contains("numbered from 1"));

    assert_eq!(sm_a2_00(1, 2, 0.9, &mut re, &mut im), SmStatus::Ok);
    assert!(re.is_finite() && im.is_finite());

    let mut f = 0.0;
    // ₂F₁(−2, 3; 1; 0.5) = 1 − 3 + 1.5
    assert_eq!(sm_hyp2f1_terminating(-2, 3, 1, 0.5, &mut f), SmStatus::Ok);
    assert!((f - (1.0 - 3.0 + 1.5)).abs() < 1e-14, "{f}");

    let (mut mean, mut std) = (0.0, 0.0);
    assert_eq!(sm_moments(0, 1.0, 1e-12, &mut mean, &mut std), SmStatus::Ok);
    let csc2 = 1.0 / 1.0f64.sin().powi(2);
    assert!((mean - csc2).abs() < 1e-9);
    assert_eq!(sm_moments(0, 1.0, 1e-12, &mut mean, ptr::null_mut()), SmStatus::NullPointer);
    assert_eq!(sm_moments(0, 1e-4, 1e-12, &mut mean, &mut std), SmStatus::Numerical);
}

#[test]
fn bell_round_trip_through_a_session() {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    // |Ψ⁻⟩ interleaved re/im over |↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩
    let amps = [0.0, 0.0, h, 0.0, -h, 0.0, 0.0, 0.0];
    let mut s: *mut SmSession = ptr::null_mut();
    unsafe {
        assert_eq!(sm_session_new(amps.as_ptr(), 2, 8, &mut s), SmStatus::Ok);
    }
    let mut f = 0.0;
    assert_eq!(sm_session_joint_fidelity(s, &mut f), SmStatus::InvalidState);
    assert_eq!(sm_session_decode(s, 1.1, SM_MODEL_XY, true), SmStatus::InvalidState);
    assert_eq!(sm_session_encode(s, 1.1, 7), SmStatus::InvalidArgument);
    assert_eq!(sm_session_encode(s, 1.1, SM_MODEL_XY), SmStatus::Ok);
    assert_eq!(sm_session_decode(s, 1.1, SM_MODEL_XY, true), SmStatus::Ok);
    assert_eq!(sm_session_joint_fidelity(s, &mut f), SmStatus::Ok);
    assert!((1.0 - f) < 1e-3 && f <= 1.0 + 1e-12, "{f}");

    let mut count = 0;
    assert_eq!(sm_session_retrieved_count(s, &mut count), SmStatus::Ok);
    assert_eq!(count, 2);
    let (mut re, mut im) = ([0.0; 4], [0.0; 4]);
    unsafe {
        assert_eq!(sm_session_retrieved_density(s, 0, re.as_mut_ptr(), im.as_mut_ptr()), SmStatus::Ok);
        assert_eq!(sm_session_retrieved_density(s, 2, re.as_mut_ptr(), im.as_mut_ptr()), SmStatus::InvalidArgument);
    }
    assert!((re[0] + re[3] - 1.0).abs() < 1e-12);
    // each half of a Bell pair is maximally mixed
    assert!((re[0] - 0.5).abs() < 1e-3);
    unsafe {
        sm_session_free(s);
        sm_session_free(ptr::null_mut());
    }
}

#[test]
fn session_rejects_bad_inputs() {
    let mut s: *mut SmSession = ptr::null_mut();
    let not_normalized = [1.0, 0.0, 1.0, 0.0];
    unsafe {
        assert_eq!(sm_session_new(not_normalized.as_ptr(), 1, 4, &mut s), SmStatus::Numerical);
        assert!(s.is_null());
        assert_eq!(sm_session_new(ptr::null(), 1, 4, &mut s), SmStatus::NullPointer);
        let up = [1.0, 0.0, 0.0, 0.0];
        assert_eq!(sm_session_new(up.as_ptr(), 1, 0, &mut s), SmStatus::InvalidArgument);
    }
    assert_eq!(sm_session_encode(ptr::null_mut(), 1.0, SM_MODEL_XY), SmStatus::NullPointer);
}

#[test]
fn scenario_json_round_trip() {
    let cfg =
        CString::new(r#"{"kind": "moments", "theta": {"type": "fixed", "value": 0.5}, "l_grid": [0, 1]}"#).unwrap();
    let mut out: *mut std::ffi::c_char = ptr::null_mut();
    unsafe {
        assert_eq!(sm_run_scenario_json(cfg.as_ptr(), SM_FORMAT_CSV, &mut out), SmStatus::Ok);
        let text = CStr::from_ptr(out).to_str().unwrap().to_owned();
        sm_string_free(out);
        assert!(text.starts_with("l,mean,std,seed"), "{text}");
        assert_eq!(text.lines().count(), 3);

        let bad = CString::new("{\"kind\": \"moments\",\n \"oops\": 1}").unwrap();
        assert_eq!(sm_run_scenario_json(bad.as_ptr(), SM_FORMAT_JSON, &mut out), SmStatus::InvalidArgument);
        assert!(last_error().contains("line 2"), "{}", last_error());
        assert_eq!(sm_run_scenario_json(cfg.as_ptr(), 9, &mut out), SmStatus::InvalidArgument);
        sm_string_free(ptr::null_mut());
    }
}

#[test]
fn errors_are_per_thread() {
    let mut n = 0usize;
    assert_eq!(sm_min_chain_length(1.0, 2.0, SM_CONVENTION_AMPLITUDE, &mut n), SmStatus::InvalidArgument);
    let msg = last_error();
    std::thread::spawn(|| assert!(sm_last_error_message().is_null())).join().unwrap();
    assert_eq!(last_error(), msg);
}

#[test]
fn header_declares_the_api() {
    let header = include_str!("../include/spinmem.h");
    for name in [
        "sm_last_error_message",
        "sm_version",
        "sm_min_chain_length",
        "sm_a1",
        "sm_a2_00",
        "sm_hyp2f1_terminating",
        "sm_moments",
        "sm_session_new",
        "sm_session_encode",
        "sm_session_decode",
        "sm_session_retrieved_count",
        "sm_session_retrieved_density",
        "sm_session_joint_fidelity",
        "sm_session_free",
        "sm_run_scenario_json",
        "sm_string_free",
        "SM_STATUS_OK",
        "typedef struct SmSession SmSession",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
    let v = unsafe { CStr::from_ptr(sm_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
