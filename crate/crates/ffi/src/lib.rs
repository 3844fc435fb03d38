// Copyright 2026 The spinmem Authors
// SPDX-License-Identifier: Apache-2.0

//! C ABI over `spinmem`.
//!
//! Every fallible call returns an [`SmStatus`]; on failure the message is
//! kept per thread and can be read with [`sm_last_error_message`]. Results
//! are written through out-pointers. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;
use spinmem::analytic;
use spinmem::engine::{QubitRegister, StateVector};
use spinmem::experiments::{render, run_scenario, OutputFormat, ScenarioConfig};
use spinmem::protocol::{
    decode_sequence, encode_sequence, min_chain_length, EpsilonConvention, ExchangeModel, MemorySession, Retrieval,
    ThetaSchedule,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmStatus {
    Ok = 0,
    InvalidArgument = 1,
    Numerical = 2,
    Io = 3,
    NullPointer = 4,
    InvalidState = 5,
    Panic = 6,
}

pub const SM_MODEL_XY: u32 = 0;
pub const SM_MODEL_HEISENBERG: u32 = 1;

/// `|cos θ|^N ≤ ε`.
pub const SM_CONVENTION_AMPLITUDE: u32 = 0;
/// `cos^{2N} θ ≤ ε`.
pub const SM_CONVENTION_PROBABILITY: u32 = 1;

pub const SM_FORMAT_CSV: u32 = 0;
pub const SM_FORMAT_JSON: u32 = 1;

struct Failure(SmStatus, String);

impl From<spinmem::Error> for Failure {
    fn from(e: spinmem::Error) -> Self {
        let status = match e.exit_code() {
            2 => SmStatus::Numerical,
            3 => SmStatus::Io,
            _ => SmStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

type FfiResult<T> = Result<T, Failure>;

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> FfiResult<()>) -> SmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            SmStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {msg}"));
            SmStatus::Panic
        }
    }
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure(SmStatus::InvalidArgument, msg.into())
}

fn out_ref<'a, T>(p: *mut T, name: &str) -> FfiResult<&'a mut T> {
    // SAFETY: callers promise `p` is either null or valid for writes.
    unsafe { p.as_mut() }.ok_or_else(|| Failure(SmStatus::NullPointer, format!("`{name}` is null")))
}

fn write_complex(z: Complex64, re: *mut f64, im: *mut f64) -> FfiResult<()> {
    let (re, im) = (out_ref(re, "out_re")?, out_ref(im, "out_im")?);
    *re = z.re;
    *im = z.im;
    Ok(())
}

fn model(m: u32) -> FfiResult<ExchangeModel> {
    match m {
        SM_MODEL_XY => Ok(ExchangeModel::Xy),
        SM_MODEL_HEISENBERG => Ok(ExchangeModel::Heisenberg),
        other => Err(invalid(format!("unknown model {other}"))),
    }
}

/// Message of the last failed call on this thread, or null after a success.
/// The pointer stays valid until the next call into this library on the
/// same thread.
#[no_mangle]
pub extern "C" fn sm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Smallest chain length holding a qubit written at angle `theta` to
/// tolerance `epsilon`.
#[no_mangle]
pub extern "C" fn sm_min_chain_length(theta: f64, epsilon: f64, convention: u32, out: *mut usize) -> SmStatus {
    guard(|| {
        let conv = match convention {
            SM_CONVENTION_AMPLITUDE => EpsilonConvention::AmplitudeCosN,
            SM_CONVENTION_PROBABILITY => EpsilonConvention::ProbabilityCos2N,
            other => return Err(invalid(format!("unknown convention {other}"))),
        };
        *out_ref(out, "out")? = min_chain_length(theta, epsilon, conv)?;
        Ok(())
    })
}

/// Site-`k` amplitude of the single down-flip stored under `level` `|↑⟩`
/// qubits.
#[no_mangle]
pub extern "C" fn sm_a1(k: usize, level: usize, theta: f64, out_re: *mut f64, out_im: *mut f64) -> SmStatus {
    guard(|| {
        if k == 0 {
            return Err(invalid("sites are numbered from 1"));
        }
        write_complex(analytic::a1(k, level, theta), out_re, out_im)
    })
}

/// Amplitude of down spins at sites `k1 < k2` after two `|↓⟩` writes.
#[no_mangle]
pub extern "C" fn sm_a2_00(k1: usize, k2: usize, theta: f64, out_re: *mut f64, out_im: *mut f64) -> SmStatus {
    guard(|| write_complex(analytic::a2_00(k1, k2, theta)?, out_re, out_im))
}

/// `₂F₁(a, b; c; z)` for a non-positive integer `a` or `b`.
#[no_mangle]
pub extern "C" fn sm_hyp2f1_terminating(a: i64, b: i64, c: u32, z: f64, out: *mut f64) -> SmStatus {
    guard(|| {
        *out_ref(out, "out")? = analytic::hyp2f1_terminating(a, b, c, z)?;
        Ok(())
    })
}

/// Mean site and spread of the level-`level` distribution, truncated once
/// the neglected tail is below `tol`.
#[no_mangle]
pub extern "C" fn sm_moments(level: usize, theta: f64, tol: f64, out_mean: *mut f64, out_std: *mut f64) -> SmStatus {
    guard(|| {
        let m = analytic::moments(level, theta, tol)?;
        *out_ref(out_mean, "out_mean")? = m.mean;
        *out_ref(out_std, "out_std")? = m.std;
        Ok(())
    })
}

/// A memory chain together with its flying inputs and, after decoding, the
/// retrieved qubits.
pub struct SmSession {
    inputs: StateVector,
    session: MemorySession,
    retrieval: Option<Retrieval>,
}

fn session_ref<'a>(s: *mut SmSession) -> FfiResult<&'a mut SmSession> {
    // SAFETY: callers pass a handle from `sm_session_new` that was not freed.
    unsafe { s.as_mut() }.ok_or_else(|| Failure(SmStatus::NullPointer, "session is null".into()))
}

fn retrieval(s: &SmSession) -> FfiResult<&Retrieval> {
    s.retrieval.as_ref().ok_or_else(|| Failure(SmStatus::InvalidState, "session has not been decoded".into()))
}

/// Creates a session from `2^n_qubits` interleaved `(re, im)` input
/// amplitudes over `Flying(1..=n_qubits)` next to a `|↑…↑⟩` chain of
/// `chain_len` sites.
///
/// # Safety
/// `amplitudes` must point to `2 · 2^n_qubits` readable doubles.
#[no_mangle]
pub unsafe extern "C" fn sm_session_new(
    amplitudes: *const f64,
    n_qubits: usize,
    chain_len: usize,
    out: *mut *mut SmSession,
) -> SmStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        if amplitudes.is_null() {
            return Err(Failure(SmStatus::NullPointer, "`amplitudes` is null".into()));
        }
        if n_qubits == 0 || n_qubits > 12 {
            return Err(invalid(format!("n_qubits must lie in 1..=12 (got {n_qubits})")));
        }
        let dim = 1usize << n_qubits;
        // SAFETY: the caller guarantees `2·dim` readable doubles.
        let raw = unsafe { std::slice::from_raw_parts(amplitudes, 2 * dim) };
        let amps = raw.chunks_exact(2).map(|c| Complex64::new(c[0], c[1])).collect();
        let inputs = StateVector::from_amplitudes(QubitRegister::flying(n_qubits), amps)?;
        let session = MemorySession::new(&inputs, chain_len)?;
        *out = Box::into_raw(Box::new(SmSession { inputs, session, retrieval: None }));
        Ok(())
    })
}

/// Writes every input into the chain at a uniform angle, `Flying(1)` first.
#[no_mangle]
pub extern "C" fn sm_session_encode(session: *mut SmSession, theta: f64, model_id: u32) -> SmStatus {
    guard(|| {
        let s = session_ref(session)?;
        if s.session.encoded() > 0 {
            return Err(Failure(SmStatus::InvalidState, "session is already encoded".into()));
        }
        let m = model(model_id)?;
        s.session = encode_sequence(&s.inputs, s.session.chain_len(), &[ThetaSchedule::uniform(theta)?], m)?;
        Ok(())
    })
}

/// Reads every stored qubit back with fresh probes, optionally applying
/// the σz phase correction.
#[no_mangle]
pub extern "C" fn sm_session_decode(
    session: *mut SmSession,
    theta: f64,
    model_id: u32,
    phase_correct: bool,
) -> SmStatus {
    guard(|| {
        let s = session_ref(session)?;
        if s.retrieval.is_some() {
            return Err(Failure(SmStatus::InvalidState, "session is already decoded".into()));
        }
        let count = s.session.encoded();
        if count == 0 {
            return Err(Failure(SmStatus::InvalidState, "nothing has been encoded".into()));
        }
        let m = model(model_id)?;
        let schedule = ThetaSchedule::uniform(theta)?;
        s.retrieval = Some(decode_sequence(&mut s.session, count, &[schedule], m, phase_correct)?);
        Ok(())
    })
}

/// Number of retrieved qubits.
#[no_mangle]
pub extern "C" fn sm_session_retrieved_count(session: *mut SmSession, out: *mut usize) -> SmStatus {
    guard(|| {
        let s = session_ref(session)?;
        *out_ref(out, "out")? = retrieval(s)?.qubits.len();
        Ok(())
    })
}

/// 2×2 density matrix of the `index`-th retrieved qubit (retrieval order),
/// row-major into `out_re` and `out_im`, four doubles each.
///
/// # Safety
/// `out_re` and `out_im` must each point to 4 writable doubles.
#[no_mangle]
pub unsafe extern "C" fn sm_session_retrieved_density(
    session: *mut SmSession,
    index: usize,
    out_re: *mut f64,
    out_im: *mut f64,
) -> SmStatus {
    guard(|| {
        let s = session_ref(session)?;
        let rho = retrieval(s)?.qubits.get(index).ok_or_else(|| invalid(format!("no retrieved qubit {index}")))?;
        if out_re.is_null() || out_im.is_null() {
            return Err(Failure(SmStatus::NullPointer, "output buffer is null".into()));
        }
        // SAFETY: the caller guarantees four writable doubles in each buffer.
        let (re, im) =
            unsafe { (std::slice::from_raw_parts_mut(out_re, 4), std::slice::from_raw_parts_mut(out_im, 4)) };
        let m = rho.matrix();
        for i in 0..2 {
            for j in 0..2 {
                re[2 * i + j] = m[(i, j)].re;
                im[2 * i + j] = m[(i, j)].im;
            }
        }
        Ok(())
    })
}

/// Fidelity of the joint retrieved state with the joint input.
#[no_mangle]
pub extern "C" fn sm_session_joint_fidelity(session: *mut SmSession, out: *mut f64) -> SmStatus {
    guard(|| {
        let s = session_ref(session)?;
        *out_ref(out, "out")? = retrieval(s)?.joint_fidelity(&s.inputs)?;
        Ok(())
    })
}

/// Releases a session. Null is ignored.
///
/// # Safety
/// `session` must come from [`sm_session_new`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn sm_session_free(session: *mut SmSession) {
    if !session.is_null() {
        // SAFETY: ownership returns to Rust exactly once.
        drop(unsafe { Box::from_raw(session) });
    }
}

/// Runs a JSON scenario config and returns the rendered result (CSV or
/// JSON) as a new string to be released with [`sm_string_free`].
///
/// # Safety
/// `config_json` must be a valid NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn sm_run_scenario_json(
    config_json: *const c_char,
    format: u32,
    out: *mut *mut c_char,
) -> SmStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        if config_json.is_null() {
            return Err(Failure(SmStatus::NullPointer, "`config_json` is null".into()));
        }
        // SAFETY: the caller guarantees a NUL-terminated string.
        let src = unsafe { CStr::from_ptr(config_json) }
            .to_str()
            .map_err(|e| invalid(format!("config is not UTF-8: {e}")))?;
        let fmt = match format {
            SM_FORMAT_CSV => OutputFormat::Csv,
            SM_FORMAT_JSON => OutputFormat::Json,
            other => return Err(invalid(format!("unknown format {other}"))),
        };
        let result = run_scenario(&ScenarioConfig::from_json(src)?)?;
        let text = render(&result, fmt)?;
        *out = CString::new(text).map_err(|e| invalid(e.to_string()))?.into_raw();
        Ok(())
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn sm_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: `s` was produced by `CString::into_raw`.
        drop(unsafe { CString::from_raw(s) });
    }
}
