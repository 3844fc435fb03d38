/* Copyright 2026 The spinmem Authors
 * SPDX-License-Identifier: Apache-2.0 */

#ifndef SPINMEM_H
#define SPINMEM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

#define SM_MODEL_XY 0

#define SM_MODEL_HEISENBERG 1

// `|cos θ|^N ≤ ε`.
#define SM_CONVENTION_AMPLITUDE 0

// `cos^{2N} θ ≤ ε`.
#define SM_CONVENTION_PROBABILITY 1

#define SM_FORMAT_CSV 0

#define SM_FORMAT_JSON 1

typedef enum SmStatus {
  SM_STATUS_OK = 0,
  SM_STATUS_INVALID_ARGUMENT = 1,
  SM_STATUS_NUMERICAL = 2,
  SM_STATUS_IO = 3,
  SM_STATUS_NULL_POINTER = 4,
  SM_STATUS_INVALID_STATE = 5,
  SM_STATUS_PANIC = 6,
} SmStatus;

// A memory chain together with its flying inputs and, after decoding, the
// retrieved qubits.
typedef struct SmSession SmSession;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null after a success.
// The pointer stays valid until the next call into this library on the
// same thread.
const char *sm_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *sm_version(void);

// Smallest chain length holding a qubit written at angle `theta` to
// tolerance `epsilon`.
enum SmStatus sm_min_chain_length(double theta,
                                  double epsilon,
                                  uint32_t convention,
                                  uintptr_t *out);

// Site-`k` amplitude of the single down-flip stored under `level` `|↑⟩`
// qubits.
enum SmStatus sm_a1(uintptr_t k, uintptr_t level, double theta, double *out_re, double *out_im);

// Amplitude of down spins at sites `k1 < k2` after two `|↓⟩` writes.
enum SmStatus sm_a2_00(uintptr_t k1, uintptr_t k2, double theta, double *out_re, double *out_im);

// `₂F₁(a, b; c; z)` for a non-positive integer `a` or `b`.
enum SmStatus sm_hyp2f1_terminating(int64_t a, int64_t b, uint32_t c, double z, double *out);

// Mean site and spread of the level-`level` distribution, truncated once
// the neglected tail is below `tol`.
enum SmStatus sm_moments(uintptr_t level,
                         double theta,
                         double tol,
                         double *out_mean,
                         double *out_std);

// Creates a session from `2^n_qubits` interleaved `(re, im)` input
// amplitudes over `Flying(1..=n_qubits)` next to a `|↑…↑⟩` chain of
// `chain_len` sites.
//
// # Safety
// `amplitudes` must point to `2 · 2^n_qubits` readable doubles.
enum SmStatus sm_session_new(const double *amplitudes,
                             uintptr_t n_qubits,
                             uintptr_t chain_len,
                             struct SmSession **out);

// Writes every input into the chain at a uniform angle, `Flying(1)` first.
enum SmStatus sm_session_encode(struct SmSession *session, double theta, uint32_t model_id);

// Reads every stored qubit back with fresh probes, optionally applying
// the σz phase correction.
enum SmStatus sm_session_decode(struct SmSession *session,
                                double theta,
                                uint32_t model_id,
                                bool phase_correct);

// Number of retrieved qubits.
enum SmStatus sm_session_retrieved_count(struct SmSession *session, uintptr_t *out);

// 2×2 density matrix of the `index`-th retrieved qubit (retrieval order),
// row-major into `out_re` and `out_im`, four doubles each.
//
// # Safety
// `out_re` and `out_im` must each point to 4 writable doubles.
enum SmStatus sm_session_retrieved_density(struct SmSession *session,
                                           uintptr_t index,
                                           double *out_re,
                                           double *out_im);

// Fidelity of the joint retrieved state with the joint input.
enum SmStatus sm_session_joint_fidelity(struct SmSession *session, double *out);

// Releases a session. Null is ignored.
//
// # Safety
// `session` must come from [`sm_session_new`] and not have been freed.
void sm_session_free(struct SmSession *session);

// Runs a JSON scenario config and returns the rendered result (CSV or
// JSON) as a new string to be released with [`sm_string_free`].
//
// # Safety
// `config_json` must be a valid NUL-terminated string.
enum SmStatus sm_run_scenario_json(const char *config_json, uint32_t format, char **out);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void sm_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPINMEM_H */
