#ifndef FDSLAB_H
#define FDSLAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum FdsStatus {
  FDS_STATUS_OK = 0,
  FDS_STATUS_NULL_POINTER = 1,
  FDS_STATUS_INVALID_UTF8 = 2,
  FDS_STATUS_PARSE_ERROR = 3,
  FDS_STATUS_UNSUPPORTED_FIELD = 4,
  FDS_STATUS_TOO_LARGE = 5,
  FDS_STATUS_ARITY_MISMATCH = 6,
  FDS_STATUS_INCONSISTENT_DATA = 7,
  FDS_STATUS_NOT_ESSENTIAL_ARITY = 8,
  FDS_STATUS_INVALID_ARGUMENT = 9,
  FDS_STATUS_BUFFER_TOO_SMALL = 10,
  FDS_STATUS_PANIC = 11,
} FdsStatus;

// The enumerated state-transition graph of a system.
typedef struct FdsPhaseSpace FdsPhaseSpace;

// A polynomial dynamical system `f: k^n -> k^n`.
typedef struct FdsSystem FdsSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null after a success.
// The pointer stays valid until the next library call on the same thread.
const char *fds_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *fds_version(void);

// Release a string returned by the library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed already.
void fds_string_free(char *s);

// Parse a system from text (one `fi = ...` line per coordinate, optional
// `field: q` directive). A nonzero `field_order` overrides the directive.
//
// # Safety
// `text` must be a NUL-terminated string and `out` a valid pointer.
enum FdsStatus fds_system_parse(const char *text, uint32_t field_order, struct FdsSystem **out);

// Release a system handle. Null is ignored.
//
// # Safety
// `sys` must come from this library and not have been freed already.
void fds_system_free(struct FdsSystem *sys);

// Number of variables, or 0 for a null handle.
//
// # Safety
// `sys` must be null or a live handle.
size_t fds_system_nvars(const struct FdsSystem *sys);

// Field order, or 0 for a null handle.
//
// # Safety
// `sys` must be null or a live handle.
uint32_t fds_system_field_order(const struct FdsSystem *sys);

// Apply the system once: `out = f(state)`. Both arrays hold `len` values,
// which must equal the number of variables.
//
// # Safety
// `sys` must be a live handle; `state` and `out` must point to `len` values.
enum FdsStatus fds_system_step(const struct FdsSystem *sys,
                               const uint32_t *state,
                               size_t len,
                               uint32_t *out);

// Render the system as text with its field directive. Free the result with
// [`fds_string_free`].
//
// # Safety
// `sys` must be a live handle and `out` a valid pointer.
enum FdsStatus fds_system_to_string(const struct FdsSystem *sys, char **out);

// Enumerate the phase space. `bound` caps the number of states; 0 selects
// the default of one million.
//
// # Safety
// `sys` must be a live handle and `out` a valid pointer.
enum FdsStatus fds_phase_space_new(const struct FdsSystem *sys,
                                   uint64_t bound,
                                   struct FdsPhaseSpace **out);

// Release a phase-space handle. Null is ignored.
//
// # Safety
// `ps` must come from this library and not have been freed already.
void fds_phase_space_free(struct FdsPhaseSpace *ps);

// # Safety
// `ps` must be null or a live handle.
uint64_t fds_phase_space_total_states(const struct FdsPhaseSpace *ps);

// # Safety
// `ps` must be null or a live handle.
size_t fds_phase_space_num_components(const struct FdsPhaseSpace *ps);

// # Safety
// `ps` must be null or a live handle.
uint64_t fds_phase_space_max_transient_height(const struct FdsPhaseSpace *ps);

// Limit-cycle lengths in ascending order, one per component. `*len`
// receives the count; pass a null `out` to query it.
//
// # Safety
// `ps` must be a live handle, `len` valid, and `out` null or `cap` values long.
enum FdsStatus fds_phase_space_cycle_lengths(const struct FdsPhaseSpace *ps,
                                             uint64_t *out,
                                             size_t cap,
                                             size_t *len);

// Decide whether the Boolean function with truth table `table` (a string
// of `2^n` bits, bit `v` being the value at the input whose bit `i` is
// `x_{i+1}`) is nested canalyzing. On success `*is_ncf` is 0 or 1;
// functions ignoring a variable give [`FdsStatus::NotEssentialArity`].
//
// # Safety
// `table` must be a NUL-terminated string and `is_ncf` a valid pointer.
enum FdsStatus fds_ncf_check(const char *table, int32_t *is_ncf);

// Infer a system from time-series CSV (header `x1,...,xn`, blank lines
// separating segments) over the field of order `field_order`, using the
// degrevlex order. The result fits every observed transition.
//
// # Safety
// `csv` must be a NUL-terminated string and `out` a valid pointer.
enum FdsStatus fds_infer_from_csv(const char *csv, uint32_t field_order, struct FdsSystem **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FDSLAB_H */
