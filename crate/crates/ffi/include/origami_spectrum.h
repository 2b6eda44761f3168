#ifndef ORIGAMI_SPECTRUM_H
#define ORIGAMI_SPECTRUM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum OsStatus {
  OS_STATUS_OK = 0,
  OS_STATUS_NULL_POINTER = 1,
  OS_STATUS_INVALID_ARGUMENT = 2,
  OS_STATUS_PARSE_ERROR = 3,
  OS_STATUS_COMPUTATION_ERROR = 4,
  OS_STATUS_PANIC = 5,
} OsStatus;

// Orbit graph handle.
typedef struct OsOrbit OsOrbit;

// Exact value handle.
typedef struct OsValue OsValue;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread; empty if none. The
// pointer stays valid until the next failing call on the same thread.
const char *os_last_error_message(void);

// Derives the 36-element orbit and stores a new handle in `*out`.
//
// # Safety
// `out` must be a valid pointer to writable storage for one handle pointer.
enum OsStatus os_orbit_b7(struct OsOrbit **out);

// One-vertex orbit of the torus, giving classical values.
//
// # Safety
// `out` must be a valid pointer to writable storage for one handle pointer.
enum OsStatus os_orbit_torus(struct OsOrbit **out);

// Releases an orbit handle. Null is ignored.
//
// # Safety
// `orbit` must be null or a handle from this library not yet freed.
void os_orbit_free(struct OsOrbit *orbit);

// # Safety
// `orbit` must be a live handle and `out` a valid pointer.
enum OsStatus os_orbit_vertex_count(const struct OsOrbit *orbit, uintptr_t *out);

// Horizontal multiplicity of vertex `v`.
//
// # Safety
// `orbit` must be a live handle and `out` a valid pointer.
enum OsStatus os_orbit_multiplicity(const struct OsOrbit *orbit, uintptr_t v, uint32_t *out);

// Width of the cusp containing vertex `v`.
//
// # Safety
// `orbit` must be a live handle and `out` a valid pointer.
enum OsStatus os_orbit_cusp_width(const struct OsOrbit *orbit, uintptr_t v, uintptr_t *out);

// `L(start, alpha)` with `alpha` written as a continued fraction such as
// `[;(1,3)]`.
//
// # Safety
// `orbit` must be a live handle, `alpha` a NUL-terminated string and `out`
// a valid pointer.
enum OsStatus os_lagrange(const struct OsOrbit *orbit,
                          uintptr_t start,
                          const char *alpha,
                          struct OsValue **out);

// Minimum of `L(start, alpha)` over all starts; the smallest minimising
// start is written to `out_start` when it is not null.
//
// # Safety
// As for [`os_lagrange`]; `out_start` may be null.
enum OsStatus os_lagrange_min(const struct OsOrbit *orbit,
                              const char *alpha,
                              uintptr_t *out_start,
                              struct OsValue **out);

// `L^sigma` of the periodic word `word^inf`, e.g. `ab^3`.
//
// # Safety
// `word` must be a NUL-terminated string and `out` a valid pointer.
enum OsStatus os_l_sigma(const char *word, struct OsValue **out);

// Endpoints of the first-generation gap `G_k` (`G_0 = (phi1, phi2)`).
//
// # Safety
// `out_left` and `out_right` must be valid pointers.
enum OsStatus os_gap_first(uintptr_t k, struct OsValue **out_left, struct OsValue **out_right);

// Endpoints of the second-generation gap `G_{k,n}`, `k, n >= 1`.
//
// # Safety
// `out_left` and `out_right` must be valid pointers.
enum OsStatus os_gap_second(uintptr_t k,
                            uintptr_t n,
                            struct OsValue **out_left,
                            struct OsValue **out_right);

// # Safety
// `value` must be a live handle and `out` a valid pointer.
enum OsStatus os_value_to_f64(const struct OsValue *value, double *out);

// Writes -1, 0 or 1 to `out` as `a` is less than, equal to or greater than `b`.
//
// # Safety
// `a`, `b` must be live handles and `out` a valid pointer.
enum OsStatus os_value_compare(const struct OsValue *a, const struct OsValue *b, int32_t *out);

// Exact form `(p+q*sqrt(d))/r`; null on failure. Free with [`os_string_free`].
//
// # Safety
// `value` must be null or a live handle.
char *os_value_surd_string(const struct OsValue *value);

// Decimal rounded to `digits` places with its bound, e.g. `10.692677±5e-7`;
// null on failure. Free with [`os_string_free`].
//
// # Safety
// `value` must be null or a live handle.
char *os_value_decimal_string(const struct OsValue *value, uint32_t digits);

// Releases a value handle. Null is ignored.
//
// # Safety
// `value` must be null or a handle from this library not yet freed.
void os_value_free(struct OsValue *value);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must be null or a string from this library not yet freed.
void os_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ORIGAMI_SPECTRUM_H */
