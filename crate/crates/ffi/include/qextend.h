#ifndef QEXTEND_H
#define QEXTEND_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum QxStatus {
  QX_STATUS_OK = 0,
  QX_STATUS_NULL_POINTER = 1,
  QX_STATUS_NOT_PRIME = 2,
  QX_STATUS_EVEN_CHARACTERISTIC = 3,
  QX_STATUS_FIELD_TOO_LARGE = 4,
  QX_STATUS_ZERO_COEFFICIENT = 5,
  QX_STATUS_DIMENSION_MISMATCH = 6,
  QX_STATUS_DEGENERATE_FORM = 7,
  QX_STATUS_NOT_SYMMETRIC = 8,
  QX_STATUS_ZERO_LEVEL = 9,
  QX_STATUS_GRID_TOO_LARGE = 10,
  QX_STATUS_BAD_EXPONENT = 11,
  QX_STATUS_DEGENERATE_DENOMINATOR = 12,
  QX_STATUS_BAD_SUBSET = 13,
  QX_STATUS_BUFFER_TOO_SMALL = 14,
  QX_STATUS_PANIC = 15,
  QX_STATUS_OTHER = 16,
} QxStatus;

// Prime field `F_q`.
typedef struct QxField QxField;

// Quadratic form over a field.
typedef struct QxForm QxForm;

// Level set `{x : Q(x) = j}`.
typedef struct QxSurface QxSurface;

// Exact `(p, r)`; a zero denominator means `∞`.
typedef struct QxExponentPair {
  int64_t p_num;
  int64_t p_den;
  int64_t r_num;
  int64_t r_den;
} QxExponentPair;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread, or null. Valid until the
// next failing call on the same thread.
const char *qx_last_error_message(void);

// Static name of a status code, e.g. `"not_prime"`.
const char *qx_status_name(enum QxStatus status);

// Creates `F_q`; `*out` receives the handle.
//
// # Safety
// `out` must be valid for writes.
enum QxStatus qx_field_new(uint32_t q, struct QxField **out);

// # Safety
// `field` must come from [`qx_field_new`] and not be freed twice; null is ignored.
void qx_field_free(struct QxField *field);

// # Safety
// `field` must be a live handle or null (returns 0).
uint32_t qx_field_q(const struct QxField *field);

// `Σ_{t≠0} χ(at) ψ(t)^k`.
//
// # Safety
// `field` must be live; `re` and `im` valid for writes.
enum QxStatus qx_gauss_sum(const struct QxField *field,
                           int64_t a,
                           uint32_t k,
                           double *re,
                           double *im);

// `Σ_{t≠0} χ(at + b t^{-1})`.
//
// # Safety
// As for [`qx_gauss_sum`].
enum QxStatus qx_kloosterman_sum(const struct QxField *field,
                                 int64_t a,
                                 int64_t b,
                                 double *re,
                                 double *im);

// `Σ_{t≠0} ψ(t) χ(at + b t^{-1})`.
//
// # Safety
// As for [`qx_gauss_sum`].
enum QxStatus qx_salie_sum(const struct QxField *field,
                           int64_t a,
                           int64_t b,
                           double *re,
                           double *im);

// Form with the row-major symmetric `d × d` matrix `entries`.
//
// # Safety
// `field` must be live, `entries` readable for `d * d` values, `out` writable.
enum QxStatus qx_form_new(const struct QxField *field,
                          size_t d,
                          const int64_t *entries,
                          struct QxForm **out);

// # Safety
// `form` must come from [`qx_form_new`]; null is ignored.
void qx_form_free(struct QxForm *form);

// # Safety
// `form` must be live or null (returns false).
bool qx_form_is_nondegenerate(const struct QxForm *form);

// Enumerates `S_j`.
//
// # Safety
// `form` must be live and `out` writable.
enum QxStatus qx_surface_new(const struct QxForm *form, int64_t j, struct QxSurface **out);

// # Safety
// `surface` must come from [`qx_surface_new`]; null is ignored.
void qx_surface_free(struct QxSurface *surface);

// # Safety
// `surface` must be live or null (returns 0).
size_t qx_surface_cardinality(const struct QxSurface *surface);

// # Safety
// `surface` must be live or null (returns 0).
size_t qx_surface_dim(const struct QxSurface *surface);

// Copies the points, `d` coordinates each, into `buf` (`len >= #S * d`).
//
// # Safety
// `surface` must be live and `buf` writable for `len` values.
enum QxStatus qx_surface_points(const struct QxSurface *surface, uint32_t *buf, size_t len);

// `Ŝ_j(m)` on the whole grid in row-major order (`len >= q^d`), by the
// closed form or by enumeration.
//
// # Safety
// `surface` must be live; `re`, `im` writable for `len` values.
enum QxStatus qx_surface_ft(const struct QxSurface *surface,
                            bool closed_form,
                            double *re,
                            double *im,
                            size_t len);

// `(f dσ)^` for `f` given on the surface points (`f_len = #S`).
//
// # Safety
// `surface` must be live; `f_re`, `f_im` readable for `f_len` values;
// `out_re`, `out_im` writable for `out_len` values.
enum QxStatus qx_extension_transform(const struct QxSurface *surface,
                                     const double *f_re,
                                     const double *f_im,
                                     size_t f_len,
                                     double *out_re,
                                     double *out_im,
                                     size_t out_len);

// Additive energy of the subset given by strictly increasing point positions.
//
// # Safety
// `surface` must be live, `members` readable for `n` values, `out` writable.
enum QxStatus qx_additive_energy(const struct QxSurface *surface,
                                 const size_t *members,
                                 size_t n,
                                 uint64_t *out);

// Restricted-set `(p, r)` thresholds for `p0 = p0_num / p0_den`.
//
// # Safety
// `out` must be writable.
enum QxStatus qx_incidence3_exponents(int64_t d,
                                      int64_t p0_num,
                                      int64_t p0_den,
                                      bool large,
                                      struct QxExponentPair *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QEXTEND_H */
