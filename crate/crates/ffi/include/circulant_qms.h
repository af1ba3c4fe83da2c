/* C API for the circulant quantum Markov semigroup library. */

#ifndef CIRCULANT_QMS_H
#define CIRCULANT_QMS_H

/* Generated by cbindgen from crates/ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Status of a C-API call.
 */
typedef enum {
  /*
   Success.
   */
  CQMS_STATUS_OK = 0,
  /*
   A pointer argument was null.
   */
  CQMS_STATUS_NULL_POINTER = 1,
  /*
   Input failed validation (schema, weights, dimensions, arguments).
   */
  CQMS_STATUS_INVALID_INPUT = 2,
  /*
   An internal consistency check failed (closed form vs oracle).
   */
  CQMS_STATUS_INTERNAL = 3,
  /*
   The numerical entropy production rate diverges (one-sided zero
   weights); no finite value is available.
   */
  CQMS_STATUS_DIVERGENT = 4,
  /*
   An output buffer has the wrong length.
   */
  CQMS_STATUS_BAD_LENGTH = 5,
} CqmsStatus;

/*
 Opaque generator handle.
 */
typedef struct CqmsGenerator CqmsGenerator;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Parse a weight-table JSON document and return a generator handle.

 # Safety
 `json` must be a valid NUL-terminated C string; `out` must be a valid
 pointer. On success `*out` owns the handle and must be released with
 [`cqms_generator_free`].
 */
CqmsStatus cqms_generator_from_json(const char *json, CqmsGenerator **out);

/*
 Release a generator handle.

 # Safety
 `handle` must be null or a pointer obtained from
 [`cqms_generator_from_json`], not yet freed.
 */
void cqms_generator_free(CqmsGenerator *handle);

/*
 Hilbert-space dimension of the generator (the product of the cyclic
 orders); 0 for a null handle.

 # Safety
 `handle` must be null or a live generator handle.
 */
uintptr_t cqms_generator_dim(const CqmsGenerator *handle);

/*
 Closed-form quantum entropy production rate; infinite rates are
 reported as IEEE infinity.

 # Safety
 `handle` must be a live generator handle and `out` a valid pointer.
 */
CqmsStatus cqms_qepr_closed(const CqmsGenerator *handle, double *out);

/*
 Classical entropy production rate of the diagonal restriction.

 # Safety
 `handle` must be a live generator handle and `out` a valid pointer.
 */
CqmsStatus cqms_classical_epr(const CqmsGenerator *handle, double *out);

/*
 Numerical entropy production rate over the default time grid with the
 uniform stationary state. Returns [`CqmsStatus::Divergent`] when the
 closed form is infinite.

 # Safety
 `handle` must be a live generator handle and `out` a valid pointer.
 */
CqmsStatus cqms_qepr_numerical(const CqmsGenerator *handle, double *out);

/*
 Detailed-balance verdict at tolerance `tol`: `*out` becomes 1 or 0.

 # Safety
 `handle` must be a live generator handle and `out` a valid pointer.
 */
CqmsStatus cqms_check_detailed_balance(const CqmsGenerator *handle, double tol, int32_t *out);

/*
 Fourier spectrum of the generator, written into two buffers of length
 `len = dim` (flat frequency index, lexicographic).

 # Safety
 `handle` must be a live generator handle; `out_re` and `out_im` must
 point to `len` writable doubles.
 */
CqmsStatus cqms_spectrum(const CqmsGenerator *handle,
                         double *out_re,
                         double *out_im,
                         uintptr_t len);

/*
 Closed-form transition matrix `exp(tQ)`, written row-major into a
 buffer of length `len = dim * dim`.

 # Safety
 `handle` must be a live generator handle; `out` must point to `len`
 writable doubles.
 */
CqmsStatus cqms_exp_generator(const CqmsGenerator *handle, double t, double *out, uintptr_t len);

/*
 Full entropy production report as a JSON string. The caller owns the
 returned string and must release it with [`cqms_string_free`].

 # Safety
 `handle` must be a live generator handle and `out` a valid pointer.
 */
CqmsStatus cqms_epr_report_json(const CqmsGenerator *handle, char **out);

/*
 Release a string returned by this library.

 # Safety
 `s` must be null or a pointer returned by [`cqms_epr_report_json`],
 not yet freed.
 */
void cqms_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CIRCULANT_QMS_H */
