//! C ABI for the circulant quantum Markov semigroup library.
//!
//! Handles are opaque: build a generator from the weight-table JSON
//! schema, query it through plain C functions, and free it when done. All
//! functions return a [`CqmsStatus`]; outputs arrive through out-pointers.
//! Infinite rates are reported as the IEEE infinity, a divergent numerical
//! rate as [`CqmsStatus::Divergent`].
//!
//! The generated header lives at `include/circulant_qms.h`.

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use circulant_qms::entropy::{self, DEFAULT_T_GRID};
use circulant_qms::io;
use circulant_qms::{
    classical_epr, exp_generator, qepr_closed_form, qepr_numerical, spectrum,
    CirculantGenerator, DensityMatrix, Error,
};

/// Status of a C-API call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CqmsStatus {
    /// Success.
    Ok = 0,
    /// A pointer argument was null.
    NullPointer = 1,
    /// Input failed validation (schema, weights, dimensions, arguments).
    InvalidInput = 2,
    /// An internal consistency check failed (closed form vs oracle).
    Internal = 3,
    /// The numerical entropy production rate diverges (one-sided zero
    /// weights); no finite value is available.
    Divergent = 4,
    /// An output buffer has the wrong length.
    BadLength = 5,
}

fn status_of(err: &Error) -> CqmsStatus {
    match err.exit_code() {
        3 => CqmsStatus::Internal,
        _ => CqmsStatus::InvalidInput,
    }
}

/// Opaque generator handle.
pub struct CqmsGenerator {
    inner: CirculantGenerator,
}

fn guarded<F: FnOnce() -> CqmsStatus>(f: F) -> CqmsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => CqmsStatus::Internal,
    }
}

/// Parse a weight-table JSON document and return a generator handle.
///
/// # Safety
/// `json` must be a valid NUL-terminated C string; `out` must be a valid
/// pointer. On success `*out` owns the handle and must be released with
/// [`cqms_generator_free`].
#[no_mangle]
pub unsafe extern "C" fn cqms_generator_from_json(
    json: *const c_char,
    out: *mut *mut CqmsGenerator,
) -> CqmsStatus {
    if json.is_null() || out.is_null() {
        return CqmsStatus::NullPointer;
    }
    guarded(|| {
        let text = match CStr::from_ptr(json).to_str() {
            Ok(t) => t,
            Err(_) => return CqmsStatus::InvalidInput,
        };
        match io::parse_weights_json(text) {
            Ok(doc) => {
                let handle = Box::new(CqmsGenerator {
                    inner: CirculantGenerator::new(doc.weights),
                });
                *out = Box::into_raw(handle);
                CqmsStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Release a generator handle.
///
/// # Safety
/// `handle` must be null or a pointer obtained from
/// [`cqms_generator_from_json`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cqms_generator_free(handle: *mut CqmsGenerator) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Hilbert-space dimension of the generator (the product of the cyclic
/// orders); 0 for a null handle.
///
/// # Safety
/// `handle` must be null or a live generator handle.
#[no_mangle]
pub unsafe extern "C" fn cqms_generator_dim(handle: *const CqmsGenerator) -> usize {
    handle.as_ref().map_or(0, |h| h.inner.dim())
}

/// Closed-form quantum entropy production rate; infinite rates are
/// reported as IEEE infinity.
///
/// # Safety
/// `handle` must be a live generator handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cqms_qepr_closed(
    handle: *const CqmsGenerator,
    out: *mut f64,
) -> CqmsStatus {
    let (Some(h), false) = (handle.as_ref(), out.is_null()) else {
        return CqmsStatus::NullPointer;
    };
    guarded(|| {
        *out = qepr_closed_form(&h.inner).value;
        CqmsStatus::Ok
    })
}

/// Classical entropy production rate of the diagonal restriction.
///
/// # Safety
/// `handle` must be a live generator handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cqms_classical_epr(
    handle: *const CqmsGenerator,
    out: *mut f64,
) -> CqmsStatus {
    let (Some(h), false) = (handle.as_ref(), out.is_null()) else {
        return CqmsStatus::NullPointer;
    };
    guarded(|| match classical_epr(&h.inner) {
        Ok(v) => {
            *out = v;
            CqmsStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Numerical entropy production rate over the default time grid with the
/// uniform stationary state. Returns [`CqmsStatus::Divergent`] when the
/// closed form is infinite.
///
/// # Safety
/// `handle` must be a live generator handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cqms_qepr_numerical(
    handle: *const CqmsGenerator,
    out: *mut f64,
) -> CqmsStatus {
    let (Some(h), false) = (handle.as_ref(), out.is_null()) else {
        return CqmsStatus::NullPointer;
    };
    guarded(|| {
        let uniform = DensityMatrix::uniform(h.inner.dim());
        match qepr_numerical(&h.inner, &uniform, &DEFAULT_T_GRID) {
            Ok(numerical) => match numerical.value {
                Some(v) => {
                    *out = v;
                    CqmsStatus::Ok
                }
                None => CqmsStatus::Divergent,
            },
            Err(e) => status_of(&e),
        }
    })
}

/// Detailed-balance verdict at tolerance `tol`: `*out` becomes 1 or 0.
///
/// # Safety
/// `handle` must be a live generator handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cqms_check_detailed_balance(
    handle: *const CqmsGenerator,
    tol: f64,
    out: *mut i32,
) -> CqmsStatus {
    let (Some(h), false) = (handle.as_ref(), out.is_null()) else {
        return CqmsStatus::NullPointer;
    };
    if tol <= 0.0 {
        return CqmsStatus::InvalidInput;
    }
    guarded(|| {
        *out = i32::from(h.inner.check_detailed_balance(tol));
        CqmsStatus::Ok
    })
}

/// Fourier spectrum of the generator, written into two buffers of length
/// `len = dim` (flat frequency index, lexicographic).
///
/// # Safety
/// `handle` must be a live generator handle; `out_re` and `out_im` must
/// point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn cqms_spectrum(
    handle: *const CqmsGenerator,
    out_re: *mut f64,
    out_im: *mut f64,
    len: usize,
) -> CqmsStatus {
    let (Some(h), false, false) = (handle.as_ref(), out_re.is_null(), out_im.is_null()) else {
        return CqmsStatus::NullPointer;
    };
    if len != h.inner.dim() {
        return CqmsStatus::BadLength;
    }
    guarded(|| {
        let spec = spectrum(&h.inner.generator_coefficients());
        for (k, z) in spec.lambda().iter().enumerate() {
            *out_re.add(k) = z.re;
            *out_im.add(k) = z.im;
        }
        CqmsStatus::Ok
    })
}

/// Closed-form transition matrix `exp(tQ)`, written row-major into a
/// buffer of length `len = dim * dim`.
///
/// # Safety
/// `handle` must be a live generator handle; `out` must point to `len`
/// writable doubles.
#[no_mangle]
pub unsafe extern "C" fn cqms_exp_generator(
    handle: *const CqmsGenerator,
    t: f64,
    out: *mut f64,
    len: usize,
) -> CqmsStatus {
    let (Some(h), false) = (handle.as_ref(), out.is_null()) else {
        return CqmsStatus::NullPointer;
    };
    let d = h.inner.dim();
    if len != d * d {
        return CqmsStatus::BadLength;
    }
    if t < 0.0 {
        return CqmsStatus::InvalidInput;
    }
    guarded(|| match exp_generator(&h.inner.generator_coefficients(), t) {
        Ok(m) => {
            for i in 0..d {
                for j in 0..d {
                    *out.add(i * d + j) = m.get(i, j).re;
                }
            }
            CqmsStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Full entropy production report as a JSON string. The caller owns the
/// returned string and must release it with [`cqms_string_free`].
///
/// # Safety
/// `handle` must be a live generator handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cqms_epr_report_json(
    handle: *const CqmsGenerator,
    out: *mut *mut c_char,
) -> CqmsStatus {
    let (Some(h), false) = (handle.as_ref(), out.is_null()) else {
        return CqmsStatus::NullPointer;
    };
    guarded(|| {
        let report = match entropy::epr_report(&h.inner, None, &DEFAULT_T_GRID, 1e-10) {
            Ok(r) => r,
            Err(e) => return status_of(&e),
        };
        let value = match io::epr_report_json(&report) {
            Ok(v) => v,
            Err(e) => return status_of(&e),
        };
        let text = value.to_string();
        match CString::new(text) {
            Ok(cstring) => {
                *out = cstring.into_raw();
                CqmsStatus::Ok
            }
            Err(_) => CqmsStatus::Internal,
        }
    })
}

/// Release a string returned by this library.
///
/// # Safety
/// `s` must be null or a pointer returned by [`cqms_epr_report_json`],
/// not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cqms_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
