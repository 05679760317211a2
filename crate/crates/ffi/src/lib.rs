//! C ABI for `qextend`.
//!
//! Objects are opaque handles created by `qx_*_new` and released by the
//! matching `qx_*_free`. Every fallible call returns a [`QxStatus`]; the
//! message of the last failure on the calling thread is available from
//! [`qx_last_error_message`]. Output arrays are caller-allocated, with their
//! length passed alongside.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;
use std::sync::Arc;

use num_complex::Complex64;
use qextend::expsums::{gauss_sum, kloosterman_sum, salie_sum};
use qextend::extension::{
    extension_transform, incidence3_exponents, surface_ft_closed_form, surface_ft_direct, Rational, SizeBranch,
};
use qextend::fourier::{Exponent, SurfaceFunction};
use qextend::incidence::{additive_energy, SubsetE};
use qextend::quadform::{enumerate_surface, QuadraticForm, Surface};
use qextend::{Error, PrimeField};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QxStatus {
    Ok = 0,
    NullPointer = 1,
    NotPrime = 2,
    EvenCharacteristic = 3,
    FieldTooLarge = 4,
    ZeroCoefficient = 5,
    DimensionMismatch = 6,
    DegenerateForm = 7,
    NotSymmetric = 8,
    ZeroLevel = 9,
    GridTooLarge = 10,
    BadExponent = 11,
    DegenerateDenominator = 12,
    BadSubset = 13,
    BufferTooSmall = 14,
    Panic = 15,
    Other = 16,
}

impl From<&Error> for QxStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::NotPrime(_) => QxStatus::NotPrime,
            Error::EvenCharacteristic => QxStatus::EvenCharacteristic,
            Error::FieldTooLarge(_) => QxStatus::FieldTooLarge,
            Error::ZeroCoefficient => QxStatus::ZeroCoefficient,
            Error::DimensionMismatch { .. } => QxStatus::DimensionMismatch,
            Error::DegenerateForm => QxStatus::DegenerateForm,
            Error::NotSymmetric(..) => QxStatus::NotSymmetric,
            Error::ZeroLevel => QxStatus::ZeroLevel,
            Error::GridTooLarge { .. } => QxStatus::GridTooLarge,
            Error::BadExponent => QxStatus::BadExponent,
            Error::DegenerateDenominator => QxStatus::DegenerateDenominator,
            Error::BadSubset(_) | Error::SizeTooLarge { .. } => QxStatus::BadSubset,
            _ => QxStatus::Other,
        }
    }
}

/// Prime field `F_q`.
pub struct QxField(Arc<PrimeField>);

/// Quadratic form over a field.
pub struct QxForm(QuadraticForm);

/// Level set `{x : Q(x) = j}`.
pub struct QxSurface(Arc<Surface>);

/// Exact `(p, r)`; a zero denominator means `∞`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QxExponentPair {
    pub p_num: i64,
    pub p_den: i64,
    pub r_num: i64,
    pub r_den: i64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn fail(status: QxStatus, msg: impl Into<String>) -> QxStatus {
    set_error(msg.into());
    status
}

fn from_error(e: Error) -> QxStatus {
    fail(QxStatus::from(&e), e.to_string())
}

/// Runs `f`, turning panics into [`QxStatus::Panic`].
fn guard(f: impl FnOnce() -> QxStatus) -> QxStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(QxStatus::Panic, "internal panic"),
    }
}

macro_rules! deref {
    ($p:expr, $name:literal) => {
        match unsafe { $p.as_ref() } {
            Some(v) => v,
            None => return fail(QxStatus::NullPointer, concat!($name, " is null")),
        }
    };
}

macro_rules! try_qx {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(e) => return from_error(e),
        }
    };
}

/// Message of the last failure on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qx_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static name of a status code, e.g. `"not_prime"`.
#[no_mangle]
pub extern "C" fn qx_status_name(status: QxStatus) -> *const c_char {
    let s: &'static [u8] = match status {
        QxStatus::Ok => b"ok\0",
        QxStatus::NullPointer => b"null_pointer\0",
        QxStatus::NotPrime => b"not_prime\0",
        QxStatus::EvenCharacteristic => b"even_characteristic\0",
        QxStatus::FieldTooLarge => b"field_too_large\0",
        QxStatus::ZeroCoefficient => b"zero_coefficient\0",
        QxStatus::DimensionMismatch => b"dimension_mismatch\0",
        QxStatus::DegenerateForm => b"degenerate_form\0",
        QxStatus::NotSymmetric => b"not_symmetric\0",
        QxStatus::ZeroLevel => b"zero_level\0",
        QxStatus::GridTooLarge => b"grid_too_large\0",
        QxStatus::BadExponent => b"bad_exponent\0",
        QxStatus::DegenerateDenominator => b"degenerate_denominator\0",
        QxStatus::BadSubset => b"bad_subset\0",
        QxStatus::BufferTooSmall => b"buffer_too_small\0",
        QxStatus::Panic => b"panic\0",
        QxStatus::Other => b"other\0",
    };
    s.as_ptr().cast()
}

/// Creates `F_q`; `*out` receives the handle.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qx_field_new(q: u32, out: *mut *mut QxField) -> QxStatus {
    guard(|| {
        if out.is_null() {
            return fail(QxStatus::NullPointer, "out is null");
        }
        let f = try_qx!(PrimeField::new(q));
        *out = Box::into_raw(Box::new(QxField(Arc::new(f))));
        QxStatus::Ok
    })
}

/// # Safety
/// `field` must come from [`qx_field_new`] and not be freed twice; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn qx_field_free(field: *mut QxField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// # Safety
/// `field` must be a live handle or null (returns 0).
#[no_mangle]
pub unsafe extern "C" fn qx_field_q(field: *const QxField) -> u32 {
    field.as_ref().map_or(0, |f| f.0.q())
}

unsafe fn write_complex(z: Complex64, re: *mut f64, im: *mut f64) -> QxStatus {
    if re.is_null() || im.is_null() {
        return fail(QxStatus::NullPointer, "output pointer is null");
    }
    *re = z.re;
    *im = z.im;
    QxStatus::Ok
}

/// `Σ_{t≠0} χ(at) ψ(t)^k`.
///
/// # Safety
/// `field` must be live; `re` and `im` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qx_gauss_sum(field: *const QxField, a: i64, k: u32, re: *mut f64, im: *mut f64) -> QxStatus {
    guard(|| {
        let f = deref!(field, "field");
        let v = try_qx!(gauss_sum(&f.0, f.0.elem(a), k));
        write_complex(v.value, re, im)
    })
}

/// `Σ_{t≠0} χ(at + b t^{-1})`.
///
/// # Safety
/// As for [`qx_gauss_sum`].
#[no_mangle]
pub unsafe extern "C" fn qx_kloosterman_sum(
    field: *const QxField,
    a: i64,
    b: i64,
    re: *mut f64,
    im: *mut f64,
) -> QxStatus {
    guard(|| {
        let f = deref!(field, "field");
        write_complex(kloosterman_sum(&f.0, f.0.elem(a), f.0.elem(b)).value, re, im)
    })
}

/// `Σ_{t≠0} ψ(t) χ(at + b t^{-1})`.
///
/// # Safety
/// As for [`qx_gauss_sum`].
#[no_mangle]
pub unsafe extern "C" fn qx_salie_sum(field: *const QxField, a: i64, b: i64, re: *mut f64, im: *mut f64) -> QxStatus {
    guard(|| {
        let f = deref!(field, "field");
        write_complex(salie_sum(&f.0, f.0.elem(a), f.0.elem(b)).value, re, im)
    })
}

/// Form with the row-major symmetric `d × d` matrix `entries`.
///
/// # Safety
/// `field` must be live, `entries` readable for `d * d` values, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qx_form_new(
    field: *const QxField,
    d: usize,
    entries: *const i64,
    out: *mut *mut QxForm,
) -> QxStatus {
    guard(|| {
        let f = deref!(field, "field");
        if entries.is_null() || out.is_null() {
            return fail(QxStatus::NullPointer, "entries or out is null");
        }
        let Some(n) = d.checked_mul(d) else {
            return fail(QxStatus::DimensionMismatch, "d * d overflows");
        };
        let e = slice::from_raw_parts(entries, n);
        let form = try_qx!(QuadraticForm::new(f.0.clone(), d, e));
        *out = Box::into_raw(Box::new(QxForm(form)));
        QxStatus::Ok
    })
}

/// # Safety
/// `form` must come from [`qx_form_new`]; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn qx_form_free(form: *mut QxForm) {
    if !form.is_null() {
        drop(Box::from_raw(form));
    }
}

/// # Safety
/// `form` must be live or null (returns false).
#[no_mangle]
pub unsafe extern "C" fn qx_form_is_nondegenerate(form: *const QxForm) -> bool {
    form.as_ref().is_some_and(|f| f.0.is_nondegenerate())
}

/// Enumerates `S_j`.
///
/// # Safety
/// `form` must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qx_surface_new(form: *const QxForm, j: i64, out: *mut *mut QxSurface) -> QxStatus {
    guard(|| {
        let f = deref!(form, "form");
        if out.is_null() {
            return fail(QxStatus::NullPointer, "out is null");
        }
        let s = try_qx!(enumerate_surface(&f.0, f.0.field().elem(j)));
        *out = Box::into_raw(Box::new(QxSurface(Arc::new(s))));
        QxStatus::Ok
    })
}

/// # Safety
/// `surface` must come from [`qx_surface_new`]; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn qx_surface_free(surface: *mut QxSurface) {
    if !surface.is_null() {
        drop(Box::from_raw(surface));
    }
}

/// # Safety
/// `surface` must be live or null (returns 0).
#[no_mangle]
pub unsafe extern "C" fn qx_surface_cardinality(surface: *const QxSurface) -> usize {
    surface.as_ref().map_or(0, |s| s.0.cardinality())
}

/// # Safety
/// `surface` must be live or null (returns 0).
#[no_mangle]
pub unsafe extern "C" fn qx_surface_dim(surface: *const QxSurface) -> usize {
    surface.as_ref().map_or(0, |s| s.0.dim())
}

/// Copies the points, `d` coordinates each, into `buf` (`len >= #S * d`).
///
/// # Safety
/// `surface` must be live and `buf` writable for `len` values.
#[no_mangle]
pub unsafe extern "C" fn qx_surface_points(surface: *const QxSurface, buf: *mut u32, len: usize) -> QxStatus {
    guard(|| {
        let s = deref!(surface, "surface");
        let need = s.0.cardinality() * s.0.dim();
        if buf.is_null() {
            return fail(QxStatus::NullPointer, "buf is null");
        }
        if len < need {
            return fail(QxStatus::BufferTooSmall, format!("need {need} values, got {len}"));
        }
        let out = slice::from_raw_parts_mut(buf, need);
        for (dst, src) in out.chunks_exact_mut(s.0.dim()).zip(s.0.points()) {
            dst.copy_from_slice(src);
        }
        QxStatus::Ok
    })
}

unsafe fn write_grid(values: &[Complex64], re: *mut f64, im: *mut f64, len: usize) -> QxStatus {
    if re.is_null() || im.is_null() {
        return fail(QxStatus::NullPointer, "output pointer is null");
    }
    if len < values.len() {
        return fail(
            QxStatus::BufferTooSmall,
            format!("need {} values, got {len}", values.len()),
        );
    }
    let re = slice::from_raw_parts_mut(re, values.len());
    let im = slice::from_raw_parts_mut(im, values.len());
    for (k, v) in values.iter().enumerate() {
        re[k] = v.re;
        im[k] = v.im;
    }
    QxStatus::Ok
}

/// `Ŝ_j(m)` on the whole grid in row-major order (`len >= q^d`), by the
/// closed form or by enumeration.
///
/// # Safety
/// `surface` must be live; `re`, `im` writable for `len` values.
#[no_mangle]
pub unsafe extern "C" fn qx_surface_ft(
    surface: *const QxSurface,
    closed_form: bool,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> QxStatus {
    guard(|| {
        let s = deref!(surface, "surface");
        let g = if closed_form {
            try_qx!(surface_ft_closed_form(&s.0))
        } else {
            try_qx!(surface_ft_direct(&s.0))
        };
        write_grid(g.values(), re, im, len)
    })
}

/// `(f dσ)^` for `f` given on the surface points (`f_len = #S`).
///
/// # Safety
/// `surface` must be live; `f_re`, `f_im` readable for `f_len` values;
/// `out_re`, `out_im` writable for `out_len` values.
#[no_mangle]
pub unsafe extern "C" fn qx_extension_transform(
    surface: *const QxSurface,
    f_re: *const f64,
    f_im: *const f64,
    f_len: usize,
    out_re: *mut f64,
    out_im: *mut f64,
    out_len: usize,
) -> QxStatus {
    guard(|| {
        let s = deref!(surface, "surface");
        if f_re.is_null() || f_im.is_null() {
            return fail(QxStatus::NullPointer, "input pointer is null");
        }
        let re = slice::from_raw_parts(f_re, f_len);
        let im = slice::from_raw_parts(f_im, f_len);
        let values = re.iter().zip(im).map(|(&a, &b)| Complex64::new(a, b)).collect();
        let f = try_qx!(SurfaceFunction::new(s.0.clone(), values));
        let ext = try_qx!(extension_transform(&f));
        write_grid(ext.values(), out_re, out_im, out_len)
    })
}

/// Additive energy of the subset given by strictly increasing point positions.
///
/// # Safety
/// `surface` must be live, `members` readable for `n` values, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qx_additive_energy(
    surface: *const QxSurface,
    members: *const usize,
    n: usize,
    out: *mut u64,
) -> QxStatus {
    guard(|| {
        let s = deref!(surface, "surface");
        if out.is_null() || (members.is_null() && n > 0) {
            return fail(QxStatus::NullPointer, "members or out is null");
        }
        let m = if n == 0 { Vec::new() } else { slice::from_raw_parts(members, n).to_vec() };
        let e = try_qx!(SubsetE::new(s.0.clone(), m));
        *out = additive_energy(&e).energy;
        QxStatus::Ok
    })
}

fn split(e: Exponent) -> (i64, i64) {
    match e {
        Exponent::Finite(r) => (*r.numer(), *r.denom()),
        Exponent::Infinite => (1, 0),
    }
}

/// Restricted-set `(p, r)` thresholds for `p0 = p0_num / p0_den`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qx_incidence3_exponents(
    d: i64,
    p0_num: i64,
    p0_den: i64,
    large: bool,
    out: *mut QxExponentPair,
) -> QxStatus {
    guard(|| {
        if out.is_null() {
            return fail(QxStatus::NullPointer, "out is null");
        }
        if p0_den == 0 {
            return fail(QxStatus::BadExponent, "p0 denominator is zero");
        }
        let branch = if large { SizeBranch::Large } else { SizeBranch::Small };
        let pair = try_qx!(incidence3_exponents(d, Rational::new(p0_num, p0_den), branch));
        let (p_num, p_den) = split(pair.p);
        let (r_num, r_den) = split(pair.r);
        *out = QxExponentPair {
            p_num,
            p_den,
            r_num,
            r_den,
        };
        QxStatus::Ok
    })
}
