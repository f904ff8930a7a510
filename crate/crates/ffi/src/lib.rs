//! C ABI over `mvpoisson`.
//!
//! Models and Smith decompositions cross the boundary as opaque heap handles
//! created by `mvp_*_new` and released by the matching `mvp_*_free`. Every
//! fallible function returns an [`MvpStatus`]; on failure a description is
//! available from [`mvp_last_error_message`] on the same thread. Status codes
//! 2, 3 and 4 match the exit codes of the command-line tool.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use mvpoisson::eval::{gf_eval, gf_eval_series, Method, PoissonModel};
use mvpoisson::intlinalg::{snf, IntMatrix, SnfDecomposition};
use mvpoisson::lattice::MethodTag;
use mvpoisson::mc::verify_sharded;
use mvpoisson::Error;
use num_bigint::BigInt;
use num_traits::ToPrimitive;

pub const MVP_METHOD_AUTO: u32 = 0;
pub const MVP_METHOD_SINGLE_INDEX: u32 = 1;
pub const MVP_METHOD_INVERTIBLE: u32 = 2;
pub const MVP_METHOD_ENUMERATE: u32 = 3;

pub const MVP_SNF_P: u32 = 0;
pub const MVP_SNF_D: u32 = 1;
pub const MVP_SNF_Q: u32 = 2;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MvpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    MethodNotApplicable = 3,
    Internal = 4,
    Overflow = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MvpMethodTag {
    SingleIndex = 0,
    Invertible = 1,
    EnumerateOnly = 2,
}

impl From<MethodTag> for MvpMethodTag {
    fn from(t: MethodTag) -> Self {
        match t {
            MethodTag::SingleIndex => MvpMethodTag::SingleIndex,
            MethodTag::Invertible => MvpMethodTag::Invertible,
            MethodTag::EnumerateOnly => MvpMethodTag::EnumerateOnly,
        }
    }
}

#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct MvpPmfResult {
    pub log_prob: f64,
    pub prob: f64,
    pub method: MvpMethodTag,
    pub terms: u64,
    pub clamped: bool,
}

#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct MvpSampleReport {
    pub exact_prob: f64,
    pub empirical_prob: f64,
    pub hits: u64,
    pub n_samples: u64,
    pub z_score: f64,
    pub seed: u64,
    pub shards: u32,
}

/// Opaque model handle.
pub struct MvpModel {
    inner: PoissonModel,
}

/// Opaque Smith normal form handle.
pub struct MvpSnf {
    inner: SnfDecomposition,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn fail(status: MvpStatus, msg: impl Into<String>) -> MvpStatus {
    set_error(msg);
    status
}

fn from_core(e: Error) -> MvpStatus {
    let status = match e {
        Error::MethodNotApplicable { .. } => MvpStatus::MethodNotApplicable,
        Error::Invariant(_) => MvpStatus::Internal,
        Error::Overflow(_) => MvpStatus::Overflow,
        _ => MvpStatus::InvalidInput,
    };
    fail(status, e.to_string())
}

fn guard(f: impl FnOnce() -> MvpStatus) -> MvpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(MvpStatus::Panic, "panic inside mvpoisson"),
    }
}

/// Borrows `len` elements, treating `len == 0` as an empty slice even when
/// `ptr` is null.
unsafe fn input<'a, T>(ptr: *const T, len: usize) -> Option<&'a [T]> {
    if len == 0 {
        return Some(&[]);
    }
    if ptr.is_null() {
        return None;
    }
    Some(slice::from_raw_parts(ptr, len))
}

fn method_from(raw: u32) -> Option<Method> {
    Some(match raw {
        MVP_METHOD_AUTO => Method::Auto,
        MVP_METHOD_SINGLE_INDEX => Method::SingleIndex,
        MVP_METHOD_INVERTIBLE => Method::Invertible,
        MVP_METHOD_ENUMERATE => Method::Enumerate,
        _ => return None,
    })
}

/// Message for the most recent failure on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn mvp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Builds a model from a row-major `rows × cols` matrix and `cols` rates.
///
/// # Safety
/// `a` must point to `rows * cols` readable values, `lambda` to `cols`, and
/// `out` must be writable. The handle written to `out` must be released with
/// [`mvp_model_free`].
#[no_mangle]
pub unsafe extern "C" fn mvp_model_new(
    a: *const u64,
    rows: usize,
    cols: usize,
    lambda: *const f64,
    out: *mut *mut MvpModel,
) -> MvpStatus {
    guard(|| {
        if out.is_null() {
            return fail(MvpStatus::NullPointer, "out is null");
        }
        let Some(len) = rows.checked_mul(cols) else {
            return fail(MvpStatus::InvalidInput, "rows * cols overflows");
        };
        let (Some(a), Some(lambda)) = (input(a, len), input(lambda, cols)) else {
            return fail(MvpStatus::NullPointer, "matrix or rate pointer is null");
        };
        let entries = a.iter().map(|&x| x.into()).collect();
        let model = IntMatrix::new(rows, cols, entries)
            .and_then(|m| PoissonModel::new(m, lambda.to_vec()));
        match model {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(MvpModel { inner }));
                MvpStatus::Ok
            }
            Err(e) => from_core(e),
        }
    })
}

/// # Safety
/// `model` must be NULL or a handle from [`mvp_model_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mvp_model_free(model: *mut MvpModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Number of rows of the original matrix, or 0 for NULL.
///
/// # Safety
/// `model` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mvp_model_rows(model: *const MvpModel) -> usize {
    model.as_ref().map_or(0, |m| m.inner.rows())
}

/// Number of columns of the original matrix, or 0 for NULL.
///
/// # Safety
/// `model` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mvp_model_cols(model: *const MvpModel) -> usize {
    model.as_ref().map_or(0, |m| m.inner.cols())
}

/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mvp_model_method(
    model: *const MvpModel,
    out: *mut MvpMethodTag,
) -> MvpStatus {
    guard(|| {
        let (Some(model), false) = (model.as_ref(), out.is_null()) else {
            return fail(MvpStatus::NullPointer, "model or out is null");
        };
        *out = model.inner.method().into();
        MvpStatus::Ok
    })
}

/// `P(Y = b)` with one of the `MVP_METHOD_*` paths.
///
/// # Safety
/// `model` must be a live handle, `b` must point to `len` values and `out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn mvp_pmf(
    model: *const MvpModel,
    b: *const i64,
    len: usize,
    method: u32,
    out: *mut MvpPmfResult,
) -> MvpStatus {
    guard(|| {
        let (Some(model), Some(b), false) = (model.as_ref(), input(b, len), out.is_null()) else {
            return fail(MvpStatus::NullPointer, "null argument");
        };
        let Some(method) = method_from(method) else {
            return fail(MvpStatus::InvalidInput, format!("unknown method code {method}"));
        };
        match model.inner.pmf_method(b, method) {
            Ok(r) => {
                *out = MvpPmfResult {
                    log_prob: r.log_prob,
                    prob: r.prob,
                    method: r.method.into(),
                    terms: r.terms as u64,
                    clamped: r.clamped,
                };
                MvpStatus::Ok
            }
            Err(e) => from_core(e),
        }
    })
}

/// Closed-form generating function at `z ∈ [0, 1]^rows`.
///
/// # Safety
/// `model` must be a live handle, `z` must point to `len` values and `out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn mvp_gf_eval(
    model: *const MvpModel,
    z: *const f64,
    len: usize,
    out: *mut f64,
) -> MvpStatus {
    guard(|| {
        let (Some(model), Some(z), false) = (model.as_ref(), input(z, len), out.is_null()) else {
            return fail(MvpStatus::NullPointer, "null argument");
        };
        match gf_eval(&model.inner, z) {
            Ok(v) => {
                *out = v;
                MvpStatus::Ok
            }
            Err(e) => from_core(e),
        }
    })
}

/// Generating-function series truncated to `b ∈ [0, degree]^rows`.
///
/// # Safety
/// Same as [`mvp_gf_eval`].
#[no_mangle]
pub unsafe extern "C" fn mvp_gf_eval_series(
    model: *const MvpModel,
    z: *const f64,
    len: usize,
    degree: u32,
    out: *mut f64,
) -> MvpStatus {
    guard(|| {
        let (Some(model), Some(z), false) = (model.as_ref(), input(z, len), out.is_null()) else {
            return fail(MvpStatus::NullPointer, "null argument");
        };
        match gf_eval_series(&model.inner, z, degree) {
            Ok(v) => {
                *out = v;
                MvpStatus::Ok
            }
            Err(e) => from_core(e),
        }
    })
}

/// Monte Carlo check of `P(Y = b)` over `n_samples` draws on `shards`
/// threads; `shards = 1` is the reference stream layout.
///
/// # Safety
/// `model` must be a live handle, `b` must point to `len` values and `out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn mvp_sample(
    model: *const MvpModel,
    b: *const i64,
    len: usize,
    n_samples: u64,
    seed: u64,
    shards: u32,
    out: *mut MvpSampleReport,
) -> MvpStatus {
    guard(|| {
        let (Some(model), Some(b), false) = (model.as_ref(), input(b, len), out.is_null()) else {
            return fail(MvpStatus::NullPointer, "null argument");
        };
        match verify_sharded(&model.inner, b, n_samples, seed, shards) {
            Ok(r) => {
                *out = MvpSampleReport {
                    exact_prob: r.exact_prob,
                    empirical_prob: r.empirical_prob,
                    hits: r.hits,
                    n_samples: r.n_samples,
                    z_score: r.z_score,
                    seed: r.seed,
                    shards: r.shards,
                };
                MvpStatus::Ok
            }
            Err(e) => from_core(e),
        }
    })
}

/// Smith normal form of a row-major `rows × cols` integer matrix.
///
/// # Safety
/// `a` must point to `rows * cols` readable values and `out` must be
/// writable. Release the handle with [`mvp_snf_free`].
#[no_mangle]
pub unsafe extern "C" fn mvp_snf_new(
    a: *const i64,
    rows: usize,
    cols: usize,
    out: *mut *mut MvpSnf,
) -> MvpStatus {
    guard(|| {
        if out.is_null() {
            return fail(MvpStatus::NullPointer, "out is null");
        }
        let Some(len) = rows.checked_mul(cols) else {
            return fail(MvpStatus::InvalidInput, "rows * cols overflows");
        };
        let Some(a) = input(a, len) else {
            return fail(MvpStatus::NullPointer, "matrix pointer is null");
        };
        match IntMatrix::new(rows, cols, a.iter().map(|&x| x.into()).collect()) {
            Ok(m) => {
                *out = Box::into_raw(Box::new(MvpSnf { inner: snf(&m) }));
                MvpStatus::Ok
            }
            Err(e) => from_core(e),
        }
    })
}

/// # Safety
/// `handle` must be NULL or a handle from [`mvp_snf_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mvp_snf_free(handle: *mut MvpSnf) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Rank, or 0 for NULL.
///
/// # Safety
/// `handle` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mvp_snf_rank(handle: *const MvpSnf) -> usize {
    handle.as_ref().map_or(0, |s| s.inner.rank)
}

unsafe fn copy_out(values: &[BigInt], buf: *mut i64, len: usize) -> MvpStatus {
    if len < values.len() {
        return fail(
            MvpStatus::BufferTooSmall,
            format!("buffer holds {len} values, need {}", values.len()),
        );
    }
    if values.is_empty() {
        return MvpStatus::Ok;
    }
    if buf.is_null() {
        return fail(MvpStatus::NullPointer, "buffer is null");
    }
    let dst = slice::from_raw_parts_mut(buf, values.len());
    for (d, v) in dst.iter_mut().zip(values) {
        match v.to_i64() {
            Some(x) => *d = x,
            None => return fail(MvpStatus::Overflow, format!("{v} does not fit in int64")),
        }
    }
    MvpStatus::Ok
}

/// Copies P (`MVP_SNF_P`, rows × rows), D (`MVP_SNF_D`, rows × cols) or Q
/// (`MVP_SNF_Q`, cols × cols) row-major into `buf`.
///
/// # Safety
/// `handle` must be a live handle and `buf` must be writable for `len`
/// values.
#[no_mangle]
pub unsafe extern "C" fn mvp_snf_copy_matrix(
    handle: *const MvpSnf,
    which: u32,
    buf: *mut i64,
    len: usize,
) -> MvpStatus {
    guard(|| {
        let Some(s) = handle.as_ref() else {
            return fail(MvpStatus::NullPointer, "handle is null");
        };
        let m = match which {
            MVP_SNF_P => &s.inner.p,
            MVP_SNF_D => &s.inner.d,
            MVP_SNF_Q => &s.inner.q,
            _ => return fail(MvpStatus::InvalidInput, format!("unknown matrix code {which}")),
        };
        copy_out(m.entries(), buf, len)
    })
}

/// Copies the `rank` elementary divisors into `buf`.
///
/// # Safety
/// `handle` must be a live handle and `buf` must be writable for `len`
/// values.
#[no_mangle]
pub unsafe extern "C" fn mvp_snf_copy_divisors(
    handle: *const MvpSnf,
    buf: *mut i64,
    len: usize,
) -> MvpStatus {
    guard(|| {
        let Some(s) = handle.as_ref() else {
            return fail(MvpStatus::NullPointer, "handle is null");
        };
        copy_out(&s.inner.divisors, buf, len)
    })
}
