//! C interface to `rboost-core`.
//!
//! Datasets and models are opaque heap handles owned by the caller and
//! released with the matching `*_free` function. Every fallible call returns
//! an [`RbStatus`]; on failure the message is available from
//! [`rb_last_error_message`] on the same thread until the next failing call.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use rboost_core::io::{model_from_json, model_to_json};
use rboost_core::{Algorithm, Dataset, Ensemble, Error, LearnerSpec, TrainConfig};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RbStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    DimensionMismatch = 3,
    DegenerateLearner = 4,
    ModelFormat = 5,
    Panic = 6,
    Internal = 7,
}

/// Algorithm selector for [`RbTrainConfig`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RbAlgorithm {
    Boosting = 0,
    RBoosting = 1,
    DdrBoosting = 2,
}

/// Training parameters. `u` is ignored unless the algorithm is RBoosting.
/// A `clip_bound` of zero or below disables clipping.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct RbTrainConfig {
    pub algorithm: RbAlgorithm,
    pub max_iterations: usize,
    pub u: u64,
    pub tree_splits: usize,
    pub clip_bound: f64,
}

/// Opaque training set.
pub struct RbDataset {
    inner: Dataset,
}

/// Opaque fitted model.
pub struct RbModel {
    inner: Ensemble,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(text));
}

fn fail(status: RbStatus, message: impl Into<String>) -> RbStatus {
    set_error(message.into());
    status
}

fn status_of(err: &Error) -> RbStatus {
    match err {
        Error::Dimension { .. } => RbStatus::DimensionMismatch,
        Error::DegenerateLearner { .. } => RbStatus::DegenerateLearner,
        Error::ModelFormat(_) | Error::Json(_) | Error::Schema(_) => RbStatus::ModelFormat,
        Error::InvalidInput(_) | Error::NonFinite { .. } | Error::Parse { .. } => {
            RbStatus::InvalidInput
        }
        _ => RbStatus::Internal,
    }
}

fn guarded(body: impl FnOnce() -> Result<(), RbStatus>) -> RbStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => RbStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => fail(RbStatus::Panic, "panic inside rboost"),
    }
}

fn lift<T>(result: rboost_core::Result<T>) -> Result<T, RbStatus> {
    result.map_err(|err| fail(status_of(&err), err.to_string()))
}

unsafe fn input<'a>(data: *const f64, len: usize, what: &str) -> Result<&'a [f64], RbStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if data.is_null() {
        return Err(fail(RbStatus::NullPointer, format!("{what} is null")));
    }
    Ok(slice::from_raw_parts(data, len))
}

fn checked<'a, T>(handle: *const T, what: &str) -> Result<&'a T, RbStatus> {
    // SAFETY: non-null handles come from Box::into_raw in this crate.
    unsafe { handle.as_ref() }.ok_or_else(|| fail(RbStatus::NullPointer, format!("{what} is null")))
}

/// Message for the most recent failure on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn rb_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn rb_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}

/// Copies `rows * dim` row-major features and `rows` targets into a new
/// dataset handle.
///
/// # Safety
/// `features` and `targets` must point to at least `rows * dim` and `rows`
/// readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rb_dataset_new(
    features: *const f64,
    rows: usize,
    dim: usize,
    targets: *const f64,
    out: *mut *mut RbDataset,
) -> RbStatus {
    guarded(|| {
        if out.is_null() {
            return Err(fail(RbStatus::NullPointer, "out is null"));
        }
        *out = ptr::null_mut();
        let cells = rows
            .checked_mul(dim)
            .ok_or_else(|| fail(RbStatus::InvalidInput, "rows * dim overflows"))?;
        let x = input(features, cells, "features")?.to_vec();
        let y = input(targets, rows, "targets")?.to_vec();
        let inner = lift(Dataset::from_flat(x, dim, y))?;
        *out = Box::into_raw(Box::new(RbDataset { inner }));
        Ok(())
    })
}

/// Number of rows, or zero for a null handle.
///
/// # Safety
/// `data` must be null or a live handle from [`rb_dataset_new`].
#[no_mangle]
pub unsafe extern "C" fn rb_dataset_len(data: *const RbDataset) -> usize {
    data.as_ref().map_or(0, |d| d.inner.len())
}

/// # Safety
/// `data` must be null or a handle from [`rb_dataset_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rb_dataset_free(data: *mut RbDataset) {
    if !data.is_null() {
        drop(Box::from_raw(data));
    }
}

/// Fills `config` with defaults: Boosting, 100 iterations, u = 1, stumps,
/// no clipping.
///
/// # Safety
/// `config` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn rb_train_config_default(config: *mut RbTrainConfig) {
    if let Some(c) = config.as_mut() {
        *c = RbTrainConfig {
            algorithm: RbAlgorithm::Boosting,
            max_iterations: 100,
            u: 1,
            tree_splits: 1,
            clip_bound: 0.0,
        };
    }
}

fn core_config(c: &RbTrainConfig) -> TrainConfig {
    let algorithm = match c.algorithm {
        RbAlgorithm::Boosting => Algorithm::Boosting,
        RbAlgorithm::RBoosting => Algorithm::RBoosting,
        RbAlgorithm::DdrBoosting => Algorithm::DDRBoosting,
    };
    let mut config = TrainConfig::new(
        algorithm,
        c.max_iterations,
        LearnerSpec::Tree { splits: c.tree_splits },
    )
    .with_u(c.u);
    if c.clip_bound > 0.0 {
        config.clip_bound = Some(c.clip_bound);
    }
    config
}

/// Trains a tree ensemble on `data`.
///
/// # Safety
/// `data` must be a live dataset handle, `config` readable and `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn rb_train(
    data: *const RbDataset,
    config: *const RbTrainConfig,
    out: *mut *mut RbModel,
) -> RbStatus {
    guarded(|| {
        if out.is_null() {
            return Err(fail(RbStatus::NullPointer, "out is null"));
        }
        *out = ptr::null_mut();
        let data = checked(data, "data")?;
        let config = core_config(checked(config, "config")?);
        let (inner, _) = lift(rboost_core::train(&data.inner, &config))?;
        *out = Box::into_raw(Box::new(RbModel { inner }));
        Ok(())
    })
}

/// Predicts `rows` row-major inputs of width `dim` into `out`. Clipping is
/// applied when the model carries a bound.
///
/// # Safety
/// `features` must hold `rows * dim` doubles and `out` room for `rows`.
#[no_mangle]
pub unsafe extern "C" fn rb_model_predict(
    model: *const RbModel,
    features: *const f64,
    rows: usize,
    dim: usize,
    out: *mut f64,
) -> RbStatus {
    guarded(|| {
        let model = &checked(model, "model")?.inner;
        if let Some(expected) = model.input_dim() {
            if expected != dim {
                return Err(fail(
                    RbStatus::DimensionMismatch,
                    format!("model expects {expected} features, got {dim}"),
                ));
            }
        }
        let cells = rows
            .checked_mul(dim)
            .ok_or_else(|| fail(RbStatus::InvalidInput, "rows * dim overflows"))?;
        let x = input(features, cells, "features")?;
        if rows > 0 && out.is_null() {
            return Err(fail(RbStatus::NullPointer, "out is null"));
        }
        for i in 0..rows {
            let row = &x[i * dim..(i + 1) * dim];
            *out.add(i) = lift(model.predict_clipped(row))?;
        }
        Ok(())
    })
}

/// Number of boosting stages, or zero for a null handle.
///
/// # Safety
/// `model` must be null or a live model handle.
#[no_mangle]
pub unsafe extern "C" fn rb_model_num_stages(model: *const RbModel) -> usize {
    model.as_ref().map_or(0, |m| m.inner.len())
}

/// Sum of absolute effective learner coefficients, or NaN for a null handle.
///
/// # Safety
/// `model` must be null or a live model handle.
#[no_mangle]
pub unsafe extern "C" fn rb_model_l1_norm(model: *const RbModel) -> f64 {
    model.as_ref().map_or(f64::NAN, |m| m.inner.l1_norm())
}

/// Serializes the model to JSON. Release the string with [`rb_free_string`].
///
/// # Safety
/// `model` must be a live model handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rb_model_to_json(model: *const RbModel, out: *mut *mut c_char) -> RbStatus {
    guarded(|| {
        if out.is_null() {
            return Err(fail(RbStatus::NullPointer, "out is null"));
        }
        *out = ptr::null_mut();
        let text = lift(model_to_json(&checked(model, "model")?.inner))?;
        let text = CString::new(text).map_err(|_| fail(RbStatus::Internal, "NUL in model JSON"))?;
        *out = text.into_raw();
        Ok(())
    })
}

/// Parses a model previously written by [`rb_model_to_json`] or the CLI.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rb_model_from_json(json: *const c_char, out: *mut *mut RbModel) -> RbStatus {
    guarded(|| {
        if out.is_null() {
            return Err(fail(RbStatus::NullPointer, "out is null"));
        }
        *out = ptr::null_mut();
        if json.is_null() {
            return Err(fail(RbStatus::NullPointer, "json is null"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|_| fail(RbStatus::ModelFormat, "model JSON is not UTF-8"))?;
        let inner = lift(model_from_json(text))?;
        *out = Box::into_raw(Box::new(RbModel { inner }));
        Ok(())
    })
}

/// # Safety
/// `model` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rb_model_free(model: *mut RbModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rb_free_string(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
