//! C ABI over `vega-core`.
//!
//! Samples and decomposition results are opaque heap handles created by
//! `*_new`/`vega_decompose` and released with the matching `*_free`. Every
//! fallible call returns a [`VegaStatus`]; on failure a description is
//! available from [`vega_last_error_message`] on the same thread. Panics never
//! cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use vega_core::{
    angular_difference, decompose, evaluate, pair_contribution, validate, ComputePlan, DecompositionReport,
    GroupedSample, IndexError, IndexReport, Measure, Mode, Sample, Warning,
};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VegaStatus {
    Ok = 0,
    NullPointer = 1,
    /// Malformed sample: empty, non-finite, negative weights, length
    /// mismatch, zero population, or a nonpositive majority in strict mode.
    InvalidInput = 2,
    /// Mathematically undefined: nonpositive mean, bad plan, out-of-range
    /// quantile count or index.
    Domain = 3,
    /// A group label was not valid UTF-8.
    InvalidUtf8 = 4,
    /// Internal error; the library state is unaffected.
    Panic = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VegaMeasure {
    Gini = 0,
    Vega = 1,
    AngularMean = 2,
}

impl From<VegaMeasure> for Measure {
    fn from(m: VegaMeasure) -> Self {
        match m {
            VegaMeasure::Gini => Measure::Gini,
            VegaMeasure::Vega => Measure::Vega,
            VegaMeasure::AngularMean => Measure::AngularMean,
        }
    }
}

pub const VEGA_WARN_NONPOSITIVE_MAJORITY: u32 = 1;
pub const VEGA_WARN_ANGLE_ABOVE_ONE: u32 = 1 << 1;
pub const VEGA_WARN_DEGENERATE_SAMPLE: u32 = 1 << 2;

fn warning_bits(warnings: &[Warning]) -> u32 {
    warnings.iter().fold(0, |bits, w| {
        bits | match w {
            Warning::NonpositiveMajority => VEGA_WARN_NONPOSITIVE_MAJORITY,
            Warning::AngleAboveOne => VEGA_WARN_ANGLE_ABOVE_ONE,
            Warning::DegenerateSample => VEGA_WARN_DEGENERATE_SAMPLE,
        }
    })
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct VegaIndexReport {
    pub value: f64,
    pub population: f64,
    pub mean: f64,
    pub nonpositive_share: f64,
    /// `VEGA_WARN_*` bits.
    pub warnings: u32,
}

impl From<&IndexReport> for VegaIndexReport {
    fn from(r: &IndexReport) -> Self {
        VegaIndexReport {
            value: r.value,
            population: r.population,
            mean: r.mean,
            nonpositive_share: r.nonpositive_share,
            warnings: warning_bits(&r.warnings),
        }
    }
}

/// One group of a decomposition. `label` is owned by the decomposition
/// handle and valid until it is freed.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct VegaGroupTerm {
    pub label: *const c_char,
    pub population: f64,
    pub mean: f64,
    /// NaN when `within_defined` is false.
    pub within_index: f64,
    pub within_defined: bool,
    pub weight: f64,
    pub contribution: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct VegaDecompositionSummary {
    pub group_count: usize,
    pub between_term: f64,
    pub total: f64,
    pub residual: f64,
    pub warnings: u32,
}

/// Opaque sample handle.
pub struct VegaSample {
    inner: Sample,
}

/// Opaque decomposition handle.
pub struct VegaDecomposition {
    report: DecompositionReport,
    labels: Vec<CString>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).unwrap_or_default());
}

fn fail(status: VegaStatus, message: impl Into<String>) -> VegaStatus {
    set_error(message);
    status
}

fn status_of(e: &IndexError) -> VegaStatus {
    match e {
        IndexError::NonPositiveMean(_) | IndexError::Domain(_) => VegaStatus::Domain,
        _ => VegaStatus::InvalidInput,
    }
}

fn from_error(e: IndexError) -> VegaStatus {
    let status = status_of(&e);
    fail(status, e.to_string())
}

/// Run `f`, converting a panic into [`VegaStatus::Panic`].
fn guarded(f: impl FnOnce() -> VegaStatus) -> VegaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(VegaStatus::Panic, "internal error"),
    }
}

/// Copy `len` values (and optionally `len` weights) into a sample.
unsafe fn read_sample(values: *const f64, weights: *const f64, len: usize) -> Result<Sample, VegaStatus> {
    if len > 0 && values.is_null() {
        return Err(fail(VegaStatus::NullPointer, "values is null"));
    }
    let ys = if len == 0 {
        Vec::new()
    } else {
        slice::from_raw_parts(values, len).to_vec()
    };
    if weights.is_null() {
        Ok(Sample::new(ys))
    } else {
        let ws = if len == 0 {
            Vec::new()
        } else {
            slice::from_raw_parts(weights, len).to_vec()
        };
        Ok(Sample::weighted(ys, ws))
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn vega_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the most recent failure on this thread. Valid until the next
/// failing call on the same thread; never null.
#[no_mangle]
pub extern "C" fn vega_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Create a sample from `len` values. `weights` may be null for unit
/// weights; otherwise it must hold `len` entries. The data is copied.
///
/// # Safety
/// `values` (and `weights` when non-null) must point to `len` readable
/// doubles; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn vega_sample_new(
    values: *const f64,
    weights: *const f64,
    len: usize,
    out: *mut *mut VegaSample,
) -> VegaStatus {
    guarded(|| {
        if out.is_null() {
            return fail(VegaStatus::NullPointer, "out is null");
        }
        *out = ptr::null_mut();
        match read_sample(values, weights, len) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(VegaSample { inner }));
                VegaStatus::Ok
            }
            Err(status) => status,
        }
    })
}

/// Release a sample. Null is ignored.
///
/// # Safety
/// `sample` must come from [`vega_sample_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn vega_sample_free(sample: *mut VegaSample) {
    if !sample.is_null() {
        drop(Box::from_raw(sample));
    }
}

/// Number of observations, or 0 for null.
///
/// # Safety
/// `sample` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn vega_sample_len(sample: *const VegaSample) -> usize {
    sample.as_ref().map_or(0, |s| s.inner.len())
}

/// Validate a sample for `measure`. On success `*warnings` receives the
/// `VEGA_WARN_*` bits; otherwise the first error is returned.
///
/// # Safety
/// `sample` must be a live handle; `warnings` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn vega_validate(
    sample: *const VegaSample,
    measure: VegaMeasure,
    strict: bool,
    warnings: *mut u32,
) -> VegaStatus {
    guarded(|| {
        let (Some(s), false) = (sample.as_ref(), warnings.is_null()) else {
            return fail(VegaStatus::NullPointer, "sample or warnings is null");
        };
        let verdict = validate(&s.inner, measure.into(), strict);
        *warnings = warning_bits(&verdict.warnings);
        match verdict.into_result() {
            Ok(_) => VegaStatus::Ok,
            Err(e) => from_error(e),
        }
    })
}

/// Compute `measure`. `quantiles == 0` evaluates exactly; otherwise on that
/// many equal-weight bins. `threads` of 0 is treated as 1.
///
/// # Safety
/// `sample` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn vega_compute(
    sample: *const VegaSample,
    measure: VegaMeasure,
    threads: usize,
    quantiles: usize,
    out: *mut VegaIndexReport,
) -> VegaStatus {
    guarded(|| {
        let (Some(s), false) = (sample.as_ref(), out.is_null()) else {
            return fail(VegaStatus::NullPointer, "sample or out is null");
        };
        let plan = ComputePlan {
            mode: if quantiles == 0 { Mode::Exact } else { Mode::Quantile(quantiles) },
            threads: threads.max(1),
            ..ComputePlan::default()
        };
        match evaluate(&s.inner, measure.into(), &plan) {
            Ok(r) => {
                *out = VegaIndexReport::from(&r);
                VegaStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// `(2/π)·|atan2(a, b) − atan2(b, a)|`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn vega_angular_difference(a: f64, b: f64, out: *mut f64) -> VegaStatus {
    guarded(|| {
        if out.is_null() {
            return fail(VegaStatus::NullPointer, "out is null");
        }
        match angular_difference(a, b) {
            Ok(x) => {
                *out = x;
                VegaStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// `|y_i − y_j| / (population²·mean)`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn vega_pair_contribution(
    y_i: f64,
    y_j: f64,
    population: f64,
    mean: f64,
    out: *mut f64,
) -> VegaStatus {
    guarded(|| {
        if out.is_null() {
            return fail(VegaStatus::NullPointer, "out is null");
        }
        match pair_contribution(y_i, y_j, population, mean) {
            Ok(x) => {
                *out = x;
                VegaStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Decompose V of `sample` by the `len` NUL-terminated UTF-8 `labels`.
///
/// # Safety
/// `sample` must be a live handle, `labels` must point to `len` valid C
/// strings where `len` equals the sample length, and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn vega_decompose(
    sample: *const VegaSample,
    labels: *const *const c_char,
    len: usize,
    out: *mut *mut VegaDecomposition,
) -> VegaStatus {
    guarded(|| {
        let Some(s) = sample.as_ref() else {
            return fail(VegaStatus::NullPointer, "sample is null");
        };
        if out.is_null() || (len > 0 && labels.is_null()) {
            return fail(VegaStatus::NullPointer, "labels or out is null");
        }
        *out = ptr::null_mut();
        let raw = if len == 0 { &[][..] } else { slice::from_raw_parts(labels, len) };
        let mut owned = Vec::with_capacity(len);
        for (i, &p) in raw.iter().enumerate() {
            if p.is_null() {
                return fail(VegaStatus::NullPointer, format!("label {i} is null"));
            }
            match CStr::from_ptr(p).to_str() {
                Ok(text) => owned.push(text.to_string()),
                Err(_) => return fail(VegaStatus::InvalidUtf8, format!("label {i} is not UTF-8")),
            }
        }
        let grouped = GroupedSample::new(s.inner.clone(), owned);
        match decompose(&grouped) {
            Ok(report) => {
                let labels = report
                    .groups
                    .iter()
                    .map(|g| CString::new(g.label.as_str()).unwrap_or_default())
                    .collect();
                *out = Box::into_raw(Box::new(VegaDecomposition { report, labels }));
                VegaStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Totals of a decomposition.
///
/// # Safety
/// `decomposition` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn vega_decomposition_summary(
    decomposition: *const VegaDecomposition,
    out: *mut VegaDecompositionSummary,
) -> VegaStatus {
    guarded(|| {
        let (Some(d), false) = (decomposition.as_ref(), out.is_null()) else {
            return fail(VegaStatus::NullPointer, "decomposition or out is null");
        };
        let r = &d.report;
        *out = VegaDecompositionSummary {
            group_count: r.groups.len(),
            between_term: r.between_term,
            total: r.total,
            residual: r.residual,
            warnings: warning_bits(&r.warnings),
        };
        VegaStatus::Ok
    })
}

/// Group `index` in first-appearance order.
///
/// # Safety
/// `decomposition` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn vega_decomposition_group(
    decomposition: *const VegaDecomposition,
    index: usize,
    out: *mut VegaGroupTerm,
) -> VegaStatus {
    guarded(|| {
        let (Some(d), false) = (decomposition.as_ref(), out.is_null()) else {
            return fail(VegaStatus::NullPointer, "decomposition or out is null");
        };
        let Some(g) = d.report.groups.get(index) else {
            return fail(
                VegaStatus::Domain,
                format!("group index {index} out of range ({} groups)", d.report.groups.len()),
            );
        };
        *out = VegaGroupTerm {
            label: d.labels[index].as_ptr(),
            population: g.population,
            mean: g.mean,
            within_index: g.within_index.unwrap_or(f64::NAN),
            within_defined: g.within_index.is_some(),
            weight: g.weight,
            contribution: g.contribution,
        };
        VegaStatus::Ok
    })
}

/// Release a decomposition. Null is ignored.
///
/// # Safety
/// `decomposition` must come from [`vega_decompose`] and not be used
/// afterwards.
#[no_mangle]
pub unsafe extern "C" fn vega_decomposition_free(decomposition: *mut VegaDecomposition) {
    if !decomposition.is_null() {
        drop(Box::from_raw(decomposition));
    }
}
