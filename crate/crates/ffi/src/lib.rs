//! C ABI for the feature-clock library.
//!
//! Every object crosses the boundary as an opaque handle created by a
//! `fc_*_new` / `fc_*_load` / `fc_run_*` call and released by the matching
//! `fc_*_free`. Functions return an [`FcStatus`]; on failure
//! [`fc_last_error_message`] describes what went wrong on the calling thread.
//!
//! Strings returned by the library stay valid until the owning handle is
//! freed (result JSON / SVG) or the next failing call on the same thread
//! (error messages).

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use feature_clock::clockcore::{max_contribution, SignificanceRule};
use feature_clock::grouping::ClusterSpec;
use feature_clock::ingest::{load_dataset, validate_config, ClusterSpace, Dataset, RawOptions};
use feature_clock::numstats::{student_t_two_sided_p, Matrix};
use feature_clock::pipeline::{run, Command, RunOutput};
use feature_clock::Error;

/// Status code returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FcStatus {
    Ok = 0,
    /// A required pointer argument was NULL.
    NullArgument = 1,
    /// Invalid input data or options.
    InputError = 2,
    /// The computation itself failed.
    ComputeError = 3,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 4,
    /// An internal panic was caught at the boundary.
    Panic = 5,
}

/// A validated dataset: features, 2D embedding, optional labels.
pub struct FcDataset {
    inner: Dataset,
}

/// Run options; unset fields take the library defaults.
pub struct FcConfig {
    raw: RawOptions,
}

/// Output of one run.
pub struct FcResult {
    json: CString,
    svg: CString,
    warnings: Vec<CString>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: impl Into<String>) {
    let msg = message.into().replace('\0', " ");
    let c = CString::new(msg).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_last_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn fail(status: FcStatus, message: impl Into<String>) -> FcStatus {
    set_last_error(message);
    status
}

fn from_error(err: &Error) -> FcStatus {
    let status = if err.exit_code() == feature_clock::error::EXIT_INPUT {
        FcStatus::InputError
    } else {
        FcStatus::ComputeError
    };
    fail(status, err.to_string())
}

/// Runs `f`, converting panics into [`FcStatus::Panic`].
fn guard(f: impl FnOnce() -> FcStatus) -> FcStatus {
    clear_last_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            fail(FcStatus::Panic, format!("internal error: {msg}"))
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, FcStatus> {
    if p.is_null() {
        return Err(fail(FcStatus::NullArgument, format!("{what} is NULL")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(FcStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn str_array(p: *const *const c_char, len: usize, what: &str) -> Result<Vec<String>, FcStatus> {
    if p.is_null() {
        return Err(fail(FcStatus::NullArgument, format!("{what} is NULL")));
    }
    (0..len)
        .map(|i| str_arg(*p.add(i), what).map(str::to_string))
        .collect()
}

macro_rules! handle {
    ($p:expr, $what:literal) => {
        match $p.as_mut() {
            Some(h) => h,
            None => return fail(FcStatus::NullArgument, concat!($what, " is NULL")),
        }
    };
}

macro_rules! try_status {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(status) => return status,
        }
    };
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn fc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failure on this thread, or NULL if the last call succeeded.
#[no_mangle]
pub extern "C" fn fc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Loads a dataset from CSV files. `labels_path` may be NULL.
///
/// # Safety
/// String arguments must be NULL or NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fc_dataset_load(
    x_path: *const c_char,
    y_path: *const c_char,
    labels_path: *const c_char,
    out: *mut *mut FcDataset,
) -> FcStatus {
    guard(|| {
        if out.is_null() {
            return fail(FcStatus::NullArgument, "out is NULL");
        }
        let x = PathBuf::from(try_status!(str_arg(x_path, "x_path")));
        let y = PathBuf::from(try_status!(str_arg(y_path, "y_path")));
        let labels = if labels_path.is_null() {
            None
        } else {
            Some(PathBuf::from(try_status!(str_arg(labels_path, "labels_path"))))
        };
        match load_dataset(&x, &y, labels.as_deref()) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(FcDataset { inner }));
                FcStatus::Ok
            }
            Err(e) => from_error(&e.into()),
        }
    })
}

/// Builds a dataset from row-major arrays: `x` is `n * d`, `y` is `n * 2`,
/// `feature_names` holds `d` strings.
///
/// # Safety
/// All pointers must be valid for the stated lengths; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fc_dataset_from_arrays(
    n: usize,
    d: usize,
    x: *const f64,
    y: *const f64,
    feature_names: *const *const c_char,
    out: *mut *mut FcDataset,
) -> FcStatus {
    guard(|| {
        if out.is_null() || x.is_null() || y.is_null() {
            return fail(FcStatus::NullArgument, "x, y and out must not be NULL");
        }
        let names = try_status!(str_array(feature_names, d, "feature_names"));
        let xs = std::slice::from_raw_parts(x, n * d).to_vec();
        let ys = std::slice::from_raw_parts(y, n * 2).to_vec();
        let built = Matrix::from_row_major(n, d, xs)
            .and_then(|xm| Ok((xm, Matrix::from_row_major(n, 2, ys)?)))
            .map_err(|e| Error::Ingest(e.into()))
            .and_then(|(xm, ym)| Dataset::new(names, xm, ym, None).map_err(Error::from));
        match built {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(FcDataset { inner }));
                FcStatus::Ok
            }
            Err(e) => from_error(&e),
        }
    })
}

/// Attaches `n` group labels, replacing any existing ones.
///
/// # Safety
/// `dataset` must come from this library; `labels` must hold `n` strings.
#[no_mangle]
pub unsafe extern "C" fn fc_dataset_set_labels(
    dataset: *mut FcDataset,
    labels: *const *const c_char,
    n: usize,
) -> FcStatus {
    guard(|| {
        let ds = handle!(dataset, "dataset");
        let labels = try_status!(str_array(labels, n, "labels"));
        match ds.inner.clone().with_labels(labels) {
            Ok(inner) => {
                ds.inner = inner;
                FcStatus::Ok
            }
            Err(e) => from_error(&e.into()),
        }
    })
}

/// Number of observations, or 0 for NULL.
///
/// # Safety
/// `dataset` must be NULL or come from this library.
#[no_mangle]
pub unsafe extern "C" fn fc_dataset_rows(dataset: *const FcDataset) -> usize {
    dataset.as_ref().map_or(0, |d| d.inner.n())
}

/// Number of features, or 0 for NULL.
///
/// # Safety
/// `dataset` must be NULL or come from this library.
#[no_mangle]
pub unsafe extern "C" fn fc_dataset_features(dataset: *const FcDataset) -> usize {
    dataset.as_ref().map_or(0, |d| d.inner.d())
}

/// # Safety
/// `dataset` must be NULL or come from this library, and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn fc_dataset_free(dataset: *mut FcDataset) {
    if !dataset.is_null() {
        drop(Box::from_raw(dataset));
    }
}

/// New configuration with every option at its default.
#[no_mangle]
pub extern "C" fn fc_config_new() -> *mut FcConfig {
    Box::into_raw(Box::new(FcConfig {
        raw: RawOptions::default(),
    }))
}

/// # Safety
/// `config` must be NULL or come from [`fc_config_new`], and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn fc_config_free(config: *mut FcConfig) {
    if !config.is_null() {
        drop(Box::from_raw(config));
    }
}

fn set_option(config: *mut FcConfig, f: impl FnOnce(&mut RawOptions)) -> FcStatus {
    guard(|| {
        // SAFETY: callers pass NULL or a handle from fc_config_new
        let cfg = unsafe { handle!(config, "config") };
        f(&mut cfg.raw);
        FcStatus::Ok
    })
}

/// Significance level; validated when a run starts.
///
/// # Safety
/// `config` must be NULL or come from [`fc_config_new`].
#[no_mangle]
pub unsafe extern "C" fn fc_config_set_alpha(config: *mut FcConfig, value: f64) -> FcStatus {
    set_option(config, |raw| raw.alpha = Some(value))
}

/// Keep only the `k` largest arrows per clock; 0 keeps all.
///
/// # Safety
/// `config` must be NULL or come from [`fc_config_new`].
#[no_mangle]
pub unsafe extern "C" fn fc_config_set_top_k(config: *mut FcConfig, value: usize) -> FcStatus {
    set_option(config, |raw| raw.top_k = (value > 0).then_some(value))
}

/// Angular step of the projection sweep in degrees.
///
/// # Safety
/// `config` must be NULL or come from [`fc_config_new`].
#[no_mangle]
pub unsafe extern "C" fn fc_config_set_theta_step(config: *mut FcConfig, value: f64) -> FcStatus {
    set_option(config, |raw| raw.theta_step_deg = Some(value))
}

/// # Safety
/// `config` must be NULL or come from [`fc_config_new`].
#[no_mangle]
pub unsafe extern "C" fn fc_config_set_standardize_x(config: *mut FcConfig, value: bool) -> FcStatus {
    set_option(config, |raw| raw.standardize_x = Some(value))
}

/// # Safety
/// `config` must be NULL or come from [`fc_config_new`].
#[no_mangle]
pub unsafe extern "C" fn fc_config_set_center_y(config: *mut FcConfig, value: bool) -> FcStatus {
    set_option(config, |raw| raw.center_y = Some(value))
}

/// # Safety
/// `config` must be NULL or come from [`fc_config_new`].
#[no_mangle]
pub unsafe extern "C" fn fc_config_set_standardize_betas(config: *mut FcConfig, value: bool) -> FcStatus {
    set_option(config, |raw| raw.standardize_betas = Some(value))
}

/// Require both axis p-values below alpha instead of either.
///
/// # Safety
/// `config` must be NULL or come from [`fc_config_new`].
#[no_mangle]
pub unsafe extern "C" fn fc_config_set_require_both_axes(config: *mut FcConfig, value: bool) -> FcStatus {
    set_option(config, |raw| raw.significance_rule = Some(if value { SignificanceRule::And } else { SignificanceRule::Or }))
}

/// Draw coefficient circles for significant features.
///
/// # Safety
/// `config` must be NULL or come from [`fc_config_new`].
#[no_mangle]
pub unsafe extern "C" fn fc_config_set_circles(config: *mut FcConfig, value: bool) -> FcStatus {
    set_option(config, |raw| raw.circles = Some(value))
}

/// Clock radius multiplier.
///
/// # Safety
/// `config` must be NULL or come from [`fc_config_new`].
#[no_mangle]
pub unsafe extern "C" fn fc_config_set_scale(config: *mut FcConfig, value: f64) -> FcStatus {
    set_option(config, |raw| raw.clock_scale = Some(value))
}

/// Seed for k-means initialization.
///
/// # Safety
/// `config` must be NULL or come from [`fc_config_new`].
#[no_mangle]
pub unsafe extern "C" fn fc_config_set_seed(config: *mut FcConfig, value: u64) -> FcStatus {
    set_option(config, |raw| raw.seed = Some(value))
}

/// Cluster in the embedding rather than the feature space.
///
/// # Safety
/// `config` must be NULL or come from [`fc_config_new`].
#[no_mangle]
pub unsafe extern "C" fn fc_config_set_cluster_in_embedding(config: *mut FcConfig, value: bool) -> FcStatus {
    set_option(config, |raw| raw.cluster_space = Some(if value { ClusterSpace::Y } else { ClusterSpace::X }))
}
/// Canvas size in pixels.
///
/// # Safety
/// `config` must be NULL or come from [`fc_config_new`].
#[no_mangle]
pub unsafe extern "C" fn fc_config_set_canvas(config: *mut FcConfig, width: u32, height: u32) -> FcStatus {
    guard(|| {
        handle!(config, "config").raw.canvas = Some((width, height));
        FcStatus::Ok
    })
}

/// Built-in clustering such as `"kmeans:3"` or `"dbscan:0.5,5"`; NULL clears it.
///
/// # Safety
/// `config` must come from [`fc_config_new`]; `spec` must be NULL or NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn fc_config_set_cluster(config: *mut FcConfig, spec: *const c_char) -> FcStatus {
    guard(|| {
        let cfg = handle!(config, "config");
        if spec.is_null() {
            cfg.raw.cluster = None;
            return FcStatus::Ok;
        }
        let text = try_status!(str_arg(spec, "spec"));
        match text.parse::<ClusterSpec>() {
            Ok(c) => {
                cfg.raw.cluster = Some(c);
                FcStatus::Ok
            }
            Err(e) => from_error(&e.into()),
        }
    })
}

unsafe fn run_command(
    command: Command,
    dataset: *const FcDataset,
    config: *const FcConfig,
    out: *mut *mut FcResult,
) -> FcStatus {
    guard(|| {
        if out.is_null() {
            return fail(FcStatus::NullArgument, "out is NULL");
        }
        let Some(ds) = dataset.as_ref() else {
            return fail(FcStatus::NullArgument, "dataset is NULL");
        };
        let raw = config.as_ref().map(|c| c.raw.clone()).unwrap_or_default();
        let output: RunOutput = match validate_config(&raw)
            .map_err(Error::from)
            .and_then(|cfg| run(command, &ds.inner, &cfg))
        {
            Ok(o) => o,
            Err(e) => return from_error(&e),
        };
        let to_c = |s: String| CString::new(s).expect("outputs contain no NUL");
        let result = FcResult {
            json: to_c(output.json()),
            svg: to_c(output.svg.clone()),
            warnings: output.warnings().iter().cloned().map(to_c).collect(),
        };
        *out = Box::into_raw(Box::new(result));
        FcStatus::Ok
    })
}

/// Global clock over every point. `config` may be NULL for defaults.
///
/// # Safety
/// Handles must come from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fc_run_global(
    dataset: *const FcDataset,
    config: *const FcConfig,
    out: *mut *mut FcResult,
) -> FcStatus {
    run_command(Command::Global, dataset, config, out)
}

/// One clock per group (labels or configured clustering).
///
/// # Safety
/// Handles must come from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fc_run_local(
    dataset: *const FcDataset,
    config: *const FcConfig,
    out: *mut *mut FcResult,
) -> FcStatus {
    run_command(Command::Local, dataset, config, out)
}

/// One clock per spanning-tree edge between group centers.
///
/// # Safety
/// Handles must come from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fc_run_intergroup(
    dataset: *const FcDataset,
    config: *const FcConfig,
    out: *mut *mut FcResult,
) -> FcStatus {
    run_command(Command::Intergroup, dataset, config, out)
}

/// JSON report, owned by `result`.
///
/// # Safety
/// `result` must be NULL or come from a `fc_run_*` call.
#[no_mangle]
pub unsafe extern "C" fn fc_result_json(result: *const FcResult) -> *const c_char {
    result.as_ref().map_or(ptr::null(), |r| r.json.as_ptr())
}

/// SVG document, owned by `result`.
///
/// # Safety
/// `result` must be NULL or come from a `fc_run_*` call.
#[no_mangle]
pub unsafe extern "C" fn fc_result_svg(result: *const FcResult) -> *const c_char {
    result.as_ref().map_or(ptr::null(), |r| r.svg.as_ptr())
}

/// # Safety
/// `result` must be NULL or come from a `fc_run_*` call.
#[no_mangle]
pub unsafe extern "C" fn fc_result_warning_count(result: *const FcResult) -> usize {
    result.as_ref().map_or(0, |r| r.warnings.len())
}

/// The `i`-th warning, or NULL when out of range.
///
/// # Safety
/// `result` must be NULL or come from a `fc_run_*` call.
#[no_mangle]
pub unsafe extern "C" fn fc_result_warning(result: *const FcResult, i: usize) -> *const c_char {
    result
        .as_ref()
        .and_then(|r| r.warnings.get(i))
        .map_or(ptr::null(), |w| w.as_ptr())
}

/// # Safety
/// `result` must be NULL or come from a `fc_run_*` call, and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn fc_result_free(result: *mut FcResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// Length and direction (degrees in [0, 360)) of the arrow `(beta0, beta90)`.
///
/// # Safety
/// `magnitude` and `angle_deg` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fc_max_contribution(
    beta0: f64,
    beta90: f64,
    magnitude: *mut f64,
    angle_deg: *mut f64,
) -> FcStatus {
    guard(|| {
        if magnitude.is_null() || angle_deg.is_null() {
            return fail(FcStatus::NullArgument, "output pointer is NULL");
        }
        let (m, a) = max_contribution(beta0, beta90);
        *magnitude = m;
        *angle_deg = a;
        FcStatus::Ok
    })
}

/// Two-sided Student-t p-value; NaN when `dof` is 0.
#[no_mangle]
pub extern "C" fn fc_student_t_two_sided_p(t: f64, dof: usize) -> f64 {
    if dof == 0 {
        return f64::NAN;
    }
    student_t_two_sided_p(t, dof)
}
