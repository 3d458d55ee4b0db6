//! C ABI for the `lrmc` toolkit.
//!
//! Maps and completion results are opaque heap handles owned by the caller
//! and released with the matching `*_free` function. Every entry point
//! returns an [`LrmcStatus`]; on failure a message for the current thread is
//! available from [`lrmc_last_error_message`]. Panics never cross the
//! boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use lrmc::mapmodel::{self, CellState, EncodingScheme, FeatureMap, MazeSpec};
use lrmc::matcomp::{self, CompletionResult, Lambda, LogBase, SolverConfig, DEFAULT_RANK_TOLERANCE};
use lrmc::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LrmcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Degenerate = 4,
    Numerical = 5,
    RankBandMissed = 6,
    Io = 7,
    Panic = 99,
}

/// Cell states as reported by [`lrmc_map_get`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LrmcCell {
    Featured = 0,
    Free = 1,
    Unknown = 2,
}

impl From<CellState> for LrmcCell {
    fn from(s: CellState) -> Self {
        match s {
            CellState::Featured => LrmcCell::Featured,
            CellState::Free => LrmcCell::Free,
            CellState::Unknown => LrmcCell::Unknown,
        }
    }
}

/// Opaque feature map.
pub struct LrmcMap {
    map: FeatureMap,
}

/// Opaque completion result.
pub struct LrmcCompletion {
    result: CompletionResult,
    resolution: f64,
}

/// Solver settings. `lambda_is_fraction` selects whether `lambda` is a
/// fraction of the largest singular value or an absolute weight;
/// `max_rank` 0 means uncapped.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct LrmcSolverOptions {
    pub lambda: f64,
    pub lambda_is_fraction: bool,
    pub tolerance: f64,
    pub max_iterations: usize,
    pub max_rank: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

type Failure = (LrmcStatus, String);

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> LrmcStatus {
    match e {
        Error::InvalidInput(_) | Error::DimensionMismatch { .. } | Error::Config { .. } => {
            LrmcStatus::InvalidArgument
        }
        Error::Parse { .. } => LrmcStatus::Parse,
        Error::DegenerateInput(_) | Error::DegeneratePlan(_) | Error::UndefinedMetric(_) => {
            LrmcStatus::Degenerate
        }
        Error::Numerical { .. } => LrmcStatus::Numerical,
        Error::RankBandMissed { .. } => LrmcStatus::RankBandMissed,
        Error::Io { .. } | Error::Csv(_) => LrmcStatus::Io,
    }
}

fn lib(e: Error) -> Failure {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> Failure {
    (LrmcStatus::NullPointer, format!("{what} is null"))
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> LrmcStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => LrmcStatus::Ok,
        Ok(Err((status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            LrmcStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write_out<T>(p: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    p.write(value);
    Ok(())
}

fn boxed_map(map: FeatureMap) -> *mut LrmcMap {
    Box::into_raw(Box::new(LrmcMap { map }))
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn lrmc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parse a map file held in memory.
///
/// # Safety
/// `bytes` must point to `len` readable bytes; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lrmc_map_parse(bytes: *const u8, len: usize, out: *mut *mut LrmcMap) -> LrmcStatus {
    guard(|| {
        if bytes.is_null() && len > 0 {
            return Err(null("bytes"));
        }
        let data = if len == 0 { &[][..] } else { std::slice::from_raw_parts(bytes, len) };
        let map = mapmodel::load_map(data).map_err(lib)?;
        write_out(out, boxed_map(map), "out")
    })
}

/// Generate a maze with the given target rank.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lrmc_map_generate(
    rows: usize,
    cols: usize,
    target_rank: usize,
    corridor_width: usize,
    seed: u64,
    out: *mut *mut LrmcMap,
) -> LrmcStatus {
    guard(|| {
        let spec = MazeSpec {
            rows,
            cols,
            target_rank,
            corridor_width,
            seed,
        };
        let map = mapmodel::generate_maze(&spec).map_err(lib)?;
        write_out(out, boxed_map(map), "out")
    })
}

/// Create a map with every cell set to `fill` (0 featured, 1 free, 2 unknown).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lrmc_map_new(
    rows: usize,
    cols: usize,
    resolution: f64,
    fill: i32,
    out: *mut *mut LrmcMap,
) -> LrmcStatus {
    guard(|| {
        let state = cell_from_int(fill)?;
        let map = FeatureMap::new(rows, cols, resolution, state).map_err(lib)?;
        write_out(out, boxed_map(map), "out")
    })
}

fn cell_from_int(v: i32) -> Result<CellState, Failure> {
    match v {
        0 => Ok(CellState::Featured),
        1 => Ok(CellState::Free),
        2 => Ok(CellState::Unknown),
        _ => Err((LrmcStatus::InvalidArgument, format!("unknown cell state {v}"))),
    }
}

/// Serialize a map; release the buffer with [`lrmc_bytes_free`].
///
/// # Safety
/// `map` must be a live handle; `out_bytes` and `out_len` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lrmc_map_serialize(
    map: *const LrmcMap,
    out_bytes: *mut *mut u8,
    out_len: *mut usize,
) -> LrmcStatus {
    guard(|| {
        let map = deref(map, "map")?;
        if out_bytes.is_null() || out_len.is_null() {
            return Err(null("output pointer"));
        }
        let bytes = mapmodel::save_map(&map.map).into_boxed_slice();
        let len = bytes.len();
        out_len.write(len);
        out_bytes.write(Box::into_raw(bytes) as *mut u8);
        Ok(())
    })
}

/// Release a buffer returned by [`lrmc_map_serialize`].
///
/// # Safety
/// `bytes` and `len` must come from one serialize call; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn lrmc_bytes_free(bytes: *mut u8, len: usize) {
    if !bytes.is_null() {
        drop(Box::from_raw(ptr::slice_from_raw_parts_mut(bytes, len)));
    }
}

/// Number of rows, or 0 for a null handle.
///
/// # Safety
/// `map` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lrmc_map_rows(map: *const LrmcMap) -> usize {
    map.as_ref().map_or(0, |m| m.map.rows())
}

/// Number of columns, or 0 for a null handle.
///
/// # Safety
/// `map` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lrmc_map_cols(map: *const LrmcMap) -> usize {
    map.as_ref().map_or(0, |m| m.map.cols())
}

fn check_cell(map: &FeatureMap, row: usize, col: usize) -> Result<(), Failure> {
    if map.in_bounds((row, col)) {
        Ok(())
    } else {
        Err((
            LrmcStatus::InvalidArgument,
            format!("cell ({row}, {col}) outside {}x{} map", map.rows(), map.cols()),
        ))
    }
}

/// # Safety
/// `map` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lrmc_map_get(map: *const LrmcMap, row: usize, col: usize, out: *mut LrmcCell) -> LrmcStatus {
    guard(|| {
        let map = deref(map, "map")?;
        check_cell(&map.map, row, col)?;
        write_out(out, map.map.get((row, col)).into(), "out")
    })
}

/// # Safety
/// `map` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn lrmc_map_set(map: *mut LrmcMap, row: usize, col: usize, state: i32) -> LrmcStatus {
    guard(|| {
        let map = map.as_mut().ok_or_else(|| null("map"))?;
        check_cell(&map.map, row, col)?;
        map.map.set((row, col), cell_from_int(state)?);
        Ok(())
    })
}

/// # Safety
/// `map` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lrmc_map_free(map: *mut LrmcMap) {
    if !map.is_null() {
        drop(Box::from_raw(map));
    }
}

/// Numeric rank and coherence of the encoded map (unknown cells as 0).
///
/// # Safety
/// `map` must be a live handle; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn lrmc_map_structure(
    map: *const LrmcMap,
    out_rank: *mut usize,
    out_coherence: *mut f64,
) -> LrmcStatus {
    guard(|| {
        let map = deref(map, "map")?;
        let values = mapmodel::encode(&map.map, &EncodingScheme::default()).filled(0.0);
        let report = matcomp::structure_report(&values, DEFAULT_RANK_TOLERANCE).map_err(lib)?;
        write_out(out_rank, report.numeric_rank, "out_rank")?;
        write_out(out_coherence, report.coherence, "out_coherence")
    })
}

/// Sample count `ceil(C n^1.2 r log10 n)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lrmc_sample_bound(n: usize, r: usize, coefficient_c: f64, out: *mut u64) -> LrmcStatus {
    guard(|| {
        let m = matcomp::sample_bound(n, r, coefficient_c, LogBase::Log10).map_err(lib)?;
        write_out(out, m, "out")
    })
}

/// Library defaults for [`lrmc_map_complete`].
#[no_mangle]
pub extern "C" fn lrmc_solver_options_default() -> LrmcSolverOptions {
    let d = SolverConfig::default();
    let (lambda, lambda_is_fraction) = match d.lambda {
        Lambda::Absolute(l) => (l, false),
        Lambda::SpectralFraction(f) => (f, true),
    };
    LrmcSolverOptions {
        lambda,
        lambda_is_fraction,
        tolerance: d.tolerance,
        max_iterations: d.max_iterations,
        max_rank: d.max_rank.unwrap_or(0),
    }
}

/// Complete the unknown cells of `map`. Null `options` uses the defaults.
///
/// # Safety
/// `map` must be a live handle; `options` null or readable; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lrmc_map_complete(
    map: *const LrmcMap,
    options: *const LrmcSolverOptions,
    out: *mut *mut LrmcCompletion,
) -> LrmcStatus {
    guard(|| {
        let map = deref(map, "map")?;
        let opts = options.as_ref().copied().unwrap_or_else(|| lrmc_solver_options_default());
        let config = SolverConfig {
            lambda: if opts.lambda_is_fraction {
                Lambda::SpectralFraction(opts.lambda)
            } else {
                Lambda::Absolute(opts.lambda)
            },
            tolerance: opts.tolerance,
            max_iterations: opts.max_iterations,
            max_rank: (opts.max_rank > 0).then_some(opts.max_rank),
            ..SolverConfig::default()
        };
        let partial = mapmodel::encode(&map.map, &EncodingScheme::default());
        let result = matcomp::complete(&partial, &config).map_err(lib)?;
        let handle = Box::into_raw(Box::new(LrmcCompletion {
            result,
            resolution: map.map.resolution(),
        }));
        write_out(out, handle, "out")
    })
}

/// Completed matrix entry.
///
/// # Safety
/// `completion` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lrmc_completion_value(
    completion: *const LrmcCompletion,
    row: usize,
    col: usize,
    out: *mut f64,
) -> LrmcStatus {
    guard(|| {
        let c = deref(completion, "completion")?;
        let m = &c.result.completed;
        if row >= m.rows() || col >= m.cols() {
            return Err((
                LrmcStatus::InvalidArgument,
                format!("entry ({row}, {col}) outside {}x{} matrix", m.rows(), m.cols()),
            ));
        }
        write_out(out, m[(row, col)], "out")
    })
}

/// # Safety
/// `completion` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lrmc_completion_iterations(completion: *const LrmcCompletion) -> usize {
    completion.as_ref().map_or(0, |c| c.result.iterations)
}

/// # Safety
/// `completion` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lrmc_completion_converged(completion: *const LrmcCompletion) -> bool {
    completion.as_ref().is_some_and(|c| c.result.converged)
}

/// # Safety
/// `completion` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lrmc_completion_rank(completion: *const LrmcCompletion) -> usize {
    completion.as_ref().map_or(0, |c| c.result.numeric_rank)
}

/// Objective value, or NaN for a null handle.
///
/// # Safety
/// `completion` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lrmc_completion_objective(completion: *const LrmcCompletion) -> f64 {
    completion.as_ref().map_or(f64::NAN, |c| c.result.objective)
}

/// Binarize the completion into a new, fully known map.
///
/// # Safety
/// `completion` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lrmc_completion_classify(
    completion: *const LrmcCompletion,
    out: *mut *mut LrmcMap,
) -> LrmcStatus {
    guard(|| {
        let c = deref(completion, "completion")?;
        let map = mapmodel::classify(&c.result.completed, &EncodingScheme::default(), c.resolution).map_err(lib)?;
        write_out(out, boxed_map(map), "out")
    })
}

/// # Safety
/// `completion` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lrmc_completion_free(completion: *mut LrmcCompletion) {
    if !completion.is_null() {
        drop(Box::from_raw(completion));
    }
}
