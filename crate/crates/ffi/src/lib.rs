//! C ABI for the `mofs` library.
//!
//! Every function returns a [`MofsStatus`]; on failure a description is
//! available from [`mofs_last_error_message`] on the same thread. Handles are
//! opaque and must be released with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;
use std::sync::Arc;

use mofs::analysis::extract_front;
use mofs::dataset::{self, generate, split, GeneratorConfig, SplitDataset, SyntheticDataset, DEFAULT_TEST_FRACTION};
use mofs::moea::{self, hypervolume_2d, InitStrategy, MoeaConfig, ReferencePointMode, RunHistory};
use mofs::objectives::{
    Evaluation, EvaluationContext, Evaluator, ObjectiveParams, ObjectiveSpec, ObjectiveVector, SizeDirection,
};
use mofs::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MofsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidConfig = 3,
    Missing = 4,
    Schema = 5,
    Io = 6,
    Computation = 7,
    BufferTooSmall = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MofsEvaluation {
    Silhouette = 0,
    Accuracy = 1,
    PcaLoss = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MofsSizeDirection {
    Minimise = 0,
    Maximise = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MofsInitKind {
    Random = 0,
    Segmented = 1,
    Fixed = 2,
}

/// Settings of one optimisation run. Fill with [`mofs_run_options_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct MofsRunOptions {
    pub evaluation: MofsEvaluation,
    pub size_direction: MofsSizeDirection,
    pub init: MofsInitKind,
    /// Bit probability for random init.
    pub init_p: f64,
    /// Cardinality for fixed init.
    pub init_k: usize,
    pub population_size: usize,
    pub generations: usize,
    pub seed: u64,
    /// Survive against the objectives' worst values instead of the dynamic
    /// reference point.
    pub fixed_reference: bool,
}

/// A dataset with its train/test split.
pub struct MofsDataset {
    dataset: SyntheticDataset,
    split: SplitDataset,
}

/// A finished run.
pub struct MofsRun {
    history: RunHistory,
    front: Vec<mofs::analysis::ParetoRecord>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> MofsStatus {
    match err {
        Error::InvalidConfig(_) | Error::InvalidFlags(_) | Error::InvalidK { .. } | Error::InvalidGroups { .. } => {
            MofsStatus::InvalidConfig
        }
        Error::Missing { .. } => MofsStatus::Missing,
        Error::SchemaMismatch { .. } | Error::Csv(_) | Error::Json(_) => MofsStatus::Schema,
        Error::Io { .. } => MofsStatus::Io,
        _ => MofsStatus::Computation,
    }
}

/// Runs `f`, translating errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), (MofsStatus, String)>) -> MofsStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MofsStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            MofsStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (MofsStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (MofsStatus, String) {
    (MofsStatus::NullPointer, format!("{what} is null"))
}

fn arg(msg: impl Into<String>) -> (MofsStatus, String) {
    (MofsStatus::InvalidArgument, msg.into())
}

unsafe fn path_arg(p: *const c_char) -> Result<PathBuf, (MofsStatus, String)> {
    if p.is_null() {
        return Err(null("path"));
    }
    let s = unsafe { CStr::from_ptr(p) }
        .to_str()
        .map_err(|_| arg("path is not valid UTF-8"))?;
    Ok(PathBuf::from(s))
}

/// Message of the last failed call on this thread, or null. The pointer stays
/// valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn mofs_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn mofs_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Generates the default synthetic dataset with `n_samples` rows and splits
/// it 70/30, both from `seed`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for a handle.
#[no_mangle]
pub unsafe extern "C" fn mofs_dataset_generate(seed: u64, n_samples: usize, out: *mut *mut MofsDataset) -> MofsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let cfg = GeneratorConfig {
            n_samples,
            ..GeneratorConfig::with_seed(seed)
        };
        let ds = generate(&cfg).map_err(lib_err)?;
        let sp = split(&ds, DEFAULT_TEST_FRACTION, seed).map_err(lib_err)?;
        unsafe { *out = Box::into_raw(Box::new(MofsDataset { dataset: ds, split: sp })) };
        Ok(())
    })
}

/// Loads a dataset directory written by `mofs generate` or
/// [`mofs_dataset_save`].
///
/// # Safety
/// `dir` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mofs_dataset_load(dir: *const c_char, out: *mut *mut MofsDataset) -> MofsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let dir = unsafe { path_arg(dir)? };
        let (dataset, split) = dataset::load(&dir).map_err(lib_err)?;
        unsafe { *out = Box::into_raw(Box::new(MofsDataset { dataset, split })) };
        Ok(())
    })
}

/// # Safety
/// `ds` must be a live handle; `dir` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn mofs_dataset_save(ds: *const MofsDataset, dir: *const c_char) -> MofsStatus {
    guard(|| {
        let ds = unsafe { ds.as_ref() }.ok_or_else(|| null("dataset"))?;
        let dir = unsafe { path_arg(dir)? };
        dataset::save(&ds.dataset, &ds.split, &dir).map_err(lib_err)
    })
}

/// # Safety
/// `ds` must be a live handle; the outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn mofs_dataset_shape(
    ds: *const MofsDataset,
    n_samples: *mut usize,
    n_features: *mut usize,
) -> MofsStatus {
    guard(|| {
        let ds = unsafe { ds.as_ref() }.ok_or_else(|| null("dataset"))?;
        if n_samples.is_null() || n_features.is_null() {
            return Err(null("output"));
        }
        unsafe {
            *n_samples = ds.dataset.n_samples();
            *n_features = ds.dataset.n_features();
        }
        Ok(())
    })
}

/// Writes the 64-character content hash plus NUL into `buf` (at least 65
/// bytes).
///
/// # Safety
/// `ds` must be a live handle; `buf` must hold `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn mofs_dataset_fingerprint(ds: *const MofsDataset, buf: *mut c_char, len: usize) -> MofsStatus {
    guard(|| {
        let ds = unsafe { ds.as_ref() }.ok_or_else(|| null("dataset"))?;
        if buf.is_null() {
            return Err(null("buf"));
        }
        let fp = ds.dataset.fingerprint();
        if len < fp.len() + 1 {
            return Err((MofsStatus::BufferTooSmall, format!("need {} bytes", fp.len() + 1)));
        }
        unsafe {
            ptr::copy_nonoverlapping(fp.as_ptr().cast::<c_char>(), buf, fp.len());
            *buf.add(fp.len()) = 0;
        }
        Ok(())
    })
}

/// # Safety
/// `ds` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mofs_dataset_free(ds: *mut MofsDataset) {
    if !ds.is_null() {
        drop(unsafe { Box::from_raw(ds) });
    }
}

/// Defaults: accuracy, minimise size, random init with p = 0.5, population
/// 50, 50 generations, seed 0, dynamic reference point.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mofs_run_options_default(out: *mut MofsRunOptions) -> MofsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let d = MoeaConfig::default();
        unsafe {
            *out = MofsRunOptions {
                evaluation: MofsEvaluation::Accuracy,
                size_direction: MofsSizeDirection::Minimise,
                init: MofsInitKind::Random,
                init_p: 0.5,
                init_k: 1,
                population_size: d.population_size,
                generations: d.generations,
                seed: 0,
                fixed_reference: false,
            }
        };
        Ok(())
    })
}

/// Runs one formulation on the training rows of `ds`.
///
/// # Safety
/// `ds` must be a live handle, `options` readable and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mofs_run(
    ds: *const MofsDataset,
    options: *const MofsRunOptions,
    out: *mut *mut MofsRun,
) -> MofsStatus {
    guard(|| {
        let ds = unsafe { ds.as_ref() }.ok_or_else(|| null("dataset"))?;
        let o = unsafe { options.as_ref() }.ok_or_else(|| null("options"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let spec = ObjectiveSpec::new(
            match o.evaluation {
                MofsEvaluation::Silhouette => Evaluation::Silhouette,
                MofsEvaluation::Accuracy => Evaluation::Accuracy,
                MofsEvaluation::PcaLoss => Evaluation::PcaLoss,
            },
            match o.size_direction {
                MofsSizeDirection::Minimise => SizeDirection::MinimiseSize,
                MofsSizeDirection::Maximise => SizeDirection::MaximiseSize,
            },
        );
        let init = match o.init {
            MofsInitKind::Random => InitStrategy::BinaryRandom { p: o.init_p },
            MofsInitKind::Segmented => InitStrategy::default_segmented(),
            MofsInitKind::Fixed => InitStrategy::FixedCardinality { k: o.init_k },
        };
        let ctx = Arc::new(
            EvaluationContext::from_split(&ds.split, ObjectiveParams::default(), o.seed).map_err(lib_err)?,
        );
        let reference_point_mode = if o.fixed_reference {
            ReferencePointMode::fixed(ctx.reference_point(spec))
        } else {
            ReferencePointMode::Dynamic
        };
        let config = MoeaConfig {
            population_size: o.population_size,
            generations: o.generations,
            init,
            reference_point_mode,
            master_seed: o.seed,
            ..MoeaConfig::default()
        };
        let evaluator = Evaluator::new(ctx);
        let history = moea::run(spec, &evaluator, &config)
            .map_err(lib_err)?
            .with_fingerprint(ds.dataset.fingerprint());
        let front = extract_front(&history);
        unsafe { *out = Box::into_raw(Box::new(MofsRun { history, front })) };
        Ok(())
    })
}

/// Fresh (uncached) objective evaluations the run performed.
///
/// # Safety
/// `run` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mofs_run_evaluations(run: *const MofsRun, out: *mut usize) -> MofsStatus {
    guard(|| {
        let run = unsafe { run.as_ref() }.ok_or_else(|| null("run"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        unsafe { *out = run.history.evaluations };
        Ok(())
    })
}

/// Number of distinct non-dominated solutions in the final population.
///
/// # Safety
/// `run` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mofs_run_front_len(run: *const MofsRun, out: *mut usize) -> MofsStatus {
    guard(|| {
        let run = unsafe { run.as_ref() }.ok_or_else(|| null("run"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        unsafe { *out = run.front.len() };
        Ok(())
    })
}

/// Objectives and subset size of front member `index` (ordered by f2).
///
/// # Safety
/// `run` must be a live handle; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn mofs_run_front_get(
    run: *const MofsRun,
    index: usize,
    f1: *mut f64,
    f2: *mut f64,
    subset_size: *mut usize,
) -> MofsStatus {
    guard(|| {
        let run = unsafe { run.as_ref() }.ok_or_else(|| null("run"))?;
        if f1.is_null() || f2.is_null() || subset_size.is_null() {
            return Err(null("output"));
        }
        let r = run
            .front
            .get(index)
            .ok_or_else(|| arg(format!("index {index} out of range ({})", run.front.len())))?;
        unsafe {
            *f1 = r.f1;
            *f2 = r.f2;
            *subset_size = r.subset.cardinality();
        }
        Ok(())
    })
}

/// Copies the hypervolume trace into `buf`. `len` receives the trace length
/// even when `cap` is too small.
///
/// # Safety
/// `run` must be a live handle, `buf` must hold `cap` doubles (or be null
/// with `cap == 0`), `len` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mofs_run_hv_trace(run: *const MofsRun, buf: *mut f64, cap: usize, len: *mut usize) -> MofsStatus {
    guard(|| {
        let run = unsafe { run.as_ref() }.ok_or_else(|| null("run"))?;
        if len.is_null() {
            return Err(null("len"));
        }
        let trace = &run.history.hv_trace;
        unsafe { *len = trace.len() };
        if cap < trace.len() {
            return Err((MofsStatus::BufferTooSmall, format!("need {} doubles", trace.len())));
        }
        if buf.is_null() {
            return Err(null("buf"));
        }
        unsafe { ptr::copy_nonoverlapping(trace.as_ptr(), buf, trace.len()) };
        Ok(())
    })
}

/// Writes `history.csv`, `hv_trace.csv` and `manifest.json` into `dir`.
///
/// # Safety
/// `run` must be a live handle; `dir` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn mofs_run_save(run: *const MofsRun, dir: *const c_char) -> MofsStatus {
    guard(|| {
        let run = unsafe { run.as_ref() }.ok_or_else(|| null("run"))?;
        let dir = unsafe { path_arg(dir)? };
        moea::save_history(&run.history, &dir).map_err(lib_err)
    })
}

/// # Safety
/// `run` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mofs_run_free(run: *mut MofsRun) {
    if !run.is_null() {
        drop(unsafe { Box::from_raw(run) });
    }
}

/// Exact hypervolume of `n` points `(f1[i], f2[i])` against `(ref1, ref2)`.
///
/// # Safety
/// `f1` and `f2` must hold `n` doubles each; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mofs_hypervolume_2d(
    f1: *const f64,
    f2: *const f64,
    n: usize,
    ref1: f64,
    ref2: f64,
    out: *mut f64,
) -> MofsStatus {
    guard(|| {
        if out.is_null() || (n > 0 && (f1.is_null() || f2.is_null())) {
            return Err(null("argument"));
        }
        let points: Vec<ObjectiveVector> = (0..n)
            .map(|i| unsafe { ObjectiveVector::new(*f1.add(i), *f2.add(i)) })
            .collect();
        if points.iter().any(|p| !(p.f1.is_finite() && p.f2.is_finite())) {
            return Err(arg("points must be finite"));
        }
        unsafe { *out = hypervolume_2d(&points, ObjectiveVector::new(ref1, ref2)) };
        Ok(())
    })
}
