//! C ABI for pfsim.
//!
//! Every fallible function returns a [`PfsimStatus`] and writes its result
//! through an out-pointer. On failure the message is available from
//! [`pfsim_last_error_message`] on the same thread. Handles are opaque and
//! released with their `_free` function; strings returned by the library
//! are released with [`pfsim_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use pfsim_core::cli::{summary_json, ConfigFile};
use pfsim_core::experiment::{Analysis, RunConfig, RunSummary};
use pfsim_core::pf::validate_slit_width;
use pfsim_core::trajectory::DetectionEvent;
use pfsim_core::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PfsimStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidConfig = 3,
    Parse = 4,
    DigestMismatch = 5,
    Numeric = 6,
    Io = 7,
    Panic = 8,
}

/// Run configuration.
pub struct PfsimConfig(RunConfig);

/// Precomputed density model and sampling tables for one configuration.
pub struct PfsimModel {
    config: RunConfig,
    analysis: Analysis,
}

/// Events and summary of a finished simulation.
pub struct PfsimRun {
    events: Vec<DetectionEvent>,
    summary: RunSummary,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PfsimEvent {
    pub particle_id: u64,
    /// 1 or 2.
    pub slit_index: u8,
    pub y_eps_m: f64,
    pub theta_rad: f64,
    pub y_det_m: f64,
    pub x_det_m: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> PfsimStatus {
    match err {
        Error::Config(_) | Error::InvalidBeam(_) | Error::InvalidGeometry(_) | Error::InvalidSlitIndex(_) => {
            PfsimStatus::InvalidConfig
        }
        Error::Domain(_) => PfsimStatus::InvalidArgument,
        Error::Parse(_) => PfsimStatus::Parse,
        Error::DigestMismatch { .. } => PfsimStatus::DigestMismatch,
        Error::Io(_) => PfsimStatus::Io,
        Error::NonConvergence { .. } | Error::Quadrature { .. } | Error::NoScreenCrossing { .. } => {
            PfsimStatus::Numeric
        }
    }
}

fn fail(status: PfsimStatus, msg: &str) -> PfsimStatus {
    set_last_error(msg);
    status
}

/// Runs `f`, converting errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), (PfsimStatus, String)>) -> PfsimStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PfsimStatus::Ok,
        Ok(Err((status, msg))) => fail(status, &msg),
        Err(_) => fail(PfsimStatus::Panic, "internal panic"),
    }
}

fn core_err(e: Error) -> (PfsimStatus, String) {
    (status_of(&e), e.to_string())
}

fn null_err(what: &str) -> (PfsimStatus, String) {
    (PfsimStatus::NullPointer, format!("{what} is null"))
}

fn into_c_string(s: String) -> Result<*mut c_char, (PfsimStatus, String)> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| (PfsimStatus::InvalidArgument, "string contains NUL".to_string()))
}

/// Message of the last failure on this thread, or NULL. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pfsim_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pfsim_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: the caller passes a pointer obtained from CString::into_raw.
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Parses a JSON configuration document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pfsim_config_from_json(json: *const c_char, out: *mut *mut PfsimConfig) -> PfsimStatus {
    guard(|| {
        if json.is_null() {
            return Err(null_err("json"));
        }
        if out.is_null() {
            return Err(null_err("out"));
        }
        // SAFETY: checked non-null; the caller guarantees NUL termination.
        let text = unsafe { CStr::from_ptr(json) }
            .to_str()
            .map_err(|_| (PfsimStatus::Parse, "configuration is not UTF-8".to_string()))?;
        let config = ConfigFile::parse(text)
            .and_then(|f| f.to_run_config())
            .map_err(core_err)?;
        // SAFETY: checked non-null.
        unsafe { *out = Box::into_raw(Box::new(PfsimConfig(config))) };
        Ok(())
    })
}

fn preset(config: RunConfig, out: *mut *mut PfsimConfig) -> PfsimStatus {
    guard(|| {
        if out.is_null() {
            return Err(null_err("out"));
        }
        // SAFETY: checked non-null.
        unsafe { *out = Box::into_raw(Box::new(PfsimConfig(config))) };
        Ok(())
    })
}

/// Bundled electron configuration.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pfsim_config_electron(out: *mut *mut PfsimConfig) -> PfsimStatus {
    preset(RunConfig::electron(), out)
}

/// Bundled neon configuration.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pfsim_config_neon(out: *mut *mut PfsimConfig) -> PfsimStatus {
    preset(RunConfig::neon(), out)
}

/// # Safety
/// `config` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pfsim_config_free(config: *mut PfsimConfig) {
    if !config.is_null() {
        // SAFETY: the handle came from Box::into_raw.
        drop(unsafe { Box::from_raw(config) });
    }
}

/// # Safety
/// `config` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn pfsim_config_set_seed(config: *mut PfsimConfig, seed: u64) -> PfsimStatus {
    guard(|| {
        // SAFETY: the caller passes a live handle or NULL.
        let config = unsafe { config.as_mut() }.ok_or_else(|| null_err("config"))?;
        config.0.seed = seed;
        Ok(())
    })
}

/// # Safety
/// `config` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn pfsim_config_set_particles(config: *mut PfsimConfig, n_particles: u64) -> PfsimStatus {
    guard(|| {
        // SAFETY: the caller passes a live handle or NULL.
        let config = unsafe { config.as_mut() }.ok_or_else(|| null_err("config"))?;
        let mut updated = config.0.clone();
        updated.n_particles = n_particles;
        updated.validate().map_err(core_err)?;
        config.0 = updated;
        Ok(())
    })
}

/// Configuration digest as 16 hex digits; free with [`pfsim_string_free`].
///
/// # Safety
/// `config` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pfsim_config_digest(config: *const PfsimConfig, out: *mut *mut c_char) -> PfsimStatus {
    guard(|| {
        // SAFETY: the caller passes a live handle or NULL.
        let config = unsafe { config.as_ref() }.ok_or_else(|| null_err("config"))?;
        if out.is_null() {
            return Err(null_err("out"));
        }
        let s = into_c_string(config.0.digest())?;
        // SAFETY: checked non-null.
        unsafe { *out = s };
        Ok(())
    })
}

/// Whether the slit width respects `a ≥ 3λ₀/(2π)`; writes 1 or 0.
///
/// # Safety
/// `config` must be a live handle; `passes` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pfsim_config_slit_width_ok(config: *const PfsimConfig, passes: *mut u8) -> PfsimStatus {
    guard(|| {
        // SAFETY: the caller passes a live handle or NULL.
        let config = unsafe { config.as_ref() }.ok_or_else(|| null_err("config"))?;
        if passes.is_null() {
            return Err(null_err("passes"));
        }
        let check = validate_slit_width(&config.0.beam, &config.0.geometry);
        // SAFETY: checked non-null.
        unsafe { *passes = u8::from(check.passes) };
        Ok(())
    })
}

/// Builds the density model and sampling tables.
///
/// # Safety
/// `config` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pfsim_model_new(config: *const PfsimConfig, out: *mut *mut PfsimModel) -> PfsimStatus {
    guard(|| {
        // SAFETY: the caller passes a live handle or NULL.
        let config = unsafe { config.as_ref() }.ok_or_else(|| null_err("config"))?;
        if out.is_null() {
            return Err(null_err("out"));
        }
        let analysis = Analysis::new(&config.0).map_err(core_err)?;
        let model = PfsimModel {
            config: config.0.clone(),
            analysis,
        };
        // SAFETY: checked non-null.
        unsafe { *out = Box::into_raw(Box::new(model)) };
        Ok(())
    })
}

/// # Safety
/// `model` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pfsim_model_free(model: *mut PfsimModel) {
    if !model.is_null() {
        // SAFETY: the handle came from Box::into_raw.
        drop(unsafe { Box::from_raw(model) });
    }
}

/// Normalised angular density at `theta` (1/rad); 0 outside ±θmax.
///
/// # Safety
/// `model` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pfsim_model_density(model: *const PfsimModel, theta: f64, out: *mut f64) -> PfsimStatus {
    guard(|| {
        // SAFETY: the caller passes a live handle or NULL.
        let model = unsafe { model.as_ref() }.ok_or_else(|| null_err("model"))?;
        if out.is_null() {
            return Err(null_err("out"));
        }
        let value = model.analysis.model.density(theta).map_err(core_err)?;
        // SAFETY: checked non-null.
        unsafe { *out = value };
        Ok(())
    })
}

/// Expected density of detected positions on the screen at `y` (1/m).
///
/// # Safety
/// `model` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pfsim_model_screen_density(model: *const PfsimModel, y: f64, out: *mut f64) -> PfsimStatus {
    guard(|| {
        // SAFETY: the caller passes a live handle or NULL.
        let model = unsafe { model.as_ref() }.ok_or_else(|| null_err("model"))?;
        if out.is_null() {
            return Err(null_err("out"));
        }
        // SAFETY: checked non-null.
        unsafe { *out = model.analysis.screen.density(y) };
        Ok(())
    })
}

/// Generates the events of the model's configuration and summarises them.
/// `workers` = 0 picks the available parallelism; the result does not
/// depend on it.
///
/// # Safety
/// `model` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pfsim_simulate(
    model: *const PfsimModel,
    workers: usize,
    out: *mut *mut PfsimRun,
) -> PfsimStatus {
    guard(|| {
        // SAFETY: the caller passes a live handle or NULL.
        let model = unsafe { model.as_ref() }.ok_or_else(|| null_err("model"))?;
        if out.is_null() {
            return Err(null_err("out"));
        }
        let workers = if workers == 0 {
            pfsim_core::experiment::default_workers()
        } else {
            workers
        };
        let events = model.analysis.events(&model.config, workers).map_err(core_err)?;
        let summary = model.analysis.summarize(&model.config, &events).map_err(core_err)?;
        // SAFETY: checked non-null.
        unsafe { *out = Box::into_raw(Box::new(PfsimRun { events, summary })) };
        Ok(())
    })
}

/// # Safety
/// `run` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pfsim_run_free(run: *mut PfsimRun) {
    if !run.is_null() {
        // SAFETY: the handle came from Box::into_raw.
        drop(unsafe { Box::from_raw(run) });
    }
}

/// Number of events in a run; 0 for NULL.
///
/// # Safety
/// `run` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pfsim_run_event_count(run: *const PfsimRun) -> usize {
    // SAFETY: the caller passes a live handle or NULL.
    unsafe { run.as_ref() }.map_or(0, |r| r.events.len())
}

/// Copies up to `capacity` events into `buffer`; writes the number copied
/// to `written`.
///
/// # Safety
/// `run` must be a live handle; `buffer` must hold `capacity` events;
/// `written` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pfsim_run_events(
    run: *const PfsimRun,
    buffer: *mut PfsimEvent,
    capacity: usize,
    written: *mut usize,
) -> PfsimStatus {
    guard(|| {
        // SAFETY: the caller passes a live handle or NULL.
        let run = unsafe { run.as_ref() }.ok_or_else(|| null_err("run"))?;
        if written.is_null() {
            return Err(null_err("written"));
        }
        let n = run.events.len().min(capacity);
        if n > 0 && buffer.is_null() {
            return Err(null_err("buffer"));
        }
        for (i, e) in run.events.iter().take(n).enumerate() {
            let event = PfsimEvent {
                particle_id: e.particle_id,
                slit_index: e.slit.number(),
                y_eps_m: e.y_eps,
                theta_rad: e.theta,
                y_det_m: e.y_det,
                x_det_m: e.x_det,
            };
            // SAFETY: i < capacity and the caller guarantees the buffer size.
            unsafe { buffer.add(i).write(event) };
        }
        // SAFETY: checked non-null.
        unsafe { *written = n };
        Ok(())
    })
}

/// Run summary as JSON (the `summary.json` document); free with
/// [`pfsim_string_free`].
///
/// # Safety
/// `run` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pfsim_run_summary_json(run: *const PfsimRun, out: *mut *mut c_char) -> PfsimStatus {
    guard(|| {
        // SAFETY: the caller passes a live handle or NULL.
        let run = unsafe { run.as_ref() }.ok_or_else(|| null_err("run"))?;
        if out.is_null() {
            return Err(null_err("out"));
        }
        let s = into_c_string(summary_json(&run.summary).map_err(core_err)?)?;
        // SAFETY: checked non-null.
        unsafe { *out = s };
        Ok(())
    })
}

/// Chi-square verdict of a run: 1 pass, 0 fail, -1 unavailable.
///
/// # Safety
/// `run` must be a live handle; `verdict` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pfsim_run_verdict(run: *const PfsimRun, verdict: *mut i32) -> PfsimStatus {
    use pfsim_core::experiment::Verdict;
    guard(|| {
        // SAFETY: the caller passes a live handle or NULL.
        let run = unsafe { run.as_ref() }.ok_or_else(|| null_err("run"))?;
        if verdict.is_null() {
            return Err(null_err("verdict"));
        }
        let v = match run.summary.verdict {
            Verdict::Pass => 1,
            Verdict::Fail => 0,
            Verdict::Unavailable => -1,
        };
        // SAFETY: checked non-null.
        unsafe { *verdict = v };
        Ok(())
    })
}
