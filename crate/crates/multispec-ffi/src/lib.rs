//! C ABI for the multispec library.
//!
//! The interface is deliberately narrow: a session holds a run
//! configuration, and [`ms_run`] executes one subcommand given its argument
//! vector as a JSON array of strings, returning the same JSON report the
//! CLI prints. Returned strings are owned by the caller and must be
//! released with [`ms_string_free`]. Sessions are not thread-safe; use one
//! per thread.

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use multispec::cli::{dispatch_with_default, Outcome};
use multispec::config::RunConfig;

/// Return codes of [`ms_run`].
pub const MS_OK: i32 = 0;
pub const MS_CHECKS_FAILED: i32 = 1;
pub const MS_USAGE_ERROR: i32 = 2;
pub const MS_PANIC: i32 = 3;
pub const MS_BAD_INPUT: i32 = 4;

/// Opaque session handle.
pub struct MsSession {
    config: RunConfig,
    last_error: Option<CString>,
}

impl MsSession {
    fn set_error(&mut self, msg: &str) {
        self.last_error = CString::new(msg.replace('\0', " ")).ok();
    }
}

/// Creates a session with the default configuration. Never returns null.
#[no_mangle]
pub extern "C" fn ms_session_new() -> *mut MsSession {
    Box::into_raw(Box::new(MsSession {
        config: RunConfig::default(),
        last_error: None,
    }))
}

/// Creates a session from a JSON configuration document (same schema as the
/// CLI `--config` file). Returns null when the document does not parse.
///
/// # Safety
/// `config_json` must be a valid NUL-terminated UTF-8 string or null.
#[no_mangle]
pub unsafe extern "C" fn ms_session_new_with_config(config_json: *const c_char) -> *mut MsSession {
    if config_json.is_null() {
        return ms_session_new();
    }
    let text = match CStr::from_ptr(config_json).to_str() {
        Ok(t) => t,
        Err(_) => return ptr::null_mut(),
    };
    match RunConfig::from_json(text) {
        Ok(config) => Box::into_raw(Box::new(MsSession {
            config,
            last_error: None,
        })),
        Err(_) => ptr::null_mut(),
    }
}

/// Releases a session created by `ms_session_new*`.
///
/// # Safety
/// `session` must be a pointer previously returned by this library, or null.
#[no_mangle]
pub unsafe extern "C" fn ms_session_free(session: *mut MsSession) {
    if !session.is_null() {
        drop(Box::from_raw(session));
    }
}

/// Runs one subcommand. `argv_json` is a JSON array of argument strings,
/// e.g. `["dims", "--d", "2", "--n", "2"]`. On return codes 0 and 1,
/// `*out_json` holds the JSON report; on other codes it is null and
/// [`ms_last_error`] describes the problem.
///
/// # Safety
/// `session` must be a live session pointer; `argv_json` a valid
/// NUL-terminated string; `out_json` either null or a valid out-pointer.
#[no_mangle]
pub unsafe extern "C" fn ms_run(
    session: *mut MsSession,
    argv_json: *const c_char,
    out_json: *mut *mut c_char,
) -> i32 {
    if !out_json.is_null() {
        *out_json = ptr::null_mut();
    }
    let Some(session) = session.as_mut() else {
        return MS_BAD_INPUT;
    };
    session.last_error = None;
    if argv_json.is_null() {
        session.set_error("argv_json is null");
        return MS_BAD_INPUT;
    }
    let text = match CStr::from_ptr(argv_json).to_str() {
        Ok(t) => t,
        Err(_) => {
            session.set_error("argv_json is not valid UTF-8");
            return MS_BAD_INPUT;
        }
    };
    let args: Vec<String> = match serde_json::from_str(text) {
        Ok(a) => a,
        Err(e) => {
            session.set_error(&format!("argv_json must be a JSON array of strings: {e}"));
            return MS_BAD_INPUT;
        }
    };
    let mut argv = vec!["multispec".to_string()];
    argv.extend(args);
    let config = session.config.clone();
    let outcome = catch_unwind(AssertUnwindSafe(|| {
        dispatch_with_default(&argv, Some(config))
    }));
    match outcome {
        Err(_) => {
            session.set_error("internal panic during dispatch");
            MS_PANIC
        }
        Ok(Outcome::Usage(msg)) => {
            session.set_error(&msg);
            MS_USAGE_ERROR
        }
        Ok(Outcome::Info(msg)) => {
            emit(out_json, &msg);
            MS_OK
        }
        Ok(Outcome::Report(report, code)) => {
            emit(out_json, &report.to_json_pretty());
            if code == 0 {
                MS_OK
            } else {
                MS_CHECKS_FAILED
            }
        }
    }
}

unsafe fn emit(out_json: *mut *mut c_char, text: &str) {
    if out_json.is_null() {
        return;
    }
    if let Ok(cstr) = CString::new(text.replace('\0', " ")) {
        *out_json = cstr.into_raw();
    }
}

/// Message for the most recent failure on this session, or null.
///
/// # Safety
/// `session` must be a live session pointer or null. The returned pointer
/// is invalidated by the next `ms_run` on the same session.
#[no_mangle]
pub unsafe extern "C" fn ms_last_error(session: *const MsSession) -> *const c_char {
    session
        .as_ref()
        .and_then(|s| s.last_error.as_ref())
        .map_or(ptr::null(), |c| c.as_ptr())
}

/// Releases a string returned through `out_json`.
///
/// # Safety
/// `s` must come from this library, or be null.
#[no_mangle]
pub unsafe extern "C" fn ms_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn ms_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}
