//! C ABI over the propsizer engine.
//!
//! An engine handle owns a catalog and fitted models. Requests and results
//! cross the boundary as UTF-8 JSON with the same schemas as the HTTP API.
//! Every function returns a [`PsStatus`]; on failure the message of the last
//! error on the calling thread is available from [`ps_last_error_message`].
//! Strings returned through out-pointers are owned by the caller and must be
//! released with [`ps_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use propsizer::api::{to_json, Engine, Failure, FailureKind};
use propsizer::{Catalog, StatModels};

/// Result codes of every ABI function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsStatus {
    Ok = 0,
    /// Null pointer or non UTF-8 string argument.
    NullOrInvalidArgument = 1,
    /// Malformed JSON, out-of-range values, unreadable catalog.
    InvalidInput = 2,
    /// Valid input without a feasible design or operating state.
    Infeasible = 3,
    Internal = 4,
    /// A Rust panic was caught at the boundary.
    Panic = 5,
}

/// Opaque engine handle.
pub struct PsEngine {
    inner: Engine,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_last_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(kind: FailureKind) -> PsStatus {
    match kind {
        FailureKind::InvalidInput => PsStatus::InvalidInput,
        FailureKind::Infeasible => PsStatus::Infeasible,
        FailureKind::Internal => PsStatus::Internal,
    }
}

fn fail(f: &Failure) -> PsStatus {
    set_last_error(&f.error);
    status_of(f.kind)
}

fn guarded(f: impl FnOnce() -> PsStatus) -> PsStatus {
    clear_last_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_last_error("panic in propsizer");
            PsStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, PsStatus> {
    if p.is_null() {
        set_last_error(&format!("{name} is null"));
        return Err(PsStatus::NullOrInvalidArgument);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_last_error(&format!("{name} is not UTF-8"));
        PsStatus::NullOrInvalidArgument
    })
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

unsafe fn store_engine(engine: Result<Engine, Failure>, out: *mut *mut PsEngine) -> PsStatus {
    match engine {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(PsEngine { inner }));
            PsStatus::Ok
        }
        Err(f) => fail(&f),
    }
}

/// Creates an engine over the bundled sample catalog.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn ps_engine_new_bundled(out: *mut *mut PsEngine) -> PsStatus {
    guarded(|| {
        if out.is_null() {
            set_last_error("out is null");
            return PsStatus::NullOrInvalidArgument;
        }
        *out = ptr::null_mut();
        store_engine(Engine::bundled().map_err(Failure::from), out)
    })
}

/// Creates an engine from a catalog directory and an optional models file
/// (pass null to fit models from the catalog).
///
/// # Safety
/// `catalog_dir` must be a NUL-terminated string, `models_path` null or a
/// NUL-terminated string, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ps_engine_new(
    catalog_dir: *const c_char,
    models_path: *const c_char,
    out: *mut *mut PsEngine,
) -> PsStatus {
    guarded(|| {
        if out.is_null() {
            set_last_error("out is null");
            return PsStatus::NullOrInvalidArgument;
        }
        *out = ptr::null_mut();
        let dir = match str_arg(catalog_dir, "catalog_dir") {
            Ok(d) => d,
            Err(s) => return s,
        };
        let models = if models_path.is_null() {
            None
        } else {
            match str_arg(models_path, "models_path") {
                Ok(p) => Some(p),
                Err(s) => return s,
            }
        };
        let engine = (|| {
            let catalog = Catalog::load_dir(Path::new(dir))?;
            let models = models.map(|p| StatModels::load(Path::new(p))).transpose()?;
            Engine::new(catalog, models)
        })();
        store_engine(engine.map_err(Failure::from), out)
    })
}

/// Releases an engine. Null is ignored.
///
/// # Safety
/// `engine` must come from one of the constructors and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ps_engine_free(engine: *mut PsEngine) {
    if !engine.is_null() {
        drop(Box::from_raw(engine));
    }
}

type JsonCall = fn(&Engine, &str) -> Result<String, Failure>;

unsafe fn json_call(
    engine: *const PsEngine,
    request: *const c_char,
    out_json: *mut *mut c_char,
    call: JsonCall,
) -> PsStatus {
    guarded(|| {
        if out_json.is_null() {
            set_last_error("out_json is null");
            return PsStatus::NullOrInvalidArgument;
        }
        *out_json = ptr::null_mut();
        let Some(engine) = engine.as_ref() else {
            set_last_error("engine is null");
            return PsStatus::NullOrInvalidArgument;
        };
        let request = match str_arg(request, "request_json") {
            Ok(r) => r,
            Err(s) => return s,
        };
        match call(&engine.inner, request) {
            Ok(json) => {
                *out_json = into_c_string(json);
                PsStatus::Ok
            }
            Err(f) => {
                *out_json = into_c_string(to_json(&f));
                fail(&f)
            }
        }
    })
}

/// Runs the optimizer on a requirements JSON document. On success
/// `*out_json` holds the design; on failure it holds a structured error
/// document (kind, error, step, violations).
///
/// # Safety
/// `engine` must be a live handle, `request_json` NUL-terminated, `out_json`
/// a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ps_optimize(
    engine: *const PsEngine,
    request_json: *const c_char,
    out_json: *mut *mut c_char,
) -> PsStatus {
    json_call(engine, request_json, out_json, Engine::optimize_json)
}

/// Evaluates a `{system, hover_thrust_n, thrust_ratio}` document.
///
/// # Safety
/// Same contract as [`ps_optimize`].
#[no_mangle]
pub unsafe extern "C" fn ps_evaluate(
    engine: *const PsEngine,
    request_json: *const c_char,
    out_json: *mut *mut c_char,
) -> PsStatus {
    json_call(engine, request_json, out_json, Engine::evaluate_json)
}

/// Content hash of the engine's catalog, owned by the caller.
///
/// # Safety
/// `engine` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ps_catalog_hash(engine: *const PsEngine, out: *mut *mut c_char) -> PsStatus {
    guarded(|| {
        if out.is_null() {
            set_last_error("out is null");
            return PsStatus::NullOrInvalidArgument;
        }
        let Some(engine) = engine.as_ref() else {
            set_last_error("engine is null");
            return PsStatus::NullOrInvalidArgument;
        };
        *out = into_c_string(engine.inner.catalog.hash.clone());
        PsStatus::Ok
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ps_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failed call on this thread, or null. The pointer is
/// valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn ps_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn ps_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
