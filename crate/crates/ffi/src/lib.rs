//! C ABI for `essence-core`.
//!
//! Every function returns an [`EssenceStatus`]. On anything other than
//! `ESSENCE_STATUS_OK` the calling thread's last error holds a stable error
//! code (e.g. `UNKNOWN_CHECKPOINT`) and a message. Strings handed out through
//! `out` parameters are owned by the caller and released with
//! [`essence_string_free`]; projects are released with
//! [`essence_project_free`]. Structured results are UTF-8 JSON.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use essence_core::assessment::{AlphaInstance, CheckpointRecord, SystemLevel};
use essence_core::designation::{format_designation, parse_designation, parse_document_designation, DccTable};
use essence_core::kernel_data::builtin_se_kernel;
use essence_core::metamodel::{validate_kernel, KernelDefinition};
use essence_core::project::{load_project, save_project, Project, ProjectError};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EssenceStatus {
    Ok = 0,
    /// The call worked and the check it ran did not pass.
    CheckFailed = 1,
    NullArgument = 2,
    InvalidUtf8 = 3,
    ParseError = 4,
    SchemaError = 5,
    UnsupportedVersion = 6,
    /// Rejected by domain validation; the last error code says why.
    InvalidArgument = 7,
    Panic = 8,
}

/// Opaque project handle.
pub struct EssenceProject {
    inner: Project,
}

struct LastError {
    code: CString,
    message: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<LastError>> = const { RefCell::new(None) };
}

struct Failure {
    status: EssenceStatus,
    code: String,
    message: String,
}

impl Failure {
    fn new(status: EssenceStatus, code: &str, message: impl ToString) -> Self {
        Self { status, code: code.to_owned(), message: message.to_string() }
    }

    fn invalid(code: &str, message: impl ToString) -> Self {
        Self::new(EssenceStatus::InvalidArgument, code, message)
    }
}

impl From<ProjectError> for Failure {
    fn from(e: ProjectError) -> Self {
        let status = match e {
            ProjectError::Parse(_) => EssenceStatus::ParseError,
            ProjectError::Schema { .. } => EssenceStatus::SchemaError,
            ProjectError::UnsupportedVersion(_) => EssenceStatus::UnsupportedVersion,
        };
        Failure::new(status, e.code(), e)
    }
}

fn lossless(s: String) -> CString {
    CString::new(s.replace('\0', "\u{FFFD}")).expect("NUL bytes replaced")
}

fn set_last_error(code: &str, message: &str) {
    LAST_ERROR.with(|e| {
        *e.borrow_mut() = Some(LastError { code: lossless(code.to_owned()), message: lossless(message.to_owned()) })
    });
}

/// Runs `f`, converting failures and panics into a status plus last error.
fn guard(f: impl FnOnce() -> Result<EssenceStatus, Failure>) -> EssenceStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => status,
        Ok(Err(f)) => {
            set_last_error(&f.code, &f.message);
            f.status
        }
        Err(_) => {
            set_last_error("PANIC", "internal error");
            EssenceStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::new(EssenceStatus::NullArgument, "NULL_ARGUMENT", format!("{what} is NULL")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure::new(EssenceStatus::InvalidUtf8, "INVALID_UTF8", format!("{what}: {e}")))
}

unsafe fn text_array(items: *const *const c_char, len: usize, what: &str) -> Result<Vec<String>, Failure> {
    if len == 0 {
        return Ok(Vec::new());
    }
    if items.is_null() {
        return Err(Failure::new(EssenceStatus::NullArgument, "NULL_ARGUMENT", format!("{what} is NULL")));
    }
    std::slice::from_raw_parts(items, len).iter().map(|&p| text(p, what).map(str::to_owned)).collect()
}

unsafe fn project_ref<'a>(p: *const EssenceProject) -> Result<&'a EssenceProject, Failure> {
    p.as_ref().ok_or_else(|| Failure::new(EssenceStatus::NullArgument, "NULL_ARGUMENT", "project is NULL"))
}

unsafe fn project_mut<'a>(p: *mut EssenceProject) -> Result<&'a mut EssenceProject, Failure> {
    p.as_mut().ok_or_else(|| Failure::new(EssenceStatus::NullArgument, "NULL_ARGUMENT", "project is NULL"))
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::new(EssenceStatus::NullArgument, "NULL_ARGUMENT", "out is NULL"));
    }
    *out = lossless(s).into_raw();
    Ok(())
}

unsafe fn put_project(out: *mut *mut EssenceProject, p: Project) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::new(EssenceStatus::NullArgument, "NULL_ARGUMENT", "out is NULL"));
    }
    *out = Box::into_raw(Box::new(EssenceProject { inner: p }));
    Ok(())
}

/// Library version, e.g. `"0.1.0"`. Static; do not free.
#[no_mangle]
pub extern "C" fn essence_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Error code of the last failed call on this thread, or NULL. Valid until
/// the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn essence_last_error_code() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |e| e.code.as_ptr()))
}

/// Message of the last failed call on this thread, or NULL. Same lifetime
/// as [`essence_last_error_code`].
#[no_mangle]
pub extern "C" fn essence_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |e| e.message.as_ptr()))
}

/// # Safety
/// `s` is NULL or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn essence_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Creates an empty project on the built-in kernel.
///
/// # Safety
/// `project_id` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn essence_project_new(
    project_id: *const c_char,
    out: *mut *mut EssenceProject,
) -> EssenceStatus {
    guard(|| {
        let id = text(project_id, "project_id")?;
        put_project(out, Project::new(id))?;
        Ok(EssenceStatus::Ok)
    })
}

/// Parses and validates a project document of `len` bytes.
///
/// # Safety
/// `bytes` points to `len` readable bytes; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn essence_project_load(
    bytes: *const u8,
    len: usize,
    out: *mut *mut EssenceProject,
) -> EssenceStatus {
    guard(|| {
        if bytes.is_null() && len > 0 {
            return Err(Failure::new(EssenceStatus::NullArgument, "NULL_ARGUMENT", "bytes is NULL"));
        }
        let data = if len == 0 { &[][..] } else { std::slice::from_raw_parts(bytes, len) };
        put_project(out, load_project(data)?)?;
        Ok(EssenceStatus::Ok)
    })
}

/// Serializes a project to its canonical document.
///
/// # Safety
/// `project` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn essence_project_save(project: *const EssenceProject, out: *mut *mut c_char) -> EssenceStatus {
    guard(|| {
        let p = project_ref(project)?;
        let text = String::from_utf8(save_project(&p.inner)).expect("JSON is UTF-8");
        put_string(out, text)?;
        Ok(EssenceStatus::Ok)
    })
}

/// # Safety
/// `project` is NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn essence_project_free(project: *mut EssenceProject) {
    if !project.is_null() {
        drop(Box::from_raw(project));
    }
}

/// Adds an alpha instance of the named kernel alpha.
///
/// # Safety
/// `project` is a live handle; strings are NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn essence_project_add_instance(
    project: *mut EssenceProject,
    id: *const c_char,
    alpha: *const c_char,
    using_system: bool,
) -> EssenceStatus {
    guard(|| {
        let p = project_mut(project)?;
        let level = if using_system { SystemLevel::UsingSystem } else { SystemLevel::SystemOfInterest };
        let inst = AlphaInstance {
            id: text(id, "id")?.to_owned(),
            alpha: text(alpha, "alpha")?.to_owned(),
            system_level: level,
        };
        p.inner.assessment.add_instance(inst).map_err(|e| Failure::invalid(e.code(), e))?;
        Ok(EssenceStatus::Ok)
    })
}

/// Appends a checkpoint record. The project is unchanged on failure.
///
/// # Safety
/// `project` is a live handle; strings are NUL-terminated; `evidence` points
/// to `evidence_len` strings (may be NULL when `evidence_len` is 0).
#[no_mangle]
pub unsafe extern "C" fn essence_record_checkpoint(
    project: *mut EssenceProject,
    alpha_instance: *const c_char,
    state: *const c_char,
    checkpoint: *const c_char,
    satisfied: bool,
    evidence: *const *const c_char,
    evidence_len: usize,
    recorded_at: i64,
) -> EssenceStatus {
    guard(|| {
        let p = project_mut(project)?;
        let mut rec = CheckpointRecord::new(
            text(alpha_instance, "alpha_instance")?,
            text(state, "state")?,
            text(checkpoint, "checkpoint")?,
            satisfied,
        )
        .with_evidence(text_array(evidence, evidence_len, "evidence")?);
        rec.recorded_at = recorded_at;
        p.inner.assessment.record_checkpoint(rec).map_err(|e| Failure::invalid(e.code(), e))?;
        Ok(EssenceStatus::Ok)
    })
}

/// Computed state of an instance as JSON: `achieved`, `achieved-index`
/// (-1 for none), `next-state`, `blocking`. `achieved_index` may be NULL.
///
/// # Safety
/// `project` is a live handle; `alpha_instance` is NUL-terminated; `out` is
/// writable.
#[no_mangle]
pub unsafe extern "C" fn essence_alpha_state(
    project: *const EssenceProject,
    alpha_instance: *const c_char,
    achieved_index: *mut i64,
    out: *mut *mut c_char,
) -> EssenceStatus {
    guard(|| {
        let p = project_ref(project)?;
        let r = p
            .inner
            .assessment
            .alpha_state(text(alpha_instance, "alpha_instance")?)
            .map_err(|e| Failure::invalid(e.code(), e))?;
        if !achieved_index.is_null() {
            *achieved_index = r.achieved_index;
        }
        put_string(out, serde_json::to_string(&r).expect("serializable"))?;
        Ok(EssenceStatus::Ok)
    })
}

/// Plain-text state card for one alpha instance.
///
/// # Safety
/// `project` is a live handle; `alpha_instance` is NUL-terminated; `out` is
/// writable.
#[no_mangle]
pub unsafe extern "C" fn essence_render_card(
    project: *const EssenceProject,
    alpha_instance: *const c_char,
    out: *mut *mut c_char,
) -> EssenceStatus {
    guard(|| {
        let p = project_ref(project)?;
        let card = p
            .inner
            .assessment
            .render_card(text(alpha_instance, "alpha_instance")?)
            .map_err(|e| Failure::invalid(e.code(), e))?;
        put_string(out, card)?;
        Ok(EssenceStatus::Ok)
    })
}

/// Checks that the named views cover all three structure types. Returns
/// `ESSENCE_STATUS_CHECK_FAILED` when they do not; the JSON report is written
/// either way.
///
/// # Safety
/// `project` is a live handle; `views` points to `views_len` strings; `out`
/// is writable.
#[no_mangle]
pub unsafe extern "C" fn essence_arch_check(
    project: *const EssenceProject,
    views: *const *const c_char,
    views_len: usize,
    out: *mut *mut c_char,
) -> EssenceStatus {
    guard(|| {
        let p = project_ref(project)?;
        let names = text_array(views, views_len, "views")?;
        let report = p.inner.description.viable_architecture(&names).map_err(|e| Failure::invalid(e.code(), e))?;
        put_string(out, serde_json::to_string(&report).expect("serializable"))?;
        Ok(if report.viable { EssenceStatus::Ok } else { EssenceStatus::CheckFailed })
    })
}

/// Parses a multi-aspect designation and writes its canonical form.
///
/// # Safety
/// `text_in` is NUL-terminated; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn essence_designation_canonicalize(
    text_in: *const c_char,
    out: *mut *mut c_char,
) -> EssenceStatus {
    guard(|| {
        let d = parse_designation(text(text_in, "text")?).map_err(|e| Failure::invalid(e.code.as_str(), e))?;
        put_string(out, format_designation(&d))?;
        Ok(EssenceStatus::Ok)
    })
}

/// Parses a document designation against the built-in classification table
/// and writes `{"designation", "dcc", "area", "class"}` as JSON.
///
/// # Safety
/// `text_in` is NUL-terminated; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn essence_document_parse(text_in: *const c_char, out: *mut *mut c_char) -> EssenceStatus {
    guard(|| {
        let table = DccTable::builtin();
        let doc =
            parse_document_designation(text(text_in, "text")?, &table).map_err(|e| Failure::invalid(e.code(), e))?;
        let json = serde_json::json!({
            "designation": doc.system.to_string(),
            "dcc": doc.dcc.as_str(),
            "area": table.area_name(doc.dcc.area()),
            "class": table.class_name(doc.dcc.class_code()),
        });
        put_string(out, json.to_string())?;
        Ok(EssenceStatus::Ok)
    })
}

/// The built-in kernel as a kernel document.
///
/// # Safety
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn essence_builtin_kernel_json(out: *mut *mut c_char) -> EssenceStatus {
    guard(|| {
        put_string(out, builtin_se_kernel().to_json())?;
        Ok(EssenceStatus::Ok)
    })
}

/// Validates a kernel document. Writes `{"findings": [...]}` and returns
/// `ESSENCE_STATUS_CHECK_FAILED` when there are findings.
///
/// # Safety
/// `kernel_json` is NUL-terminated; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn essence_kernel_validate(kernel_json: *const c_char, out: *mut *mut c_char) -> EssenceStatus {
    guard(|| {
        let def = KernelDefinition::from_json(text(kernel_json, "kernel_json")?)
            .map_err(|e| Failure::new(EssenceStatus::ParseError, e.code(), e))?;
        let report = validate_kernel(&def);
        put_string(out, serde_json::to_string(&report).expect("serializable"))?;
        Ok(if report.is_clean() { EssenceStatus::Ok } else { EssenceStatus::CheckFailed })
    })
}
