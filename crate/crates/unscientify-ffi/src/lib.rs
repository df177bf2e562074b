//! C ABI for the unscientify annotation engine.
//!
//! The surface is deliberately small: build an engine (opaque handle),
//! annotate plain text or CoNLL-U content, get the per-sentence records
//! back as a JSON array string, free what you were given. Every function
//! returns an [`UnsStatus`]; on failure a thread-local message is
//! retrievable via [`uns_last_error`].
//!
//! Strings crossing the boundary are NUL-terminated UTF-8. Returned strings
//! are owned by Rust and must be released with [`uns_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::path::Path;
use std::ptr;

use unscientify::builtin::builtin_ruleset;
use unscientify::ingest::{ingest_plain, parse_conllu, IngestConfig};
use unscientify::output::{records_for, to_json};
use unscientify::pipeline::annotate_document;
use unscientify::rules::{
    compile_ruleset, parse_ruleset, validate_ruleset, CompiledRuleSet, Severity,
};

/// Result codes returned by every FFI entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnsStatus {
    /// The call succeeded.
    UnsOk = 0,
    /// A required pointer argument was NULL.
    UnsNullPointer = 1,
    /// An input string was not valid UTF-8.
    UnsInvalidUtf8 = 2,
    /// Input content (CoNLL-U or JSON) failed to parse.
    UnsParseError = 3,
    /// The ruleset failed to parse, validate, or compile.
    UnsRulesetError = 4,
    /// An I/O error occurred.
    UnsIoError = 5,
}

/// Opaque annotation engine: a compiled ruleset plus ingest configuration.
pub struct UnsEngine {
    compiled: CompiledRuleSet,
    config: IngestConfig,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: impl Into<Vec<u8>>) {
    let mut bytes = message.into();
    bytes.retain(|&b| b != 0);
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(bytes).unwrap_or_default();
    });
}

/// Copy the last error message for this thread into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length in bytes, excluding
/// the terminator. A zero return means no error has been recorded.
///
/// # Safety
/// `buf` must point to at least `len` writable bytes, or be NULL (in which
/// case only the length is returned).
#[no_mangle]
pub unsafe extern "C" fn uns_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|slot| {
        let msg = slot.borrow();
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let copy = bytes.len().min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr(), buf.cast::<u8>(), copy);
            *buf.add(copy) = 0;
        }
        bytes.len()
    })
}

unsafe fn cstr_arg<'a>(ptr: *const c_char, name: &str) -> Result<&'a str, UnsStatus> {
    if ptr.is_null() {
        set_last_error(format!("{name} must not be NULL"));
        return Err(UnsStatus::UnsNullPointer);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_last_error(format!("{name} is not valid UTF-8"));
        UnsStatus::UnsInvalidUtf8
    })
}

fn engine_from_ruleset(
    ruleset: unscientify::rules::RuleSet,
    out: *mut *mut UnsEngine,
) -> UnsStatus {
    let errors: Vec<String> = validate_ruleset(&ruleset)
        .into_iter()
        .filter(|d| d.severity == Severity::Error)
        .map(|d| d.to_string())
        .collect();
    if !errors.is_empty() {
        set_last_error(errors.join("; "));
        return UnsStatus::UnsRulesetError;
    }
    match compile_ruleset(&ruleset) {
        Ok(compiled) => {
            let engine = Box::new(UnsEngine {
                compiled,
                config: IngestConfig::default(),
            });
            unsafe { *out = Box::into_raw(engine) };
            UnsStatus::UnsOk
        }
        Err(err) => {
            set_last_error(err.to_string());
            UnsStatus::UnsRulesetError
        }
    }
}

/// Create an engine backed by the builtin ruleset.
///
/// # Safety
/// `out` must be a valid pointer to an engine pointer slot.
#[no_mangle]
pub unsafe extern "C" fn uns_engine_new_builtin(out: *mut *mut UnsEngine) -> UnsStatus {
    if out.is_null() {
        set_last_error("out must not be NULL");
        return UnsStatus::UnsNullPointer;
    }
    engine_from_ruleset(builtin_ruleset(), out)
}

/// Create an engine from rule file content (UTF-8 JSON).
///
/// # Safety
/// `rules_json` must be a NUL-terminated string and `out` a valid slot.
#[no_mangle]
pub unsafe extern "C" fn uns_engine_new_from_json(
    rules_json: *const c_char,
    out: *mut *mut UnsEngine,
) -> UnsStatus {
    if out.is_null() {
        set_last_error("out must not be NULL");
        return UnsStatus::UnsNullPointer;
    }
    let content = match cstr_arg(rules_json, "rules_json") {
        Ok(s) => s,
        Err(status) => return status,
    };
    match parse_ruleset(content.as_bytes()) {
        Ok(ruleset) => engine_from_ruleset(ruleset, out),
        Err(err) => {
            set_last_error(format!("[{}] {err}", err.code()));
            UnsStatus::UnsRulesetError
        }
    }
}

/// Create an engine from a rule file on disk.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid slot.
#[no_mangle]
pub unsafe extern "C" fn uns_engine_new_from_file(
    path: *const c_char,
    out: *mut *mut UnsEngine,
) -> UnsStatus {
    if out.is_null() {
        set_last_error("out must not be NULL");
        return UnsStatus::UnsNullPointer;
    }
    let path = match cstr_arg(path, "path") {
        Ok(s) => s,
        Err(status) => return status,
    };
    let bytes = match std::fs::read(Path::new(path)) {
        Ok(b) => b,
        Err(err) => {
            set_last_error(format!("reading {path}: {err}"));
            return UnsStatus::UnsIoError;
        }
    };
    match parse_ruleset(&bytes) {
        Ok(ruleset) => engine_from_ruleset(ruleset, out),
        Err(err) => {
            set_last_error(format!("[{}] {err}", err.code()));
            UnsStatus::UnsRulesetError
        }
    }
}

/// Release an engine created by one of the constructors. NULL is a no-op.
///
/// # Safety
/// `engine` must be a pointer previously returned by an engine constructor
/// and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn uns_engine_free(engine: *mut UnsEngine) {
    if !engine.is_null() {
        drop(Box::from_raw(engine));
    }
}

/// Ruleset version of an engine, as a newly allocated string.
///
/// # Safety
/// `engine` must be a live engine pointer and `out` a valid slot. The
/// returned string must be freed with [`uns_string_free`].
#[no_mangle]
pub unsafe extern "C" fn uns_engine_version(
    engine: *const UnsEngine,
    out: *mut *mut c_char,
) -> UnsStatus {
    if engine.is_null() || out.is_null() {
        set_last_error("engine and out must not be NULL");
        return UnsStatus::UnsNullPointer;
    }
    let version = (*engine).compiled.version.clone();
    *out = CString::new(version).unwrap_or_default().into_raw();
    UnsStatus::UnsOk
}

unsafe fn annotate_common(
    engine: *const UnsEngine,
    content: *const c_char,
    out_json: *mut *mut c_char,
    conllu: bool,
) -> UnsStatus {
    if engine.is_null() || out_json.is_null() {
        set_last_error("engine and out_json must not be NULL");
        return UnsStatus::UnsNullPointer;
    }
    let content = match cstr_arg(content, "content") {
        Ok(s) => s,
        Err(status) => return status,
    };
    let engine = &*engine;
    let doc = if conllu {
        match parse_conllu(content) {
            Ok(doc) => doc,
            Err(err) => {
                set_last_error(err.to_string());
                return UnsStatus::UnsParseError;
            }
        }
    } else {
        ingest_plain(content, &engine.config)
    };
    let report = annotate_document(&engine.compiled, &doc);
    let records = records_for(&report.annotations, &doc.sentences);
    let json = to_json(&records);
    match CString::new(json) {
        Ok(cstring) => {
            *out_json = cstring.into_raw();
            UnsStatus::UnsOk
        }
        Err(_) => {
            set_last_error("output contained an interior NUL byte");
            UnsStatus::UnsParseError
        }
    }
}

/// Annotate plain UTF-8 text. On success `*out_json` holds a JSON array of
/// per-sentence records (same schema as the CLI's json output).
///
/// # Safety
/// `engine` must be live, `text` NUL-terminated, `out_json` a valid slot.
/// The returned string must be freed with [`uns_string_free`].
#[no_mangle]
pub unsafe extern "C" fn uns_annotate_text(
    engine: *const UnsEngine,
    text: *const c_char,
    out_json: *mut *mut c_char,
) -> UnsStatus {
    annotate_common(engine, text, out_json, false)
}

/// Annotate CoNLL-U content (10-column, tab-separated).
///
/// # Safety
/// Same contract as [`uns_annotate_text`].
#[no_mangle]
pub unsafe extern "C" fn uns_annotate_conllu(
    engine: *const UnsEngine,
    conllu: *const c_char,
    out_json: *mut *mut c_char,
) -> UnsStatus {
    annotate_common(engine, conllu, out_json, true)
}

/// Free a string returned by this library. NULL is a no-op.
///
/// # Safety
/// `s` must be a pointer previously returned by this library and not yet
/// freed.
#[no_mangle]
pub unsafe extern "C" fn uns_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CString;

    unsafe fn take_string(ptr: *mut c_char) -> String {
        assert!(!ptr.is_null());
        let s = CStr::from_ptr(ptr).to_str().unwrap().to_string();
        uns_string_free(ptr);
        s
    }

    fn last_error() -> String {
        let mut buf = vec![0u8; 512];
        let n = unsafe { uns_last_error(buf.as_mut_ptr().cast(), buf.len()) };
        String::from_utf8_lossy(&buf[..n.min(buf.len() - 1)]).into_owned()
    }

    #[test]
    fn builtin_engine_annotates_text() {
        unsafe {
            let mut engine: *mut UnsEngine = ptr::null_mut();
            assert_eq!(uns_engine_new_builtin(&mut engine), UnsStatus::UnsOk);
            assert!(!engine.is_null());

            let text = CString::new("The mechanism may vary. The sample was fixed.").unwrap();
            let mut out: *mut c_char = ptr::null_mut();
            assert_eq!(
                uns_annotate_text(engine, text.as_ptr(), &mut out),
                UnsStatus::UnsOk
            );
            let json = take_string(out);
            assert!(json.contains("\"su_label\": \"SU\""), "json: {json}");
            assert!(json.contains("\"su_label\": \"NonSU\""));
            assert!(json.contains("Modality"));

            let mut version: *mut c_char = ptr::null_mut();
            assert_eq!(uns_engine_version(engine, &mut version), UnsStatus::UnsOk);
            assert_eq!(take_string(version), "builtin-1");

            uns_engine_free(engine);
        }
    }

    #[test]
    fn conllu_annotation_works() {
        unsafe {
            let mut engine: *mut UnsEngine = ptr::null_mut();
            assert_eq!(uns_engine_new_builtin(&mut engine), UnsStatus::UnsOk);
            let conllu = CString::new(
                "1\tIt\tit\tPRON\t_\t_\t3\tnsubj\t_\t_\n\
                 2\tmay\tmay\tAUX\t_\t_\t3\taux\t_\t_\n\
                 3\train\train\tVERB\t_\t_\t0\troot\t_\tSpaceAfter=No\n\
                 4\t.\t.\tPUNCT\t_\t_\t3\tpunct\t_\t_\n\n",
            )
            .unwrap();
            let mut out: *mut c_char = ptr::null_mut();
            assert_eq!(
                uns_annotate_conllu(engine, conllu.as_ptr(), &mut out),
                UnsStatus::UnsOk
            );
            let json = take_string(out);
            assert!(json.contains("may rain"), "json: {json}");
            uns_engine_free(engine);
        }
    }

    #[test]
    fn malformed_conllu_sets_error() {
        unsafe {
            let mut engine: *mut UnsEngine = ptr::null_mut();
            assert_eq!(uns_engine_new_builtin(&mut engine), UnsStatus::UnsOk);
            let bad = CString::new("1\tonly\tthree\n\n").unwrap();
            let mut out: *mut c_char = ptr::null_mut();
            assert_eq!(
                uns_annotate_conllu(engine, bad.as_ptr(), &mut out),
                UnsStatus::UnsParseError
            );
            assert!(out.is_null());
            assert!(last_error().contains("line 1"));
            uns_engine_free(engine);
        }
    }

    #[test]
    fn bad_ruleset_json_reports_ruleset_error() {
        unsafe {
            let mut engine: *mut UnsEngine = ptr::null_mut();
            let bad = CString::new("{\"version\": \"\"}").unwrap();
            assert_eq!(
                uns_engine_new_from_json(bad.as_ptr(), &mut engine),
                UnsStatus::UnsRulesetError
            );
            assert!(engine.is_null());
            assert!(last_error().contains("EMPTY_VERSION"));
        }
    }

    #[test]
    fn null_arguments_are_rejected() {
        unsafe {
            assert_eq!(
                uns_engine_new_builtin(ptr::null_mut()),
                UnsStatus::UnsNullPointer
            );
            let mut engine: *mut UnsEngine = ptr::null_mut();
            assert_eq!(uns_engine_new_builtin(&mut engine), UnsStatus::UnsOk);
            let mut out: *mut c_char = ptr::null_mut();
            assert_eq!(
                uns_annotate_text(engine, ptr::null(), &mut out),
                UnsStatus::UnsNullPointer
            );
            assert_eq!(
                uns_annotate_text(ptr::null(), ptr::null(), &mut out),
                UnsStatus::UnsNullPointer
            );
            uns_engine_free(engine);
            uns_engine_free(ptr::null_mut());
            uns_string_free(ptr::null_mut());
        }
    }

    #[test]
    fn missing_rule_file_is_io_error() {
        unsafe {
            let mut engine: *mut UnsEngine = ptr::null_mut();
            let path = CString::new("/nonexistent/rules.json").unwrap();
            assert_eq!(
                uns_engine_new_from_file(path.as_ptr(), &mut engine),
                UnsStatus::UnsIoError
            );
        }
    }
}
