//! C ABI over the `groundc` kernel.
//!
//! Sessions and terms are opaque handles. Every call returns a
//! [`GcStatus`]; on failure the message is kept on the session and read
//! back with [`gc_last_error`]. Strings handed out must be released with
//! [`gc_string_free`], handles with their `_free` function.

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use groundc::cli::{exit, run_repl, CliError, Config, Session};
use groundc::eval::{equivalent, identical, normalize, EvalError, Verdict};
use groundc::ground::{typecheck, GroundTerm};

/// Call results. The first five agree with the exit codes of `groundc`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GcStatus {
    Ok = 0,
    SuiteFailed = 1,
    StaticError = 2,
    ResourceExhausted = 3,
    UsageError = 4,
    NullArgument = 5,
    InvalidUtf8 = 6,
    Panic = 7,
}

impl GcStatus {
    fn from_code(code: u8) -> Self {
        match code {
            exit::OK => GcStatus::Ok,
            exit::SUITE => GcStatus::SuiteFailed,
            exit::STATIC => GcStatus::StaticError,
            exit::RESOURCE => GcStatus::ResourceExhausted,
            _ => GcStatus::UsageError,
        }
    }
}

/// Loaded bases, languages and named terms, plus the last error.
pub struct GcSession {
    inner: Session,
    last_error: Option<CString>,
}

/// A term, tied to the language it was parsed in.
pub struct GcTerm {
    term: GroundTerm,
    lang: String,
}

struct Fail(GcStatus, String);

impl From<CliError> for Fail {
    fn from(e: CliError) -> Self {
        Fail(GcStatus::from_code(e.code), e.message)
    }
}

fn text<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(GcStatus::NullArgument, "null string argument".into()));
    }
    // SAFETY: the caller passes a NUL-terminated string that outlives the call.
    unsafe { CStr::from_ptr(p) }.to_str().map_err(|_| Fail(GcStatus::InvalidUtf8, "argument is not UTF-8".into()))
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("NUL bytes replaced").into_raw()
}

fn term_ref<'a>(s: &GcSession, t: *const GcTerm) -> Result<&'a GcTerm, Fail> {
    if t.is_null() {
        return Err(Fail(GcStatus::NullArgument, "null term".into()));
    }
    // SAFETY: non-null handles come from `gc_term_parse` or `gc_term_normalize`.
    let t = unsafe { &*t };
    if t.lang != s.inner.current {
        return Err(Fail(
            GcStatus::UsageError,
            format!("the term belongs to language `{}`, not `{}`", t.lang, s.inner.current),
        ));
    }
    Ok(t)
}

fn put<T>(out: *mut T, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(GcStatus::NullArgument, "null output pointer".into()));
    }
    // SAFETY: checked non-null; the caller owns the slot.
    unsafe { out.write(v) };
    Ok(())
}

/// Runs `f` against the session, recording any failure on it.
fn with_session(s: *mut GcSession, f: impl FnOnce(&mut GcSession) -> Result<GcStatus, Fail>) -> GcStatus {
    if s.is_null() {
        return GcStatus::NullArgument;
    }
    // SAFETY: non-null sessions come from `gc_session_new`.
    let sess = unsafe { &mut *s };
    let res = catch_unwind(AssertUnwindSafe(|| f(sess)))
        .unwrap_or_else(|_| Err(Fail(GcStatus::Panic, "internal panic".into())));
    match res {
        Ok(st) => {
            sess.last_error = None;
            st
        }
        Err(Fail(st, msg)) => {
            sess.last_error = CString::new(msg.replace('\0', " ")).ok();
            st
        }
    }
}

/// A session with the `gen` language over the empty base. Fuel defaults
/// from `GROUNDC_FUEL`.
#[no_mangle]
pub extern "C" fn gc_session_new() -> *mut GcSession {
    catch_unwind(|| Box::into_raw(Box::new(GcSession { inner: Session::new(Config::default()), last_error: None })))
        .unwrap_or(ptr::null_mut())
}

/// # Safety
/// `s` is null or a live session from [`gc_session_new`], not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn gc_session_free(s: *mut GcSession) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// The message of the last failed call on `s`, or null. Valid until the
/// next call on `s`.
///
/// # Safety
/// `s` is null or a live session.
#[no_mangle]
pub unsafe extern "C" fn gc_last_error(s: *const GcSession) -> *const c_char {
    match s.as_ref().and_then(|s| s.last_error.as_ref()) {
        Some(e) => e.as_ptr(),
        None => ptr::null(),
    }
}

/// # Safety
/// `p` is null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn gc_string_free(p: *mut c_char) {
    if !p.is_null() {
        drop(CString::from_raw(p));
    }
}

/// `ar`, `empty` or a `.base` path; builtin languages are rebuilt over it.
///
/// # Safety
/// `s` is a live session, `base` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn gc_session_set_base(s: *mut GcSession, base: *const c_char) -> GcStatus {
    with_session(s, |sess| {
        sess.inner.set_base(text(base)?)?;
        Ok(GcStatus::Ok)
    })
}

/// `gen`, `core`, `ha` or a `.glang` path becomes the current language.
///
/// # Safety
/// `s` is a live session, `lang` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn gc_session_use_language(s: *mut GcSession, lang: *const c_char) -> GcStatus {
    with_session(s, |sess| {
        sess.inner.use_language(text(lang)?)?;
        Ok(GcStatus::Ok)
    })
}

/// # Safety
/// `s` is a live session.
#[no_mangle]
pub unsafe extern "C" fn gc_session_set_fuel(s: *mut GcSession, fuel: u64) -> GcStatus {
    with_session(s, |sess| {
        sess.inner.config.eval.fuel = fuel;
        Ok(GcStatus::Ok)
    })
}

/// One REPL line (a subcommand, `:load` or `:let`). Its printed output,
/// error lines included, is stored in `*out`.
///
/// # Safety
/// `s` is a live session, `line` a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gc_run(s: *mut GcSession, line: *const c_char, out: *mut *mut c_char) -> GcStatus {
    with_session(s, |sess| {
        let line = text(line)?;
        if out.is_null() {
            return Err(Fail(GcStatus::NullArgument, "null output pointer".into()));
        }
        let mut buf = Vec::new();
        let code = run_repl(&mut sess.inner, line.as_bytes(), &mut buf, false)
            .map_err(|e| Fail(GcStatus::UsageError, e.to_string()))?;
        let printed = String::from_utf8_lossy(&buf).into_owned();
        let st = GcStatus::from_code(code);
        let msg = printed.lines().rev().find_map(|l| l.strip_prefix("error: ")).map(str::to_string);
        put(out, c_string(printed))?;
        match st {
            GcStatus::Ok => Ok(st),
            _ => Err(Fail(st, msg.unwrap_or_else(|| "command failed".into()))),
        }
    })
}

/// Parses a term, a `.gterm` path or a named term in the current language.
///
/// # Safety
/// `s` is a live session, `src` a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gc_term_parse(s: *mut GcSession, src: *const c_char, out: *mut *mut GcTerm) -> GcStatus {
    with_session(s, |sess| {
        let term = sess.inner.term(text(src)?)?;
        let t = Box::new(GcTerm { term, lang: sess.inner.current.clone() });
        put(out, Box::into_raw(t))?;
        Ok(GcStatus::Ok)
    })
}

/// # Safety
/// `t` is null or a live term, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn gc_term_free(t: *mut GcTerm) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// The term in the text syntax, or null for a null handle.
///
/// # Safety
/// `t` is null or a live term.
#[no_mangle]
pub unsafe extern "C" fn gc_term_to_string(t: *const GcTerm) -> *mut c_char {
    match t.as_ref() {
        Some(t) => c_string(t.term.to_string()),
        None => ptr::null_mut(),
    }
}

/// The judgment `Γ ⊢ β` of a well-typed term.
///
/// # Safety
/// `s` is a live session, `t` a live term, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gc_term_check(s: *mut GcSession, t: *const GcTerm, out: *mut *mut c_char) -> GcStatus {
    with_session(s, |sess| {
        let t = term_ref(sess, t)?;
        let j = typecheck(&t.term, &sess.inner.language().lang)
            .map_err(|e| Fail(GcStatus::StaticError, format!("type error {e}")))?;
        put(out, c_string(j.to_string()))?;
        Ok(GcStatus::Ok)
    })
}

/// Normal form of a closed well-typed term, and the steps it took.
/// `steps` may be null.
///
/// # Safety
/// `s` is a live session, `t` a live term, `out` writable, `steps` null or writable.
#[no_mangle]
pub unsafe extern "C" fn gc_term_normalize(
    s: *mut GcSession,
    t: *const GcTerm,
    out: *mut *mut GcTerm,
    steps: *mut u64,
) -> GcStatus {
    with_session(s, |sess| {
        let t = term_ref(sess, t)?;
        let l = sess.inner.language();
        let j = typecheck(&t.term, &l.lang).map_err(|e| Fail(GcStatus::StaticError, format!("type error {e}")))?;
        if !j.is_closed() {
            return Err(Fail(GcStatus::UsageError, format!("the term is open (`{j}`)")));
        }
        let nf = normalize(&t.term, &l.map, sess.inner.config.eval).map_err(|e| {
            let st = match e {
                EvalError::FuelExhausted { .. } => GcStatus::ResourceExhausted,
                _ => GcStatus::UsageError,
            };
            Fail(st, e.to_string())
        })?;
        if !steps.is_null() {
            steps.write(nf.steps);
        }
        put(out, Box::into_raw(Box::new(GcTerm { term: nf.term, lang: t.lang.clone() })))?;
        Ok(GcStatus::Ok)
    })
}

/// Whether two terms with the same judgment are identical.
///
/// # Safety
/// `s` is a live session, `a` and `b` live terms, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gc_identical(
    s: *mut GcSession,
    a: *const GcTerm,
    b: *const GcTerm,
    out: *mut bool,
) -> GcStatus {
    with_session(s, |sess| {
        let (a, b) = (term_ref(sess, a)?, term_ref(sess, b)?);
        let l = sess.inner.language();
        let ty =
            |t: &GroundTerm| typecheck(t, &l.lang).map_err(|e| Fail(GcStatus::StaticError, format!("type error {e}")));
        let (ja, jb) = (ty(&a.term)?, ty(&b.term)?);
        if !ja.same_shape(&jb) {
            return Err(Fail(GcStatus::StaticError, format!("the judgments differ: `{ja}` against `{jb}`")));
        }
        put(out, identical(&a.term, &b.term, &l.lang, &l.map))?;
        Ok(GcStatus::Ok)
    })
}

/// Probes two terms for equivalence. `*out` receives the verdict text;
/// `*tested` (nullable) the number of instances when they are equivalent,
/// and 0 otherwise.
///
/// # Safety
/// `s` is a live session, `a` and `b` live terms, `out` writable, `tested` null or writable.
#[no_mangle]
pub unsafe extern "C" fn gc_equivalent(
    s: *mut GcSession,
    a: *const GcTerm,
    b: *const GcTerm,
    out: *mut *mut c_char,
    tested: *mut u64,
) -> GcStatus {
    with_session(s, |sess| {
        let (a, b) = (term_ref(sess, a)?, term_ref(sess, b)?);
        let l = sess.inner.language();
        let v = equivalent(&a.term, &b.term, &l.lang, &l.map, sess.inner.config.probe, sess.inner.config.eval)
            .map_err(|e| Fail(GcStatus::StaticError, e.to_string()))?;
        if !tested.is_null() {
            tested.write(match v {
                Verdict::Equivalent { tested } => tested as u64,
                _ => 0,
            });
        }
        put(out, c_string(v.to_string()))?;
        Ok(GcStatus::Ok)
    })
}
