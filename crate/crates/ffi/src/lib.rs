//! C ABI over `crystalca`.
//!
//! Every fallible call returns a [`CcaStatus`]; on failure the message is
//! available from [`cca_last_error`] on the same thread. Strings handed out
//! by the library are owned by the caller and released with
//! [`cca_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use crystalca::engine::CacheManifest;
use crystalca::lab::verify_periods;
use crystalca::reference::{run_suite, Suite};
use crystalca::{omega, Content, Engine, Error, Space, SpaceSpec};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CcaStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    /// Malformed label, tableau, state or content text.
    Parse = 3,
    /// The state has no well-defined image or content.
    NotEvolvable = 4,
    /// Bethe-side quantity undefined for this content.
    Undefined = 5,
    /// Result does not fit the output type.
    Overflow = 6,
    Internal = 7,
    Panic = 8,
}

/// Shared R-table engine.
pub struct CcaEngine {
    inner: Arc<Engine>,
}

/// A tensor product of KR crystals, bound to an engine.
pub struct CcaSpace {
    engine: Arc<Engine>,
    spec: SpaceSpec,
}

impl CcaSpace {
    fn space(&self) -> Space<'_> {
        Space::new(&self.engine, self.spec.clone())
    }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).unwrap_or_default());
}

fn status_of(e: &Error) -> CcaStatus {
    match e {
        Error::InvalidLabel { .. } | Error::Parse { .. } | Error::NotSemistandard { .. } | Error::RankMismatch { .. } => {
            CcaStatus::Parse
        }
        Error::AmbiguousEnergy { .. }
        | Error::NoPlateau { .. }
        | Error::NegativeContent { .. }
        | Error::NotEvolvable { .. }
        | Error::Dies { .. }
        | Error::InvalidContent { .. } => CcaStatus::NotEvolvable,
        Error::SingularF { .. } | Error::NonIntegralOmega { .. } | Error::NotDominant { .. } => CcaStatus::Undefined,
        _ => CcaStatus::Internal,
    }
}

struct Fail(CcaStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

/// Runs `body`, translating errors and panics into a status.
fn guard(body: impl FnOnce() -> Result<(), Fail>) -> CcaStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error("");
            CcaStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside crystalca");
            CcaStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(CcaStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(CcaStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| Fail(CcaStatus::NullArgument, format!("{what} is null")))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(CcaStatus::NullArgument, format!("{what} is null")));
    }
    out.write(value);
    Ok(())
}

fn owned(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

/// Message of the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn cca_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must be null or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn cca_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Creates an engine. `cache_dir` may be null for an in-memory engine.
///
/// # Safety
/// `cache_dir` must be null or a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cca_engine_new(cache_dir: *const c_char, out: *mut *mut CcaEngine) -> CcaStatus {
    guard(|| {
        let cache = if cache_dir.is_null() { None } else { Some(CacheManifest::new(text(cache_dir, "cache_dir")?)) };
        let engine = Box::new(CcaEngine { inner: Arc::new(Engine::with_cache(cache)) });
        put(out, Box::into_raw(engine), "out")
    })
}

/// # Safety
/// `engine` must be null or a handle from [`cca_engine_new`], freed once.
/// Spaces created from it remain usable.
#[no_mangle]
pub unsafe extern "C" fn cca_engine_free(engine: *mut CcaEngine) {
    if !engine.is_null() {
        drop(Box::from_raw(engine));
    }
}

/// Opens the space of A(1)n with factors `"r,l;r,l;..."`.
///
/// # Safety
/// `engine` must be a live handle, `factors` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cca_space_new(
    engine: *const CcaEngine,
    rank: usize,
    factors: *const c_char,
    out: *mut *mut CcaSpace,
) -> CcaStatus {
    guard(|| {
        let engine = handle(engine, "engine")?;
        let spec = SpaceSpec::parse(rank, text(factors, "factors")?)?;
        let space = Box::new(CcaSpace { engine: Arc::clone(&engine.inner), spec });
        put(out, Box::into_raw(space), "out")
    })
}

/// # Safety
/// `space` must be null or a handle from [`cca_space_new`], freed once.
#[no_mangle]
pub unsafe extern "C" fn cca_space_free(space: *mut CcaSpace) {
    if !space.is_null() {
        drop(Box::from_raw(space));
    }
}

/// Number of factors of the space.
///
/// # Safety
/// `space` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cca_space_len(space: *const CcaSpace, out: *mut usize) -> CcaStatus {
    guard(|| put(out, handle(space, "space")?.spec.len(), "out"))
}

/// Image of `state` under T(r,l), written as a dotted state string.
/// Returns `NotEvolvable` when the image is 0.
///
/// # Safety
/// `space` must be a live handle, `state` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cca_evolve(
    space: *const CcaSpace,
    state: *const c_char,
    r: usize,
    l: usize,
    out: *mut *mut c_char,
) -> CcaStatus {
    guard(|| {
        let sp = handle(space, "space")?.space();
        let p = sp.parse_state(text(state, "state")?)?;
        let image = sp.time_evolution(&p, r, l)?;
        let next = image.next.ok_or_else(|| {
            Fail(CcaStatus::NotEvolvable, format!("T({r},{l}) sends the state to 0 ({} fixed carriers)", image.carriers))
        })?;
        put(out, owned(next.to_string()), "out")
    })
}

/// Soliton content in tuple notation, e.g. `((21),(1),∅)`.
///
/// # Safety
/// `space` must be a live handle, `state` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cca_content(space: *const CcaSpace, state: *const c_char, out: *mut *mut c_char) -> CcaStatus {
    guard(|| {
        let sp = handle(space, "space")?.space();
        let m = sp.soliton_content(&sp.parse_state(text(state, "state")?)?)?;
        put(out, owned(m.tuple_notation()), "out")
    })
}

/// Predicted period of `state` under T(r,l) and the measured one, searched
/// up to `max(cap, predicted)` steps. `measured` is 0 if the orbit did not
/// return.
///
/// # Safety
/// `space` must be a live handle, `state` NUL-terminated, outputs writable.
#[no_mangle]
pub unsafe extern "C" fn cca_period(
    space: *const CcaSpace,
    state: *const c_char,
    r: usize,
    l: usize,
    cap: u64,
    predicted: *mut u64,
    measured: *mut u64,
) -> CcaStatus {
    guard(|| {
        let sp = handle(space, "space")?.space();
        let p = sp.parse_state(text(state, "state")?)?;
        let row = verify_periods(&sp, &p, &[(r, l)], cap)?.remove(0);
        let value = u64::try_from(&row.predicted)
            .map_err(|_| Fail(CcaStatus::Overflow, format!("predicted period {} exceeds u64", row.predicted)))?;
        put(predicted, value, "predicted")?;
        put(measured, row.measured.unwrap_or(0), "measured")
    })
}

/// Fermionic count of a content written as `"2,1/1/-"` (colors by '/',
/// rows by ',', '-' empty), as a decimal string.
///
/// # Safety
/// `space` must be a live handle, `content` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cca_omega(space: *const CcaSpace, content: *const c_char, out: *mut *mut c_char) -> CcaStatus {
    guard(|| {
        let s = handle(space, "space")?;
        let m = Content::parse(s.spec.rank(), text(content, "content")?)?;
        put(out, owned(omega(&s.spec, &m)?.to_string()), "out")
    })
}

/// Replays all published tables; writes the number of passing and failing checks.
///
/// # Safety
/// `engine` must be a live handle and outputs writable.
#[no_mangle]
pub unsafe extern "C" fn cca_verify(engine: *const CcaEngine, passed: *mut u32, failed: *mut u32) -> CcaStatus {
    guard(|| {
        let checks = run_suite(&handle(engine, "engine")?.inner, Suite::All)?;
        let bad = checks.iter().filter(|c| !c.passed).count() as u32;
        put(passed, checks.len() as u32 - bad, "passed")?;
        put(failed, bad, "failed")
    })
}
