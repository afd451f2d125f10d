//! C ABI for the starmoments library.
//!
//! Every fallible function returns an [`SmStatus`]. On failure a message is
//! stored per thread and can be read with [`sm_last_error_message`]. Words and
//! graphs are opaque handles that must be released with their `_free`
//! function; strings returned through `char **` out-parameters must be
//! released with [`sm_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, UnwindSafe};
use std::path::Path;
use std::ptr;

use starmoments::digraph::Digraph;
use starmoments::moments::star_moment_formula;
use starmoments::randgraph::{sample, Model, SamplerConfig};
use starmoments::{freegroup, Error, Word};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidArgument = 4,
    CapExceeded = 5,
    Overflow = 6,
    Io = 7,
    GraphFormat = 8,
    SamplingFailed = 9,
    Panic = 10,
}

/// Random digraph model.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmModel {
    /// Configuration model, loops and parallel arcs allowed.
    ConfigurationModel = 0,
    /// Uniform simple regular digraph.
    Uniform = 1,
}

/// Opaque word over the alphabet `{1, *}`.
pub struct SmWord(Word);

/// Opaque directed multigraph.
pub struct SmGraph(Digraph);

type Failure = (SmStatus, String);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> SmStatus {
    match e {
        Error::InvalidCharacter { .. } => SmStatus::ParseError,
        Error::CapExceeded { .. } => SmStatus::CapExceeded,
        Error::Overflow(_) => SmStatus::Overflow,
        Error::Io(_) => SmStatus::Io,
        Error::GraphFormat { .. } => SmStatus::GraphFormat,
        Error::AttemptsExhausted(_) | Error::InfeasibleParameters { .. } => {
            SmStatus::SamplingFailed
        }
        _ => SmStatus::InvalidArgument,
    }
}

fn core(e: Error) -> Failure {
    (status_of(&e), e.to_string())
}

fn guard(f: impl FnOnce() -> Result<(), Failure> + UnwindSafe) -> SmStatus {
    match catch_unwind(f) {
        Ok(Ok(())) => SmStatus::Ok,
        Ok(Err((status, message))) => {
            set_last_error(message);
            status
        }
        Err(_) => {
            set_last_error("internal panic".to_string());
            SmStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err((SmStatus::NullPointer, format!("{name} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (SmStatus::InvalidUtf8, format!("{name} is not valid UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, name: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| (SmStatus::NullPointer, format!("{name} is null")))
}

unsafe fn out_arg<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, Failure> {
    p.as_mut()
        .ok_or_else(|| (SmStatus::NullPointer, format!("{name} is null")))
}

fn to_u64(x: u128, what: &str) -> Result<u64, Failure> {
    u64::try_from(x).map_err(|_| {
        (
            SmStatus::Overflow,
            format!("{what} {x} does not fit in 64 bits"),
        )
    })
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s)
        .map(CString::into_raw)
        .unwrap_or(ptr::null_mut())
}

/// Message of the last failed call on this thread, or null if none.
///
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and must not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn sm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parse a word such as `"1**1"` (`s` is accepted for `*`).
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sm_word_parse(text: *const c_char, out: *mut *mut SmWord) -> SmStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let word: Word = str_arg(text, "text")?.parse().map_err(core)?;
        *out = Box::into_raw(Box::new(SmWord(word)));
        Ok(())
    })
}

/// Release a word. Null is ignored.
///
/// # Safety
/// `word` must come from [`sm_word_parse`] and must not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sm_word_free(word: *mut SmWord) {
    if !word.is_null() {
        drop(Box::from_raw(word));
    }
}

/// Length of a word, 0 for null.
///
/// # Safety
/// `word` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sm_word_len(word: *const SmWord) -> usize {
    word.as_ref().map_or(0, |w| w.0.len())
}

/// Whether the word has as many `1` as `*` letters.
///
/// # Safety
/// `word` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sm_word_is_balanced(word: *const SmWord) -> bool {
    word.as_ref().is_some_and(|w| w.0.is_balanced())
}

/// Star moment of `word` at degree `d` as a decimal string.
///
/// # Safety
/// `word` must be a live handle and `out` a valid pointer. Free the result
/// with [`sm_string_free`].
#[no_mangle]
pub unsafe extern "C" fn sm_star_moment(
    word: *const SmWord,
    d: usize,
    out: *mut *mut c_char,
) -> SmStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let value = star_moment_formula(&ref_arg(word, "word")?.0, d).map_err(core)?;
        *out = into_c_string(value.to_string());
        Ok(())
    })
}

/// Star moment of `word` at degree `d`; `SM_STATUS_OVERFLOW` if it exceeds 64 bits.
///
/// # Safety
/// `word` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sm_star_moment_u64(
    word: *const SmWord,
    d: usize,
    out: *mut u64,
) -> SmStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let value = star_moment_formula(&ref_arg(word, "word")?.0, d).map_err(core)?;
        *out = u64::try_from(value).map_err(|e| {
            (
                SmStatus::Overflow,
                format!("star moment {} does not fit in 64 bits", e.into_original()),
            )
        })?;
        Ok(())
    })
}

/// Number of closed paths for `word` in the free group on `d` generators,
/// counted by direct enumeration.
///
/// # Safety
/// `word` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sm_count_paths(word: *const SmWord, d: usize, out: *mut u64) -> SmStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = freegroup::count_wpaths(&ref_arg(word, "word")?.0, d).map_err(core)?;
        Ok(())
    })
}

/// Build a graph on `n` vertices from `len` arcs `tails[i] -> heads[i]` (0-based).
///
/// # Safety
/// `tails` and `heads` must point to `len` elements (or be null when `len`
/// is 0) and `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sm_graph_from_arcs(
    n: usize,
    tails: *const usize,
    heads: *const usize,
    len: usize,
    out: *mut *mut SmGraph,
) -> SmStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let (tails, heads) = if len == 0 {
            (&[][..], &[][..])
        } else {
            if tails.is_null() || heads.is_null() {
                return Err((SmStatus::NullPointer, "arc arrays are null".to_string()));
            }
            (
                std::slice::from_raw_parts(tails, len),
                std::slice::from_raw_parts(heads, len),
            )
        };
        let g = Digraph::from_arcs(n, tails.iter().copied().zip(heads.iter().copied()))
            .map_err(core)?;
        *out = Box::into_raw(Box::new(SmGraph(g)));
        Ok(())
    })
}

/// Read a graph file. The declared degree is written to `degree` if non-null.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sm_graph_read(
    path: *const c_char,
    out: *mut *mut SmGraph,
    degree: *mut usize,
) -> SmStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let (g, d) = Digraph::read_file(Path::new(str_arg(path, "path")?)).map_err(core)?;
        if let Some(degree) = degree.as_mut() {
            *degree = d;
        }
        *out = Box::into_raw(Box::new(SmGraph(g)));
        Ok(())
    })
}

/// Write a graph file with header degree `d`.
///
/// # Safety
/// `graph` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn sm_graph_write(
    graph: *const SmGraph,
    path: *const c_char,
    d: usize,
) -> SmStatus {
    guard(|| {
        let g = ref_arg(graph, "graph")?;
        g.0.write_file(Path::new(str_arg(path, "path")?), d)
            .map_err(core)
    })
}

/// Sample a `d`-regular digraph on `n` vertices.
///
/// `max_attempts` bounds the rejection loop of the uniform model; 0 selects
/// the default.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sm_graph_sample(
    n: usize,
    d: usize,
    seed: u64,
    model: SmModel,
    max_attempts: usize,
    out: *mut *mut SmGraph,
) -> SmStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let mut cfg = SamplerConfig::new(n, d, seed);
        if max_attempts > 0 {
            cfg.max_attempts = max_attempts;
        }
        let model = match model {
            SmModel::ConfigurationModel => Model::Cm,
            SmModel::Uniform => Model::Uniform,
        };
        *out = Box::into_raw(Box::new(SmGraph(sample(&cfg, model).map_err(core)?)));
        Ok(())
    })
}

/// Release a graph. Null is ignored.
///
/// # Safety
/// `graph` must come from this library and must not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sm_graph_free(graph: *mut SmGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Number of vertices, 0 for null.
///
/// # Safety
/// `graph` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sm_graph_vertex_count(graph: *const SmGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.0.vertex_count())
}

/// Number of arcs, 0 for null.
///
/// # Safety
/// `graph` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sm_graph_arc_count(graph: *const SmGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.0.arc_count())
}

/// `Tr(A^w)`, the number of closed walks following `word`.
///
/// # Safety
/// `graph` and `word` must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sm_graph_trace(
    graph: *const SmGraph,
    word: *const SmWord,
    out: *mut u64,
) -> SmStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let g = ref_arg(graph, "graph")?;
        let t =
            g.0.star_moment_trace(&ref_arg(word, "word")?.0)
                .map_err(core)?;
        *out = to_u64(t, "trace")?;
        Ok(())
    })
}

/// Number of plain cycles of length `j`.
///
/// # Safety
/// `graph` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sm_graph_cycle_count(
    graph: *const SmGraph,
    j: usize,
    out: *mut u64,
) -> SmStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let c = ref_arg(graph, "graph")?
            .0
            .plain_cycle_count(j)
            .map_err(core)?;
        *out = to_u64(c.count, "cycle count")?;
        Ok(())
    })
}

/// Number of violations found by the local tree check of radius `k`.
///
/// # Safety
/// `graph` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sm_graph_tree_violations(
    graph: *const SmGraph,
    d: usize,
    k: usize,
    out: *mut usize,
) -> SmStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let r = ref_arg(graph, "graph")?
            .0
            .tree_likeness_check(d, k)
            .map_err(core)?;
        *out = r.violations.len();
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(s: &str) -> *mut SmWord {
        let c = CString::new(s).unwrap();
        let mut w = ptr::null_mut();
        assert_eq!(unsafe { sm_word_parse(c.as_ptr(), &mut w) }, SmStatus::Ok);
        w
    }

    #[test]
    fn status_mapping() {
        assert_eq!(status_of(&Error::Overflow("x")), SmStatus::Overflow);
        assert_eq!(
            status_of(&Error::InvalidCharacter {
                position: 1,
                found: 'x'
            }),
            SmStatus::ParseError
        );
        assert_eq!(
            status_of(&Error::AttemptsExhausted(3)),
            SmStatus::SamplingFailed
        );
        assert_eq!(
            status_of(&Error::DegreeOutOfRange(0)),
            SmStatus::InvalidArgument
        );
    }

    #[test]
    fn moment_as_u64_and_string() {
        let w = word("1*1*");
        let mut v = 0u64;
        assert_eq!(unsafe { sm_star_moment_u64(w, 3, &mut v) }, SmStatus::Ok);
        assert_eq!(v, 15);
        let mut s = ptr::null_mut();
        assert_eq!(unsafe { sm_star_moment(w, 3, &mut s) }, SmStatus::Ok);
        assert_eq!(unsafe { CStr::from_ptr(s) }.to_str().unwrap(), "15");
        unsafe {
            sm_string_free(s);
            sm_word_free(w);
        }
    }

    #[test]
    fn null_arguments() {
        let mut v = 0u64;
        assert_eq!(
            unsafe { sm_star_moment_u64(ptr::null(), 2, &mut v) },
            SmStatus::NullPointer
        );
        let msg = unsafe { CStr::from_ptr(sm_last_error_message()) };
        assert_eq!(msg.to_str().unwrap(), "word is null");
    }
}
