//! C ABI over `dnalex`.
//!
//! Every fallible call returns a [`DnalexStatus`]; on failure the message is
//! available from [`dnalex_last_error`] on the same thread. Strings handed
//! out by the library are owned by the caller and released with
//! [`dnalex_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use dnalex::lexicode::{build_lexicode, CheckMode, LexicodeOptions, LinearCode, OrderedBasis};
use dnalex::metrics::{edit_distance, strand_hamming, CostModel};
use dnalex::property::PropertySpec;
use dnalex::z4::{phi, phi_inv, DnaStrand, Z4Vector};
use dnalex::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DnalexStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    NonMultiplicative = 4,
    OutOfRange = 5,
    Panic = 6,
}

/// Opaque handle to a constructed code.
pub struct DnalexCode {
    code: LinearCode,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn fail(status: DnalexStatus, msg: impl Into<String>) -> DnalexStatus {
    set_error(msg);
    status
}

fn from_error(e: Error) -> DnalexStatus {
    let status = match e {
        Error::NonMultiplicative(_) => DnalexStatus::NonMultiplicative,
        _ => DnalexStatus::InvalidArgument,
    };
    fail(status, e.to_string())
}

fn guard(f: impl FnOnce() -> DnalexStatus) -> DnalexStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(DnalexStatus::Panic, "internal panic"))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, DnalexStatus> {
    if p.is_null() {
        return Err(fail(DnalexStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(DnalexStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> DnalexStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            DnalexStatus::Ok
        }
        Err(_) => fail(DnalexStatus::InvalidArgument, "string contains NUL"),
    }
}

/// Message for the last failed call on this thread, or NULL. The pointer is
/// valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn dnalex_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn dnalex_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Edit distance between two strands. `cost_model` may be NULL for unit
/// costs, otherwise it holds the text of a cost file.
///
/// # Safety
/// String arguments must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dnalex_edit_distance(
    s: *const c_char,
    t: *const c_char,
    cost_model: *const c_char,
    out: *mut f64,
) -> DnalexStatus {
    guard(|| {
        if out.is_null() {
            return fail(DnalexStatus::NullPointer, "out is null");
        }
        let (s, t) = match (read_str(s, "s"), read_str(t, "t")) {
            (Ok(s), Ok(t)) => (s, t),
            (Err(e), _) | (_, Err(e)) => return e,
        };
        let cm = if cost_model.is_null() {
            CostModel::unit()
        } else {
            match read_str(cost_model, "cost_model").map(CostModel::parse) {
                Ok(Ok(cm)) => cm,
                Ok(Err(e)) => return from_error(e),
                Err(e) => return e,
            }
        };
        match (s.parse::<DnaStrand>(), t.parse::<DnaStrand>()) {
            (Ok(s), Ok(t)) => {
                *out = edit_distance(s.bases(), t.bases(), &cm);
                DnalexStatus::Ok
            }
            (Err(e), _) | (_, Err(e)) => from_error(e),
        }
    })
}

/// Hamming distance between two strands of equal length.
///
/// # Safety
/// String arguments must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dnalex_hamming_distance(s: *const c_char, t: *const c_char, out: *mut usize) -> DnalexStatus {
    guard(|| {
        if out.is_null() {
            return fail(DnalexStatus::NullPointer, "out is null");
        }
        let (s, t) = match (read_str(s, "s"), read_str(t, "t")) {
            (Ok(s), Ok(t)) => (s, t),
            (Err(e), _) | (_, Err(e)) => return e,
        };
        let parsed = s.parse::<DnaStrand>().and_then(|s| Ok((s, t.parse::<DnaStrand>()?)));
        match parsed.and_then(|(s, t)| strand_hamming(s.bases(), t.bases())) {
            Ok(d) => {
                *out = d;
                DnalexStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Maps a Z4 digit string to its strand. Free the result with
/// [`dnalex_string_free`].
///
/// # Safety
/// `word` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dnalex_phi(word: *const c_char, out: *mut *mut c_char) -> DnalexStatus {
    guard(|| {
        if out.is_null() {
            return fail(DnalexStatus::NullPointer, "out is null");
        }
        let word = match read_str(word, "word") {
            Ok(w) => w,
            Err(e) => return e,
        };
        match word.parse::<Z4Vector>() {
            Ok(x) => write_string(out, phi(&x).to_string()),
            Err(e) => from_error(e),
        }
    })
}

/// Maps a strand to its Z4 digit string. Free the result with
/// [`dnalex_string_free`].
///
/// # Safety
/// `strand` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dnalex_phi_inv(strand: *const c_char, out: *mut *mut c_char) -> DnalexStatus {
    guard(|| {
        if out.is_null() {
            return fail(DnalexStatus::NullPointer, "out is null");
        }
        let strand = match read_str(strand, "strand") {
            Ok(s) => s,
            Err(e) => return e,
        };
        match strand.parse::<DnaStrand>().and_then(|s| phi_inv(&s)) {
            Ok(x) => write_string(out, x.to_string()),
            Err(e) => from_error(e),
        }
    })
}

/// Builds the lexicode of length `n` over the canonical basis. `mode` is
/// `"full-check"`, `"as-written"`, or NULL for full-check.
///
/// # Safety
/// String arguments must be NUL-terminated; `out` must be writable. The
/// handle must be released with [`dnalex_code_free`].
#[no_mangle]
pub unsafe extern "C" fn dnalex_code_build(
    n: usize,
    property: *const c_char,
    mode: *const c_char,
    out: *mut *mut DnalexCode,
) -> DnalexStatus {
    guard(|| {
        if out.is_null() {
            return fail(DnalexStatus::NullPointer, "out is null");
        }
        let property = match read_str(property, "property") {
            Ok(p) => p,
            Err(e) => return e,
        };
        let mode = if mode.is_null() {
            CheckMode::FullCheck
        } else {
            match read_str(mode, "mode").map(str::parse::<CheckMode>) {
                Ok(Ok(m)) => m,
                Ok(Err(e)) => return from_error(e),
                Err(e) => return e,
            }
        };
        let built = OrderedBasis::canonical(n).and_then(|basis| {
            let p = PropertySpec::parse(property, &CostModel::unit())?;
            build_lexicode(&basis, &p, &LexicodeOptions { mode, ..LexicodeOptions::default() })
        });
        match built {
            Ok(code) => {
                *out = Box::into_raw(Box::new(DnalexCode { code }));
                DnalexStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Number of codewords, or 0 for a NULL handle.
///
/// # Safety
/// `code` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dnalex_code_size(code: *const DnalexCode) -> usize {
    code.as_ref().map_or(0, |c| c.code.size())
}

/// Word length, or 0 for a NULL handle.
///
/// # Safety
/// `code` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dnalex_code_length(code: *const DnalexCode) -> usize {
    code.as_ref().map_or(0, |c| c.code.len())
}

/// Minimum Hamming weight over nonzero codewords; 0 if the code is `{0}`.
///
/// # Safety
/// `code` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dnalex_code_min_distance(code: *const DnalexCode) -> usize {
    code.as_ref().and_then(|c| c.code.min_nonzero_weight()).unwrap_or(0)
}

/// Codeword `index` in construction order, as a strand (`as_dna`) or as
/// Z4 digits. Free the result with [`dnalex_string_free`].
///
/// # Safety
/// `code` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dnalex_code_word(
    code: *const DnalexCode,
    index: usize,
    as_dna: bool,
    out: *mut *mut c_char,
) -> DnalexStatus {
    guard(|| {
        let Some(code) = code.as_ref() else {
            return fail(DnalexStatus::NullPointer, "code is null");
        };
        if out.is_null() {
            return fail(DnalexStatus::NullPointer, "out is null");
        }
        let Some(word) = code.code.codewords().get(index) else {
            return fail(DnalexStatus::OutOfRange, format!("index {index} out of range for {} words", code.code.size()));
        };
        let text = if as_dna { phi(word).to_string() } else { word.to_string() };
        write_string(out, text)
    })
}

/// # Safety
/// `code` must be NULL or a handle from [`dnalex_code_build`] that has not
/// been freed.
#[no_mangle]
pub unsafe extern "C" fn dnalex_code_free(code: *mut DnalexCode) {
    if !code.is_null() {
        drop(Box::from_raw(code));
    }
}
