//! C ABI for the identity testing engine.
//!
//! Circuits travel across the boundary as opaque handles created by
//! [`sps_pit_circuit_parse`] and released by [`sps_pit_circuit_free`].
//! Every fallible call returns a status code; on failure a human-readable
//! message is available from [`sps_pit_last_error_message`] until the next
//! failing call on the same thread. Strings returned through out-pointers
//! are owned by the caller and must be released with
//! [`sps_pit_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use sps_pit::oracle::SzVerdict;
use sps_pit::pit::Verdict;
use sps_pit::{
    expand, is_zero_oracle, parse_circuit, pit_auto, pit_complex, pit_prime_field, pit_rational,
    schwartz_zippel_test, serialize_circuit, Circuit, Error, FieldDescriptor,
};

/// Opaque circuit handle.
pub struct SpsPitCircuit {
    inner: Circuit,
}

/// Status code returned by every fallible call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SpsPitStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// Input text was not valid UTF-8.
    InvalidUtf8 = 2,
    /// The circuit or matrix text failed to parse.
    ParseError = 3,
    /// Scalars from different fields were mixed.
    MixedFields = 4,
    /// Division by zero or a vanishing factorial.
    Arithmetic = 5,
    /// An instance exceeded a size or fan-in guard.
    TooLarge = 6,
    /// The prime-field pipeline needs char(F) > d.
    UnsupportedCharacteristic = 7,
    /// The requested pipeline does not apply to the circuit's field.
    InvalidArgument = 8,
}

/// Pipeline selection for [`sps_pit_check`].
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SpsPitMode {
    /// Dispatch on the circuit's field.
    Auto = 0,
    /// All-ones Hadamard witness (fields Q and Qi).
    Hadamard = 1,
    /// Noncommutative branching-program test (prime fields).
    Ncabp = 2,
    /// Brute-force expansion oracle (small instances only).
    Oracle = 3,
}

/// Verdict of a deterministic check.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SpsPitVerdict {
    Zero = 0,
    Nonzero = 1,
}

/// Result of [`sps_pit_check`].
#[repr(C)]
pub struct SpsPitReport {
    pub verdict: SpsPitVerdict,
    /// Max product fan-in d.
    pub fan_in: u64,
    /// Number of product terms s.
    pub terms: u64,
    /// Number of variables n.
    pub nvars: u64,
    pub time_ms: u64,
    /// All-ones witness value as a scalar literal; null when the pipeline
    /// yields no witness. Free with [`sps_pit_string_free`].
    pub witness: *mut c_char,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_of(err: &Error) -> SpsPitStatus {
    match err {
        Error::Parse { .. } | Error::FieldMismatch { .. } | Error::Arity { .. } => {
            SpsPitStatus::ParseError
        }
        Error::MixedFields => SpsPitStatus::MixedFields,
        Error::DivisionByZero | Error::NonInvertibleFactorial => SpsPitStatus::Arithmetic,
        Error::FanInTooLarge { .. } | Error::TooLarge(_) => SpsPitStatus::TooLarge,
        Error::UnsupportedCharacteristic { .. } => SpsPitStatus::UnsupportedCharacteristic,
        _ => SpsPitStatus::InvalidArgument,
    }
}

fn fail(err: &Error) -> SpsPitStatus {
    set_error(&err.to_string());
    status_of(err)
}

/// Message describing the most recent failure on this thread. The pointer
/// stays valid until the next failing call on the same thread. Never null.
#[no_mangle]
pub extern "C" fn sps_pit_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn sps_pit_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}

/// Parse a circuit from its text format.
///
/// # Safety
/// `text` must point to a NUL-terminated string and `out` must be a valid
/// location to store the handle. On success the handle must eventually be
/// released with [`sps_pit_circuit_free`].
#[no_mangle]
pub unsafe extern "C" fn sps_pit_circuit_parse(
    text: *const c_char,
    out: *mut *mut SpsPitCircuit,
) -> SpsPitStatus {
    if text.is_null() || out.is_null() {
        set_error("null argument");
        return SpsPitStatus::NullArgument;
    }
    let Ok(text) = CStr::from_ptr(text).to_str() else {
        set_error("input is not valid UTF-8");
        return SpsPitStatus::InvalidUtf8;
    };
    match parse_circuit(text) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(SpsPitCircuit { inner }));
            SpsPitStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Release a circuit handle. Null is a no-op.
///
/// # Safety
/// `circuit` must be a handle from [`sps_pit_circuit_parse`] that has not
/// been freed already.
#[no_mangle]
pub unsafe extern "C" fn sps_pit_circuit_free(circuit: *mut SpsPitCircuit) {
    if !circuit.is_null() {
        drop(Box::from_raw(circuit));
    }
}

/// Release a string returned by this library. Null is a no-op.
///
/// # Safety
/// `s` must be a string pointer returned by this library that has not been
/// freed already.
#[no_mangle]
pub unsafe extern "C" fn sps_pit_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

fn export_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " "))
        .map(CString::into_raw)
        .unwrap_or(ptr::null_mut())
}

/// Render a circuit back into its canonical text format.
///
/// # Safety
/// `circuit` must be a live handle; `out` must be valid. The returned
/// string is freed with [`sps_pit_string_free`].
#[no_mangle]
pub unsafe extern "C" fn sps_pit_circuit_serialize(
    circuit: *const SpsPitCircuit,
    out: *mut *mut c_char,
) -> SpsPitStatus {
    if circuit.is_null() || out.is_null() {
        set_error("null argument");
        return SpsPitStatus::NullArgument;
    }
    *out = export_string(serialize_circuit(&(*circuit).inner));
    SpsPitStatus::Ok
}

/// Expand a circuit into its sorted monomial listing (oracle path; guarded
/// by the dense-size limit).
///
/// # Safety
/// `circuit` must be a live handle; `out` must be valid. The returned
/// string is freed with [`sps_pit_string_free`].
#[no_mangle]
pub unsafe extern "C" fn sps_pit_circuit_expand(
    circuit: *const SpsPitCircuit,
    out: *mut *mut c_char,
) -> SpsPitStatus {
    if circuit.is_null() || out.is_null() {
        set_error("null argument");
        return SpsPitStatus::NullArgument;
    }
    match expand(&(*circuit).inner) {
        Ok(poly) => {
            *out = export_string(poly.render());
            SpsPitStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Run a deterministic identity test (or the expansion oracle) and fill in
/// the report.
///
/// # Safety
/// `circuit` must be a live handle and `report` a valid location. On
/// success the report's witness string, when non-null, must be freed with
/// [`sps_pit_string_free`].
#[no_mangle]
pub unsafe extern "C" fn sps_pit_check(
    circuit: *const SpsPitCircuit,
    mode: SpsPitMode,
    report: *mut SpsPitReport,
) -> SpsPitStatus {
    if circuit.is_null() || report.is_null() {
        set_error("null argument");
        return SpsPitStatus::NullArgument;
    }
    let c = &(*circuit).inner;
    let outcome = match mode {
        SpsPitMode::Auto => pit_auto(c),
        SpsPitMode::Hadamard => match c.field() {
            FieldDescriptor::Q => pit_rational(c),
            FieldDescriptor::Qi => pit_complex(c),
            FieldDescriptor::Fp(_) => Err(Error::InvalidParameter(
                "the Hadamard mode requires a circuit over Q or Qi".into(),
            )),
        },
        SpsPitMode::Ncabp => match c.field() {
            FieldDescriptor::Fp(_) => pit_prime_field(c),
            _ => Err(Error::InvalidParameter(
                "the branching-program mode requires a prime-field circuit".into(),
            )),
        },
        SpsPitMode::Oracle => {
            let started = std::time::Instant::now();
            return match is_zero_oracle(c) {
                Ok(zero) => {
                    *report = SpsPitReport {
                        verdict: if zero {
                            SpsPitVerdict::Zero
                        } else {
                            SpsPitVerdict::Nonzero
                        },
                        fan_in: c.max_fan_in() as u64,
                        terms: c.num_terms() as u64,
                        nvars: c.nvars() as u64,
                        time_ms: started.elapsed().as_millis() as u64,
                        witness: ptr::null_mut(),
                    };
                    SpsPitStatus::Ok
                }
                Err(e) => fail(&e),
            };
        }
    };
    match outcome {
        Ok(v) => {
            *report = SpsPitReport {
                verdict: match v.verdict {
                    Verdict::Zero => SpsPitVerdict::Zero,
                    Verdict::Nonzero => SpsPitVerdict::Nonzero,
                },
                fan_in: v.stats.d as u64,
                terms: v.stats.s as u64,
                nvars: v.stats.n as u64,
                time_ms: v.stats.elapsed.as_millis() as u64,
                witness: match v.witness {
                    Some(w) => export_string(w.to_string()),
                    None => ptr::null_mut(),
                },
            };
            SpsPitStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Randomized evaluation check: writes 1 when some evaluation was nonzero,
/// 0 when all `trials` evaluations vanished. Advisory only.
///
/// # Safety
/// `circuit` must be a live handle and `out_nonzero` a valid location.
#[no_mangle]
pub unsafe extern "C" fn sps_pit_check_randomized(
    circuit: *const SpsPitCircuit,
    trials: u32,
    seed: u64,
    out_nonzero: *mut i32,
) -> SpsPitStatus {
    if circuit.is_null() || out_nonzero.is_null() {
        set_error("null argument");
        return SpsPitStatus::NullArgument;
    }
    match schwartz_zippel_test(&(*circuit).inner, trials, seed) {
        Ok(verdict) => {
            *out_nonzero = match verdict {
                SzVerdict::Nonzero => 1,
                SzVerdict::ProbablyZero => 0,
            };
            SpsPitStatus::Ok
        }
        Err(e) => fail(&e),
    }
}
