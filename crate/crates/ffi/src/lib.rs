//! C ABI over the `qgec` library.
//!
//! Codes and decoders are opaque heap handles. Every fallible call returns a
//! [`QgecStatus`]; on failure a message is kept per thread and can be read
//! with [`qgec_last_error`]. Bit arrays cross the boundary as one byte per
//! bit holding 0 or 1.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use qgec::harness::{run_sweep_with, CodeBundle, CodeId, DecoderId, SweepConfig};
use qgec::{BitVec, Error, NoiseModel, PauliError, ResidualClass, StreamSeeder};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QgecStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    UnknownCode = 4,
    UnknownDecoder = 5,
    Decode = 6,
    Internal = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QgecResidual {
    Trivial = 0,
    LogicalX = 1,
    LogicalZ = 2,
    LogicalY = 3,
    SyndromeNonzero = 4,
}

/// Counts for one Monte Carlo point.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct QgecTally {
    pub trials: u64,
    pub failures: u64,
    pub fail_x: u64,
    pub fail_z: u64,
    pub fail_y: u64,
    pub inconsistent: u64,
    pub rate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

/// A constructed code.
pub struct QgecCode {
    bundle: Arc<CodeBundle>,
}

/// A decoder bound to one code.
pub struct QgecDecoder {
    bundle: Arc<CodeBundle>,
    inner: Box<dyn qgec::decoders::Decoder>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Fail(QgecStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::DimensionMismatch { .. } => QgecStatus::DimensionMismatch,
            Error::UnknownCode(_) => QgecStatus::UnknownCode,
            Error::UnknownDecoder(_) => QgecStatus::UnknownDecoder,
            Error::Decode(_) | Error::Protocol(_) | Error::SweepAborted { .. } => QgecStatus::Decode,
            Error::Parse(_) | Error::Noise(_) | Error::Config(_) => QgecStatus::InvalidArgument,
            _ => QgecStatus::Internal,
        };
        Fail(status, e.to_string())
    }
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> QgecStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QgecStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            QgecStatus::Internal
        }
    }
}

fn null() -> Fail {
    Fail(QgecStatus::NullPointer, "null pointer argument".into())
}

unsafe fn borrow<'a, T>(p: *const T) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(null)
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(QgecStatus::InvalidArgument, "string is not UTF-8".into()))
}

unsafe fn read_bits(p: *const u8, len: usize, expected: usize) -> Result<BitVec, Fail> {
    if len != expected {
        return Err(Error::DimensionMismatch { expected, found: len }.into());
    }
    if p.is_null() {
        return if len == 0 { Ok(BitVec::zeros(0)) } else { Err(null()) };
    }
    let bytes = std::slice::from_raw_parts(p, len);
    let mut v = BitVec::zeros(len);
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            0 => {}
            1 => v.set(i, true),
            _ => {
                return Err(Fail(
                    QgecStatus::InvalidArgument,
                    format!("byte {i} is {b}, expected 0 or 1"),
                ))
            }
        }
    }
    Ok(v)
}

unsafe fn write_bits(v: &BitVec, p: *mut u8, len: usize) -> Result<(), Fail> {
    if len != v.len() {
        return Err(Error::DimensionMismatch {
            expected: v.len(),
            found: len,
        }
        .into());
    }
    if len == 0 {
        return Ok(());
    }
    if p.is_null() {
        return Err(null());
    }
    let out = std::slice::from_raw_parts_mut(p, len);
    for (slot, bit) in out.iter_mut().zip(v.iter()) {
        *slot = bit as u8;
    }
    Ok(())
}

/// Message for the last failed call on this thread, or NULL. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qgec_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qgec_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds `golay:h1|h2|h3` or `toric:<d>`. Free with [`qgec_code_free`].
///
/// # Safety
/// `id` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qgec_code_open(id: *const c_char, out: *mut *mut QgecCode) -> QgecStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        *out = ptr::null_mut();
        let id: CodeId = text(id)?.parse()?;
        let bundle = Arc::new(id.build()?);
        *out = Box::into_raw(Box::new(QgecCode { bundle }));
        Ok(())
    })
}

/// # Safety
/// `code` must come from [`qgec_code_open`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qgec_code_free(code: *mut QgecCode) {
    if !code.is_null() {
        drop(Box::from_raw(code));
    }
}

/// Physical qubits `n`; 0 for NULL.
///
/// # Safety
/// `code` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qgec_code_num_qubits(code: *const QgecCode) -> usize {
    code.as_ref().map_or(0, |c| c.bundle.code.num_qubits())
}

/// Logical qubits `k`; 0 for NULL.
///
/// # Safety
/// `code` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qgec_code_num_logicals(code: *const QgecCode) -> usize {
    code.as_ref().map_or(0, |c| c.bundle.code.num_logicals())
}

/// Syndrome width: Z-check outcomes then X-check outcomes.
///
/// # Safety
/// `code` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qgec_code_syndrome_len(code: *const QgecCode) -> usize {
    code.as_ref().map_or(0, |c| c.bundle.code.syndrome_len())
}

/// Label/correction width `2n`: x-part then z-part.
///
/// # Safety
/// `code` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qgec_code_label_len(code: *const QgecCode) -> usize {
    code.as_ref().map_or(0, |c| c.bundle.code.label_len())
}

/// Writes the syndrome of the Pauli error given as a `2n` label.
///
/// # Safety
/// Pointers must be valid for the given lengths.
#[no_mangle]
pub unsafe extern "C" fn qgec_code_extract_syndrome(
    code: *const QgecCode,
    label: *const u8,
    label_len: usize,
    syndrome: *mut u8,
    syndrome_len: usize,
) -> QgecStatus {
    guard(|| {
        let code = &borrow(code)?.bundle.code;
        let e = PauliError::from_label(&read_bits(label, label_len, code.label_len())?)?;
        write_bits(code.extract_syndrome(&e)?.bits(), syndrome, syndrome_len)
    })
}

/// Classifies a residual (error times correction) given as a `2n` label.
///
/// # Safety
/// Pointers must be valid for the given lengths.
#[no_mangle]
pub unsafe extern "C" fn qgec_code_classify_residual(
    code: *const QgecCode,
    residual: *const u8,
    residual_len: usize,
    out: *mut QgecResidual,
) -> QgecStatus {
    guard(|| {
        let code = &borrow(code)?.bundle.code;
        if out.is_null() {
            return Err(null());
        }
        let r = PauliError::from_label(&read_bits(residual, residual_len, code.label_len())?)?;
        *out = match code.classify_residual(&r)? {
            ResidualClass::Trivial => QgecResidual::Trivial,
            ResidualClass::LogicalX => QgecResidual::LogicalX,
            ResidualClass::LogicalZ => QgecResidual::LogicalZ,
            ResidualClass::LogicalY => QgecResidual::LogicalY,
            ResidualClass::SyndromeNonzero => QgecResidual::SyndromeNonzero,
        };
        Ok(())
    })
}

/// Draws one error from the biased channel on stream `(seed, point, trial)`,
/// the same stream the sweep uses for that trial.
///
/// # Safety
/// Pointers must be valid for the given lengths.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn qgec_sample_error(
    code: *const QgecCode,
    p: f64,
    eta: f64,
    seed: u64,
    point: u64,
    trial: u64,
    label: *mut u8,
    label_len: usize,
) -> QgecStatus {
    guard(|| {
        let code = &borrow(code)?.bundle.code;
        let model = NoiseModel::new(p, eta)?;
        if point >= 1 << 24 || trial >= StreamSeeder::MAX_TRIALS {
            return Err(Fail(QgecStatus::InvalidArgument, "stream index out of range".into()));
        }
        let mut rng = StreamSeeder::new(seed).stream(point, trial);
        write_bits(
            &model.sample_error(code.num_qubits(), &mut rng).to_label(),
            label,
            label_len,
        )
    })
}

/// Creates `table`, `match`, or `external:<target>` for `code`. The decoder
/// keeps its own reference to the code. Free with [`qgec_decoder_free`].
///
/// # Safety
/// `code` must be live, `name` NUL-terminated and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn qgec_decoder_new(
    code: *const QgecCode,
    name: *const c_char,
    out: *mut *mut QgecDecoder,
) -> QgecStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        *out = ptr::null_mut();
        let bundle = Arc::clone(&borrow(code)?.bundle);
        let id: DecoderId = text(name)?.parse()?;
        let inner = bundle.decoder(&id)?;
        *out = Box::into_raw(Box::new(QgecDecoder { bundle, inner }));
        Ok(())
    })
}

/// # Safety
/// `decoder` must come from [`qgec_decoder_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qgec_decoder_free(decoder: *mut QgecDecoder) {
    if !decoder.is_null() {
        drop(Box::from_raw(decoder));
    }
}

/// Decodes one syndrome into a `2n` correction.
///
/// # Safety
/// Pointers must be valid for the given lengths.
#[no_mangle]
pub unsafe extern "C" fn qgec_decoder_decode(
    decoder: *const QgecDecoder,
    syndrome: *const u8,
    syndrome_len: usize,
    correction: *mut u8,
    correction_len: usize,
) -> QgecStatus {
    guard(|| {
        let d = borrow(decoder)?;
        let code = &d.bundle.code;
        let s = code.syndrome_from_bits(read_bits(syndrome, syndrome_len, code.syndrome_len())?)?;
        let outcome = d.inner.decode(&s)?;
        write_bits(&outcome.correction.to_label(), correction, correction_len)
    })
}

/// Runs `trials` Monte Carlo shots at one physical error rate. Matches grid
/// index 0 of a sweep with the same seed.
///
/// # Safety
/// `decoder` must be live and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn qgec_run_point(
    decoder: *const QgecDecoder,
    p: f64,
    eta: f64,
    trials: u64,
    seed: u64,
    out: *mut QgecTally,
) -> QgecStatus {
    guard(|| {
        let d = borrow(decoder)?;
        if out.is_null() {
            return Err(null());
        }
        let config = SweepConfig {
            code: d.bundle.id,
            decoder: None,
            p_min: p,
            p_max: p,
            p_step: 1.0,
            trials,
            eta,
            seed,
        };
        let result = run_sweep_with(&d.bundle, d.inner.as_ref(), &config, |_| Ok(()))?;
        let point = &result.points[0];
        let t = &point.tally;
        *out = QgecTally {
            trials: t.trials,
            failures: t.failures,
            fail_x: t.fail_x,
            fail_z: t.fail_z,
            fail_y: t.fail_y,
            inconsistent: t.inconsistent,
            rate: point.rate,
            ci_low: point.ci_low,
            ci_high: point.ci_high,
        };
        Ok(())
    })
}
