//! C ABI over `qlie-core`.
//!
//! Every function returns a [`QlieStatus`]. On anything other than
//! `QLIE_STATUS_OK` or `QLIE_STATUS_VERIFY_FAILED`, [`qlie_last_error`]
//! describes what went wrong on the calling thread. Strings handed out by the
//! library are owned by the caller and released with [`qlie_string_free`];
//! operator handles are released with [`qlie_operator_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qlie_core::cg::{extended_rhat, sigma_cg, sigma_cg_family, structure_constants};
use qlie_core::cli::{run_suite, Suite};
use qlie_core::scalar::parse_rational;
use qlie_core::verify::{check_braid, check_cross_construction, VerificationReport};
use qlie_core::{Error, Operator, Scalar, Specialization};

/// Result of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QlieStatus {
    Ok = 0,
    /// The call succeeded and the checked identity does not hold.
    VerifyFailed = 1,
    InvalidArgument = 2,
    NullPointer = 3,
    /// A bug inside the library; the message has details.
    Internal = 4,
}

/// Closed-form matrices that can be constructed directly.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QlieMatrix {
    Sigma = 0,
    SigmaFamily = 1,
    Extended = 2,
}

/// Opaque handle to a sparse operator with exact symbolic entries.
pub struct QlieOperator {
    inner: Operator,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

enum Failure {
    Null(&'static str),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome = Result<QlieStatus, Failure>;

fn guard<F: FnOnce() -> Outcome>(f: F) -> QlieStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => status,
        Ok(Err(Failure::Null(what))) => {
            set_last_error(&format!("{what} is null"));
            QlieStatus::NullPointer
        }
        Ok(Err(Failure::Core(e))) => {
            set_last_error(&e.to_string());
            QlieStatus::InvalidArgument
        }
        Err(_) => {
            set_last_error("internal panic");
            QlieStatus::Internal
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::Core(Error::Invalid(format!("{what} is not UTF-8"))))
}

unsafe fn opt_rational(p: *const c_char, what: &'static str) -> Result<Option<qlie_core::scalar::Rational>, Failure> {
    if p.is_null() {
        return Ok(None);
    }
    Ok(Some(parse_rational(str_arg(p, what)?)?))
}

unsafe fn spec_args(beta: *const c_char, c: *const c_char, p: *const c_char) -> Result<Specialization, Failure> {
    let spec = Specialization {
        beta: opt_rational(beta, "beta")?,
        c: opt_rational(c, "C")?,
        p: opt_rational(p, "p")?,
    };
    if spec.p.as_ref().is_some_and(|v| Scalar::from_rational(v.clone()).is_zero()) {
        return Err(Error::ZeroP.into());
    }
    Ok(spec)
}

unsafe fn op_arg<'a>(op: *const QlieOperator) -> Result<&'a QlieOperator, Failure> {
    op.as_ref().ok_or(Failure::Null("operator"))
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null("output pointer"));
    }
    let c = CString::new(s).map_err(|_| Error::Invalid("string contains NUL".into()))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn put_operator(out: *mut *mut QlieOperator, op: Operator) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null("output pointer"));
    }
    *out = Box::into_raw(Box::new(QlieOperator { inner: op }));
    Ok(())
}

unsafe fn put_reports(out: *mut *mut c_char, reports: &[VerificationReport]) -> Outcome {
    let json = qlie_core::cli::format_reports(reports, qlie_core::cli::Format::Json)?;
    put_string(out, json)?;
    Ok(if reports.iter().all(|r| r.pass) {
        QlieStatus::Ok
    } else {
        QlieStatus::VerifyFailed
    })
}

/// Message for the last failing call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qlie_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string produced by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qlie_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds one of the closed-form matrices for `n >= 1` with symbolic β, C, p.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for a handle.
#[no_mangle]
pub unsafe extern "C" fn qlie_operator_new(kind: QlieMatrix, n: u32, out: *mut *mut QlieOperator) -> QlieStatus {
    guard(|| {
        let n = n as usize;
        let op = match kind {
            QlieMatrix::Sigma => sigma_cg(n)?,
            QlieMatrix::SigmaFamily => sigma_cg_family(n)?,
            QlieMatrix::Extended => extended_rhat(n)?,
        };
        put_operator(out, op)?;
        Ok(QlieStatus::Ok)
    })
}

/// Parses an operator from its JSON form (`{"n", "legs", "entries"}`).
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qlie_operator_from_json(json: *const c_char, out: *mut *mut QlieOperator) -> QlieStatus {
    guard(|| {
        let op = Operator::from_json(str_arg(json, "json")?)?;
        put_operator(out, op)?;
        Ok(QlieStatus::Ok)
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `op` must be null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn qlie_operator_free(op: *mut QlieOperator) {
    if !op.is_null() {
        drop(Box::from_raw(op));
    }
}

/// Writes n and the number of legs.
///
/// # Safety
/// `op` must be a live handle; `n` and `legs` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qlie_operator_shape(op: *const QlieOperator, n: *mut u32, legs: *mut u32) -> QlieStatus {
    guard(|| {
        let op = op_arg(op)?;
        if n.is_null() || legs.is_null() {
            return Err(Failure::Null("output pointer"));
        }
        *n = op.inner.n() as u32;
        *legs = op.inner.legs() as u32;
        Ok(QlieStatus::Ok)
    })
}

/// Number of nonzero entries.
///
/// # Safety
/// `op` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qlie_operator_nnz(op: *const QlieOperator, out: *mut usize) -> QlieStatus {
    guard(|| {
        let op = op_arg(op)?;
        if out.is_null() {
            return Err(Failure::Null("output pointer"));
        }
        *out = op.inner.nnz();
        Ok(QlieStatus::Ok)
    })
}

/// Entry (i, j; k, l) of a two-leg operator as a canonical scalar string.
///
/// # Safety
/// `op` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qlie_operator_get(
    op: *const QlieOperator,
    i: u32,
    j: u32,
    k: u32,
    l: u32,
    out: *mut *mut c_char,
) -> QlieStatus {
    guard(|| {
        let op = op_arg(op)?;
        let v = op.inner.get(&[i as usize, j as usize], &[k as usize, l as usize])?;
        put_string(out, v.to_string())?;
        Ok(QlieStatus::Ok)
    })
}

/// Overwrites entry (i, j; k, l) of a two-leg operator with a parsed scalar
/// such as `"1 - b"` or `"2*C*p^-1"`.
///
/// # Safety
/// `op` must be a live handle; `value` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn qlie_operator_set(
    op: *mut QlieOperator,
    i: u32,
    j: u32,
    k: u32,
    l: u32,
    value: *const c_char,
) -> QlieStatus {
    guard(|| {
        let v: Scalar = str_arg(value, "value")?.parse()?;
        let op = op.as_mut().ok_or(Failure::Null("operator"))?;
        op.inner.set(&[i as usize, j as usize], &[k as usize, l as usize], v)?;
        Ok(QlieStatus::Ok)
    })
}

/// New handle with β, C and p substituted where the argument is non-null.
///
/// # Safety
/// `op` must be a live handle; value pointers must be null or NUL-terminated;
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qlie_operator_specialize(
    op: *const QlieOperator,
    beta: *const c_char,
    c: *const c_char,
    p: *const c_char,
    out: *mut *mut QlieOperator,
) -> QlieStatus {
    guard(|| {
        let op = op_arg(op)?;
        let spec = spec_args(beta, c, p)?;
        put_operator(out, op.inner.specialize(&spec)?)?;
        Ok(QlieStatus::Ok)
    })
}

/// JSON form of the operator.
///
/// # Safety
/// `op` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qlie_operator_to_json(op: *const QlieOperator, out: *mut *mut c_char) -> QlieStatus {
    guard(|| {
        let op = op_arg(op)?;
        put_string(out, op.inner.to_json()?)?;
        Ok(QlieStatus::Ok)
    })
}

/// JSON form of the structure constants C^k_{ij} for `n`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qlie_constants_to_json(n: u32, out: *mut *mut c_char) -> QlieStatus {
    guard(|| {
        put_string(out, structure_constants(n as usize)?.to_json()?)?;
        Ok(QlieStatus::Ok)
    })
}

/// Checks the braid relation for a two-leg handle and writes the report.
/// Returns `QLIE_STATUS_VERIFY_FAILED` when the relation does not hold.
///
/// # Safety
/// `op` must be a live handle; value pointers must be null or NUL-terminated;
/// `report` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qlie_check_braid(
    op: *const QlieOperator,
    beta: *const c_char,
    c: *const c_char,
    p: *const c_char,
    report: *mut *mut c_char,
) -> QlieStatus {
    guard(|| {
        let op = op_arg(op)?;
        let spec = spec_args(beta, c, p)?;
        let rep = check_braid(&op.inner, &spec)?;
        put_reports(report, &[rep])
    })
}

/// Runs a named suite (`braid`, `ybe`, `cybe`, `components`, `ybfr`, `qlie`,
/// `rtt` or `all`) and writes the combined JSON report.
///
/// # Safety
/// `suite` must be NUL-terminated; value pointers must be null or
/// NUL-terminated; `report` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qlie_verify(
    suite: *const c_char,
    n: u32,
    beta: *const c_char,
    c: *const c_char,
    p: *const c_char,
    seed: u64,
    report: *mut *mut c_char,
) -> QlieStatus {
    guard(|| {
        let suite: Suite = str_arg(suite, "suite")?.parse()?;
        let spec = spec_args(beta, c, p)?;
        let reports = run_suite(suite, n as usize, &spec, seed, None)?;
        put_reports(report, &reports)
    })
}

/// Compares the matrix of the functional R̂ with the extended matrix.
///
/// # Safety
/// `report` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qlie_cross_check(n: u32, report: *mut *mut c_char) -> QlieStatus {
    guard(|| {
        let rep = check_cross_construction(n as usize, &Specialization::default(), 1)?;
        put_reports(report, &[rep])
    })
}
