//! C interface to `templie`.
//!
//! Matrices are returned as opaque `TemplieMatrix` handles owning exact
//! β-polynomial entries. Every fallible call returns a `TemplieStatus`;
//! on failure a message is available from `templie_last_error` on the
//! same thread until the next call. Strings handed out by the library
//! must be released with `templie_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use templie::intertwiner::{f_matrix, inner_product_s};
use templie::poly_matrix::PolyMatrix;
use templie::scalar::ScalarPoly;
use templie::spectral::{xxz_reality_at, LoopCase, Verdict};
use templie::spin::{h_spin_matrix, h_spin_sector};
use templie::standard::{gram_matrix, hamiltonian_matrix};
use templie::structure::{dimension_audit, sector_decomposition, Ell, SummandKind};
use templie::suites::{check_cap, run_suite, Suite, SuiteParams};
use templie::Error;

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TemplieStatus {
    Ok = 0,
    InvalidArgument = 1,
    SizeCap = 2,
    Numerical = 3,
    NullPointer = 4,
    OutOfRange = 5,
    BufferTooSmall = 6,
    Overflow = 7,
    Internal = 8,
}

/// Outcome of a numerical certification.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TemplieVerdict {
    Pass = 0,
    Fail = 1,
    Inconclusive = 2,
}

impl From<Verdict> for TemplieVerdict {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::Pass => TemplieVerdict::Pass,
            Verdict::Fail => TemplieVerdict::Fail,
            Verdict::Inconclusive => TemplieVerdict::Inconclusive,
        }
    }
}

/// A matrix with entries in `Z[β]`.
pub struct TemplieMatrix {
    inner: PolyMatrix,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(TemplieStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::InvalidParameters(_) | Error::DimensionMismatch(_) => TemplieStatus::InvalidArgument,
            Error::SizeCap { .. } => TemplieStatus::SizeCap,
            Error::Numerical(_) => TemplieStatus::Numerical,
            _ => TemplieStatus::Internal,
        };
        Failure(status, e.to_string())
    }
}

fn set_error(msg: Option<String>) {
    let c = msg.map(|m| CString::new(m.replace('\0', " ")).expect("no interior nul"));
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

/// Runs `f`, converting errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> TemplieStatus {
    set_error(None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TemplieStatus::Ok,
        Ok(Err(Failure(s, m))) => {
            set_error(Some(m));
            s
        }
        Err(_) => {
            set_error(Some("internal panic".into()));
            TemplieStatus::Internal
        }
    }
}

fn null() -> Failure {
    Failure(TemplieStatus::NullPointer, "null pointer argument".into())
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s).expect("JSON has no nul bytes").into_raw()
}

/// Stores `value` through `out`.
///
/// # Safety
/// `out` must be null or valid for writes.
unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    out.write(value);
    Ok(())
}

/// # Safety
/// `m` must be null or a live handle.
unsafe fn handle<'a>(m: *const TemplieMatrix) -> Result<&'a PolyMatrix, Failure> {
    m.as_ref().map(|h| &h.inner).ok_or_else(null)
}

fn entry(m: &PolyMatrix, row: usize, col: usize) -> Result<&ScalarPoly, Failure> {
    if row >= m.nrows() || col >= m.ncols() {
        return Err(Failure(
            TemplieStatus::OutOfRange,
            format!("entry ({row}, {col}) outside {}×{}", m.nrows(), m.ncols()),
        ));
    }
    Ok(m.get(row, col))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn templie_version() -> *const c_char {
    static V: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version string"),
    };
    V.as_ptr()
}

/// Message of the last failure on this thread, or null. The pointer stays
/// valid until the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn templie_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn templie_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `out` must be valid for writes.
unsafe fn build(
    out: *mut *mut TemplieMatrix,
    n: usize,
    make: impl FnOnce() -> templie::Result<PolyMatrix>,
) -> TemplieStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        check_cap(n, false)?;
        let m = Box::new(TemplieMatrix { inner: make()? });
        write_out(out, Box::into_raw(m))
    })
}

/// Loop Hamiltonian `H_{n,d}`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn templie_loop_hamiltonian(n: usize, d: usize, out: *mut *mut TemplieMatrix) -> TemplieStatus {
    build(out, n, || hamiltonian_matrix(n, d))
}

/// Intertwiner `f_{n,d}`: rows are spin states on `n - 1` sites, columns links.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn templie_intertwiner(n: usize, d: usize, out: *mut *mut TemplieMatrix) -> TemplieStatus {
    build(out, n, || f_matrix(n, d))
}

/// Inner product `S_{n,d} = fᵀ f`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn templie_inner_product(n: usize, d: usize, out: *mut *mut TemplieMatrix) -> TemplieStatus {
    build(out, n, || inner_product_s(n, d))
}

/// Gram matrix of `V_{n,d}`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn templie_gram(n: usize, d: usize, out: *mut *mut TemplieMatrix) -> TemplieStatus {
    build(out, n, || gram_matrix(n, d))
}

/// Hermitian spin Hamiltonian on all `2^len` states.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn templie_spin_hamiltonian(len: usize, out: *mut *mut TemplieMatrix) -> TemplieStatus {
    build(out, len, || h_spin_matrix(len))
}

/// Hermitian spin Hamiltonian on the sector `S^z = twice_s / 2`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn templie_spin_sector_hamiltonian(
    len: usize,
    twice_s: i64,
    out: *mut *mut TemplieMatrix,
) -> TemplieStatus {
    build(out, len, || h_spin_sector(len, twice_s))
}

/// Releases a matrix. Null is ignored.
///
/// # Safety
/// `m` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn templie_matrix_free(m: *mut TemplieMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Number of rows, or 0 for null.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn templie_matrix_rows(m: *const TemplieMatrix) -> usize {
    m.as_ref().map_or(0, |h| h.inner.nrows())
}

/// Number of columns, or 0 for null.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn templie_matrix_cols(m: *const TemplieMatrix) -> usize {
    m.as_ref().map_or(0, |h| h.inner.ncols())
}

/// Degree of an entry; -1 for the zero polynomial.
///
/// # Safety
/// `m` must be a live handle and `degree` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn templie_matrix_entry_degree(
    m: *const TemplieMatrix,
    row: usize,
    col: usize,
    degree: *mut i64,
) -> TemplieStatus {
    guard(|| {
        let p = entry(handle(m)?, row, col)?;
        write_out(degree, p.degree().map_or(-1, |k| k as i64))
    })
}

/// Coefficient of `β^k` in an entry. Fails with `OVERFLOW` if it does not
/// fit in 64 bits.
///
/// # Safety
/// `m` must be a live handle and `value` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn templie_matrix_entry_coefficient(
    m: *const TemplieMatrix,
    row: usize,
    col: usize,
    k: usize,
    value: *mut i64,
) -> TemplieStatus {
    guard(|| {
        let p = entry(handle(m)?, row, col)?;
        let c = match p.coeffs().get(k) {
            Some(c) => c
                .to_i64()
                .ok_or_else(|| Failure(TemplieStatus::Overflow, format!("coefficient {c} exceeds 64 bits")))?,
            None => 0,
        };
        write_out(value, c)
    })
}

/// An entry as a JSON array of decimal coefficient strings, lowest degree
/// first. Free the result with `templie_string_free`.
///
/// # Safety
/// `m` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn templie_matrix_entry_string(
    m: *const TemplieMatrix,
    row: usize,
    col: usize,
    out: *mut *mut c_char,
) -> TemplieStatus {
    guard(|| {
        let p = entry(handle(m)?, row, col)?;
        let s = serde_json::to_string(&p.to_coeff_strings()).expect("strings serialise");
        if out.is_null() {
            return Err(null());
        }
        write_out(out, to_c_string(s))
    })
}

/// Evaluates the matrix at `beta` into `buffer`, row-major. `len` must be
/// at least rows × cols.
///
/// # Safety
/// `m` must be a live handle and `buffer` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn templie_matrix_eval(
    m: *const TemplieMatrix,
    beta: f64,
    buffer: *mut f64,
    len: usize,
) -> TemplieStatus {
    guard(|| {
        let p = handle(m)?;
        if buffer.is_null() {
            return Err(null());
        }
        let need = p.nrows() * p.ncols();
        if len < need {
            return Err(Failure(TemplieStatus::BufferTooSmall, format!("need {need} entries, got {len}")));
        }
        let dst = std::slice::from_raw_parts_mut(buffer, need);
        for r in 0..p.nrows() {
            for c in 0..p.ncols() {
                dst[r * p.ncols() + c] = p.get(r, c).eval_f64(beta);
            }
        }
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a nul-terminated string.
unsafe fn str_arg<'a>(s: *const c_char) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null());
    }
    CStr::from_ptr(s).to_str().map_err(|_| Failure(TemplieStatus::InvalidArgument, "string is not UTF-8".into()))
}

/// Runs a verification suite ("intertwine", "inject", "pseudo", "gp",
/// "suf", "special", "gram-adjoint" or "all"). `n_max = 0` selects the
/// suite's default range. On success `*passed` is 1 or 0 and `*json`
/// holds the reports.
///
/// # Safety
/// `suite` must be a nul-terminated string; `passed` and `json` valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn templie_verify(
    suite: *const c_char,
    n_max: usize,
    passed: *mut i32,
    json: *mut *mut c_char,
) -> TemplieStatus {
    guard(|| {
        let suite: Suite = str_arg(suite)?.parse()?;
        if passed.is_null() || json.is_null() {
            return Err(null());
        }
        let params = SuiteParams { n_max: (n_max > 0).then_some(n_max), ..Default::default() };
        let reports = run_suite(suite, &params)?;
        let ok = reports.iter().all(|r| r.passed);
        let s = serde_json::json!({"suite": suite.name(), "passed": ok, "reports": reports}).to_string();
        write_out(passed, ok as i32)?;
        write_out(json, to_c_string(s))
    })
}

/// Reality, diagonalisability and positivity of `S` for `H_{n,d}` at one β.
///
/// # Safety
/// `verdict` and `json` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn templie_loop_reality(
    n: usize,
    d: usize,
    beta: f64,
    tol: f64,
    verdict: *mut TemplieVerdict,
    json: *mut *mut c_char,
) -> TemplieStatus {
    guard(|| {
        if verdict.is_null() || json.is_null() {
            return Err(null());
        }
        check_cap(n, false)?;
        let cert = LoopCase::new(n, d)?.certify(beta, tol, tol);
        let v = if cert.positivity.passed { cert.reality.verdict.into() } else { TemplieVerdict::Fail };
        write_out(verdict, v)?;
        write_out(json, to_c_string(serde_json::to_string(&cert).expect("serialisable")))
    })
}

/// Reality of the XXZ spectrum on `n` sites at `q = q_re + i q_im`.
///
/// # Safety
/// `verdict` and `json` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn templie_xxz_reality(
    n: usize,
    q_re: f64,
    q_im: f64,
    tol: f64,
    verdict: *mut TemplieVerdict,
    json: *mut *mut c_char,
) -> TemplieStatus {
    guard(|| {
        if verdict.is_null() || json.is_null() {
            return Err(null());
        }
        check_cap(n, false)?;
        let q = Complex64::new(q_re, q_im);
        if q.norm() == 0.0 {
            return Err(Failure(TemplieStatus::InvalidArgument, "q must be nonzero".into()));
        }
        let r = xxz_reality_at(n, q, &format!("xxz n={n} q={q_re},{q_im}"), tol);
        write_out(verdict, r.verdict.into())?;
        write_out(json, to_c_string(serde_json::to_string(&r).expect("serialisable")))
    })
}

/// Decomposes the sector `S^z = twice_s / 2` of `n` spins at a root of
/// unity of order `ell` (0 for generic q). `*audit_passed` reports the
/// dimension audit.
///
/// # Safety
/// `audit_passed` and `json` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn templie_decompose(
    n: usize,
    twice_s: i64,
    ell: u32,
    audit_passed: *mut i32,
    json: *mut *mut c_char,
) -> TemplieStatus {
    guard(|| {
        if audit_passed.is_null() || json.is_null() {
            return Err(null());
        }
        let ell = if ell == 0 { Ell::Generic } else { Ell::RootOfUnity(ell) };
        let dec = sector_decomposition(n, twice_s, ell)?;
        if dec.summands.iter().any(|s| s.kind == SummandKind::Irreducible) {
            check_cap(n, false)?;
        }
        let audit = dimension_audit(&dec)?;
        let s = serde_json::json!({"decomposition": dec, "listing": dec.listing(), "audit": audit}).to_string();
        write_out(audit_passed, audit.passed as i32)?;
        write_out(json, to_c_string(s))
    })
}
