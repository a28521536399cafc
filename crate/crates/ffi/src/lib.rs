//! C ABI over the `echelon` crate.
//!
//! All values are exact rationals. Objects are opaque handles created by the
//! library and released with the matching `*_free` function. Every function
//! returns an [`EchStatus`]; on failure a message is available from
//! [`ech_last_error`] until the next call on the same thread. Strings
//! returned through `char **` out-parameters are owned by the caller and
//! released with [`ech_string_free`]. Indices are 0-based.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use echelon::factor::{cr_factor, nullspace, solve};
use echelon::io::{self, FormatHint, OutputFormat, ResultRef};
use echelon::{
    intersection_check, rref, EchelonForm, Error, Matrix, PivotRule, Rational, SolveStatus,
    ZeroPolicy,
};
use libc::{c_char, c_int, size_t};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EchStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ParseError = 3,
    OutOfRange = 4,
    DimensionMismatch = 5,
    /// A precondition of the operation does not hold (dependent rows or
    /// columns, wrong count, singular block).
    Precondition = 6,
    /// The requested data was not computed, e.g. `E` without tracking.
    NotAvailable = 7,
    /// A Rust panic was caught at the boundary.
    Internal = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EchSolveStatus {
    Unique = 0,
    Infinite = 1,
    Inconsistent = 2,
}

/// Opaque rational matrix.
pub struct EchMatrix(Matrix<Rational>);

/// Opaque reduced echelon form of a matrix.
pub struct EchEchelon(EchelonForm<Rational>);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Failure(EchStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::IndexOutOfRange { .. } => EchStatus::OutOfRange,
            Error::DimensionMismatch(_) | Error::NotSquare { .. } => EchStatus::DimensionMismatch,
            Error::DependentRowsGiven
            | Error::DependentColumnsGiven
            | Error::WrongCardinality { .. }
            | Error::SingularBlock(_)
            | Error::RankMismatch(_) => EchStatus::Precondition,
            _ => EchStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(EchStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, translating errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> EchStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            EchStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal error");
            EchStatus::Internal
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn borrow_mut<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn c_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(EchStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn out<T>(dst: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if dst.is_null() {
        return Err(null(what));
    }
    dst.write(value);
    Ok(())
}

fn new_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Failure(EchStatus::Internal, "string contains NUL".into()))
}

fn boxed(m: Matrix<Rational>) -> *mut EchMatrix {
    Box::into_raw(Box::new(EchMatrix(m)))
}

/// Message describing the last failure on this thread; empty after a
/// success. Valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn ech_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

#[no_mangle]
pub unsafe extern "C" fn ech_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Creates a `rows x cols` zero matrix.
#[no_mangle]
pub unsafe extern "C" fn ech_matrix_new(
    rows: size_t,
    cols: size_t,
    result: *mut *mut EchMatrix,
) -> EchStatus {
    guard(|| {
        if rows.checked_mul(cols).is_none() {
            return Err(Failure(
                EchStatus::InvalidArgument,
                "matrix too large".into(),
            ));
        }
        out(result, boxed(Matrix::zeros(rows, cols)), "result")
    })
}

/// Parses rational CSV or Matrix Market text (detected automatically).
#[no_mangle]
pub unsafe extern "C" fn ech_matrix_parse(
    text: *const c_char,
    result: *mut *mut EchMatrix,
) -> EchStatus {
    guard(|| {
        let text = c_str(text, "text")?;
        let doc = io::read_matrix_str(text, FormatHint::Auto)
            .map_err(|e| Failure(EchStatus::ParseError, e.to_string()))?;
        out(result, boxed(doc.matrix), "result")
    })
}

#[no_mangle]
pub unsafe extern "C" fn ech_matrix_free(m: *mut EchMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

#[no_mangle]
pub unsafe extern "C" fn ech_matrix_shape(
    m: *const EchMatrix,
    rows: *mut size_t,
    cols: *mut size_t,
) -> EchStatus {
    guard(|| {
        let m = borrow(m, "matrix")?;
        out(rows, m.0.rows(), "rows")?;
        out(cols, m.0.cols(), "cols")
    })
}

/// Sets entry `(i, j)` from a literal such as `-3`, `7/2` or `0.25`.
#[no_mangle]
pub unsafe extern "C" fn ech_matrix_set(
    m: *mut EchMatrix,
    i: size_t,
    j: size_t,
    value: *const c_char,
) -> EchStatus {
    guard(|| {
        let m = borrow_mut(m, "matrix")?;
        let (v, _) = Rational::parse_literal(c_str(value, "value")?)
            .map_err(|e| Failure(EchStatus::ParseError, e.to_string()))?;
        Ok(m.0.set(i, j, v)?)
    })
}

/// Sets entry `(i, j)` to `numer / denom`.
#[no_mangle]
pub unsafe extern "C" fn ech_matrix_set_ratio(
    m: *mut EchMatrix,
    i: size_t,
    j: size_t,
    numer: i64,
    denom: i64,
) -> EchStatus {
    guard(|| {
        let m = borrow_mut(m, "matrix")?;
        Ok(m.0.set(i, j, Rational::new(numer, denom)?)?)
    })
}

/// Entry `(i, j)` as `p` or `p/q`.
#[no_mangle]
pub unsafe extern "C" fn ech_matrix_get(
    m: *const EchMatrix,
    i: size_t,
    j: size_t,
    result: *mut *mut c_char,
) -> EchStatus {
    guard(|| {
        let m = borrow(m, "matrix")?;
        let v = m.0.get(i, j).ok_or_else(|| {
            Failure(
                EchStatus::OutOfRange,
                format!("({i}, {j}) outside {}x{}", m.0.rows(), m.0.cols()),
            )
        })?;
        out(result, new_string(v.to_string())?, "result")
    })
}

/// Whole matrix as rational CSV.
#[no_mangle]
pub unsafe extern "C" fn ech_matrix_to_csv(
    m: *const EchMatrix,
    result: *mut *mut c_char,
) -> EchStatus {
    guard(|| {
        let m = borrow(m, "matrix")?;
        out(
            result,
            new_string(io::write_csv(&m.0, io::DocMode::Exact))?,
            "result",
        )
    })
}

#[no_mangle]
pub unsafe extern "C" fn ech_matrix_equal(
    a: *const EchMatrix,
    b: *const EchMatrix,
    result: *mut c_int,
) -> EchStatus {
    guard(|| {
        let eq = borrow(a, "a")?.0 == borrow(b, "b")?.0;
        out(result, c_int::from(eq), "result")
    })
}

/// `a * b` into a new matrix.
#[no_mangle]
pub unsafe extern "C" fn ech_matrix_mul(
    a: *const EchMatrix,
    b: *const EchMatrix,
    result: *mut *mut EchMatrix,
) -> EchStatus {
    guard(|| {
        let p = borrow(a, "a")?.0.matmul(&borrow(b, "b")?.0)?;
        out(result, boxed(p), "result")
    })
}

/// Reduced row echelon form. With `track_e` nonzero, `E` with `E A = Z` is
/// also kept. `pivot_rule` is 0 for first nonzero, 1 for largest magnitude.
#[no_mangle]
pub unsafe extern "C" fn ech_rref(
    a: *const EchMatrix,
    pivot_rule: c_int,
    track_e: c_int,
    result: *mut *mut EchEchelon,
) -> EchStatus {
    guard(|| {
        let a = borrow(a, "a")?;
        let rule = match pivot_rule {
            0 => PivotRule::FirstNonzero,
            1 => PivotRule::LargestMagnitude,
            other => {
                return Err(Failure(
                    EchStatus::InvalidArgument,
                    format!("unknown pivot rule {other}"),
                ))
            }
        };
        let ech = rref(&a.0, ZeroPolicy::exact(), rule, track_e != 0);
        out(result, Box::into_raw(Box::new(EchEchelon(ech))), "result")
    })
}

#[no_mangle]
pub unsafe extern "C" fn ech_echelon_free(e: *mut EchEchelon) {
    if !e.is_null() {
        drop(Box::from_raw(e));
    }
}

#[no_mangle]
pub unsafe extern "C" fn ech_echelon_rank(e: *const EchEchelon, result: *mut size_t) -> EchStatus {
    guard(|| out(result, borrow(e, "echelon")?.0.rank, "result"))
}

/// Copies up to `capacity` pivot column indices into `buf` and stores the
/// full count in `len`. Pass a null `buf` to query the count.
#[no_mangle]
pub unsafe extern "C" fn ech_echelon_pivot_cols(
    e: *const EchEchelon,
    buf: *mut size_t,
    capacity: size_t,
    len: *mut size_t,
) -> EchStatus {
    guard(|| {
        let cols = &borrow(e, "echelon")?.0.pivot_cols;
        out(len, cols.len(), "len")?;
        if !buf.is_null() {
            let n = cols.len().min(capacity);
            ptr::copy_nonoverlapping(cols.as_ptr(), buf, n);
        }
        Ok(())
    })
}

/// Which matrix of an echelon form to copy out.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EchEchelonPart {
    Z = 0,
    F = 1,
    /// The column permutation as a 0/1 matrix.
    P = 2,
    E = 3,
}

#[no_mangle]
pub unsafe extern "C" fn ech_echelon_matrix(
    e: *const EchEchelon,
    part: EchEchelonPart,
    result: *mut *mut EchMatrix,
) -> EchStatus {
    guard(|| {
        let e = &borrow(e, "echelon")?.0;
        let m = match part {
            EchEchelonPart::Z => e.z.clone(),
            EchEchelonPart::F => e.f.clone(),
            EchEchelonPart::P => e.p.to_matrix(),
            EchEchelonPart::E => {
                e.e.clone()
                    .ok_or_else(|| Failure(EchStatus::NotAvailable, "E was not tracked".into()))?
            }
        };
        out(result, boxed(m), "result")
    })
}

/// The echelon form in the line-oriented structured text format.
#[no_mangle]
pub unsafe extern "C" fn ech_echelon_to_structured(
    e: *const EchEchelon,
    result: *mut *mut c_char,
) -> EchStatus {
    guard(|| {
        let e = &borrow(e, "echelon")?.0;
        let bytes = io::write_result(ResultRef::Echelon(e), OutputFormat::Structured);
        let text = String::from_utf8(bytes)
            .map_err(|_| Failure(EchStatus::Internal, "non UTF-8 output".into()))?;
        out(result, new_string(text)?, "result")
    })
}

/// `A = C R`. Either output may be null if not wanted.
#[no_mangle]
pub unsafe extern "C" fn ech_cr(
    a: *const EchMatrix,
    c: *mut *mut EchMatrix,
    r: *mut *mut EchMatrix,
) -> EchStatus {
    guard(|| {
        let cr = cr_factor(&borrow(a, "a")?.0, ZeroPolicy::exact());
        if !c.is_null() {
            c.write(boxed(cr.c));
        }
        if !r.is_null() {
            r.write(boxed(cr.r));
        }
        Ok(())
    })
}

/// Nullspace basis `X` (`n x (n - r)`), one special solution per column.
#[no_mangle]
pub unsafe extern "C" fn ech_nullspace(
    a: *const EchMatrix,
    result: *mut *mut EchMatrix,
) -> EchStatus {
    guard(|| {
        let ns = nullspace(&borrow(a, "a")?.0, ZeroPolicy::exact());
        out(result, boxed(ns.x), "result")
    })
}

/// Solves `A x = b` for an `m x 1` or `1 x m` matrix `b`. `particular`
/// (an `n x 1` matrix) is set to null when the system is inconsistent.
/// `basis` receives the nullspace basis. Both outputs are optional.
#[no_mangle]
pub unsafe extern "C" fn ech_solve(
    a: *const EchMatrix,
    b: *const EchMatrix,
    status: *mut EchSolveStatus,
    particular: *mut *mut EchMatrix,
    basis: *mut *mut EchMatrix,
) -> EchStatus {
    guard(|| {
        let a = &borrow(a, "a")?.0;
        let b = &borrow(b, "b")?.0;
        let rhs = match b.shape() {
            (_, 1) => b.column(0),
            (1, _) => b.row(0).to_vec(),
            (r, c) => {
                return Err(Failure(
                    EchStatus::DimensionMismatch,
                    format!("right-hand side is {r}x{c}, expected a vector"),
                ))
            }
        };
        let s = solve(a, &rhs, ZeroPolicy::exact())?;
        out(
            status,
            match s.status {
                SolveStatus::Unique => EchSolveStatus::Unique,
                SolveStatus::Infinite => EchSolveStatus::Infinite,
                SolveStatus::Inconsistent => EchSolveStatus::Inconsistent,
            },
            "status",
        )?;
        if !particular.is_null() {
            particular.write(
                s.particular
                    .map_or(ptr::null_mut(), |x| boxed(Matrix::column_matrix(x))),
            );
        }
        if !basis.is_null() {
            basis.write(boxed(s.nullspace.x));
        }
        Ok(())
    })
}

/// Checks that the given `r = rank(A)` independent rows and columns (0-based,
/// increasing) cross in an invertible block. Fails with `Precondition` when
/// the counts differ from the rank or a set is dependent. `det` receives the
/// block's determinant as a string and may be null.
#[no_mangle]
pub unsafe extern "C" fn ech_intersection(
    a: *const EchMatrix,
    rows: *const size_t,
    n_rows: size_t,
    cols: *const size_t,
    n_cols: size_t,
    invertible: *mut c_int,
    det: *mut *mut c_char,
) -> EchStatus {
    guard(|| {
        let a = &borrow(a, "a")?.0;
        let slice = |p: *const size_t, n: size_t, what: &str| -> Result<Vec<usize>, Failure> {
            if n == 0 {
                return Ok(Vec::new());
            }
            if p.is_null() {
                return Err(null(what));
            }
            Ok(std::slice::from_raw_parts(p, n).to_vec())
        };
        let rows = slice(rows, n_rows, "rows")?;
        let cols = slice(cols, n_cols, "cols")?;
        let x = intersection_check(a, &rows, &cols, ZeroPolicy::exact())?;
        out(invertible, c_int::from(x.invertible), "invertible")?;
        if !det.is_null() {
            det.write(new_string(x.det.to_string())?);
        }
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn panics_become_internal() {
        let status = guard(|| panic!("boom"));
        assert_eq!(status, EchStatus::Internal);
    }

    #[test]
    fn error_message_is_thread_local() {
        let status = guard(|| Err(Failure(EchStatus::InvalidArgument, "bad".into())));
        assert_eq!(status, EchStatus::InvalidArgument);
        let msg = unsafe { CStr::from_ptr(ech_last_error()) };
        assert_eq!(msg.to_str().unwrap(), "bad");
        std::thread::spawn(|| {
            let msg = unsafe { CStr::from_ptr(ech_last_error()) };
            assert_eq!(msg.to_str().unwrap(), "");
        })
        .join()
        .unwrap();
    }
}
