//! C interface to `matroot`.
//!
//! Matrices and root towers cross the boundary as opaque handles that the
//! caller frees with the matching `*_free` function. Every fallible call
//! returns a [`MatrootStatus`]; on failure the message is available from
//! [`matroot_last_error_message`] on the same thread. Panics are caught at
//! the boundary and reported as `MATROOT_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use matroot::roots::MAX_TOWER_DEPTH;
use matroot::{Error, Matrix, OrthogonalClass, RootOptions, RootTower, Tolerances};

/// Result code of every fallible call. `MATROOT_STATUS_OK` is zero.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrootStatus {
    Ok = 0,
    NullPointer = 1,
    DimensionMismatch = 2,
    NotSquare = 3,
    EmptyBlockList = 4,
    NonFinite = 5,
    InvalidParameter = 6,
    Singular = 7,
    NotSymmetric = 8,
    NoConvergence = 9,
    NotOrthogonal = 10,
    NotInvolutory = 11,
    NotIdempotent = 12,
    OddNegativeMultiplicity = 13,
    ClusterAmbiguous = 14,
    SingularBlock = 15,
    SingularSchur = 16,
    DegenerateParameters = 17,
    ConsistencyCheck = 18,
    Parse = 19,
    Panic = 20,
}

impl From<&Error> for MatrootStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::DimensionMismatch(_) => MatrootStatus::DimensionMismatch,
            Error::NotSquare { .. } => MatrootStatus::NotSquare,
            Error::EmptyBlockList => MatrootStatus::EmptyBlockList,
            Error::NonFinite { .. } => MatrootStatus::NonFinite,
            Error::InvalidParameter(_) => MatrootStatus::InvalidParameter,
            Error::Singular { .. } => MatrootStatus::Singular,
            Error::NotSymmetric => MatrootStatus::NotSymmetric,
            Error::NoConvergence { .. } => MatrootStatus::NoConvergence,
            Error::NotOrthogonal => MatrootStatus::NotOrthogonal,
            Error::NotInvolutory => MatrootStatus::NotInvolutory,
            Error::NotIdempotent => MatrootStatus::NotIdempotent,
            Error::OddNegativeMultiplicity { .. } => MatrootStatus::OddNegativeMultiplicity,
            Error::ClusterAmbiguous { .. } => MatrootStatus::ClusterAmbiguous,
            Error::SingularBlock(_) => MatrootStatus::SingularBlock,
            Error::SingularSchur(_) => MatrootStatus::SingularSchur,
            Error::DegenerateParameters(_) => MatrootStatus::DegenerateParameters,
            Error::ConsistencyCheck(_) => MatrootStatus::ConsistencyCheck,
            Error::Parse(_) => MatrootStatus::Parse,
        }
    }
}

/// Classification of an orthogonal matrix by its canonical blocks.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrootOrthogonalClass {
    InvolutoryOrthogonal = 0,
    HasRealOrthogonalRoot = 1,
    NoRealRootConstruction = 2,
}

impl From<OrthogonalClass> for MatrootOrthogonalClass {
    fn from(c: OrthogonalClass) -> Self {
        match c {
            OrthogonalClass::InvolutoryOrthogonal => MatrootOrthogonalClass::InvolutoryOrthogonal,
            OrthogonalClass::HasRealOrthogonalRoot => MatrootOrthogonalClass::HasRealOrthogonalRoot,
            OrthogonalClass::NoRealRootConstruction => {
                MatrootOrthogonalClass::NoRealRootConstruction
            }
        }
    }
}

/// Numerical tolerances. Pass NULL wherever a `const MatrootTolerances *`
/// is accepted to use [`matroot_tolerances_default`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MatrootTolerances {
    pub eq_rtol: f64,
    pub rank_tol: f64,
    pub pair_tol: f64,
}

/// Opaque dense real matrix.
pub struct MatrootMatrix {
    inner: Matrix,
}

/// Opaque root tower: the `2^k`-th roots of an orthogonal matrix for
/// `k = 0..=depth`.
pub struct MatrootTower {
    inner: RootTower,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_last_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Failure(MatrootStatus);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        set_last_error(&e.to_string());
        Failure((&e).into())
    }
}

fn null_pointer(what: &str) -> Failure {
    set_last_error(&format!("{what} is NULL"));
    Failure(MatrootStatus::NullPointer)
}

/// Runs `f`, mapping errors and panics to a status.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> MatrootStatus {
    clear_last_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MatrootStatus::Ok,
        Ok(Err(Failure(status))) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(&format!("panic: {msg}"));
            MatrootStatus::Panic
        }
    }
}

unsafe fn tolerances(tol: *const MatrootTolerances) -> Result<Tolerances, Failure> {
    match tol.as_ref() {
        None => Ok(Tolerances::default()),
        Some(t) => Ok(Tolerances::new(t.eq_rtol, t.rank_tol, t.pair_tol)?),
    }
}

unsafe fn matrix<'a>(m: *const MatrootMatrix, what: &str) -> Result<&'a Matrix, Failure> {
    m.as_ref()
        .map(|m| &m.inner)
        .ok_or_else(|| null_pointer(what))
}

unsafe fn emit(out: *mut *mut MatrootMatrix, m: Matrix) {
    *out = Box::into_raw(Box::new(MatrootMatrix { inner: m }));
}

unsafe fn check_out<T>(out: *mut T) -> Result<(), Failure> {
    if out.is_null() {
        Err(null_pointer("output pointer"))
    } else {
        Ok(())
    }
}

/// Static, NUL-terminated name of `status`, e.g. `"NotInvolutory"`.
#[no_mangle]
pub extern "C" fn matroot_status_name(status: MatrootStatus) -> *const c_char {
    let s: &'static [u8] = match status {
        MatrootStatus::Ok => b"Ok\0",
        MatrootStatus::NullPointer => b"NullPointer\0",
        MatrootStatus::DimensionMismatch => b"DimensionMismatch\0",
        MatrootStatus::NotSquare => b"NotSquare\0",
        MatrootStatus::EmptyBlockList => b"EmptyBlockList\0",
        MatrootStatus::NonFinite => b"NonFinite\0",
        MatrootStatus::InvalidParameter => b"InvalidParameter\0",
        MatrootStatus::Singular => b"Singular\0",
        MatrootStatus::NotSymmetric => b"NotSymmetric\0",
        MatrootStatus::NoConvergence => b"NoConvergence\0",
        MatrootStatus::NotOrthogonal => b"NotOrthogonal\0",
        MatrootStatus::NotInvolutory => b"NotInvolutory\0",
        MatrootStatus::NotIdempotent => b"NotIdempotent\0",
        MatrootStatus::OddNegativeMultiplicity => b"OddNegativeMultiplicity\0",
        MatrootStatus::ClusterAmbiguous => b"ClusterAmbiguous\0",
        MatrootStatus::SingularBlock => b"SingularBlock\0",
        MatrootStatus::SingularSchur => b"SingularSchur\0",
        MatrootStatus::DegenerateParameters => b"DegenerateParameters\0",
        MatrootStatus::ConsistencyCheck => b"ConsistencyCheck\0",
        MatrootStatus::Parse => b"Parse\0",
        MatrootStatus::Panic => b"Panic\0",
    };
    s.as_ptr().cast()
}

/// Message for the last failed call on this thread, or NULL after a
/// successful one. Valid until the next call into this library on the same
/// thread.
#[no_mangle]
pub extern "C" fn matroot_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

#[no_mangle]
pub extern "C" fn matroot_tolerances_default() -> MatrootTolerances {
    let t = Tolerances::default();
    MatrootTolerances {
        eq_rtol: t.eq_rtol,
        rank_tol: t.rank_tol,
        pair_tol: t.pair_tol,
    }
}

/// Creates a `rows × cols` matrix from `rows * cols` row-major entries.
///
/// # Safety
/// `data` must point to `rows * cols` readable doubles and `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn matroot_matrix_new(
    rows: usize,
    cols: usize,
    data: *const f64,
    out: *mut *mut MatrootMatrix,
) -> MatrootStatus {
    guard(|| {
        check_out(out)?;
        if data.is_null() {
            return Err(null_pointer("data"));
        }
        let len = rows.checked_mul(cols).ok_or_else(|| {
            Failure::from(Error::DimensionMismatch("rows * cols overflows".into()))
        })?;
        let entries = std::slice::from_raw_parts(data, len).to_vec();
        emit(out, Matrix::new(rows, cols, entries)?);
        Ok(())
    })
}

/// Parses the plain-text matrix format (`rows cols` header, then one line
/// per row).
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn matroot_matrix_from_text(
    text: *const c_char,
    out: *mut *mut MatrootMatrix,
) -> MatrootStatus {
    guard(|| {
        check_out(out)?;
        if text.is_null() {
            return Err(null_pointer("text"));
        }
        let s = std::ffi::CStr::from_ptr(text)
            .to_str()
            .map_err(|e| Failure::from(Error::Parse(e.to_string())))?;
        emit(out, Matrix::from_text(s)?);
        Ok(())
    })
}

/// # Safety
/// `m` must be NULL or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn matroot_matrix_free(m: *mut MatrootMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Number of rows, or 0 for NULL.
///
/// # Safety
/// `m` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn matroot_matrix_rows(m: *const MatrootMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.inner.rows())
}

/// Number of columns, or 0 for NULL.
///
/// # Safety
/// `m` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn matroot_matrix_cols(m: *const MatrootMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.inner.cols())
}

/// Copies the entries, row-major, into `buf` of length `len`, which must be
/// at least `rows * cols`.
///
/// # Safety
/// `m` must be a live handle and `buf` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn matroot_matrix_copy_data(
    m: *const MatrootMatrix,
    buf: *mut f64,
    len: usize,
) -> MatrootStatus {
    guard(|| {
        let m = matrix(m, "matrix")?;
        if buf.is_null() {
            return Err(null_pointer("buffer"));
        }
        let data = m.as_slice();
        if len < data.len() {
            return Err(Error::DimensionMismatch(format!(
                "buffer holds {len} entries, matrix has {}",
                data.len()
            ))
            .into());
        }
        ptr::copy_nonoverlapping(data.as_ptr(), buf, data.len());
        Ok(())
    })
}

/// Real square root of an involutory matrix, default choices.
///
/// # Safety
/// `a` must be a live handle, `tol` NULL or readable, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn matroot_involutory_root(
    a: *const MatrootMatrix,
    tol: *const MatrootTolerances,
    out: *mut *mut MatrootMatrix,
) -> MatrootStatus {
    guard(|| {
        check_out(out)?;
        let r = matroot::involutory_real_root(
            matrix(a, "a")?,
            &RootOptions::default(),
            &tolerances(tol)?,
        )?;
        emit(out, r);
        Ok(())
    })
}

/// Real square root of a symmetric matrix, default choices.
///
/// # Safety
/// As [`matroot_involutory_root`].
#[no_mangle]
pub unsafe extern "C" fn matroot_symmetric_root(
    s: *const MatrootMatrix,
    tol: *const MatrootTolerances,
    out: *mut *mut MatrootMatrix,
) -> MatrootStatus {
    guard(|| {
        check_out(out)?;
        let r = matroot::symmetric_real_root(
            matrix(s, "s")?,
            &RootOptions::default(),
            &tolerances(tol)?,
        )?;
        emit(out, r);
        Ok(())
    })
}

/// Orthogonal square root of an orthogonal matrix.
///
/// # Safety
/// As [`matroot_involutory_root`].
#[no_mangle]
pub unsafe extern "C" fn matroot_orthogonal_root(
    q: *const MatrootMatrix,
    tol: *const MatrootTolerances,
    out: *mut *mut MatrootMatrix,
) -> MatrootStatus {
    guard(|| {
        check_out(out)?;
        let r = matroot::orthogonal_real_root(matrix(q, "q")?, &tolerances(tol)?)?;
        emit(out, r);
        Ok(())
    })
}

/// Writes the class of `q` to `class_out` and whether an orthogonal root
/// exists to `root_eligible_out`.
///
/// # Safety
/// `q` must be a live handle, `tol` NULL or readable, both outputs writable.
#[no_mangle]
pub unsafe extern "C" fn matroot_classify_orthogonal(
    q: *const MatrootMatrix,
    tol: *const MatrootTolerances,
    class_out: *mut MatrootOrthogonalClass,
    root_eligible_out: *mut bool,
) -> MatrootStatus {
    guard(|| {
        check_out(class_out)?;
        check_out(root_eligible_out)?;
        let c = matroot::classify_orthogonal(matrix(q, "q")?, &tolerances(tol)?)?;
        *class_out = c.class.into();
        *root_eligible_out = c.root_eligible;
        Ok(())
    })
}

/// Builds the tower of `2^k`-th roots of `q` for `k = 0..=depth`,
/// `1 <= depth <= 40`.
///
/// # Safety
/// `q` must be a live handle, `tol` NULL or readable, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn matroot_tower_new(
    q: *const MatrootMatrix,
    depth: u32,
    tol: *const MatrootTolerances,
    out: *mut *mut MatrootTower,
) -> MatrootStatus {
    guard(|| {
        check_out(out)?;
        let t = matroot::root_tower(matrix(q, "q")?, depth, &tolerances(tol)?)?;
        *out = Box::into_raw(Box::new(MatrootTower { inner: t }));
        Ok(())
    })
}

/// Depth of the tower, or 0 for NULL.
///
/// # Safety
/// `t` must be NULL or a live tower handle.
#[no_mangle]
pub unsafe extern "C" fn matroot_tower_depth(t: *const MatrootTower) -> u32 {
    t.as_ref().map_or(0, |t| t.inner.depth)
}

/// The `2^k`-th root at level `k`, `0 <= k <= depth`.
///
/// # Safety
/// `t` must be a live tower handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn matroot_tower_level_root(
    t: *const MatrootTower,
    k: u32,
    out: *mut *mut MatrootMatrix,
) -> MatrootStatus {
    guard(|| {
        check_out(out)?;
        let t = t.as_ref().ok_or_else(|| null_pointer("tower"))?;
        if k > t.inner.depth {
            return Err(Error::InvalidParameter(format!(
                "level {k} exceeds tower depth {}",
                t.inner.depth
            ))
            .into());
        }
        emit(out, t.inner.level_root(k as usize));
        Ok(())
    })
}

/// # Safety
/// `t` must be NULL or a tower handle that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn matroot_tower_free(t: *mut MatrootTower) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Idempotent `M·(I ⊕ 0)·M⁻¹` for `M = [[a, b], [c, d]]`.
///
/// # Safety
/// All four blocks must be live handles, `tol` NULL or readable, `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn matroot_block_idempotent(
    a: *const MatrootMatrix,
    b: *const MatrootMatrix,
    c: *const MatrootMatrix,
    d: *const MatrootMatrix,
    tol: *const MatrootTolerances,
    out: *mut *mut MatrootMatrix,
) -> MatrootStatus {
    guard(|| {
        check_out(out)?;
        let q = matroot::BlockQuadruple::new(
            matrix(a, "a")?.clone(),
            matrix(b, "b")?.clone(),
            matrix(c, "c")?.clone(),
            matrix(d, "d")?.clone(),
        )?;
        emit(out, matroot::block_idempotent(&q, &tolerances(tol)?)?);
        Ok(())
    })
}

/// `2p − I` for idempotent `p`.
///
/// # Safety
/// As [`matroot_involutory_root`].
#[no_mangle]
pub unsafe extern "C" fn matroot_involutory_from_idempotent(
    p: *const MatrootMatrix,
    tol: *const MatrootTolerances,
    out: *mut *mut MatrootMatrix,
) -> MatrootStatus {
    guard(|| {
        check_out(out)?;
        emit(
            out,
            matroot::involutory_from_idempotent(matrix(p, "p")?, &tolerances(tol)?)?,
        );
        Ok(())
    })
}

/// Determinant by LU; 0 when the matrix is singular by `rank_tol`.
///
/// # Safety
/// `a` must be a live handle, `tol` NULL or readable, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn matroot_det(
    a: *const MatrootMatrix,
    tol: *const MatrootTolerances,
    out: *mut f64,
) -> MatrootStatus {
    guard(|| {
        check_out(out)?;
        *out = matroot::det(matrix(a, "a")?, &tolerances(tol)?)?;
        Ok(())
    })
}

unsafe fn predicate(
    a: *const MatrootMatrix,
    tol: *const MatrootTolerances,
    out: *mut bool,
    f: fn(&Matrix, &Tolerances) -> bool,
) -> MatrootStatus {
    guard(|| {
        check_out(out)?;
        *out = f(matrix(a, "a")?, &tolerances(tol)?);
        Ok(())
    })
}

/// # Safety
/// `a` must be a live handle, `tol` NULL or readable, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn matroot_is_involutory(
    a: *const MatrootMatrix,
    tol: *const MatrootTolerances,
    out: *mut bool,
) -> MatrootStatus {
    predicate(a, tol, out, matroot::is_involutory)
}

/// # Safety
/// As [`matroot_is_involutory`].
#[no_mangle]
pub unsafe extern "C" fn matroot_is_idempotent(
    a: *const MatrootMatrix,
    tol: *const MatrootTolerances,
    out: *mut bool,
) -> MatrootStatus {
    predicate(a, tol, out, matroot::is_idempotent)
}

/// # Safety
/// As [`matroot_is_involutory`].
#[no_mangle]
pub unsafe extern "C" fn matroot_is_orthogonal(
    a: *const MatrootMatrix,
    tol: *const MatrootTolerances,
    out: *mut bool,
) -> MatrootStatus {
    predicate(a, tol, out, matroot::is_orthogonal)
}

/// Largest supported tower depth.
#[no_mangle]
pub extern "C" fn matroot_max_tower_depth() -> u32 {
    MAX_TOWER_DEPTH
}
