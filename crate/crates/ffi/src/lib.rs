//! C ABI over the `fradeco` library.
//!
//! Objects cross the boundary as opaque handles created by `*_new`-style
//! functions and released by the matching `*_free`. Every fallible function
//! returns a `FradecoStatus`; on failure a message is available from
//! `fradeco_last_error_message` on the same thread. Matrices are column-major.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use fradeco::binary::{decompose_binary, fradeco_rank};
use fradeco::decomposition::{verify_decomposition, Decomposition};
use fradeco::equations::KnownEquation;
use fradeco::error::FradecoError;
use fradeco::funtf::sample_frame;
use fradeco::io::{parse_symtensor, read_symtensor, write_symtensor};
use fradeco::linalg::RankPolicy;
use fradeco::power::{robust_eigenvectors, EigenPoint, PowerOptions};
use fradeco::tensor::{synthesize, SymTensor};
use fradeco::variety::{expected_dim, hilbert_value, tangent_dim, HilbertOptions};
use nalgebra::DMatrix;

/// Result codes. Values are stable.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FradecoStatus {
    Ok = 0,
    InvalidArgument = 1,
    ShapeMismatch = 2,
    Parse = 3,
    Io = 4,
    /// No determinantal template drops rank: not fradeco at that rank.
    NotRankDeficient = 5,
    SingularPoint = 6,
    RepeatedRoots = 7,
    ComplexRoots = 8,
    /// The numerical rank could not be decided.
    Indeterminate = 9,
    /// An iteration, sampler or search gave up.
    NoConvergence = 10,
    BudgetExceeded = 11,
    UnknownEquation = 12,
    /// Catalecticant rank outside the supported range, or an empty conic.
    RankOutOfRange = 13,
    NullPointer = 14,
    BufferTooSmall = 15,
    Panic = 16,
}

fn status_of(e: &FradecoError) -> FradecoStatus {
    use FradecoError::*;
    match e {
        InvalidArgument(_) | ZeroColumn { .. } | NotUnitQuaternion { .. } | UnsupportedR(_) | OrderTooSmall { .. } => {
            FradecoStatus::InvalidArgument
        }
        ShapeMismatch(_) => FradecoStatus::ShapeMismatch,
        Parse { .. } => FradecoStatus::Parse,
        Io(_) => FradecoStatus::Io,
        NotRankDeficient { .. } | NoDeficientTemplate { .. } => FradecoStatus::NotRankDeficient,
        SingularPoint { .. } => FradecoStatus::SingularPoint,
        RepeatedRoots => FradecoStatus::RepeatedRoots,
        ComplexRoots { .. } => FradecoStatus::ComplexRoots,
        Indeterminate { .. } => FradecoStatus::Indeterminate,
        ZeroGradient | NonConvergence { .. } | SamplingFailed { .. } | NotFound { .. } => FradecoStatus::NoConvergence,
        BudgetExceeded { .. } => FradecoStatus::BudgetExceeded,
        UnknownEquation(_) => FradecoStatus::UnknownEquation,
        FullRank | RankTooLow { .. } | EmptyConic => FradecoStatus::RankOutOfRange,
    }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Failure(FradecoStatus, String);

impl From<FradecoError> for Failure {
    fn from(e: FradecoError) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn fail(status: FradecoStatus, msg: impl Into<String>) -> Failure {
    Failure(status, msg.into())
}

/// Runs `body`, records any failure and converts panics.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> FradecoStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_last_error("");
            FradecoStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            FradecoStatus::Panic
        }
    }
}

unsafe fn as_ref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| fail(FradecoStatus::NullPointer, format!("{what} is null")))
}

unsafe fn slice<'a>(p: *const f64, len: usize, what: &str) -> Result<&'a [f64], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(fail(FradecoStatus::NullPointer, format!("{what} is null")));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(fail(FradecoStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(FradecoStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(fail(FradecoStatus::NullPointer, format!("{what} is null")));
    }
    out.write(value);
    Ok(())
}

unsafe fn copy_out(src: &[f64], out: *mut f64, cap: usize) -> Result<(), Failure> {
    if cap < src.len() {
        return Err(fail(
            FradecoStatus::BufferTooSmall,
            format!("buffer holds {cap} values, need {}", src.len()),
        ));
    }
    if !src.is_empty() {
        if out.is_null() {
            return Err(fail(FradecoStatus::NullPointer, "output buffer is null"));
        }
        ptr::copy_nonoverlapping(src.as_ptr(), out, src.len());
    }
    Ok(())
}

fn boxed<T>(v: T) -> *mut T {
    Box::into_raw(Box::new(v))
}

/// Symmetric tensor in t-coordinates.
pub struct FradecoTensor(SymTensor);

/// An `n x r` frame.
pub struct FradecoFrame(DMatrix<f64>);

/// A frame with weights.
pub struct FradecoDecomposition(Decomposition);

/// Clusters returned by the power method.
pub struct FradecoEigenList(Vec<EigenPoint>);

/// Message of the last failure on this thread, empty after a success. The
/// pointer stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn fradeco_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Static, NUL-terminated version string.
#[no_mangle]
pub extern "C" fn fradeco_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

// ---- tensors ----

/// `coords` holds `len` coordinates in lexicographic exponent order.
///
/// # Safety
/// `coords` must point to `len` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fradeco_tensor_new(
    n: usize,
    d: usize,
    coords: *const f64,
    len: usize,
    out: *mut *mut FradecoTensor,
) -> FradecoStatus {
    guard(|| {
        let c = slice(coords, len, "coords")?.to_vec();
        let t = SymTensor::new(n, d, c)?;
        write_out(out, boxed(FradecoTensor(t)), "out")
    })
}

/// Binary form from `t_0 .. t_d`.
///
/// # Safety
/// `coords` must point to `len` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fradeco_tensor_from_binary(
    coords: *const f64,
    len: usize,
    out: *mut *mut FradecoTensor,
) -> FradecoStatus {
    guard(|| {
        let t = SymTensor::from_binary(slice(coords, len, "coords")?)?;
        write_out(out, boxed(FradecoTensor(t)), "out")
    })
}

/// Parses the `symtensor v1` text format.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fradeco_tensor_parse(text: *const c_char, out: *mut *mut FradecoTensor) -> FradecoStatus {
    guard(|| {
        let t = parse_symtensor(str_arg(text, "text")?)?;
        write_out(out, boxed(FradecoTensor(t)), "out")
    })
}

/// Reads a `symtensor v1` file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fradeco_tensor_read(path: *const c_char, out: *mut *mut FradecoTensor) -> FradecoStatus {
    guard(|| {
        let t = read_symtensor(Path::new(str_arg(path, "path")?))?;
        write_out(out, boxed(FradecoTensor(t)), "out")
    })
}

/// Writes the `symtensor v1` text of `t` into `buf` (NUL-terminated) and its
/// length including the NUL into `needed`. With a too-small buffer only
/// `needed` is set and `BufferTooSmall` returned.
///
/// # Safety
/// `t` must be a live handle; `buf` must hold `cap` bytes; `needed` writable.
#[no_mangle]
pub unsafe extern "C" fn fradeco_tensor_format(
    t: *const FradecoTensor,
    buf: *mut c_char,
    cap: usize,
    needed: *mut usize,
) -> FradecoStatus {
    guard(|| {
        let text = write_symtensor(&as_ref(t, "tensor")?.0);
        write_out(needed, text.len() + 1, "needed")?;
        if cap < text.len() + 1 {
            return Err(fail(FradecoStatus::BufferTooSmall, format!("need {} bytes", text.len() + 1)));
        }
        if buf.is_null() {
            return Err(fail(FradecoStatus::NullPointer, "buf is null"));
        }
        ptr::copy_nonoverlapping(text.as_ptr().cast(), buf, text.len());
        buf.add(text.len()).write(0);
        Ok(())
    })
}

/// Number of variables, or 0 for a null handle.
///
/// # Safety
/// `t` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fradeco_tensor_n(t: *const FradecoTensor) -> usize {
    t.as_ref().map_or(0, |t| t.0.n())
}

/// Order, or 0 for a null handle.
///
/// # Safety
/// `t` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fradeco_tensor_d(t: *const FradecoTensor) -> usize {
    t.as_ref().map_or(0, |t| t.0.d())
}

/// Number of coordinates, or 0 for a null handle.
///
/// # Safety
/// `t` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fradeco_tensor_len(t: *const FradecoTensor) -> usize {
    t.as_ref().map_or(0, |t| t.0.coords().len())
}

/// Copies the coordinates into `out`.
///
/// # Safety
/// `t` must be a live handle; `out` must hold `cap` doubles.
#[no_mangle]
pub unsafe extern "C" fn fradeco_tensor_coords(t: *const FradecoTensor, out: *mut f64, cap: usize) -> FradecoStatus {
    guard(|| copy_out(as_ref(t, "tensor")?.0.coords(), out, cap))
}

/// Value of the form at `x`.
///
/// # Safety
/// `t` must be a live handle; `x` must hold `n` doubles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fradeco_tensor_evaluate(
    t: *const FradecoTensor,
    x: *const f64,
    n: usize,
    out: *mut f64,
) -> FradecoStatus {
    guard(|| {
        let t = &as_ref(t, "tensor")?.0;
        if n != t.n() {
            return Err(fail(FradecoStatus::ShapeMismatch, format!("point has {n} entries, tensor has n = {}", t.n())));
        }
        write_out(out, t.evaluate(slice(x, n, "x")?), "out")
    })
}

/// # Safety
/// `t` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fradeco_tensor_free(t: *mut FradecoTensor) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

// ---- frames ----

/// Frame from `n * r` column-major entries.
///
/// # Safety
/// `data` must hold `n * r` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fradeco_frame_new(
    n: usize,
    r: usize,
    data: *const f64,
    out: *mut *mut FradecoFrame,
) -> FradecoStatus {
    guard(|| {
        let len = n
            .checked_mul(r)
            .ok_or_else(|| fail(FradecoStatus::InvalidArgument, "n * r overflows"))?;
        let v = DMatrix::from_column_slice(n, r, slice(data, len, "data")?);
        write_out(out, boxed(FradecoFrame(v)), "out")
    })
}

/// Random funtf of `r` vectors in dimension `n`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fradeco_frame_sample(r: usize, n: usize, seed: u64, out: *mut *mut FradecoFrame) -> FradecoStatus {
    guard(|| {
        let f = sample_frame(r, n, seed)?;
        write_out(out, boxed(FradecoFrame(f.into_matrix())), "out")
    })
}

/// # Safety
/// `f` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fradeco_frame_n(f: *const FradecoFrame) -> usize {
    f.as_ref().map_or(0, |f| f.0.nrows())
}

/// # Safety
/// `f` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fradeco_frame_r(f: *const FradecoFrame) -> usize {
    f.as_ref().map_or(0, |f| f.0.ncols())
}

/// Max violation of the unit-norm tight frame equations.
///
/// # Safety
/// `f` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fradeco_frame_residual(f: *const FradecoFrame, out: *mut f64) -> FradecoStatus {
    guard(|| write_out(out, fradeco::funtf::funtf_residual(&as_ref(f, "frame")?.0), "out"))
}

/// Copies the entries column-major into `out`.
///
/// # Safety
/// `f` must be a live handle; `out` must hold `cap` doubles.
#[no_mangle]
pub unsafe extern "C" fn fradeco_frame_data(f: *const FradecoFrame, out: *mut f64, cap: usize) -> FradecoStatus {
    guard(|| copy_out(as_ref(f, "frame")?.0.as_slice(), out, cap))
}

/// # Safety
/// `f` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fradeco_frame_free(f: *mut FradecoFrame) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// `sum_j weights_j v_j^{⊗d}`.
///
/// # Safety
/// `f` must be a live handle; `weights` must hold `r` doubles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fradeco_synthesize(
    f: *const FradecoFrame,
    weights: *const f64,
    r: usize,
    d: usize,
    out: *mut *mut FradecoTensor,
) -> FradecoStatus {
    guard(|| {
        let t = synthesize(&as_ref(f, "frame")?.0, slice(weights, r, "weights")?, d)?;
        write_out(out, boxed(FradecoTensor(t)), "out")
    })
}

// ---- decompositions ----

/// Smallest `r` whose determinantal template drops rank, for a binary form.
///
/// # Safety
/// `t` must be a live handle; `out_r` writable.
#[no_mangle]
pub unsafe extern "C" fn fradeco_binary_rank(t: *const FradecoTensor, rel_tol: f64, out_r: *mut usize) -> FradecoStatus {
    guard(|| {
        let coords = as_ref(t, "tensor")?.0.binary_coords()?;
        let fr = fradeco_rank(&coords, &RankPolicy::with_rel_tol(rel_tol))?;
        let max_r = fr.reports.last().map_or(2, |x| x.r);
        let r = fr.first_deficient.ok_or(FradecoError::NoDeficientTemplate { max_r })?;
        write_out(out_r, r, "out_r")
    })
}

/// Decomposes a binary form over a funtf of `r` vectors.
///
/// # Safety
/// `t` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fradeco_decompose_binary(
    t: *const FradecoTensor,
    r: usize,
    rel_tol: f64,
    out: *mut *mut FradecoDecomposition,
) -> FradecoStatus {
    guard(|| {
        let dec = decompose_binary(&as_ref(t, "tensor")?.0, r, &RankPolicy::with_rel_tol(rel_tol))?;
        write_out(out, boxed(FradecoDecomposition(dec)), "out")
    })
}

/// # Safety
/// `dec` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fradeco_decomposition_r(dec: *const FradecoDecomposition) -> usize {
    dec.as_ref().map_or(0, |d| d.0.weights.len())
}

/// # Safety
/// `dec` must be a live handle; `out` must hold `cap` doubles.
#[no_mangle]
pub unsafe extern "C" fn fradeco_decomposition_weights(
    dec: *const FradecoDecomposition,
    out: *mut f64,
    cap: usize,
) -> FradecoStatus {
    guard(|| copy_out(&as_ref(dec, "decomposition")?.0.weights, out, cap))
}

/// New frame handle holding a copy of the decomposition's frame.
///
/// # Safety
/// `dec` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fradeco_decomposition_frame(
    dec: *const FradecoDecomposition,
    out: *mut *mut FradecoFrame,
) -> FradecoStatus {
    guard(|| {
        let v = as_ref(dec, "decomposition")?.0.frame.matrix().clone();
        write_out(out, boxed(FradecoFrame(v)), "out")
    })
}

/// Max-norm coordinate residual of the fit.
///
/// # Safety
/// `dec` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fradeco_decomposition_residual(dec: *const FradecoDecomposition, out: *mut f64) -> FradecoStatus {
    guard(|| write_out(out, as_ref(dec, "decomposition")?.0.fit_residual, "out"))
}

/// Passes when both the coordinate residual and the frame residual are at
/// most `tol`.
///
/// # Safety
/// Handles must be live; `out_pass` and `out_residual` writable.
#[no_mangle]
pub unsafe extern "C" fn fradeco_verify(
    t: *const FradecoTensor,
    dec: *const FradecoDecomposition,
    tol: f64,
    out_pass: *mut bool,
    out_residual: *mut f64,
) -> FradecoStatus {
    guard(|| {
        let rep = verify_decomposition(&as_ref(t, "tensor")?.0, &as_ref(dec, "decomposition")?.0, tol)?;
        write_out(out_pass, rep.pass, "out_pass")?;
        write_out(out_residual, rep.coord_residual.max(rep.frame_residual), "out_residual")
    })
}

/// # Safety
/// `dec` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fradeco_decomposition_free(dec: *mut FradecoDecomposition) {
    if !dec.is_null() {
        drop(Box::from_raw(dec));
    }
}

// ---- eigenvectors ----

/// Power-method limits from `trials` random starts (0 means `100 n`).
///
/// # Safety
/// `t` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fradeco_eigen_compute(
    t: *const FradecoTensor,
    trials: usize,
    seed: u64,
    out: *mut *mut FradecoEigenList,
) -> FradecoStatus {
    guard(|| {
        let t = &as_ref(t, "tensor")?.0;
        let mut opts = PowerOptions::for_dimension(t.n());
        if trials > 0 {
            opts.trials = trials;
        }
        let list = robust_eigenvectors(t, &opts, seed)?;
        write_out(out, boxed(FradecoEigenList(list)), "out")
    })
}

/// # Safety
/// `list` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fradeco_eigen_len(list: *const FradecoEigenList) -> usize {
    list.as_ref().map_or(0, |l| l.0.len())
}

/// Cluster `i`: its unit vector, basin count and whether it is attracting.
///
/// # Safety
/// `list` must be a live handle; `x` must hold `cap` doubles; the other
/// outputs writable.
#[no_mangle]
pub unsafe extern "C" fn fradeco_eigen_get(
    list: *const FradecoEigenList,
    i: usize,
    x: *mut f64,
    cap: usize,
    basin_count: *mut usize,
    attracting: *mut bool,
) -> FradecoStatus {
    guard(|| {
        let list = &as_ref(list, "list")?.0;
        let p = list
            .get(i)
            .ok_or_else(|| fail(FradecoStatus::InvalidArgument, format!("index {i} out of range ({})", list.len())))?;
        copy_out(&p.x, x, cap)?;
        write_out(basin_count, p.basin_count, "basin_count")?;
        write_out(attracting, p.attracting, "attracting")
    })
}

/// # Safety
/// `list` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fradeco_eigen_free(list: *mut FradecoEigenList) {
    if !list.is_null() {
        drop(Box::from_raw(list));
    }
}

// ---- varieties ----

/// Expected projective dimension of the fradeco variety.
///
/// # Safety
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fradeco_expected_dim(r: usize, n: usize, d: usize, out: *mut usize) -> FradecoStatus {
    guard(|| write_out(out, expected_dim(r, n, d)?, "out"))
}

/// Numerical dimension from tangent spaces at `samples` random points.
///
/// # Safety
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fradeco_tangent_dim(
    r: usize,
    n: usize,
    d: usize,
    seed: u64,
    samples: usize,
    out: *mut usize,
) -> FradecoStatus {
    guard(|| write_out(out, tangent_dim(r, n, d, seed, samples, &RankPolicy::default())?.dim, "out"))
}

/// Dimension of the degree-`e` part of the ideal (0 samples means default).
///
/// # Safety
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fradeco_hilbert_value(
    r: usize,
    n: usize,
    d: usize,
    e: usize,
    seed: u64,
    samples: usize,
    out: *mut usize,
) -> FradecoStatus {
    guard(|| {
        let opts = HilbertOptions {
            samples: (samples > 0).then_some(samples),
            ..HilbertOptions::default()
        };
        let h = hilbert_value(r, n, d, e, seed, &opts, &RankPolicy::default())?;
        write_out(out, h.kernel_dim, "out")
    })
}

/// Named equation at `t`, divided by `max|t|^degree`.
///
/// # Safety
/// `name` must be NUL-terminated; `t` a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fradeco_check_equation(
    name: *const c_char,
    t: *const FradecoTensor,
    out: *mut f64,
) -> FradecoStatus {
    guard(|| {
        let eq = KnownEquation::from_name(str_arg(name, "name")?)?;
        write_out(out, eq.evaluate_normalized(&as_ref(t, "tensor")?.0)?, "out")
    })
}
