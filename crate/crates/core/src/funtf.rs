//! Finite unit norm tight frames: residuals, sampling, the planar
//! multilinear forms, Plücker coordinates and canonical frames.

use nalgebra::{DMatrix, DVector, Matrix3};
use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::error::{FradecoError, Result};
use crate::linalg::{null_space, RankInfo, RankPolicy};
use crate::rng::{random_unit_vector, rng_from_seed, FradecoRng};

/// Retry budget for the rejection samplers.
pub const DEFAULT_SAMPLING_ATTEMPTS: usize = 100;

/// Residual ceiling a sampled frame must meet.
pub const SAMPLE_RESIDUAL_TOL: f64 = 1e-10;

/// An `n x r` frame with its funtf residual.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    v: DMatrix<f64>,
    residual: f64,
}

impl Frame {
    pub fn new(v: DMatrix<f64>) -> Self {
        let residual = funtf_residual(&v);
        Frame { v, residual }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.v
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.v
    }

    pub fn n(&self) -> usize {
        self.v.nrows()
    }

    pub fn r(&self) -> usize {
        self.v.ncols()
    }

    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.v.column(j).iter().copied().collect()
    }
}

/// Max violation of `V V^T = (r/n) Id` and `|v_j|^2 = 1`.
pub fn funtf_residual(v: &DMatrix<f64>) -> f64 {
    let n = v.nrows();
    let r = v.ncols();
    if n == 0 {
        return 0.0;
    }
    let gram = v * v.transpose();
    let scale = r as f64 / n as f64;
    let mut worst: f64 = 0.0;
    for k in 0..n {
        for l in 0..n {
            let target = if k == l { scale } else { 0.0 };
            worst = worst.max((gram[(k, l)] - target).abs());
        }
    }
    for j in 0..r {
        worst = worst.max((v.column(j).norm_squared() - 1.0).abs());
    }
    worst
}

/// The `n^2 + r` funtf equations at `V`: the entries of `V V^T - (r/n) Id`
/// (row-major) followed by `|v_j|^2 - 1`.
pub fn funtf_equations(v: &DMatrix<f64>) -> Vec<f64> {
    let n = v.nrows();
    let r = v.ncols();
    let gram = v * v.transpose();
    let scale = r as f64 / n as f64;
    let mut out = Vec::with_capacity(n * n + r);
    for k in 0..n {
        for l in 0..n {
            out.push(gram[(k, l)] - if k == l { scale } else { 0.0 });
        }
    }
    for j in 0..r {
        out.push(v.column(j).norm_squared() - 1.0);
    }
    out
}

/// Jacobian of [`funtf_equations`] with respect to `vec(V)` (column-major,
/// entry `(i, j)` at `j * n + i`).
pub fn funtf_jacobian(v: &DMatrix<f64>) -> DMatrix<f64> {
    let n = v.nrows();
    let r = v.ncols();
    let mut jac = DMatrix::zeros(n * n + r, n * r);
    for k in 0..n {
        for l in 0..n {
            let row = k * n + l;
            for j in 0..r {
                jac[(row, j * n + k)] += v[(l, j)];
                jac[(row, j * n + l)] += v[(k, j)];
            }
        }
    }
    for j in 0..r {
        for i in 0..n {
            jac[(n * n + j, j * n + i)] = 2.0 * v[(i, j)];
        }
    }
    jac
}

/// Tangent space of the funtf variety at `V` (null space of the Jacobian),
/// as columns in `vec(V)` coordinates.
pub fn funtf_tangent_space(v: &DMatrix<f64>, policy: &RankPolicy) -> Result<(DMatrix<f64>, RankInfo)> {
    let (basis, info) = null_space(&funtf_jacobian(v), policy);
    let info = info.require_confident(policy)?;
    Ok((basis, info))
}

/// `dim F_{r,n} = (n-1)(r - n/2 - 1)` for `r > n >= 2`.
pub fn funtf_variety_dim(r: usize, n: usize) -> usize {
    // (n-1)(2r - n - 2) / 2 is always an integer
    (n - 1) * (2 * r - n - 2) / 2
}

/// The planar system `(P~, Q~) = M (v_1r, v_2r)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PQSystem {
    pub m11: f64,
    pub m12: f64,
    pub m21: f64,
    pub m22: f64,
}

impl PQSystem {
    /// `(P~, Q~)` for a given last column.
    pub fn apply(&self, last: [f64; 2]) -> (f64, f64) {
        (
            self.m11 * last[0] + self.m12 * last[1],
            self.m21 * last[0] + self.m22 * last[1],
        )
    }

    /// `m11 m22 - m12 m21`.
    pub fn eliminant(&self) -> f64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    /// The last column solving the system, `(m12, -m11)`.
    pub fn completing_column(&self) -> [f64; 2] {
        [self.m12, -self.m11]
    }
}

/// `sum_j conj(z_j) prod_{k != j} z_k` with `z_j = v_1j + i v_2j`.
fn pq_numerator(points: &[[f64; 2]]) -> Complex64 {
    let z: Vec<Complex64> = points.iter().map(|p| Complex64::new(p[0], p[1])).collect();
    let r = z.len();
    // prefix/suffix products avoid dividing by z_j
    let mut prefix = vec![Complex64::new(1.0, 0.0); r + 1];
    for j in 0..r {
        prefix[j + 1] = prefix[j] * z[j];
    }
    let mut suffix = vec![Complex64::new(1.0, 0.0); r + 1];
    for j in (0..r).rev() {
        suffix[j] = suffix[j + 1] * z[j];
    }
    (0..r).map(|j| z[j].conj() * prefix[j] * suffix[j + 1]).sum()
}

/// The multilinear forms `(P~, Q~)` evaluated at all `r` columns of a planar
/// configuration.
pub fn multilinear_values(points: &[[f64; 2]]) -> (f64, f64) {
    let z = pq_numerator(points);
    (z.re, z.im)
}

/// Coefficients of `(P~, Q~)` as linear functions of a symbolic last column,
/// given the first `r - 1` planar points.
pub fn multilinear_pq(points: &[[f64; 2]]) -> Result<PQSystem> {
    if let Some(index) = points.iter().position(|p| p[0] == 0.0 && p[1] == 0.0) {
        return Err(FradecoError::ZeroColumn { index });
    }
    let mut ext = points.to_vec();
    ext.push([1.0, 0.0]);
    let a = pq_numerator(&ext);
    *ext.last_mut().unwrap() = [0.0, 1.0];
    let b = pq_numerator(&ext);
    Ok(PQSystem {
        m11: a.re,
        m12: b.re,
        m21: a.im,
        m22: b.im,
    })
}

fn frame_points(v: &DMatrix<f64>) -> Vec<[f64; 2]> {
    (0..v.ncols()).map(|j| [v[(0, j)], v[(1, j)]]).collect()
}

/// `(P~, Q~)` at a planar frame.
pub fn frame_multilinear_values(frame: &Frame) -> Result<(f64, f64)> {
    if frame.n() != 2 {
        return Err(FradecoError::ShapeMismatch(format!(
            "multilinear forms need n = 2, got n = {}",
            frame.n()
        )));
    }
    Ok(multilinear_values(&frame_points(frame.matrix())))
}

/// Roots of `a s^2 + b s + c` (real only), numerically stable form.
fn real_quadratic_roots(a: f64, b: f64, c: f64) -> Option<(f64, f64)> {
    if a == 0.0 {
        if b == 0.0 {
            return None;
        }
        return Some((-c / b, -c / b));
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return None;
    }
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    if q == 0.0 {
        return Some((0.0, 0.0));
    }
    Some((q / a, c / q))
}

fn unit_circle_point(rng: &mut FradecoRng) -> [f64; 2] {
    let theta = rng.random_range(0.0..std::f64::consts::TAU);
    [theta.cos(), theta.sin()]
}

fn normalize2(p: [f64; 2]) -> Option<[f64; 2]> {
    let norm = p[0].hypot(p[1]);
    (norm > 1e-12).then(|| [p[0] / norm, p[1] / norm])
}

fn try_sample_planar(r: usize, rng: &mut FradecoRng) -> Option<Frame> {
    let mut pts: Vec<[f64; 2]> = (0..r - 2).map(|_| unit_circle_point(rng)).collect();

    // The eliminant is a binary quadratic form in the (r-1)-th point.
    pts.push([1.0, 0.0]);
    let sx = multilinear_pq(&pts).ok()?;
    *pts.last_mut().unwrap() = [0.0, 1.0];
    let sy = multilinear_pq(&pts).ok()?;
    let combine = |x: f64, y: f64| PQSystem {
        m11: x * sx.m11 + y * sy.m11,
        m12: x * sx.m12 + y * sy.m12,
        m21: x * sx.m21 + y * sy.m21,
        m22: x * sx.m22 + y * sy.m22,
    };
    let exx = combine(1.0, 0.0).eliminant();
    let eyy = combine(0.0, 1.0).eliminant();
    let exy = combine(1.0, 1.0).eliminant() - exx - eyy;
    let pick_first = rng.random_bool(0.5);
    let point = if exx.abs() >= eyy.abs() {
        let (s1, s2) = real_quadratic_roots(exx, exy, eyy)?;
        [if pick_first { s1 } else { s2 }, 1.0]
    } else {
        let (s1, s2) = real_quadratic_roots(eyy, exy, exx)?;
        [1.0, if pick_first { s1 } else { s2 }]
    };
    let point = normalize2(point)?;
    *pts.last_mut().unwrap() = point;

    let system = multilinear_pq(&pts).ok()?;
    let last = normalize2(system.completing_column())?;
    pts.push(last);

    let v = DMatrix::from_fn(2, r, |i, j| pts[j][i]);
    let frame = Frame::new(v);
    (frame.residual() < SAMPLE_RESIDUAL_TOL).then_some(frame)
}

/// Random planar funtf of `r` vectors from the eliminant of the multilinear
/// forms, with the default retry budget.
pub fn sample_planar(r: usize, seed: u64) -> Result<Frame> {
    sample_planar_with_budget(r, seed, DEFAULT_SAMPLING_ATTEMPTS)
}

pub fn sample_planar_with_budget(r: usize, seed: u64, attempts: usize) -> Result<Frame> {
    if r < 3 {
        return Err(FradecoError::InvalidArgument(format!(
            "planar sampling needs r >= 3, got {r}"
        )));
    }
    let mut rng = rng_from_seed(seed);
    sample_planar_rng(r, &mut rng, attempts)
}

pub fn sample_planar_rng(r: usize, rng: &mut FradecoRng, attempts: usize) -> Result<Frame> {
    (0..attempts)
        .find_map(|_| try_sample_planar(r, rng))
        .ok_or(FradecoError::SamplingFailed { attempts })
}

fn try_sample_general(r: usize, n: usize, rng: &mut FradecoRng) -> Option<Frame> {
    let w_cols: Vec<Vec<f64>> = (0..r - n).map(|_| random_unit_vector(n, rng)).collect();
    let w = DMatrix::from_fn(n, r - n, |i, j| w_cols[j][i]);
    let s = DMatrix::identity(n, n) * (r as f64 / n as f64) - &w * w.transpose();
    // real unit vectors with frame operator S need S positive definite
    let s_inv = s.clone().cholesky()?.inverse();
    let a = &s_inv - DMatrix::identity(n, n);

    let mut u_cols: Vec<DVector<f64>> = Vec::with_capacity(n);
    for j in 0..n {
        // columns must be S^{-1}-orthogonal to the earlier ones
        let basis = if j == 0 {
            DMatrix::identity(n, n)
        } else {
            let mut c = DMatrix::zeros(j, n);
            for (k, u) in u_cols.iter().enumerate() {
                c.row_mut(k).copy_from(&(&s_inv * u).transpose());
            }
            let (ns, info) = null_space(&c, &RankPolicy::default());
            if info.rank != j {
                return None;
            }
            ns
        };
        let m = basis.ncols();
        let u = if m == 1 {
            basis.column(0).into_owned()
        } else {
            let p = DVector::from_fn(m, |_, _| rng.random_range(-1.0..1.0));
            let q = DVector::from_fn(m, |_, _| rng.random_range(-1.0..1.0));
            let qa = basis.transpose() * &a * &basis;
            let alpha = q.dot(&(&qa * &q));
            let beta = 2.0 * p.dot(&(&qa * &q));
            let gamma = p.dot(&(&qa * &p));
            let (t1, t2) = real_quadratic_roots(alpha, beta, gamma)?;
            let t = if rng.random_bool(0.5) { t1 } else { t2 };
            &basis * (p + q * t)
        };
        let norm = u.norm();
        if norm.is_nan() || norm <= 1e-8 {
            return None;
        }
        u_cols.push(u / norm);
    }

    let v = DMatrix::from_fn(n, r, |i, j| {
        if j < n {
            u_cols[j][i]
        } else {
            w[(i, j - n)]
        }
    });
    let frame = Frame::new(v);
    (frame.residual() < SAMPLE_RESIDUAL_TOL).then_some(frame)
}

/// Random funtf of `r` vectors in `R^n` from the tight-frame completion of
/// `r - n` free unit vectors.
pub fn sample_general(r: usize, n: usize, seed: u64) -> Result<Frame> {
    sample_general_with_budget(r, n, seed, DEFAULT_SAMPLING_ATTEMPTS)
}

pub fn sample_general_with_budget(r: usize, n: usize, seed: u64, attempts: usize) -> Result<Frame> {
    let mut rng = rng_from_seed(seed);
    sample_general_rng(r, n, &mut rng, attempts)
}

pub fn sample_general_rng(r: usize, n: usize, rng: &mut FradecoRng, attempts: usize) -> Result<Frame> {
    if n < 2 || r <= n {
        return Err(FradecoError::InvalidArgument(format!(
            "general sampling needs r > n >= 2, got r = {r}, n = {n}"
        )));
    }
    (0..attempts)
        .find_map(|_| try_sample_general(r, n, rng))
        .ok_or(FradecoError::SamplingFailed { attempts })
}

/// Planar sampler for `n = 2`, general sampler otherwise.
pub fn sample_frame(r: usize, n: usize, seed: u64) -> Result<Frame> {
    if n == 2 {
        sample_planar(r, seed)
    } else {
        sample_general(r, n, seed)
    }
}

/// Rotation matrix of a unit quaternion `(w, x, y, z)`.
pub fn quaternion_rotation(q: [f64; 4]) -> Matrix3<f64> {
    let [w, x, y, z] = q;
    Matrix3::new(
        1.0 - 2.0 * y * y - 2.0 * z * z,
        2.0 * x * y - 2.0 * z * w,
        2.0 * x * z + 2.0 * y * w,
        2.0 * x * y + 2.0 * z * w,
        1.0 - 2.0 * x * x - 2.0 * z * z,
        2.0 * y * z - 2.0 * x * w,
        2.0 * x * z - 2.0 * y * w,
        2.0 * y * z + 2.0 * x * w,
        1.0 - 2.0 * x * x - 2.0 * y * y,
    )
}

/// `SO_3`-orbit parametrization of one component of `F_{4,3}`:
/// `rho(q) * B * diag(signs) / (3 sqrt 3)`.
pub fn so3_orbit_frame(q: [f64; 4], signs: [f64; 4]) -> Result<Frame> {
    let norm = q.iter().map(|c| c * c).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(FradecoError::NotUnitQuaternion { norm });
    }
    if signs.iter().any(|&s| s != 1.0 && s != -1.0) {
        return Err(FradecoError::InvalidArgument(format!(
            "sign vector entries must be +1 or -1, got {signs:?}"
        )));
    }
    const B: [[f64; 3]; 4] = [[3.0, 3.0, 3.0], [1.0, 1.0, -5.0], [1.0, -5.0, 1.0], [-5.0, 1.0, 1.0]];
    let rho = quaternion_rotation(q);
    let scale = 1.0 / (3.0 * 3f64.sqrt());
    let b = DMatrix::from_fn(3, 4, |i, j| B[j][i] * signs[j] * scale);
    let rho = DMatrix::from_fn(3, 3, |i, j| rho[(i, j)]);
    Ok(Frame::new(rho * b))
}

/// Plücker coordinates: all maximal minors of an `n x r` matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlueckerVector {
    pub n: usize,
    pub r: usize,
    /// `n`-subsets of `0..r` in lexicographic order.
    pub subsets: Vec<Vec<usize>>,
    pub p: Vec<f64>,
}

impl PlueckerVector {
    pub fn sum_of_squares(&self) -> f64 {
        self.p.iter().map(|x| x * x).sum()
    }

    /// `sum_{I containing i} p_I^2` for each column `i`.
    pub fn incidence_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.r];
        for (subset, p) in self.subsets.iter().zip(&self.p) {
            for &i in subset {
                sums[i] += p * p;
            }
        }
        sums
    }

    /// Max deviation from `sum p_I^2 = (r/n)^n` and from every incidence
    /// identity `sum_{I ∋ i} p_I^2 = (r/n)^(n-1)`.
    pub fn identity_residual(&self) -> f64 {
        let ratio = self.r as f64 / self.n as f64;
        let total = (self.sum_of_squares() - ratio.powi(self.n as i32)).abs();
        let target = ratio.powi(self.n as i32 - 1);
        self.incidence_sums()
            .iter()
            .fold(total, |m, s| m.max((s - target).abs()))
    }
}

/// `k`-subsets of `0..r` in lexicographic order.
pub fn subsets(r: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, r: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..r {
            if r - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, r, k, cur, out);
            cur.pop();
        }
    }
    rec(0, r, k, &mut cur, &mut out);
    out
}

pub fn pluecker(v: &DMatrix<f64>) -> Result<PlueckerVector> {
    let n = v.nrows();
    let r = v.ncols();
    if r < n {
        return Err(FradecoError::InvalidArgument(format!(
            "Plücker coordinates need r >= n, got r = {r}, n = {n}"
        )));
    }
    let subsets = subsets(r, n);
    let p = subsets
        .iter()
        .map(|cols| DMatrix::from_fn(n, n, |i, j| v[(i, cols[j])]).determinant())
        .collect();
    Ok(PlueckerVector { n, r, subsets, p })
}

/// Unit vectors toward the vertices of a regular simplex centred at the
/// origin: an `n x (n+1)` funtf.
pub fn simplex_frame(n: usize) -> Result<Frame> {
    if n < 2 {
        return Err(FradecoError::InvalidArgument(format!(
            "simplex frame needs n >= 2, got {n}"
        )));
    }
    // Helmert rows: orthonormal basis of the hyperplane orthogonal to (1,..,1)
    let scale = ((n + 1) as f64 / n as f64).sqrt();
    let v = DMatrix::from_fn(n, n + 1, |k, i| {
        let k1 = (k + 1) as f64;
        let h = if i <= k {
            1.0
        } else if i == k + 1 {
            -k1
        } else {
            0.0
        };
        scale * h / (k1 * (k1 + 1.0)).sqrt()
    });
    Ok(Frame::new(v))
}

/// Common magnitude of the Plücker coordinates of any frame in `F_{n+1,n}`:
/// `(n+1)^((n-1)/2) / n^(n/2)`.
pub fn simplex_pluecker_magnitude(n: usize) -> f64 {
    let n = n as f64;
    (n + 1.0).powf((n - 1.0) / 2.0) / n.powf(n / 2.0)
}
