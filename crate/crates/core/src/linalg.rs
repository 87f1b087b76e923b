//! Dense numerical linear algebra shared by the modules: SVD-based rank
//! decisions with a gap test, null spaces, least squares, and small exact
//! determinants.

use nalgebra::{DMatrix, DVector};
use num_traits::Num;
use serde::Serialize;

use crate::error::{FradecoError, Result};

/// Threshold policy for numerical rank.
///
/// A singular value counts as zero when it is below `rel_tol * sigma_max`.
/// When some but not all values are dropped, the ratio between the last kept
/// and the first dropped value must be at least `min_gap`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RankPolicy {
    pub rel_tol: f64,
    pub min_gap: f64,
}

impl Default for RankPolicy {
    fn default() -> Self {
        RankPolicy {
            rel_tol: 1e-8,
            min_gap: 1e3,
        }
    }
}

impl RankPolicy {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        RankPolicy {
            rel_tol,
            ..Default::default()
        }
    }
}

/// Outcome of a rank decision.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankInfo {
    pub rank: usize,
    /// Descending.
    pub singular_values: Vec<f64>,
    /// `s[rank-1] / s[rank]`; infinite when nothing (or everything) is dropped.
    pub gap_ratio: f64,
}

impl RankInfo {
    /// Decides the rank without enforcing the gap requirement.
    pub fn from_values(mut sv: Vec<f64>, policy: &RankPolicy) -> Self {
        sv.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
        let smax = sv.first().copied().unwrap_or(0.0);
        let threshold = policy.rel_tol * smax;
        let rank = if smax == 0.0 {
            0
        } else {
            sv.iter().take_while(|&&s| s >= threshold).count()
        };
        let gap_ratio = if rank == 0 || rank == sv.len() || sv[rank] == 0.0 {
            f64::INFINITY
        } else {
            sv[rank - 1] / sv[rank]
        };
        RankInfo {
            rank,
            singular_values: sv,
            gap_ratio,
        }
    }

    pub fn is_confident(&self, policy: &RankPolicy) -> bool {
        self.gap_ratio >= policy.min_gap
    }

    /// Fails with `Indeterminate` when the gap test does not pass.
    pub fn require_confident(self, policy: &RankPolicy) -> Result<Self> {
        if self.is_confident(policy) {
            Ok(self)
        } else {
            Err(FradecoError::Indeterminate {
                gap_ratio: self.gap_ratio,
                required: policy.min_gap,
            })
        }
    }
}

pub fn singular_values(a: &DMatrix<f64>) -> Vec<f64> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Vec::new();
    }
    let mut sv: Vec<f64> = a.clone().svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    sv
}

/// Rank decision (no gap enforcement; callers decide via [`RankInfo::require_confident`]).
pub fn rank_info(a: &DMatrix<f64>, policy: &RankPolicy) -> RankInfo {
    RankInfo::from_values(singular_values(a), policy)
}

/// Right singular vectors of `a`, sorted by descending singular value, as the
/// rows of an `ncols x ncols` matrix, together with the (padded) singular values.
fn full_right_svd(a: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = a.ncols();
    let m = a.nrows();
    let padded = if m < n {
        let mut p = DMatrix::zeros(n, n);
        p.rows_mut(0, m).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = padded.svd(false, true);
    let vt = svd.v_t.expect("v_t requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| {
        svd.singular_values[j]
            .partial_cmp(&svd.singular_values[i])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let sv: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let mut sorted = DMatrix::zeros(order.len(), n);
    for (row, &i) in order.iter().enumerate() {
        sorted.row_mut(row).copy_from(&vt.row(i));
    }
    (sv, sorted)
}

/// Orthonormal basis (as columns) of the right null space of `a`.
pub fn null_space(a: &DMatrix<f64>, policy: &RankPolicy) -> (DMatrix<f64>, RankInfo) {
    let n = a.ncols();
    if a.nrows() == 0 {
        let info = RankInfo {
            rank: 0,
            singular_values: Vec::new(),
            gap_ratio: f64::INFINITY,
        };
        return (DMatrix::identity(n, n), info);
    }
    let (sv, vt) = full_right_svd(a);
    let info = RankInfo::from_values(sv, policy);
    let k = n - info.rank.min(n);
    let mut basis = DMatrix::zeros(n, k);
    for j in 0..k {
        basis
            .column_mut(j)
            .copy_from(&vt.row(info.rank + j).transpose());
    }
    (basis, info)
}

/// Orthonormal basis (as columns) of the left null space of `a`.
pub fn left_null_space(a: &DMatrix<f64>, policy: &RankPolicy) -> (DMatrix<f64>, RankInfo) {
    null_space(&a.transpose(), policy)
}

/// Least-squares solution of `a x = b` with the 2-norm condition number of `a`.
pub fn least_squares(a: &DMatrix<f64>, b: &DVector<f64>) -> (DVector<f64>, f64) {
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let cond = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    let eps = smax * 1e-14;
    let x = svd
        .solve(b, eps)
        .unwrap_or_else(|_| DVector::zeros(a.ncols()));
    (x, cond)
}

/// Determinant by permutation expansion. Exact for exact scalar types; meant
/// for matrices of size at most 6.
pub fn leibniz_det<T: Num + Clone>(m: &[Vec<T>]) -> T {
    let n = m.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = T::zero();
    permute(&mut perm, 0, m, &mut total);
    total
}

fn permute<T: Num + Clone>(perm: &mut [usize], k: usize, m: &[Vec<T>], total: &mut T) {
    let n = perm.len();
    if k == n {
        let mut term = T::one();
        for (row, &col) in perm.iter().enumerate() {
            term = term * m[row][col].clone();
        }
        let mut inversions = 0;
        for i in 0..n {
            for j in i + 1..n {
                if perm[i] > perm[j] {
                    inversions += 1;
                }
            }
        }
        let acc = std::mem::replace(total, T::zero());
        *total = if inversions % 2 == 0 { acc + term } else { acc - term };
        return;
    }
    for i in k..n {
        perm.swap(k, i);
        permute(perm, k + 1, m, total);
        perm.swap(k, i);
    }
}
