//! Fradeco rank and frame decomposition of binary forms through the
//! determinantal matrices `M_r`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::decomposition::Decomposition;
use crate::error::{FradecoError, Result};
use crate::funtf::Frame;
use crate::linalg::{least_squares, left_null_space, rank_info, RankPolicy};
use crate::roots::{binary_form_roots, cluster_roots, ProjectiveRoot};
use crate::tensor::SymTensor;

/// Chordal distance below which two roots of the frame form count as one.
pub const ROOT_CLUSTER_TOL: f64 = 1e-7;
/// Relative imaginary part above which a root counts as non-real.
pub const ROOT_REAL_TOL: f64 = 1e-7;

/// A linear stencil `sum coef * t_idx`.
pub type Stencil = Vec<(i64, usize)>;

/// First column of `M_r`; column `j` shifts every index by `j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TemplateMr {
    pub r: usize,
    pub first_column: Vec<Stencil>,
}

impl TemplateMr {
    pub fn new(r: usize) -> Result<Self> {
        let first_column: Vec<Stencil> = match r {
            3 => vec![vec![(1, 0), (-3, 2)], vec![(3, 1), (-1, 3)]],
            4 => vec![vec![(1, 0), (1, 4)], vec![(1, 1), (-1, 3)], vec![(1, 2)]],
            5 => vec![
                vec![(1, 0), (5, 2)],
                vec![(1, 1), (-3, 3)],
                vec![(3, 2), (-1, 4)],
                vec![(5, 3), (1, 5)],
            ],
            6 => vec![
                vec![(1, 0), (3, 2)],
                vec![(1, 1), (1, 5)],
                vec![(1, 2), (-1, 4)],
                vec![(1, 3)],
                vec![(3, 4), (1, 6)],
            ],
            7 => vec![
                vec![(3, 0), (7, 2)],
                vec![(1, 1), (5, 3)],
                vec![(1, 2), (-3, 4)],
                vec![(3, 3), (-1, 5)],
                vec![(5, 4), (1, 6)],
                vec![(7, 5), (3, 7)],
            ],
            8 => vec![
                vec![(1, 0), (2, 2)],
                vec![(1, 1), (3, 3)],
                vec![(1, 4)],
                vec![(1, 3), (-1, 5)],
                vec![(1, 2), (1, 6)],
                vec![(3, 5), (1, 7)],
                vec![(2, 6), (1, 8)],
            ],
            9 => vec![
                vec![(5, 0), (9, 2)],
                vec![(3, 1), (7, 3)],
                vec![(1, 2), (5, 4)],
                vec![(1, 3), (-3, 5)],
                vec![(3, 4), (-1, 6)],
                vec![(5, 5), (1, 7)],
                vec![(7, 6), (3, 8)],
                vec![(9, 7), (5, 9)],
            ],
            _ => return Err(FradecoError::UnsupportedR(r)),
        };
        Ok(TemplateMr { r, first_column })
    }

    pub fn rows(&self) -> usize {
        self.r - 1
    }

    pub fn cols(&self, d: usize) -> usize {
        d + 1 - self.r
    }

    /// Entry `(row, col)` evaluated at the binary coordinates `t`.
    pub fn entry(&self, t: &[f64], row: usize, col: usize) -> f64 {
        self.first_column[row]
            .iter()
            .map(|&(c, k)| c as f64 * t[k + col])
            .sum()
    }

    /// Coefficients (of `x^k y^(r-k)`) of `sum_s w_s g_s`, where `g_s`
    /// substitutes `t_k -> x^k y^(r-k)` into stencil `s`.
    pub fn form_from_kernel(&self, w: &[f64]) -> Vec<f64> {
        let mut f = vec![0.0; self.r + 1];
        for (ws, stencil) in w.iter().zip(&self.first_column) {
            for &(c, k) in stencil {
                f[k] += ws * c as f64;
            }
        }
        f
    }
}

/// `M_r(t)` for binary coordinates `t_0..t_d`.
pub fn build_mr(t: &[f64], r: usize) -> Result<DMatrix<f64>> {
    let template = TemplateMr::new(r)?;
    if t.is_empty() || t.len() - 1 < 2 * r - 2 {
        return Err(FradecoError::OrderTooSmall {
            d: t.len().saturating_sub(1),
            r,
        });
    }
    let d = t.len() - 1;
    Ok(DMatrix::from_fn(template.rows(), template.cols(d), |i, j| {
        template.entry(t, i, j)
    }))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankReport {
    pub r: usize,
    pub numerical_rank: usize,
    pub singular_values: Vec<f64>,
    pub gap_ratio: f64,
    pub deficient: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FradecoRank {
    pub reports: Vec<RankReport>,
    pub first_deficient: Option<usize>,
}

/// Rank report for a single `r`.
pub fn mr_rank(t: &[f64], r: usize, policy: &RankPolicy) -> Result<RankReport> {
    let m = build_mr(t, r)?;
    let info = rank_info(&m, policy);
    Ok(RankReport {
        r,
        numerical_rank: info.rank,
        deficient: info.rank + 2 <= r,
        gap_ratio: info.gap_ratio,
        singular_values: info.singular_values,
    })
}

/// Tests `r = 3, 4, ...` while `d >= 2r - 2` and stops at the first `r` whose
/// `M_r` drops rank.
pub fn fradeco_rank(t: &[f64], policy: &RankPolicy) -> Result<FradecoRank> {
    let d = t.len().saturating_sub(1);
    if d < 4 {
        return Err(FradecoError::InvalidArgument(format!(
            "fradeco rank needs d >= 4, got d = {d}"
        )));
    }
    let mut reports = Vec::new();
    let mut first_deficient = None;
    for r in 3..=9 {
        if d < 2 * r - 2 {
            break;
        }
        let report = mr_rank(t, r, policy)?;
        // every r up to the first deficient one decides the answer
        if report.gap_ratio < policy.min_gap {
            return Err(FradecoError::Indeterminate {
                gap_ratio: report.gap_ratio,
                required: policy.min_gap,
            });
        }
        let deficient = report.deficient;
        reports.push(report);
        if deficient {
            first_deficient = Some(r);
            break;
        }
    }
    Ok(FradecoRank {
        reports,
        first_deficient,
    })
}

/// Decomposition together with the intermediate data of the algorithm.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryDecomposition {
    pub decomposition: Decomposition,
    /// Left kernel vector of `M_r`.
    pub kernel: Vec<f64>,
    /// Coefficients of `x^k y^(r-k)` in the frame form.
    pub frame_form: Vec<f64>,
    /// Condition number of the weight system.
    pub condition: f64,
}

/// Frame form of `T` at rank `r`: the polynomial whose roots are the frame.
pub fn frame_form(t: &[f64], r: usize, policy: &RankPolicy) -> Result<(Vec<f64>, Vec<f64>)> {
    let template = TemplateMr::new(r)?;
    let m = build_mr(t, r)?;
    let (kernel, info) = left_null_space(&m, policy);
    let info = info.require_confident(policy)?;
    match kernel.ncols() {
        0 => return Err(FradecoError::NotRankDeficient { r }),
        1 => {}
        k => return Err(FradecoError::SingularPoint { r, kernel_dim: k }),
    }
    debug_assert_eq!(info.rank, r - 2);
    let w: Vec<f64> = kernel.column(0).iter().copied().collect();
    let f = template.form_from_kernel(&w);
    Ok((w, f))
}

/// Decomposes a binary form as `sum lambda_j v_j^d` over a funtf of `r` vectors.
pub fn decompose_binary_detailed(
    tensor: &SymTensor,
    r: usize,
    policy: &RankPolicy,
) -> Result<BinaryDecomposition> {
    let t = tensor.binary_coords()?;
    let d = tensor.d();
    let (kernel, form) = frame_form(&t, r, policy)?;

    let roots = binary_form_roots(&form);
    if roots.len() != r || cluster_roots(&roots, ROOT_CLUSTER_TOL).len() != r {
        return Err(FradecoError::RepeatedRoots);
    }
    if roots.iter().any(|z| !z.is_real(ROOT_REAL_TOL)) {
        let roots = roots
            .iter()
            .map(|z| match z {
                ProjectiveRoot::Finite(s) => *s,
                ProjectiveRoot::Infinite => Complex64::new(f64::INFINITY, 0.0),
            })
            .collect();
        return Err(FradecoError::ComplexRoots { roots });
    }

    let mut v = DMatrix::zeros(2, r);
    for (j, root) in roots.iter().enumerate() {
        let p = root.real_unit();
        v[(0, j)] = p[0];
        v[(1, j)] = p[1];
    }
    let a = DMatrix::from_fn(d + 1, r, |i, j| {
        v[(0, j)].powi(i as i32) * v[(1, j)].powi((d - i) as i32)
    });
    let (weights, condition) = least_squares(&a, &DVector::from_vec(t));
    let decomposition = Decomposition::fitted(Frame::new(v), weights.iter().copied().collect(), tensor)?;
    Ok(BinaryDecomposition {
        decomposition,
        kernel,
        frame_form: form,
        condition,
    })
}

pub fn decompose_binary(tensor: &SymTensor, r: usize, policy: &RankPolicy) -> Result<Decomposition> {
    decompose_binary_detailed(tensor, r, policy).map(|b| b.decomposition)
}
