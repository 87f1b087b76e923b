//! Dimensions and Hilbert functions of fradeco varieties, estimated from
//! random points.

use nalgebra::DMatrix;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{FradecoError, Result};
use crate::funtf::{funtf_tangent_space, sample_frame};
use crate::linalg::{rank_info, singular_values, RankInfo, RankPolicy};
use crate::rng::{derive_seed, rng_from_seed, FradecoRng};
use crate::tensor::{basis_len, binomial, index_basis, multinomial, synthesize, synthesize_jacobian, SymTensor};

pub const DEFAULT_COLUMN_BUDGET: usize = 10_000;
pub const MAX_HILBERT_SAMPLES: usize = 30_000;

/// Upper bound on `dim T_{r,n,d}` (projective), exact for `n = 2`.
pub fn expected_dim(r: usize, n: usize, d: usize) -> Result<usize> {
    if n < 2 || r <= n || d < 2 {
        return Err(FradecoError::InvalidArgument(format!(
            "expected_dim needs r > n >= 2 and d >= 2, got r = {r}, n = {n}, d = {d}"
        )));
    }
    let ambient = basis_len(n, d) - 1;
    let param = (n - 1) * (r - n) + (n - 1) * (n - 2) / 2 + r - 1;
    Ok(param.min(ambient))
}

/// Uniform weights in `[-1, 1]^r`, redrawn while `|lambda| < 0.1`.
pub fn random_weights(r: usize, rng: &mut FradecoRng) -> Vec<f64> {
    loop {
        let l: Vec<f64> = (0..r).map(|_| rng.random_range(-1.0..=1.0)).collect();
        if l.iter().map(|x| x * x).sum::<f64>().sqrt() >= 0.1 {
            return l;
        }
    }
}

/// A random point of the affine cone over `T_{r,n,d}`.
pub fn random_fradeco_tensor(r: usize, n: usize, d: usize, seed: u64) -> Result<SymTensor> {
    let frame = sample_frame(r, n, seed)?;
    let mut rng = rng_from_seed(derive_seed(seed, u64::MAX));
    let lambda = random_weights(r, &mut rng);
    synthesize(frame.matrix(), &lambda, d)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TangentReport {
    pub r: usize,
    pub n: usize,
    pub d: usize,
    /// Projective dimension.
    pub dim: usize,
    pub samples: usize,
    /// Profile at the sample attaining the maximal rank.
    pub singular_values: Vec<f64>,
    pub gap_ratio: f64,
}

/// Rank of the differential of `(V, lambda) -> T` restricted to the tangent
/// space of the funtf variety, at one random point.
fn tangent_rank_at(r: usize, n: usize, d: usize, seed: u64, policy: &RankPolicy) -> Result<RankInfo> {
    let frame = sample_frame(r, n, seed)?;
    let mut rng = rng_from_seed(derive_seed(seed, u64::MAX));
    // weights bounded away from zero keep every column visible
    let lambda: Vec<f64> = (0..r)
        .map(|_| {
            let m = rng.random_range(0.5..1.5);
            if rng.random_bool(0.5) { m } else { -m }
        })
        .collect();
    let (tangent, _) = funtf_tangent_space(frame.matrix(), policy)?;
    let k = tangent.ncols();
    let nr = n * r;
    let mut lift = DMatrix::zeros(nr + r, k + r);
    lift.view_mut((0, 0), (nr, k)).copy_from(&tangent);
    for j in 0..r {
        lift[(nr + j, k + j)] = 1.0;
    }
    let image = synthesize_jacobian(frame.matrix(), &lambda, d) * lift;
    rank_info(&image, policy).require_confident(policy)
}

/// Numerical dimension of `T_{r,n,d}`: maximal rank of the pushed-forward
/// tangent space over `samples` random points, minus one.
pub fn tangent_dim(r: usize, n: usize, d: usize, seed: u64, samples: usize, policy: &RankPolicy) -> Result<TangentReport> {
    if n < 2 || r <= n || d < 1 || samples == 0 {
        return Err(FradecoError::InvalidArgument(format!(
            "tangent_dim needs r > n >= 2, d >= 1, samples >= 1; got r = {r}, n = {n}, d = {d}, samples = {samples}"
        )));
    }
    let infos: Vec<RankInfo> = (0..samples)
        .into_par_iter()
        .map(|i| tangent_rank_at(r, n, d, derive_seed(seed, i as u64), policy))
        .collect::<Result<_>>()?;
    let best = infos.into_iter().max_by_key(|i| i.rank).expect("samples >= 1");
    Ok(TangentReport {
        r,
        n,
        d,
        dim: best.rank.saturating_sub(1),
        samples,
        gap_ratio: best.gap_ratio,
        singular_values: best.singular_values,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HilbertReport {
    pub r: usize,
    pub n: usize,
    pub d: usize,
    pub e: usize,
    pub ambient_dim: usize,
    pub samples: usize,
    pub singular_values: Vec<f64>,
    /// `dim I_e`.
    pub kernel_dim: usize,
    pub gap_ratio: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HilbertOptions {
    /// Defaults to twice the ambient dimension, capped at 30000.
    pub samples: Option<usize>,
    pub column_budget: usize,
}

impl Default for HilbertOptions {
    fn default() -> Self {
        HilbertOptions {
            samples: None,
            column_budget: DEFAULT_COLUMN_BUDGET,
        }
    }
}

/// Dimension of the degree-`e` part of the ideal of `T_{r,n,d}`, as the
/// kernel of the matrix of degree-`e` monomials evaluated at random points.
///
/// Coordinates are weighted by `sqrt(multinomial)` before evaluation (and
/// monomials likewise), which makes the evaluation matrix well conditioned
/// without changing its kernel dimension.
pub fn hilbert_value(
    r: usize,
    n: usize,
    d: usize,
    e: usize,
    seed: u64,
    opts: &HilbertOptions,
    policy: &RankPolicy,
) -> Result<HilbertReport> {
    if n < 2 || r <= n || d < 1 || e < 1 {
        return Err(FradecoError::InvalidArgument(format!(
            "hilbert_value needs r > n >= 2, d >= 1, e >= 1; got r = {r}, n = {n}, d = {d}, e = {e}"
        )));
    }
    let big_n = basis_len(n, d);
    let ambient = binomial(big_n + e - 1, e);
    if ambient > opts.column_budget as u128 {
        return Err(FradecoError::BudgetExceeded {
            columns: ambient.min(usize::MAX as u128) as usize,
            budget: opts.column_budget,
        });
    }
    let ambient = ambient as usize;
    let samples = opts.samples.unwrap_or((2 * ambient).min(MAX_HILBERT_SAMPLES));
    if samples == 0 {
        return Err(FradecoError::InvalidArgument("samples must be positive".into()));
    }

    let coord_weights: Vec<f64> = index_basis(n, d)
        .iter()
        .map(|a| (multinomial(a) as f64).sqrt())
        .collect();
    let monomials: Vec<(Vec<usize>, f64)> = index_basis(big_n, e)
        .into_iter()
        .map(|m| {
            let w = (multinomial(&m) as f64).sqrt();
            let idx = m
                .iter()
                .enumerate()
                .flat_map(|(i, &k)| std::iter::repeat_n(i, k as usize))
                .collect();
            (idx, w)
        })
        .collect();

    let rows: Vec<Vec<f64>> = (0..samples)
        .into_par_iter()
        .map(|i| -> Result<Vec<f64>> {
            let t = random_fradeco_tensor(r, n, d, derive_seed(seed, i as u64))?;
            let s: Vec<f64> = t.coords().iter().zip(&coord_weights).map(|(c, w)| c * w).collect();
            let nrm = s.iter().map(|x| x * x).sum::<f64>().sqrt();
            let s: Vec<f64> = s.iter().map(|x| x / nrm).collect();
            Ok(monomials
                .iter()
                .map(|(idx, w)| w * idx.iter().map(|&k| s[k]).product::<f64>())
                .collect())
        })
        .collect::<Result<_>>()?;
    let mat = DMatrix::from_fn(samples, ambient, |i, j| rows[i][j]);
    let info = RankInfo::from_values(singular_values(&mat), policy);
    let info = info.require_confident(policy)?;
    Ok(HilbertReport {
        r,
        n,
        d,
        e,
        ambient_dim: ambient,
        samples,
        kernel_dim: ambient - info.rank,
        gap_ratio: info.gap_ratio,
        singular_values: info.singular_values,
    })
}
