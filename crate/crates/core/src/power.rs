//! Tensor eigenvectors by iterating the gradient map.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{FradecoError, Result};
use crate::rng::{derive_seed, random_unit_vector, rng_from_seed};
use crate::roots::{real_roots_with_multiplicity, RealRoot};
use crate::tensor::{binomial, SymTensor};

pub const DEFAULT_MAXIT: usize = 10_000;
pub const DEFAULT_TOL: f64 = 1e-12;
/// Angular tolerance (up to sign) for merging limits into one cluster.
pub const CLUSTER_TOL: f64 = 1e-6;
/// Finite-difference step of the attracting test.
pub const FD_STEP: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenPoint {
    pub x: Vec<f64>,
    /// `T(x)`.
    pub eigenvalue_proxy: f64,
    pub attracting: bool,
    /// Spectral radius of the gradient map on the tangent space at `x`.
    pub spectral_radius: f64,
    pub basin_count: usize,
    pub iterations: usize,
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Flips `x` so that its first nonzero coordinate is positive.
fn canonicalize(x: &mut [f64]) {
    if let Some(&first) = x.iter().find(|v| **v != 0.0) {
        if first < 0.0 {
            x.iter_mut().for_each(|v| *v = -*v);
        }
    }
}

fn sign_distance(a: &[f64], b: &[f64]) -> f64 {
    let (mut minus, mut plus) = (0.0, 0.0);
    for (p, q) in a.iter().zip(b) {
        minus += (p - q) * (p - q);
        plus += (p + q) * (p + q);
    }
    minus.min(plus).sqrt()
}

fn normalized_gradient(t: &SymTensor, x: &[f64]) -> Result<Vec<f64>> {
    let g = t.gradient(x);
    let gn = norm(&g);
    if gn == 0.0 || !gn.is_finite() {
        return Err(FradecoError::ZeroGradient);
    }
    Ok(g.into_iter().map(|v| v / gn).collect())
}

/// Spectral radius of the normalized gradient map at the fixed point `x`,
/// restricted to the tangent space of the sphere. The sign is pinned to `x`
/// so the map is smooth there.
pub fn fixed_point_spectral_radius(t: &SymTensor, x: &[f64]) -> Result<f64> {
    let n = x.len();
    if n < 2 {
        return Ok(0.0);
    }
    let map = |y: &[f64]| -> Result<Vec<f64>> {
        let mut g = normalized_gradient(t, y)?;
        let s: f64 = g.iter().zip(x).map(|(a, b)| a * b).sum();
        if s < 0.0 {
            g.iter_mut().for_each(|v| *v = -*v);
        }
        Ok(g)
    };
    // Gram-Schmidt completion of x to an orthonormal basis
    let full = {
        let mut m = DMatrix::<f64>::zeros(n, n);
        let xn = norm(x);
        for i in 0..n {
            m[(i, 0)] = x[i] / xn;
        }
        let mut k = 1;
        for e in 0..n {
            if k == n {
                break;
            }
            let mut v = DMatrix::<f64>::zeros(n, 1);
            v[(e, 0)] = 1.0;
            for j in 0..k {
                let c = m.column(j).dot(&v.column(0));
                v.column_mut(0).axpy(-c, &m.column(j), 1.0);
            }
            let vn = v.norm();
            if vn > 1e-8 {
                m.column_mut(k).copy_from(&(v.column(0) / vn));
                k += 1;
            }
        }
        m
    };
    let tangent = full.columns(1, n - 1).into_owned();
    let mut jac = DMatrix::<f64>::zeros(n - 1, n - 1);
    for k in 0..n - 1 {
        let dir = tangent.column(k);
        let plus: Vec<f64> = (0..n).map(|i| x[i] + FD_STEP * dir[i]).collect();
        let minus: Vec<f64> = (0..n).map(|i| x[i] - FD_STEP * dir[i]).collect();
        let gp = map(&plus)?;
        let gm = map(&minus)?;
        for i in 0..n - 1 {
            let ti = tangent.column(i);
            let diff: f64 = (0..n).map(|l| (gp[l] - gm[l]) * ti[l]).sum();
            jac[(i, k)] = diff / (2.0 * FD_STEP);
        }
    }
    Ok(jac
        .complex_eigenvalues()
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max))
}

/// Iterates `x <- grad T(x) / |grad T(x)|` on projective representatives.
pub fn power_iterate(t: &SymTensor, x0: &[f64], maxit: usize, tol: f64) -> Result<EigenPoint> {
    if x0.len() != t.n() {
        return Err(FradecoError::ShapeMismatch(format!(
            "start vector has length {}, tensor has n = {}",
            x0.len(),
            t.n()
        )));
    }
    let n0 = norm(x0);
    if (n0 - 1.0).abs() > 1e-8 {
        return Err(FradecoError::InvalidArgument(format!(
            "start vector must be a unit vector, has norm {n0}"
        )));
    }
    let mut x = x0.to_vec();
    canonicalize(&mut x);
    for it in 1..=maxit {
        let mut next = normalized_gradient(t, &x)?;
        canonicalize(&mut next);
        let step = sign_distance(&next, &x);
        x = next;
        if step < tol {
            let rho = fixed_point_spectral_radius(t, &x)?;
            return Ok(EigenPoint {
                eigenvalue_proxy: t.evaluate(&x),
                x,
                attracting: rho < 1.0,
                spectral_radius: rho,
                basin_count: 1,
                iterations: it,
            });
        }
    }
    Err(FradecoError::NonConvergence { iterations: maxit })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerOptions {
    pub trials: usize,
    pub maxit: usize,
    pub tol: f64,
}

impl PowerOptions {
    pub fn for_dimension(n: usize) -> Self {
        PowerOptions {
            trials: 100 * n,
            maxit: DEFAULT_MAXIT,
            tol: DEFAULT_TOL,
        }
    }
}

/// Limits of the power method from `trials` random starts, merged up to sign.
/// Starts that fail to converge are skipped. Clusters are sorted by
/// decreasing basin count.
pub fn robust_eigenvectors(t: &SymTensor, opts: &PowerOptions, seed: u64) -> Result<Vec<EigenPoint>> {
    if opts.trials == 0 {
        return Err(FradecoError::InvalidArgument("trials must be at least 1".into()));
    }
    let limits: Vec<Option<EigenPoint>> = (0..opts.trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_from_seed(derive_seed(seed, i as u64));
            let x0 = random_unit_vector(t.n(), &mut rng);
            power_iterate(t, &x0, opts.maxit, opts.tol).ok()
        })
        .collect();

    let mut clusters: Vec<EigenPoint> = Vec::new();
    for p in limits.into_iter().flatten() {
        match clusters
            .iter_mut()
            .find(|c| sign_distance(&c.x, &p.x) < CLUSTER_TOL)
        {
            Some(c) => c.basin_count += 1,
            None => clusters.push(p),
        }
    }
    clusters.sort_by_key(|c| std::cmp::Reverse(c.basin_count));
    Ok(clusters)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenDiscriminant {
    /// Coefficients of `x^k y^(d-k)`.
    pub coeffs: Vec<f64>,
    pub real_roots: Vec<RealRoot>,
}

/// `y dT/dx - x dT/dy` for a binary form; its zeros are the eigenvectors.
pub fn eigen_discriminant_binary(t: &SymTensor) -> Result<EigenDiscriminant> {
    let tc = t.binary_coords()?;
    let d = t.d();
    let coeffs: Vec<f64> = (0..=d)
        .map(|k| {
            let mut c = 0.0;
            if k < d {
                c += (d as f64) * binomial(d - 1, k) as f64 * tc[k + 1];
            }
            if k > 0 {
                c -= (d as f64) * binomial(d - 1, k - 1) as f64 * tc[k - 1];
            }
            c
        })
        .collect();
    let real_roots = real_roots_with_multiplicity(&coeffs, 1e-4, 1e-6);
    Ok(EigenDiscriminant { coeffs, real_roots })
}
