//! Frame decompositions of ternary quartics of Waring rank five: the five
//! frame vectors lie on the conic spanned by the catalecticant kernel.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rayon::prelude::*;
use serde::Serialize;

use crate::decomposition::Decomposition;
use crate::error::{FradecoError, Result};
use crate::funtf::{funtf_equations, funtf_residual, Frame};
use crate::linalg::{left_null_space, RankPolicy};
use crate::rng::{derive_seed, rng_from_seed};
use crate::tensor::{index_basis, SymTensor};
use rand::Rng;

pub const DEFAULT_RESTARTS: usize = 200;
/// Combined residual accepted as a solution.
pub const SOLUTION_TOL: f64 = 1e-8;
const LM_MAX_ITER: usize = 400;
const FD_STEP: f64 = 1e-7;

/// Kernel of the 6x6 catalecticant as a conic in the basis
/// `u^2, uv, uw, v^2, vw, w^2`, unit norm, largest-magnitude entry positive.
pub fn kernel_conic(t: &SymTensor, policy: &RankPolicy) -> Result<[f64; 6]> {
    if t.n() != 3 || t.d() != 4 {
        return Err(FradecoError::ShapeMismatch(format!(
            "kernel conic needs a ternary quartic, got n = {}, d = {}",
            t.n(),
            t.d()
        )));
    }
    let c = t.catalecticant(2)?;
    let (kernel, info) = left_null_space(&c, policy);
    let info = info.require_confident(policy)?;
    match info.rank {
        6 => return Err(FradecoError::FullRank),
        5 => {}
        rank => return Err(FradecoError::RankTooLow { rank }),
    }
    let mut q = [0.0; 6];
    for (i, v) in kernel.column(0).iter().enumerate() {
        q[i] = *v;
    }
    let big = q.iter().copied().fold(0.0f64, |a, b| if b.abs() > a.abs() { b } else { a });
    let s = big.signum() / q.iter().map(|x| x * x).sum::<f64>().sqrt();
    Ok(q.map(|x| x * s))
}

pub fn conic_value(q: &[f64; 6], p: &[f64]) -> f64 {
    let (u, v, w) = (p[0], p[1], p[2]);
    q[0] * u * u + q[1] * u * v + q[2] * u * w + q[3] * v * v + q[4] * v * w + q[5] * w * w
}

/// Angle parametrization `theta -> unit point` of a real nondegenerate conic.
#[derive(Debug, Clone)]
pub struct ConicChart {
    /// Orthonormal eigenbasis of the conic matrix.
    basis: DMatrix<f64>,
    /// Indices `(a, b, c)`: `a, b` share a sign, `c` has the other one.
    order: [usize; 3],
    scale: [f64; 3],
}

impl ConicChart {
    pub fn new(q: &[f64; 6]) -> Result<Self> {
        let m = DMatrix::from_row_slice(
            3,
            3,
            &[
                q[0],
                q[1] / 2.0,
                q[2] / 2.0,
                q[1] / 2.0,
                q[3],
                q[4] / 2.0,
                q[2] / 2.0,
                q[4] / 2.0,
                q[5],
            ],
        );
        let eig = SymmetricEigen::new(m);
        let mu = eig.eigenvalues;
        let top = mu.amax();
        if mu.iter().any(|x| x.abs() < 1e-10 * top) {
            return Err(FradecoError::InvalidArgument("degenerate kernel conic".into()));
        }
        let pos: Vec<usize> = (0..3).filter(|&i| mu[i] > 0.0).collect();
        let neg: Vec<usize> = (0..3).filter(|&i| mu[i] < 0.0).collect();
        let order = match (pos.len(), neg.len()) {
            (2, 1) => [pos[0], pos[1], neg[0]],
            (1, 2) => [neg[0], neg[1], pos[0]],
            _ => return Err(FradecoError::EmptyConic),
        };
        let scale = order.map(|i| 1.0 / mu[i].abs().sqrt());
        Ok(ConicChart {
            basis: eig.eigenvectors,
            order,
            scale,
        })
    }

    pub fn point(&self, theta: f64) -> [f64; 3] {
        let mut y = [0.0; 3];
        y[self.order[0]] = theta.cos() * self.scale[0];
        y[self.order[1]] = theta.sin() * self.scale[1];
        y[self.order[2]] = self.scale[2];
        let mut x = [0.0; 3];
        for (i, xi) in x.iter_mut().enumerate() {
            *xi = (0..3).map(|k| self.basis[(i, k)] * y[k]).sum();
        }
        let n = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
        x.map(|c| c / n)
    }

    pub fn frame(&self, thetas: &[f64]) -> DMatrix<f64> {
        let mut v = DMatrix::zeros(3, thetas.len());
        for (j, &th) in thetas.iter().enumerate() {
            let p = self.point(th);
            for i in 0..3 {
                v[(i, j)] = p[i];
            }
        }
        v
    }
}

/// Power sums `prod_i v_ij^{a_i}` for each exponent (rows) and column (cols).
fn moment_matrix(v: &DMatrix<f64>, exps: &[Vec<u32>]) -> DMatrix<f64> {
    DMatrix::from_fn(exps.len(), v.ncols(), |row, j| {
        exps[row]
            .iter()
            .enumerate()
            .map(|(i, &e)| v[(i, j)].powi(e as i32))
            .product()
    })
}

struct Problem<'a> {
    chart: &'a ConicChart,
    exps: Vec<Vec<u32>>,
    t: DVector<f64>,
    t_norm: f64,
}

impl Problem<'_> {
    fn fit(&self, v: &DMatrix<f64>) -> DVector<f64> {
        let a = moment_matrix(v, &self.exps);
        a.clone()
            .svd(true, true)
            .solve(&self.t, 1e-13)
            .unwrap_or_else(|_| DVector::zeros(v.ncols()))
    }

    /// funtf equations followed by the relative fit residual.
    fn residual(&self, thetas: &[f64]) -> DVector<f64> {
        let v = self.chart.frame(thetas);
        let a = moment_matrix(&v, &self.exps);
        let lambda = self.fit(&v);
        let fit = (&self.t - &a * lambda) / self.t_norm;
        let eqs = funtf_equations(&v);
        DVector::from_iterator(eqs.len() + fit.len(), eqs.into_iter().chain(fit.iter().copied()))
    }

    fn jacobian(&self, thetas: &[f64], m: usize) -> DMatrix<f64> {
        let mut jac = DMatrix::zeros(m, thetas.len());
        let mut p = thetas.to_vec();
        for k in 0..thetas.len() {
            p[k] = thetas[k] + FD_STEP;
            let fp = self.residual(&p);
            p[k] = thetas[k] - FD_STEP;
            let fm = self.residual(&p);
            p[k] = thetas[k];
            jac.set_column(k, &((fp - fm) / (2.0 * FD_STEP)));
        }
        jac
    }

    /// Levenberg-Marquardt from `start`.
    fn solve(&self, start: Vec<f64>) -> Vec<f64> {
        let mut x = start;
        let mut f = self.residual(&x);
        let mut cost = f.norm_squared();
        let mut mu = 1e-3;
        for _ in 0..LM_MAX_ITER {
            if cost < 1e-30 {
                break;
            }
            let jac = self.jacobian(&x, f.len());
            let jtj = jac.transpose() * &jac;
            let g = jac.transpose() * &f;
            let mut improved = false;
            while mu < 1e12 {
                let mut lhs = jtj.clone();
                for i in 0..x.len() {
                    lhs[(i, i)] += mu * (1.0 + jtj[(i, i)]);
                }
                let Some(step) = lhs.cholesky().map(|c| c.solve(&(-&g))) else {
                    mu *= 4.0;
                    continue;
                };
                let cand: Vec<f64> = x.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
                let fc = self.residual(&cand);
                let cc = fc.norm_squared();
                if cc < cost {
                    let small = step.norm() < 1e-15;
                    x = cand;
                    f = fc;
                    cost = cc;
                    mu = (mu / 3.0).max(1e-15);
                    improved = !small;
                    break;
                }
                mu *= 4.0;
            }
            if !improved {
                break;
            }
        }
        x
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WaringSearch {
    #[serde(skip)]
    pub decomposition: Decomposition,
    pub conic: [f64; 6],
    /// `sqrt(funtf_residual^2 + (max fit error / max |t|)^2)`.
    pub combined_residual: f64,
    /// Index of the successful restart.
    pub restart: usize,
}

/// `sqrt(funtf_residual(V)^2 + rel_fit^2)` with `rel_fit` the max-norm fit
/// error relative to `max |t|`.
pub fn combined_residual(t: &SymTensor, dec: &Decomposition) -> Result<f64> {
    let rel = dec.synthesize(t.d())?.max_diff(t)? / t.max_abs().max(f64::MIN_POSITIVE);
    let fr = funtf_residual(dec.frame.matrix());
    Ok(fr.hypot(rel))
}

/// Random-restart search for five points on the kernel conic forming a
/// funtf and fitting `t`.
pub fn waring_frame_search(t: &SymTensor, restarts: usize, seed: u64, policy: &RankPolicy) -> Result<WaringSearch> {
    let conic = kernel_conic(t, policy)?;
    let chart = ConicChart::new(&conic)?;
    let problem = Problem {
        chart: &chart,
        exps: index_basis(3, 4),
        t: DVector::from_column_slice(t.coords()),
        t_norm: t.norm(),
    };
    let attempt = |i: usize| -> Option<WaringSearch> {
        let mut rng = rng_from_seed(derive_seed(seed, i as u64));
        let start: Vec<f64> = (0..5)
            .map(|_| rng.random_range(0.0..std::f64::consts::TAU))
            .collect();
        let thetas = problem.solve(start);
        let v = chart.frame(&thetas);
        let lambda = problem.fit(&v);
        let dec = Decomposition::fitted(Frame::new(v), lambda.iter().copied().collect(), t).ok()?;
        let combined = combined_residual(t, &dec).ok()?;
        (combined < SOLUTION_TOL).then_some(WaringSearch {
            decomposition: dec,
            conic,
            combined_residual: combined,
            restart: i,
        })
    };
    (0..restarts)
        .into_par_iter()
        .map(attempt)
        .find_first(|r| r.is_some())
        .flatten()
        .ok_or(FradecoError::NotFound { restarts })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chart_points_lie_on_conic() {
        let q = [14.0, -1.0, -2.0, -4.0, -11.0, -10.0];
        let chart = ConicChart::new(&q).unwrap();
        for k in 0..20 {
            let p = chart.point(k as f64 * 0.3);
            assert!(conic_value(&q, &p).abs() < 1e-12);
        }
    }

    #[test]
    fn definite_conic_is_empty() {
        let q = [1.0, 0.0, 0.0, 1.0, 0.0, 1.0];
        assert_eq!(ConicChart::new(&q).unwrap_err(), FradecoError::EmptyConic);
    }

    #[test]
    fn fermat_quartic_rank_too_low() {
        let mut t = SymTensor::zeros(3, 4).unwrap();
        let mut c = t.coords().to_vec();
        for (k, a) in t.exponents().iter().enumerate() {
            if a.contains(&4) {
                c[k] = 1.0;
            }
        }
        t = SymTensor::new(3, 4, c).unwrap();
        assert_eq!(
            kernel_conic(&t, &RankPolicy::default()).unwrap_err(),
            FradecoError::RankTooLow { rank: 3 }
        );
    }
}
