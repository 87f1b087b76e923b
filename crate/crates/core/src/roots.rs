//! Projective roots of binary forms via companion-matrix eigenvalues.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

/// Coefficients below this fraction of the largest coefficient are treated
/// as zero when peeling roots at `(1:0)` and `(0:1)`.
pub const ZERO_COEFF_REL: f64 = 1e-10;

/// A root `(x : y)` of a binary form, with `y` either `1` or `0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProjectiveRoot {
    /// `(s : 1)`.
    Finite(Complex64),
    /// `(1 : 0)`.
    Infinite,
}

impl ProjectiveRoot {
    /// Chordal distance on the Riemann sphere; at most 1.
    pub fn chordal_distance(&self, other: &ProjectiveRoot) -> f64 {
        match (self, other) {
            (ProjectiveRoot::Infinite, ProjectiveRoot::Infinite) => 0.0,
            (ProjectiveRoot::Finite(s), ProjectiveRoot::Infinite)
            | (ProjectiveRoot::Infinite, ProjectiveRoot::Finite(s)) => 1.0 / (1.0 + s.norm_sqr()).sqrt(),
            (ProjectiveRoot::Finite(a), ProjectiveRoot::Finite(b)) => {
                (a - b).norm() / ((1.0 + a.norm_sqr()) * (1.0 + b.norm_sqr())).sqrt()
            }
        }
    }

    pub fn is_real(&self, tol: f64) -> bool {
        match self {
            ProjectiveRoot::Infinite => true,
            ProjectiveRoot::Finite(s) => s.im.abs() <= tol * (1.0 + s.norm()),
        }
    }

    /// Unit real representative `(x, y)`; the imaginary part is discarded.
    pub fn real_unit(&self) -> [f64; 2] {
        match self {
            ProjectiveRoot::Infinite => [1.0, 0.0],
            ProjectiveRoot::Finite(s) => {
                let norm = s.re.hypot(1.0);
                [s.re / norm, 1.0 / norm]
            }
        }
    }
}

/// Real root `(x : y)` (unit representative) with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RealRoot {
    pub point: [f64; 2],
    pub multiplicity: usize,
}

fn horner(coeffs: &[f64], s: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * s + p;
        p = p * s + c;
    }
    (p, dp)
}

/// Roots of `sum_k coeffs[k] s^k` (ascending order, nonzero leading
/// coefficient), polished by a few Newton steps.
pub fn polynomial_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let m = coeffs.len().saturating_sub(1);
    if m == 0 {
        return Vec::new();
    }
    let lead = coeffs[m];
    let mut companion = DMatrix::<f64>::zeros(m, m);
    for i in 1..m {
        companion[(i, i - 1)] = 1.0;
    }
    for i in 0..m {
        companion[(i, m - 1)] = -coeffs[i] / lead;
    }
    let eig = companion.complex_eigenvalues();
    eig.iter()
        .map(|&z0| {
            let mut z = z0;
            for _ in 0..8 {
                let (p, dp) = horner(coeffs, z);
                if dp.norm() == 0.0 {
                    break;
                }
                let step = p / dp;
                if !step.re.is_finite() || !step.im.is_finite() {
                    break;
                }
                let next = z - step;
                // accept only steps that do not increase the residual
                if horner(coeffs, next).0.norm() > p.norm() {
                    break;
                }
                z = next;
                if step.norm() <= 1e-16 * (1.0 + z.norm()) {
                    break;
                }
            }
            z
        })
        .collect()
}

/// All `m` projective roots of the binary form
/// `f(x, y) = sum_k coeffs[k] x^k y^(m-k)`.
pub fn binary_form_roots(coeffs: &[f64]) -> Vec<ProjectiveRoot> {
    let scale = coeffs.iter().fold(0.0f64, |a, c| a.max(c.abs()));
    if scale == 0.0 {
        return Vec::new();
    }
    let tiny = ZERO_COEFF_REL * scale;
    let mut hi = coeffs.len() - 1;
    let mut out = Vec::new();
    while coeffs[hi].abs() < tiny {
        out.push(ProjectiveRoot::Infinite);
        hi -= 1;
    }
    let mut lo = 0;
    while coeffs[lo].abs() < tiny {
        out.push(ProjectiveRoot::Finite(Complex64::new(0.0, 0.0)));
        lo += 1;
    }
    out.extend(
        polynomial_roots(&coeffs[lo..=hi])
            .into_iter()
            .map(ProjectiveRoot::Finite),
    );
    out
}

/// Groups roots closer than `tol` in chordal distance.
pub fn cluster_roots(roots: &[ProjectiveRoot], tol: f64) -> Vec<Vec<ProjectiveRoot>> {
    let mut clusters: Vec<Vec<ProjectiveRoot>> = Vec::new();
    for root in roots {
        match clusters
            .iter_mut()
            .find(|c| c.iter().any(|x| x.chordal_distance(root) < tol))
        {
            Some(c) => c.push(*root),
            None => clusters.push(vec![*root]),
        }
    }
    clusters
}

/// Real projective roots with multiplicities. Roots within `cluster_tol`
/// (chordal) are merged; a cluster is real when its mean is real within
/// `real_tol`.
pub fn real_roots_with_multiplicity(coeffs: &[f64], cluster_tol: f64, real_tol: f64) -> Vec<RealRoot> {
    let roots = binary_form_roots(coeffs);
    cluster_roots(&roots, cluster_tol)
        .into_iter()
        .filter_map(|cluster| {
            let k = cluster.len();
            let representative = if cluster.iter().any(|r| matches!(r, ProjectiveRoot::Infinite)) {
                ProjectiveRoot::Infinite
            } else {
                let sum: Complex64 = cluster
                    .iter()
                    .map(|r| match r {
                        ProjectiveRoot::Finite(s) => *s,
                        ProjectiveRoot::Infinite => unreachable!(),
                    })
                    .sum();
                ProjectiveRoot::Finite(sum / k as f64)
            };
            representative.is_real(real_tol).then(|| RealRoot {
                point: representative.real_unit(),
                multiplicity: k,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_roots() {
        // s^2 - 3s + 2
        let mut r: Vec<f64> = polynomial_roots(&[2.0, -3.0, 1.0]).iter().map(|z| z.re).collect();
        r.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((r[0] - 1.0).abs() < 1e-14 && (r[1] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn form_with_roots_at_both_poles() {
        // x y (x - y): coefficients of x^k y^(3-k)
        let roots = binary_form_roots(&[0.0, -1.0, 1.0, 0.0]);
        assert_eq!(roots.len(), 3);
        assert!(roots.contains(&ProjectiveRoot::Infinite));
        assert!(roots.contains(&ProjectiveRoot::Finite(Complex64::new(0.0, 0.0))));
    }

    #[test]
    fn multiplicities_of_monomial_form() {
        // 5 x^4 y
        let roots = real_roots_with_multiplicity(&[0.0, 0.0, 0.0, 0.0, 5.0, 0.0], 1e-5, 1e-6);
        assert_eq!(roots.len(), 2);
        let at_infinity = roots.iter().find(|r| r.point == [1.0, 0.0]).unwrap();
        let at_zero = roots.iter().find(|r| r.point == [0.0, 1.0]).unwrap();
        assert_eq!(at_infinity.multiplicity, 1);
        assert_eq!(at_zero.multiplicity, 4);
    }

    #[test]
    fn complex_pair_is_not_real() {
        // x^2 + y^2
        let roots = real_roots_with_multiplicity(&[1.0, 0.0, 1.0], 1e-5, 1e-6);
        assert!(roots.is_empty());
    }
}
