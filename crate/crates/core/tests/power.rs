use fradeco::funtf::{sample_general, sample_planar, simplex_frame};
use fradeco::power::{eigen_discriminant_binary, robust_eigenvectors, PowerOptions};
use fradeco::rng::rng_from_seed;
use fradeco::tensor::{synthesize, SymTensor};
use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

fn opening_frame() -> DMatrix<f64> {
    let s = 3.0 * 3f64.sqrt();
    DMatrix::from_row_slice(
        3,
        4,
        &[-5.0, 1.0, 1.0, 3.0, 1.0, -5.0, 1.0, 3.0, 1.0, 1.0, -5.0, 3.0],
    ) / s
}

fn parallel(a: &[f64], b: &[f64], tol: f64) -> bool {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    (dot.abs() - 1.0).abs() < tol
}

fn alpha_quintic(alpha: f64) -> SymTensor {
    // alpha x^5 + y^5 + (x+y)^5 + (x-y)^5
    let v = DMatrix::from_row_slice(2, 4, &[1.0, 0.0, 1.0, 1.0, 0.0, 1.0, 1.0, -1.0]);
    synthesize(&v, &[alpha, 1.0, 1.0, 1.0], 5).unwrap()
}

#[test]
fn opening_quintic_has_four_robust_eigenvectors() {
    let v = opening_frame();
    let t = synthesize(&v, &[1.0; 4], 5).unwrap();
    let opts = PowerOptions {
        trials: 500,
        ..PowerOptions::for_dimension(3)
    };
    let clusters = robust_eigenvectors(&t, &opts, 42).unwrap();
    let robust: Vec<_> = clusters.iter().filter(|c| c.attracting).collect();
    assert_eq!(robust.len(), 4);
    for j in 0..4 {
        let col: Vec<f64> = v.column(j).iter().copied().collect();
        assert!(robust.iter().any(|c| parallel(&c.x, &col, 1e-8)));
    }
    assert!(clusters.iter().map(|c| c.basin_count).sum::<usize>() <= 500);
}

#[test]
fn odeco_binary_quintic() {
    let t = synthesize(&DMatrix::identity(2, 2), &[1.0, 1.0], 5).unwrap();
    let clusters = robust_eigenvectors(&t, &PowerOptions::for_dimension(2), 1).unwrap();
    let robust: Vec<_> = clusters.iter().filter(|c| c.attracting).collect();
    assert_eq!(robust.len(), 2);
    assert!(robust.iter().any(|c| parallel(&c.x, &[1.0, 0.0], 1e-10)));
    assert!(robust.iter().any(|c| parallel(&c.x, &[0.0, 1.0], 1e-10)));
}

#[test]
fn alpha_quintic_has_one_real_eigenvector() {
    let t = alpha_quintic(7.0);
    let disc = eigen_discriminant_binary(&t).unwrap();
    assert_eq!(disc.coeffs.len(), 6);
    assert_eq!(disc.real_roots.len(), 1);
    assert_eq!(disc.real_roots[0].point, [1.0, 0.0]);
    assert_eq!(disc.real_roots[0].multiplicity, 1);

    let clusters = robust_eigenvectors(&t, &PowerOptions::for_dimension(2), 3).unwrap();
    assert!(!clusters.is_empty());
    for c in &clusters {
        assert!(parallel(&c.x, &[1.0, 0.0], 1e-8));
    }
}

#[test]
fn quintic_monomial_discriminant_multiplicities() {
    let t = SymTensor::from_binary(&[0.0, 0.0, 0.0, 0.0, 0.0, 1.0]).unwrap();
    let disc = eigen_discriminant_binary(&t).unwrap();
    let at = |p: [f64; 2]| disc.real_roots.iter().find(|r| r.point == p).unwrap().multiplicity;
    assert_eq!(at([0.0, 1.0]), 4);
    assert_eq!(at([1.0, 0.0]), 1);
}

#[test]
fn odeco_quartic_discriminant_roots() {
    let t = synthesize(&DMatrix::identity(2, 2), &[1.0, 1.0], 4).unwrap();
    let disc = eigen_discriminant_binary(&t).unwrap();
    assert_eq!(disc.real_roots.len(), 4);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for p in [[1.0, 0.0], [0.0, 1.0], [s, s], [s, -s]] {
        assert!(disc.real_roots.iter().any(|r| parallel(&r.point, &p, 1e-10)));
        // substitute into the form
        let v: f64 = disc
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * p[0].powi(k as i32) * p[1].powi(4 - k as i32))
            .sum();
        assert!(v.abs() < 1e-10);
    }
}

#[test]
fn limits_are_eigenvectors_and_roots_of_the_discriminant() {
    let mut rng = rng_from_seed(6);
    let opts = PowerOptions {
        trials: 60,
        ..PowerOptions::for_dimension(2)
    };
    for k in 0..100u64 {
        let d = 3 + (k % 4) as usize;
        let coords: Vec<f64> = (0..=d).map(|_| rng.sample(StandardNormal)).collect();
        let t = SymTensor::from_binary(&coords).unwrap();
        let disc = eigen_discriminant_binary(&t).unwrap();
        for c in robust_eigenvectors(&t, &opts, k).unwrap() {
            let g = t.gradient(&c.x);
            let gn = g.iter().map(|x| x * x).sum::<f64>().sqrt();
            let proj: f64 = g.iter().zip(&c.x).map(|(a, b)| a * b).sum();
            let perp: f64 = g
                .iter()
                .zip(&c.x)
                .map(|(a, b)| (a - proj * b).powi(2))
                .sum::<f64>()
                .sqrt();
            assert!(perp < 1e-7 * gn);
            assert!(
                disc.real_roots.iter().any(|r| parallel(&r.point, &c.x, 1e-6)),
                "form {k}: limit {:?} not among discriminant roots",
                c.x
            );
        }
    }
}

/// Robust eigenvectors of `T in T_{n+1,n,d}` with positive weights are
/// conjectured to be the frame vectors. Outcomes are reported, not asserted:
/// the count of robust clusters, and how far the nearest cluster sits from
/// each frame vector.
#[test]
fn conjectured_robust_eigenvectors_of_simplex_frames() {
    let mut rng = rng_from_seed(53);
    let mut summary: std::collections::BTreeMap<(usize, usize), (usize, usize, f64)> = Default::default();
    for n in [2usize, 3] {
        for d in (n + 2)..=8 {
            for s in 0..50u64 {
                let frame = if n == 2 {
                    sample_planar(3, s).unwrap().into_matrix()
                } else if s == 0 {
                    simplex_frame(3).unwrap().into_matrix()
                } else {
                    sample_general(4, 3, s).unwrap().into_matrix()
                };
                let lambda: Vec<f64> = (0..=n).map(|_| rng.random_range(0.2..2.0)).collect();
                let t = synthesize(&frame, &lambda, d).unwrap();
                let opts = PowerOptions {
                    trials: 40 * n,
                    ..PowerOptions::for_dimension(n)
                };
                let robust: Vec<_> = robust_eigenvectors(&t, &opts, s)
                    .unwrap()
                    .into_iter()
                    .filter(|c| c.attracting)
                    .collect();
                let offset = (0..=n)
                    .map(|j| {
                        robust
                            .iter()
                            .map(|c| {
                                let dot: f64 = c.x.iter().zip(frame.column(j).iter()).map(|(a, b)| a * b).sum();
                                dot.abs().min(1.0).acos()
                            })
                            .fold(f64::INFINITY, f64::min)
                    })
                    .fold(0.0, f64::max);
                let entry = summary.entry((n, d)).or_insert((0, 0, 0.0));
                if robust.len() == n + 1 {
                    entry.0 += 1;
                }
                if robust.len() == n + 1 && offset < 1e-6 {
                    entry.1 += 1;
                }
                entry.2 = entry.2.max(if robust.len() == n + 1 { offset } else { 0.0 });
            }
        }
    }
    for ((n, d), (count_ok, exact_ok, worst)) in summary {
        println!(
            "conjecture n={n} d={d}: {count_ok}/50 with n+1 robust clusters, {exact_ok}/50 at the frame vectors, worst offset {worst:.2e} rad"
        );
    }
}
