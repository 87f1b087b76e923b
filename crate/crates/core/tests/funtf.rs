use fradeco::funtf::{
    frame_multilinear_values, funtf_jacobian, funtf_residual, funtf_variety_dim, multilinear_pq, multilinear_values,
    pluecker, sample_frame, sample_general, sample_planar, simplex_frame, simplex_pluecker_magnitude, so3_orbit_frame,
};
use fradeco::linalg::{null_space, RankPolicy};
use fradeco::rng::{derive_seed, random_rotation, random_unit_vector, rng_from_seed};
use nalgebra::DMatrix;
use rand::Rng;
use rayon::prelude::*;

fn opening_frame() -> DMatrix<f64> {
    DMatrix::from_row_slice(3, 4, &[-5.0, 1.0, 1.0, 3.0, 1.0, -5.0, 1.0, 3.0, 1.0, 1.0, -5.0, 3.0])
        / (3.0 * 3f64.sqrt())
}

fn sorted_abs_gram(v: &DMatrix<f64>) -> Vec<i64> {
    let g = v.transpose() * v;
    let mut out: Vec<i64> = g.iter().map(|x| (x.abs() * 1e9).round() as i64).collect();
    out.sort();
    out
}

fn random_points(k: usize, rng: &mut impl Rng) -> Vec<[f64; 2]> {
    (0..k).map(|_| [rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)]).collect()
}

#[test]
fn residual_examples() {
    assert!(funtf_residual(&opening_frame()) < 1e-12);
    for n in 1..5 {
        assert_eq!(funtf_residual(&DMatrix::identity(n, n)), 0.0);
    }
    assert!(funtf_residual(&DMatrix::from_element(2, 2, 1.0)) >= 1.0);
}

#[test]
fn multilinear_forms_for_three_and_four_points() {
    let mut rng = rng_from_seed(1);
    for _ in 0..50 {
        let p = random_points(3, &mut rng);
        let (pt, _) = multilinear_values(&p);
        let (v1, v2): (Vec<f64>, Vec<f64>) = p.iter().map(|q| (q[0], q[1])).unzip();
        let want = 3.0 * v1[0] * v1[1] * v1[2] + v1[0] * v2[1] * v2[2] + v2[0] * v1[1] * v2[2] + v2[0] * v2[1] * v1[2];
        assert!((pt - want).abs() < 1e-12 * (1.0 + want.abs()));

        let p = random_points(4, &mut rng);
        let (pt, _) = multilinear_values(&p);
        let (v1, v2): (Vec<f64>, Vec<f64>) = p.iter().map(|q| (q[0], q[1])).unzip();
        let want = 4.0 * (v1.iter().product::<f64>() - v2.iter().product::<f64>());
        assert!((pt - want).abs() < 1e-12 * (1.0 + want.abs()));
    }
}

#[test]
fn system_reproduces_the_forms() {
    let mut rng = rng_from_seed(2);
    for r in 3..8 {
        let p = random_points(r - 1, &mut rng);
        let last = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
        let sys = multilinear_pq(&p).unwrap();
        let mut all = p.clone();
        all.push(last);
        let (pt, qt) = multilinear_values(&all);
        let (pa, qa) = sys.apply(last);
        assert!((pt - pa).abs() < 1e-12 * (1.0 + pt.abs()));
        assert!((qt - qa).abs() < 1e-12 * (1.0 + qt.abs()));
    }
}

#[test]
fn planar_samples_are_tight_and_satisfy_the_forms() {
    for r in 3..9 {
        for seed in 0..200 {
            let f = sample_planar(r, seed).unwrap();
            assert!(f.residual() < 1e-10);
            let (p, q) = frame_multilinear_values(&f).unwrap();
            assert!(p.abs() < 1e-9 && q.abs() < 1e-9, "r={r} seed={seed}: {p:e} {q:e}");
        }
    }
}

#[test]
fn three_planar_vectors_form_mercedes_benz() {
    for seed in 0..50 {
        let f = sample_planar(3, seed).unwrap();
        let g = f.matrix().transpose() * f.matrix();
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert!((g[(i, j)].abs() - 0.5).abs() < 1e-10);
                }
            }
        }
        let eig = g.symmetric_eigen().eigenvalues;
        let mut e: Vec<f64> = eig.iter().copied().collect();
        e.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!(e[0].abs() < 1e-10 && (e[1] - 1.5).abs() < 1e-10 && (e[2] - 1.5).abs() < 1e-10);
    }
}

#[test]
fn four_planar_vectors_are_two_orthonormal_bases() {
    for seed in 0..50 {
        let f = sample_planar(4, seed).unwrap();
        let g = f.matrix().transpose() * f.matrix();
        // some perfect matching of orthogonal pairs
        let pairings = [[(0, 1), (2, 3)], [(0, 2), (1, 3)], [(0, 3), (1, 2)]];
        assert!(pairings
            .iter()
            .any(|pp| pp.iter().all(|&(i, j)| g[(i, j)].abs() < 1e-9)));
    }
}

#[test]
fn property_grid_of_sampled_frames() {
    for n in 2..=4 {
        for r in (n + 1)..=7 {
            let worst: (f64, f64) = (0..1000u64)
                .into_par_iter()
                .map(|s| {
                    let f = sample_frame(r, n, derive_seed(r as u64 * 10 + n as u64, s)).unwrap();
                    let pl = pluecker(f.matrix()).unwrap();
                    (f.residual(), pl.identity_residual())
                })
                .reduce(|| (0.0, 0.0), |a, b| (a.0.max(b.0), a.1.max(b.1)));
            assert!(worst.0 < 1e-10, "(r,n)=({r},{n}) residual {:e}", worst.0);
            assert!(worst.1 < 1e-8, "(r,n)=({r},{n}) Plücker {:e}", worst.1);
        }
    }
}

#[test]
fn general_sampler_examples() {
    let f = sample_general(5, 3, 7).unwrap();
    assert!(f.residual() < 1e-10);
    let f = sample_general(6, 4, 7).unwrap();
    assert!((pluecker(f.matrix()).unwrap().sum_of_squares() - 1.5f64.powi(4)).abs() < 1e-8);
    for seed in 0..20 {
        let f = sample_general(4, 3, seed).unwrap();
        let m = simplex_pluecker_magnitude(3);
        for p in pluecker(f.matrix()).unwrap().p {
            assert!((p.abs() - m).abs() < 1e-8);
        }
    }
}

#[test]
fn so3_orbit() {
    let f = so3_orbit_frame([1.0, 0.0, 0.0, 0.0], [1.0; 4]).unwrap();
    let reference = opening_frame();
    for j in 0..4 {
        assert!((0..4).any(|k| (f.matrix().column(j) - reference.column(k)).norm() < 1e-12));
    }
    let mut rng = rng_from_seed(3);
    for _ in 0..100 {
        let q = random_unit_vector(4, &mut rng);
        let q = [q[0], q[1], q[2], q[3]];
        let signs = [1.0, -1.0, 1.0, -1.0];
        let a = so3_orbit_frame(q, signs).unwrap();
        assert!(a.residual() < 1e-12);
        let b = so3_orbit_frame(q.map(|c| -c), signs).unwrap();
        assert!((a.matrix() - b.matrix()).amax() < 1e-15);
    }
}

#[test]
fn pluecker_examples() {
    let m = 4.0 * 3f64.sqrt() / 9.0;
    let p = pluecker(&opening_frame()).unwrap();
    assert_eq!(p.p.len(), 4);
    for x in &p.p {
        assert!((x.abs() - m).abs() < 1e-12);
    }
    // columns 2, 3, 4
    assert!((p.p[3].abs() - 108.0 / (3.0 * 3f64.sqrt()).powi(3)).abs() < 1e-12);
    let id = pluecker(&DMatrix::identity(3, 3)).unwrap();
    assert_eq!(id.p, vec![1.0]);
}

#[test]
fn simplex_frames() {
    let mb = simplex_frame(2).unwrap();
    let g = mb.matrix().transpose() * mb.matrix();
    for i in 0..3 {
        for j in 0..3 {
            let want = if i == j { 1.0 } else { -0.5 };
            assert!((g[(i, j)] - want).abs() < 1e-12);
        }
    }
    assert_eq!(sorted_abs_gram(simplex_frame(3).unwrap().matrix()), sorted_abs_gram(&opening_frame()));
    for n in 2..=5 {
        let f = simplex_frame(n).unwrap();
        assert!(f.residual() < 1e-12);
        let m = simplex_pluecker_magnitude(n);
        for p in pluecker(f.matrix()).unwrap().p {
            assert!((p.abs() - m).abs() < 1e-12, "n={n}");
        }
    }
}

#[test]
fn rotations_preserve_residual_and_pluecker_vector() {
    let mut rng = rng_from_seed(4);
    for (r, n) in [(5, 2), (5, 3), (6, 4), (7, 3)] {
        for s in 0..20 {
            let f = sample_frame(r, n, s).unwrap();
            let q = random_rotation(n, &mut rng);
            let rotated = &q * f.matrix();
            assert!((funtf_residual(&rotated) - f.residual()).abs() < 1e-12);
            let a = pluecker(f.matrix()).unwrap().p;
            let b = pluecker(&rotated).unwrap().p;
            let diff = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            assert!(diff < 1e-10);
        }
    }
}

#[test]
fn jacobian_nullity_is_the_variety_dimension() {
    let policy = RankPolicy::default();
    for (r, n) in [(5, 2), (6, 2), (5, 3), (6, 3), (6, 4)] {
        let f = sample_frame(r, n, 11).unwrap();
        let jac = funtf_jacobian(f.matrix());
        assert_eq!(jac.shape(), (n * n + r, n * r));
        let (basis, info) = null_space(&jac, &policy);
        assert!(info.is_confident(&policy));
        assert_eq!(basis.ncols(), funtf_variety_dim(r, n), "(r,n)=({r},{n})");
        // 2 (n-1)(r - n/2 - 1) = (n-1)(2r - n - 2)
        assert_eq!(2 * basis.ncols(), (n - 1) * (2 * r - n - 2));

        // tangent vectors keep the equations stationary to second order
        let v = f.matrix();
        for k in 0..basis.ncols() {
            let dir = DMatrix::from_column_slice(n, r, basis.column(k).as_slice());
            let h = 1e-5;
            let moved = funtf_residual(&(v + &dir * h)).max(funtf_residual(&(v - &dir * h)));
            assert!(moved < 10.0 * h * h, "first-order change {moved:e}");
        }
    }
}
