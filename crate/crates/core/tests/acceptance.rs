//! Acceptance criteria. Runs without the libtest harness and prints one
//! PASS/FAIL line per criterion, with its runtime and budget.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use fradeco::binary::{decompose_binary_detailed, fradeco_rank, mr_rank};
use fradeco::decomposition::{verify_decomposition, Decomposition};
use fradeco::equations::KnownEquation;
use fradeco::funtf::{frame_multilinear_values, pluecker, sample_frame, Frame};
use fradeco::linalg::{rank_info, RankPolicy};
use fradeco::power::{eigen_discriminant_binary, robust_eigenvectors, PowerOptions};
use fradeco::rng::{derive_seed, rng_from_seed};
use fradeco::tensor::{index_basis, multinomial, synthesize, SymTensor};
use fradeco::variety::{hilbert_value, random_fradeco_tensor, tangent_dim, HilbertOptions};
use fradeco::waring::{kernel_conic, waring_frame_search};
use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

type Check = fn() -> Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

const B: [[i64; 4]; 3] = [[-5, 1, 1, 3], [1, -5, 1, 3], [1, 1, -5, 3]];

fn opening_frame() -> DMatrix<f64> {
    DMatrix::from_fn(3, 4, |i, j| B[i][j] as f64 / (3.0 * 3f64.sqrt()))
}

fn opening_value(a: &[u32]) -> i64 {
    let mut s = a.to_vec();
    s.sort_unstable_by(|x, y| y.cmp(x));
    match s.as_slice() {
        [4, 0, 0] => 59,
        [3, 1, 0] => -4,
        [2, 2, 0] => 11,
        [2, 1, 1] => 8,
        _ => unreachable!(),
    }
}

fn parallel(a: &[f64], b: &[f64], tol: f64) -> bool {
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    (dot.abs() / (na * nb) - 1.0).abs() < tol
}

fn opening_quartic_roundtrip() -> Result<(), String> {
    let exps = index_basis(3, 4);
    // (3 sqrt 3)^4 = 729, so the rational form is (1/12) sum_j prod_i B_ij^{a_i}
    for a in &exps {
        let mut sum = BigInt::from(0);
        for j in 0..4 {
            let mut p = BigInt::from(1);
            for (i, &e) in a.iter().enumerate() {
                p *= BigInt::from(B[i][j]).pow(e);
            }
            sum += p;
        }
        let exact = BigRational::new(sum, BigInt::from(12));
        ensure!(
            exact == BigRational::from_integer(BigInt::from(opening_value(a))),
            "exact coordinate {a:?} = {exact}"
        );
    }
    let t = synthesize(&opening_frame(), &[729.0 / 12.0; 4], 4).map_err(|e| e.to_string())?;
    for (a, c) in exps.iter().zip(t.coords()) {
        let err = (c - opening_value(a) as f64).abs();
        ensure!(err < 1e-12, "float coordinate {a:?} off by {err:e}");
    }
    let target = SymTensor::new(3, 4, exps.iter().map(|a| opening_value(a) as f64).collect()).unwrap();
    let dec = Decomposition::fitted(Frame::new(opening_frame()), vec![729.0 / 12.0; 4], &target).unwrap();
    let rep = verify_decomposition(&target, &dec, 1e-9).unwrap();
    ensure!(rep.pass, "verify failed: {rep:?}");
    Ok(())
}

fn symmetric_octic_ranks() -> Result<(), String> {
    let t = [3.0, 0.0, 2.0, 0.0, 2.0, 0.0, 2.0, 0.0, 3.0];
    let policy = RankPolicy::default();
    let r4 = mr_rank(&t, 4, &policy).map_err(|e| e.to_string())?;
    ensure!(r4.numerical_rank == 2 && r4.gap_ratio >= 1e3, "M_4: {r4:?}");
    let r5 = mr_rank(&t, 5, &policy).map_err(|e| e.to_string())?;
    ensure!(r5.numerical_rank == 4 && r5.gap_ratio >= 1e3, "M_5: {r5:?}");
    let fr = fradeco_rank(&t, &policy).map_err(|e| e.to_string())?;
    ensure!(fr.first_deficient == Some(4), "first deficient {:?}", fr.first_deficient);
    Ok(())
}

fn worked_octic() -> Result<(), String> {
    let alpha = 3f64.sqrt() - 2.0;
    let cols = [[1.0, 0.0], [0.0, 1.0], [1.0, 1.0], [alpha, 1.0], [1.0, alpha]];
    let v = DMatrix::from_fn(2, 5, |i, j| cols[j][i] / cols[j][0].hypot(cols[j][1]));
    let raw = [1.0, 1.0, 1.0, 1552.0 + 896.0 * 3f64.sqrt(), 1.0];
    let lambda: Vec<f64> = cols.iter().zip(raw).map(|(c, l)| l * (c[0] * c[0] + c[1] * c[1]).powi(4)).collect();
    let t = synthesize(&v, &lambda, 8).unwrap();
    let dec = decompose_binary_detailed(&t, 5, &RankPolicy::default()).map_err(|e| e.to_string())?;
    let rec = dec.decomposition.frame.matrix();
    for j in 0..5 {
        let want: Vec<f64> = v.column(j).iter().copied().collect();
        let k = (0..5)
            .find(|&k| {
                let got: Vec<f64> = rec.column(k).iter().copied().collect();
                let cos = got.iter().zip(&want).map(|(a, b)| a * b).sum::<f64>().abs().min(1.0);
                cos.acos() < 1e-6
            })
            .ok_or_else(|| format!("frame vector {want:?} not recovered"))?;
        if j == 3 {
            let w = dec.decomposition.weights[k];
            ensure!((w - lambda[3]).abs() < 1e-6 * lambda[3], "weight {w} vs {}", lambda[3]);
        }
    }
    Ok(())
}

fn dimension_table() -> Result<(), String> {
    let policy = RankPolicy::default();
    for ((r, n, d), want) in [
        ((4, 3, 4), 6),
        ((5, 3, 4), 9),
        ((6, 3, 4), 12),
        ((5, 4, 3), 10),
        ((3, 2, 5), 3),
        ((4, 2, 8), 5),
        ((5, 2, 9), 7),
    ] {
        let rep = tangent_dim(r, n, d, 17, 3, &policy).map_err(|e| e.to_string())?;
        ensure!(rep.dim == want, "({r},{n},{d}): {} vs {want}", rep.dim);
        if n == 2 {
            ensure!(want == (2 * r - 3).min(d), "binary formula at ({r},{d})");
        }
    }
    Ok(())
}

fn hilbert_table() -> Result<(), String> {
    let policy = RankPolicy::default();
    for ((r, n, d, e), want) in [((4, 3, 4, 2), 6), ((5, 3, 4, 3), 1), ((5, 2, 9, 3), 0), ((5, 2, 9, 4), 5), ((4, 3, 3, 3), 3)] {
        let h = hilbert_value(r, n, d, e, 5, &HilbertOptions::default(), &policy).map_err(|x| x.to_string())?;
        ensure!(h.kernel_dim == want, "({r},{n},{d},{e}): {} vs {want}", h.kernel_dim);
        ensure!(h.gap_ratio >= 1e3, "({r},{n},{d},{e}): gap {:e}", h.gap_ratio);
    }
    Ok(())
}

fn explicit_equations() -> Result<(), String> {
    for (eq, r) in [(KnownEquation::Cubic433, 4), (KnownEquation::Quadric434, 4), (KnownEquation::Cubic534, 5)] {
        let (n, d) = eq.shape();
        for i in 0..200u64 {
            let t = random_fradeco_tensor(r, n, d, 1000 * r as u64 + i).map_err(|e| e.to_string())?;
            let v = eq.evaluate_normalized(&t).map_err(|e| e.to_string())?;
            ensure!(v.abs() < 1e-8, "{} on sample {i}: {v:e}", eq.name());
        }
        let mut rng = rng_from_seed(2);
        let len = index_basis(n, d).len();
        for i in 0..200 {
            let t = SymTensor::new(n, d, (0..len).map(|_| rng.sample(StandardNormal)).collect()).unwrap();
            let v = eq.evaluate_normalized(&t).map_err(|e| e.to_string())?;
            ensure!(v.abs() > 1e-3, "{} on generic tensor {i}: {v:e}", eq.name());
        }
    }
    Ok(())
}

fn conic_pipeline() -> Result<(), String> {
    let poly: [([u32; 3], f64); 15] = [
        ([4, 0, 0], 467.0),
        ([3, 1, 0], 152.0),
        ([3, 0, 1], 1448.0),
        ([2, 2, 0], 660.0),
        ([2, 1, 1], -1488.0),
        ([2, 0, 2], 4020.0),
        ([1, 3, 0], 536.0),
        ([1, 2, 1], -1992.0),
        ([1, 1, 2], 2352.0),
        ([1, 0, 3], 944.0),
        ([0, 4, 0], 227.0),
        ([0, 3, 1], -1000.0),
        ([0, 2, 2], 2148.0),
        ([0, 1, 3], -1960.0),
        ([0, 0, 4], 1267.0),
    ];
    let t = SymTensor::new(3, 4, poly.iter().map(|(a, c)| c / multinomial(a) as f64).collect()).unwrap();
    let printed = DMatrix::from_row_slice(
        6,
        6,
        &[
            467.0, 38.0, 362.0, 110.0, -124.0, 670.0, //
            38.0, 110.0, -124.0, 134.0, -166.0, 196.0, //
            362.0, -124.0, 670.0, -166.0, 196.0, 236.0, //
            110.0, 134.0, -166.0, 227.0, -250.0, 358.0, //
            -124.0, -166.0, 196.0, -250.0, 358.0, -490.0, //
            670.0, 196.0, 236.0, 358.0, -490.0, 1267.0,
        ],
    );
    let policy = RankPolicy::default();
    let c = t.catalecticant(2).unwrap();
    ensure!(c == printed, "catalecticant differs from the printed matrix");
    let info = rank_info(&c, &policy);
    ensure!(info.rank == 5 && info.gap_ratio >= 1e3, "rank {} gap {:e}", info.rank, info.gap_ratio);
    let q = kernel_conic(&t, &policy).map_err(|e| e.to_string())?;
    let want = [14.0, -1.0, -2.0, -4.0, -11.0, -10.0];
    let norm = want.iter().map(|x: &f64| x * x).sum::<f64>().sqrt();
    for (a, b) in q.iter().zip(want) {
        ensure!((a - b / norm).abs() < 1e-8, "conic {q:?}");
    }
    let found = waring_frame_search(&t, 200, 1, &policy).map_err(|e| e.to_string())?;
    ensure!(found.combined_residual < 1e-7, "combined residual {:e}", found.combined_residual);
    Ok(())
}

fn power_method() -> Result<(), String> {
    let v = opening_frame();
    let t = synthesize(&v, &[1.0; 4], 5).unwrap();
    let opts = PowerOptions {
        trials: 500,
        ..PowerOptions::for_dimension(3)
    };
    let robust: Vec<_> = robust_eigenvectors(&t, &opts, 42)
        .map_err(|e| e.to_string())?
        .into_iter()
        .filter(|c| c.attracting)
        .collect();
    ensure!(robust.len() == 4, "{} robust clusters", robust.len());
    for j in 0..4 {
        let col: Vec<f64> = v.column(j).iter().copied().collect();
        ensure!(robust.iter().any(|c| parallel(&c.x, &col, 1e-8)), "column {j} missing");
    }

    let w = DMatrix::from_row_slice(2, 4, &[1.0, 0.0, 1.0, 1.0, 0.0, 1.0, 1.0, -1.0]);
    let t = synthesize(&w, &[7.0, 1.0, 1.0, 1.0], 5).unwrap();
    let disc = eigen_discriminant_binary(&t).map_err(|e| e.to_string())?;
    ensure!(disc.real_roots.len() == 1, "{} real roots", disc.real_roots.len());
    ensure!(parallel(&disc.real_roots[0].point, &[1.0, 0.0], 1e-12), "root {:?}", disc.real_roots[0].point);
    Ok(())
}

fn property_suite() -> Result<(), String> {
    let mut cases = Vec::new();
    for n in 2..=4usize {
        for r in (n + 1)..=7 {
            cases.push((r, n));
        }
    }
    for (r, n) in cases {
        let worst = (0..1000u64)
            .into_par_iter()
            .map(|s| {
                let f = sample_frame(r, n, derive_seed(r as u64 * 10 + n as u64, s)).map_err(|e| e.to_string())?;
                let pl = pluecker(f.matrix()).map_err(|e| e.to_string())?;
                let pq = if n == 2 {
                    let (p, q) = frame_multilinear_values(&f).map_err(|e| e.to_string())?;
                    p.abs().max(q.abs())
                } else {
                    0.0
                };
                Ok::<_, String>([f.residual(), pl.identity_residual(), pq])
            })
            .try_reduce(|| [0.0; 3], |a, b| Ok([a[0].max(b[0]), a[1].max(b[1]), a[2].max(b[2])]))?;
        ensure!(worst[0] < 1e-10, "(r,n)=({r},{n}): residual {:e}", worst[0]);
        ensure!(worst[1] < 1e-8, "(r,n)=({r},{n}): Plücker identities {:e}", worst[1]);
        ensure!(worst[2] < 1e-9, "(r,n)=({r},{n}): P/Q forms {:e}", worst[2]);
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [(&str, Check, Duration); 9] = [
        ("opening quartic roundtrip", opening_quartic_roundtrip, Duration::from_secs(1)),
        ("symmetric octic ranks", symmetric_octic_ranks, Duration::from_secs(1)),
        ("worked octic decomposition", worked_octic, Duration::from_secs(1)),
        ("dimension table", dimension_table, Duration::from_secs(60)),
        ("Hilbert function values", hilbert_table, Duration::from_secs(300)),
        ("explicit equations", explicit_equations, Duration::from_secs(60)),
        ("conic pipeline", conic_pipeline, Duration::from_secs(120)),
        ("power method", power_method, Duration::from_secs(30)),
        ("property suite", property_suite, Duration::from_secs(120)),
    ];
    let mut failed = 0;
    for (i, (name, check, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let outcome = outcome.and_then(|()| {
            if took <= *budget {
                Ok(())
            } else {
                Err(format!("over budget of {budget:?}"))
            }
        });
        match outcome {
            Ok(()) => println!("criterion {} ({name}): PASS in {:.3}s (budget {}s)", i + 1, took.as_secs_f64(), budget.as_secs()),
            Err(why) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL in {:.3}s: {why}", i + 1, took.as_secs_f64());
            }
        }
    }
    println!("acceptance: {}/9 passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
