mod common;

use btl_core::decompose::sum_of_norms::{AffineNorm, Domain, SumOfNorms};
use btl_core::decompose::theorem5::hankel_sum;
use btl_core::decompose::xi2::{kernel_norm_sum, objective_at};
use btl_core::decompose::{convex_subproblem, prop4_solve, theorem5_check, xi2, SolverOptions, Xi2Options};
use btl_core::hardy::HankelOnKernel;
use btl_core::linalg::{self, CMat, CVec, C64};
use btl_core::{DiskPoint, MatrixSymbol};
use common::*;
use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn generic_problem(r: &mut ChaCha8Rng) -> SumOfNorms {
    let terms = (0..4)
        .map(|_| {
            let rows = r.gen_range(1..=3);
            AffineNorm { k: DMatrix::from_fn(rows, 4, |_, _| r.gen_range(-1.0..1.0)), b: real_vec(r, rows) * 1.5 }
        })
        .collect();
    SumOfNorms { dim: 4, domain: Domain::Box, terms }
}

#[test]
fn convex_subproblem_matches_grid_search() {
    let mut r = rng(100);
    for case in 0..12 {
        let p = if case % 2 == 0 { structured_problem(&mut r, 3) } else { generic_problem(&mut r) };
        let s = convex_subproblem(&p, &[], &SolverOptions::default());
        let grid = grid_min(&p, 11, 14);
        assert!(s.x.iter().all(|v| v.abs() <= 1.0));
        assert!((s.value - grid).abs() <= 1e-4, "case {case}: solver {} grid {grid}", s.value);
        assert!(s.value <= grid + 1e-9 && s.lower_bound <= grid + 1e-9);
    }
}

#[test]
fn convex_subproblem_value_is_certified() {
    let mut r = rng(101);
    for _ in 0..10 {
        let p = generic_problem(&mut r);
        let s = convex_subproblem(&p, &[], &SolverOptions::default());
        assert!(s.converged);
        assert!(s.value - s.lower_bound <= 1e-6);
    }
}

#[test]
fn zero_data_gives_zero() {
    let p = SumOfNorms {
        dim: 2,
        domain: Domain::Disk,
        terms: vec![AffineNorm { k: DMatrix::zeros(2, 2), b: DVector::zeros(2) }],
    };
    let s = convex_subproblem(&p, &[DVector::from_vec(vec![0.4, 0.1])], &SolverOptions::default());
    assert_eq!(s.value, 0.0);
}

#[test]
fn prop4_round_trip_on_planted_instances() {
    let mut r = rng(102);
    for _ in 0..40 {
        let n = r.gen_range(1..=5);
        let m = r.gen_range(1..=3);
        let len = r.gen_range(1..=6);
        let (a0, f, g) = planted(&mut r, n, m, len);
        assert!(a0.iter().all(|v| v.norm() <= 1.0 + 1e-12));
        let planted = btl_core::decompose::Certificate::new(a0, (0..n).collect(), &f, &g);
        assert!(planted.residual_f.iter().all(|&x| x <= 1e-12) && planted.residual_g <= 1e-12);
        let cert = prop4_solve(&f, &g).unwrap();
        assert!(cert.residual_f.iter().all(|&x| x <= 1e-9));
        assert!(cert.residual_g <= 1e-9);
        assert!(cert.in_unit_ball(1e-12) && cert.is_permutation());
        let (rf, rg) = cert.residuals(&f, &g);
        for (a, b) in rf.iter().zip(&cert.residual_f) {
            assert!((a - b).abs() <= 1e-12);
        }
        assert!((rg - cert.residual_g).abs() <= 1e-12);
    }
}

#[test]
fn xi2_scalar_exactness() {
    let mut r = rng(103);
    for _ in 0..15 {
        let (df, dg) = (r.gen_range(0..=4), r.gen_range(0..=4));
        let f = rand_symbol(&mut r, 1, -df, 3);
        let g = rand_symbol(&mut r, 1, -dg, 3);
        let z = rand_point(&mut r, 0.9);
        let res = xi2(std::slice::from_ref(&f), std::slice::from_ref(&g), z, &Xi2Options::default()).unwrap();
        let hf = HankelOnKernel::new(&f, z).norm_sq().sqrt();
        let hg = HankelOnKernel::new(&g, z).norm_sq().sqrt();
        assert!((res.value - hf.min(hg)).abs() <= 1e-6, "{} vs {}", res.value, hf.min(hg));
    }
}

/// Symbols whose anti-analytic coefficient vectors are a planted instance,
/// plus random analytic parts.
fn planted_symbols(r: &mut ChaCha8Rng, n: usize, d: usize) -> (Vec<MatrixSymbol>, Vec<MatrixSymbol>) {
    let (_, f, g) = planted(r, n, 1, d);
    let lift = |v: &CVec, r: &mut ChaCha8Rng| {
        let mut coeffs: Vec<(i64, C64)> = v.iter().enumerate().map(|(p, &c)| (-(p as i64) - 1, c)).collect();
        coeffs.extend((0..=2).map(|k| (k, rand_c(r))));
        MatrixSymbol::scalar(coeffs)
    };
    let fs = f[0].iter().map(|v| lift(v, r)).collect();
    let gs = g.iter().map(|v| lift(v, r)).collect();
    (fs, gs)
}

#[test]
fn xi2_vanishes_on_zero_instances() {
    let mut r = rng(104);
    for _ in 0..6 {
        let n = r.gen_range(1..=3);
        let (f, g) = planted_symbols(&mut r, n, 3);
        assert!(linalg::max_abs(&hankel_sum(&f, &g).unwrap()) <= 1e-12);
        let t5 = theorem5_check(std::slice::from_ref(&f), &g).unwrap();
        assert!(t5.verified);
        for _ in 0..3 {
            let z = rand_point(&mut r, 0.95);
            let res = xi2(&f, &g, z, &Xi2Options::default()).unwrap();
            assert!(res.value <= 1e-6, "value {}", res.value);
        }
    }
}

#[test]
fn xi2_bounds_and_certificate_shape() {
    let mut r = rng(105);
    for _ in 0..5 {
        let n = r.gen_range(1..=3);
        let f: Vec<_> = (0..n).map(|_| rand_symbol(&mut r, 1, -3, 2)).collect();
        let g: Vec<_> = (0..n).map(|_| rand_symbol(&mut r, 1, -3, 2)).collect();
        let z = rand_point(&mut r, 0.9);
        let res = xi2(&f, &g, z, &Xi2Options::default()).unwrap();
        assert!(res.value >= 0.0);
        assert!(res.value <= kernel_norm_sum(&f, z) + 1e-9);
        assert!(res.value <= kernel_norm_sum(&g, z) + 1e-9);
        assert!(res.cert.in_unit_ball(1e-12) && res.cert.is_permutation());
        let again = objective_at(&f, &g, &res.cert.a, &res.cert.perm, z);
        assert!((again - res.value).abs() <= 1e-9);
        // Any (A, R) is an upper bound; the reported one should beat random trials.
        for _ in 0..20 {
            let a = CMat::from_fn(n, n, |_, _| {
                let c = rand_c(&mut r);
                c / C64::new(c.norm().max(1.0), 0.0)
            });
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut r);
            assert!(objective_at(&f, &g, &a, &perm, z) >= res.value - 1e-6);
        }
    }
}

#[test]
fn xi2_objective_is_convex_along_segments() {
    let mut r = rng(106);
    let n = 2;
    let f: Vec<_> = (0..n).map(|_| rand_symbol(&mut r, 1, -3, 1)).collect();
    let g: Vec<_> = (0..n).map(|_| rand_symbol(&mut r, 1, -3, 1)).collect();
    let z = rand_point(&mut r, 0.8);
    let unit = |r: &mut ChaCha8Rng| {
        CMat::from_fn(n, n, |_, _| {
            let c = rand_c(r);
            c / C64::new(c.norm().max(1.0), 0.0)
        })
    };
    for _ in 0..30 {
        let (a, b) = (unit(&mut r), unit(&mut r));
        let perm = [1, 0];
        let (va, vb) = (objective_at(&f, &g, &a, &perm, z), objective_at(&f, &g, &b, &perm, z));
        for t in [0.25, 0.5, 0.75] {
            let mid = &a * C64::new(1.0 - t, 0.0) + &b * C64::new(t, 0.0);
            assert!(objective_at(&f, &g, &mid, &perm, z) <= (1.0 - t) * va + t * vb + 1e-12);
        }
    }
}

#[test]
fn xi2_samples_permutations_beyond_exhaustive_limit() {
    let f: Vec<_> = (0..9).map(|_| wbar()).collect();
    let opts = Xi2Options { perm_samples: Some(3), seed: 5, ..Xi2Options::default() };
    let a = xi2(&f, &f, DiskPoint::origin(), &opts).unwrap();
    let b = xi2(&f, &f, DiskPoint::origin(), &opts).unwrap();
    assert_eq!(a.cert, b.cert);
}
