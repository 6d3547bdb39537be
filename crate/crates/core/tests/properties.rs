mod common;

use btl_core::criteria;
use btl_core::decompose::prop4_solve;
use btl_core::hardy;
use btl_core::io;
use btl_core::linalg::{self, CVec, C64};
use common::*;
use proptest::prelude::*;

fn config() -> ProptestConfig {
    ProptestConfig { cases: 48, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn split_recombines(seed in any::<u64>(), n in 1usize..4, lo in -5i64..1, hi in 0i64..5) {
        let f = rand_symbol(&mut rng(seed), n, lo, hi);
        let parts = f.split();
        prop_assert!(parts.plus.is_analytic());
        prop_assert!(parts.minus.coeffs().all(|(k, _)| k < 0));
        prop_assert_eq!(parts.recombine(), f);
    }

    #[test]
    fn adjoint_is_pointwise(seed in any::<u64>(), n in 1usize..4, theta in 0.0..std::f64::consts::TAU) {
        let f = rand_symbol(&mut rng(seed), n, -3, 3);
        prop_assert_eq!(f.adjoint().adjoint(), f.clone());
        prop_assert!(max_abs_diff(&f.adjoint().eval(theta), &f.eval(theta).adjoint()) <= 1e-13);
    }

    #[test]
    fn multiply_is_pointwise(seed in any::<u64>(), n in 1usize..4, theta in 0.0..std::f64::consts::TAU) {
        let mut r = rng(seed);
        let f = rand_symbol(&mut r, n, -3, 2);
        let g = rand_symbol(&mut r, n, -2, 3);
        let fg = f.multiply(&g).unwrap();
        prop_assert!(max_abs_diff(&fg.eval(theta), &(f.eval(theta) * g.eval(theta))) <= 1e-12);
    }

    #[test]
    fn mod_sq_ext_is_psd(seed in any::<u64>(), n in 1usize..4) {
        let mut r = rng(seed);
        let f = rand_symbol(&mut r, n, -4, 4);
        let z = rand_point(&mut r, 0.95);
        let m = f.mod_sq_ext(z);
        prop_assert_eq!(m.clone(), m.adjoint());
        prop_assert!(linalg::min_eigenvalue(&m) >= -1e-12);
    }

    #[test]
    fn criterion_frobenius_sandwich(seed in any::<u64>(), n in 1usize..4) {
        let mut r = rng(seed);
        let f = rand_symbol(&mut r, n, -3, 3);
        let g = rand_symbol(&mut r, n, -3, 3);
        let z = rand_point(&mut r, 0.9);
        let rep = criteria::criterion(&f, &g, z).unwrap();
        let n2 = rep.norm * rep.norm;
        let slack = 1e-12 * rep.trace_value.max(1.0);
        prop_assert!(n2 <= rep.trace_value + slack);
        prop_assert!(rep.trace_value <= n as f64 * n2 + slack);
    }

    #[test]
    fn trace_routes_agree(seed in any::<u64>(), n in 1usize..4, d in 1i64..5) {
        let mut r = rng(seed);
        let f = rand_symbol(&mut r, n, -d, d);
        let g = rand_symbol(&mut r, n, -d, d);
        let z = rand_point(&mut r, 0.9);
        let t = criteria::trace_defect_routes(&f, &g, z).unwrap();
        prop_assert!(t.relative_gap <= 1e-9, "{:?}", t);
    }

    #[test]
    fn brown_halmos_sufficiency(seed in any::<u64>(), n in 1usize..4, which in 0u8..2) {
        let mut r = rng(seed);
        let (f, g) = if which == 0 {
            // F* analytic: F has no positive frequencies.
            (rand_symbol(&mut r, n, -4, 0), rand_symbol(&mut r, n, -4, 4))
        } else {
            (rand_symbol(&mut r, n, -4, 4), rand_symbol(&mut r, n, 0, 4))
        };
        let semi = hardy::semicommutator(&f, &g).unwrap();
        prop_assert!(semi.is_empty() || linalg::max_abs(&semi) <= 1e-14);
        let z = rand_point(&mut r, 0.9);
        prop_assert!(criteria::criterion(&f, &g, z).unwrap().norm <= 1e-10);
    }

    #[test]
    fn zero_semicommutator_criterion_vanishes_everywhere(seed in any::<u64>(), n in 2usize..4) {
        let mut r = rng(seed);
        let (f, g) = zero_semicommutator_pair(&mut r, n, 3);
        prop_assert!(!f.adjoint().is_analytic() && !g.is_analytic());
        prop_assert!(linalg::max_abs(&hardy::semicommutator(&f, &g).unwrap()) <= 1e-12);
        for _ in 0..5 {
            let z = rand_point(&mut r, 0.9);
            prop_assert!(criteria::criterion(&f, &g, z).unwrap().norm <= 1e-8);
        }
    }

    #[test]
    fn commutator_of_symbol_with_itself_vanishes(seed in any::<u64>(), n in 1usize..3) {
        let mut r = rng(seed);
        let f = rand_symbol(&mut r, n, -2, 2);
        let z = rand_point(&mut r, 0.9);
        let rep = criteria::commutator_criterion(&f, &f, z).unwrap();
        prop_assert!(rep.residual <= 1e-14);
        prop_assert!(rep.report.norm <= 1e-10);
    }

    #[test]
    fn self_adjoint_symbols_are_normal(seed in any::<u64>(), n in 1usize..3) {
        let mut r = rng(seed);
        let a = rand_symbol(&mut r, n, -2, 2);
        let h = &a + &a.adjoint();
        let z = rand_point(&mut r, 0.9);
        prop_assert!(criteria::normality_criterion(&h, z).unwrap().report.norm <= 1e-10);
    }

    #[test]
    fn certificates_satisfy_invariants(seed in any::<u64>(), n in 1usize..5, len in 1usize..5) {
        // f = (u, …, u), g = (v_1, …, v_n) with Σ v_i = 0.
        let mut r = rng(seed);
        let u = rand_vec(&mut r, len);
        let mut g: Vec<CVec> = (0..n).map(|_| rand_vec(&mut r, len)).collect();
        let total = g.iter().fold(CVec::zeros(len), |acc, v| acc + v);
        g[0] -= total;
        let f = vec![vec![u; n]];
        let cert = prop4_solve(&f, &g).unwrap();
        prop_assert!(cert.in_unit_ball(1e-12) && cert.is_permutation());
        prop_assert!(cert.residual_f[0] <= 1e-9 && cert.residual_g <= 1e-9);
        let (rf, rg) = cert.residuals(&f, &g);
        prop_assert!((rf[0] - cert.residual_f[0]).abs() <= 1e-12 && (rg - cert.residual_g).abs() <= 1e-12);
    }

    #[test]
    fn symbol_json_round_trips(seed in any::<u64>(), n in 1usize..4) {
        let f = rand_symbol(&mut rng(seed), n, -3, 3);
        prop_assert_eq!(io::symbol_from_json(&io::symbol_to_json(&f)).unwrap(), f);
    }

    #[test]
    fn scaling_is_linear_in_poisson_ext(seed in any::<u64>(), re in -2.0..2.0f64, im in -2.0..2.0f64) {
        let mut r = rng(seed);
        let f = rand_symbol(&mut r, 2, -3, 3);
        let z = rand_point(&mut r, 0.9);
        let a = C64::new(re, im);
        prop_assert!(max_abs_diff(&f.scale(a).poisson_ext(z), &(f.poisson_ext(z) * a)) <= 1e-13);
    }
}
