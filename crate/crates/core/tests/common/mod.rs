#![allow(dead_code)]

use btl_core::decompose::sum_of_norms::{AffineNorm, Domain, SumOfNorms};
use btl_core::linalg::{CMat, CVec, C64};
use btl_core::{DiskPoint, MatrixSymbol};
use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn w() -> MatrixSymbol {
    MatrixSymbol::scalar([(1, c(1.0, 0.0))])
}

pub fn wbar() -> MatrixSymbol {
    MatrixSymbol::scalar([(-1, c(1.0, 0.0))])
}

pub fn zero1() -> MatrixSymbol {
    MatrixSymbol::zero(1)
}

pub fn rand_c(r: &mut ChaCha8Rng) -> C64 {
    c(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))
}

pub fn rand_mat(r: &mut ChaCha8Rng, n: usize) -> CMat {
    CMat::from_fn(n, n, |_, _| rand_c(r))
}

pub fn rand_vec(r: &mut ChaCha8Rng, len: usize) -> CVec {
    CVec::from_fn(len, |_, _| rand_c(r))
}

/// Random symbol on frequencies `lo..=hi`.
pub fn rand_symbol(r: &mut ChaCha8Rng, n: usize, lo: i64, hi: i64) -> MatrixSymbol {
    MatrixSymbol::from_coeffs(n, (lo..=hi).map(|k| (k, rand_mat(r, n))).collect::<Vec<_>>()).unwrap()
}

pub fn rand_point(r: &mut ChaCha8Rng, max_modulus: f64) -> DiskPoint {
    let rad = max_modulus * r.gen::<f64>().sqrt();
    DiskPoint::from_polar(rad, r.gen_range(0.0..std::f64::consts::TAU)).unwrap()
}

/// `q q*` for a random unit `q`.
pub fn rand_rank_one_projection(r: &mut ChaCha8Rng, n: usize) -> CMat {
    let q = rand_vec(r, n);
    let q = &q / C64::new(q.norm(), 0.0);
    &q * q.adjoint()
}

/// `(F, G)` with `T_{FG} = T_F T_G` but neither `F*` nor `G` analytic
/// (for `n ≥ 2`): positive coefficients of `F` are `M_k (I − Q)` and
/// negative coefficients of `G` are `Q M'_k`, so every product in
/// `H_{F*}* H_G` contains `(I − Q) Q = 0`.
pub fn zero_semicommutator_pair(r: &mut ChaCha8Rng, n: usize, d: i64) -> (MatrixSymbol, MatrixSymbol) {
    let q = rand_rank_one_projection(r, n);
    let iq = CMat::identity(n, n) - &q;
    let mut fc: Vec<(i64, CMat)> = (1..=d).map(|k| (k, rand_mat(r, n) * &iq)).collect();
    fc.extend((-d..=0).map(|k| (k, rand_mat(r, n))));
    let mut gc: Vec<(i64, CMat)> = (1..=d).map(|k| (-k, &q * rand_mat(r, n))).collect();
    gc.extend((0..=d).map(|k| (k, rand_mat(r, n))));
    (MatrixSymbol::from_coeffs(n, fc).unwrap(), MatrixSymbol::from_coeffs(n, gc).unwrap())
}

/// `F = [[w, w], [0, 0]]`, `G = [[w̄, 0], [−w̄, 0]]`.
pub fn matrix_fixture() -> (MatrixSymbol, MatrixSymbol) {
    let f = MatrixSymbol::from_entries(&[vec![w(), w()], vec![zero1(), zero1()]]).unwrap();
    let g = MatrixSymbol::from_entries(&[vec![wbar(), zero1()], vec![-&wbar(), zero1()]]).unwrap();
    (f, g)
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    assert_eq!(a.shape(), b.shape());
    (a - b).iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// Trapezoid rule for `(1/2π)∫ F(e^{iθ}) P_z(θ) dθ` on `m` nodes.
pub fn poisson_quadrature(f: &MatrixSymbol, z: DiskPoint, m: usize) -> CMat {
    let zz = z.z();
    let weight_scale = 1.0 - zz.norm_sqr();
    let mut acc = CMat::zeros(f.n(), f.n());
    for j in 0..m {
        let theta = std::f64::consts::TAU * j as f64 / m as f64;
        let kernel = weight_scale / (C64::from_polar(1.0, theta) - zz).norm_sqr();
        acc += f.eval(theta) * C64::new(kernel, 0.0);
    }
    acc / C64::new(m as f64, 0.0)
}

/// Coarse-to-fine grid search over `[−1, 1]^dim`, valid for convex objectives.
pub fn grid_min(p: &SumOfNorms, per_axis: usize, rounds: usize) -> f64 {
    let dim = p.dim;
    let mut center = DVector::<f64>::zeros(dim);
    let mut half = 1.0;
    let mut best = f64::INFINITY;
    for _ in 0..rounds {
        let mut best_x = center.clone();
        let total = per_axis.pow(dim as u32);
        for idx in 0..total {
            let mut x = DVector::zeros(dim);
            let mut rem = idx;
            for d in 0..dim {
                let step = rem % per_axis;
                rem /= per_axis;
                let t = -1.0 + 2.0 * step as f64 / (per_axis - 1) as f64;
                x[d] = (center[d] + half * t).clamp(-1.0, 1.0);
            }
            let v = p.value(&x);
            if v < best {
                best = v;
                best_x = x;
            }
        }
        center = best_x;
        half *= 0.35;
    }
    best
}

pub fn real_vec(r: &mut ChaCha8Rng, len: usize) -> DVector<f64> {
    DVector::from_fn(len, |_, _| r.gen_range(-1.0..1.0))
}

/// Real `n = 2` instance with the Ξ₂ structure: `‖Σ_l (δ_il − A_il) u_l‖` and
/// `‖Σ_l A_li v_l‖` with `A_il = x[2i + l]`.
pub fn structured_problem(r: &mut ChaCha8Rng, len: usize) -> SumOfNorms {
    let u: Vec<DVector<f64>> = (0..2).map(|_| real_vec(r, len)).collect();
    let v: Vec<DVector<f64>> = (0..2).map(|_| real_vec(r, len)).collect();
    let mut terms = Vec::new();
    for i in 0..2 {
        let mut k = DMatrix::zeros(len, 4);
        for l in 0..2 {
            k.set_column(2 * i + l, &(-&u[l]));
        }
        terms.push(AffineNorm { k, b: u[i].clone() });
        let mut k = DMatrix::zeros(len, 4);
        for l in 0..2 {
            k.set_column(2 * l + i, &v[l]);
        }
        terms.push(AffineNorm { k, b: DVector::zeros(len) });
    }
    SumOfNorms { dim: 4, domain: Domain::Box, terms }
}

pub fn random_projection(r: &mut ChaCha8Rng, n: usize, rank: usize) -> CMat {
    if rank == 0 {
        return CMat::zeros(n, n);
    }
    let m = CMat::from_fn(n, rank, |_, _| rand_c(r));
    let q = m.qr().q();
    &q * q.adjoint()
}

pub fn perm_matrix(perm: &[usize]) -> CMat {
    let n = perm.len();
    let mut m = CMat::zeros(n, n);
    for (i, &p) in perm.iter().enumerate() {
        m[(i, p)] = C64::new(1.0, 0.0);
    }
    m
}

/// `A₀ = Rᵀ (M + M K (I − M)) R` with `M` an orthogonal projection, scaled
/// into the unit ball: `A₀` fixes `Rᵀ range(M)` and `A₀*` kills `Rᵀ null(M)`.
/// Taking `f_k` and `g` from those subspaces permutes both sides together,
/// which keeps `Σ_i f_ki ⊗ g_i = 0`.
pub fn planted(r: &mut ChaCha8Rng, n: usize, m: usize, len: usize) -> (CMat, Vec<Vec<CVec>>, Vec<CVec>) {
    let rank = r.gen_range(0..=n);
    let proj = random_projection(r, n, rank);
    let iq = CMat::identity(n, n) - &proj;
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(r);
    let rm = perm_matrix(&perm);
    let mut scale = 1.0;
    let k = CMat::from_fn(n, n, |_, _| rand_c(r));
    let a0 = loop {
        let a = rm.transpose() * (&proj + &proj * &k * C64::new(scale, 0.0) * &iq) * &rm;
        if a.iter().all(|v| v.norm() <= 1.0 + 1e-13) || scale == 0.0 {
            break a;
        }
        scale = if scale < 1e-3 { 0.0 } else { scale * 0.5 };
    };
    let rows = |mat: CMat| -> Vec<CVec> { (0..n).map(|i| mat.row(i).transpose()).collect() };
    let f_list = (0..m).map(|_| rows(rm.transpose() * &proj * CMat::from_fn(n, len, |_, _| rand_c(r)))).collect();
    let g = rows(rm.transpose() * &iq * CMat::from_fn(n, len, |_, _| rand_c(r)));
    (a0, f_list, g)
}
