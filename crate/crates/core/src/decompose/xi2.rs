//! `Ξ₂(z) = min over (A, R) of Σ_i ‖H_{x_i} k_z‖ + ‖H_{y_i} k_z‖`, with
//! `x = (R − A) f`, `y = A* g`, `A` in the entrywise unit ball and `R` a
//! permutation.

use itertools::Itertools;
use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::decompose::certificate::{prop4_solve, Certificate};
use crate::decompose::sum_of_norms::{convex_subproblem, AffineNorm, Domain, Solution, SolverOptions, SumOfNorms};
use crate::error::{Error, Result};
use crate::hardy::HankelOnKernel;
use crate::linalg::{CMat, CVec, C64};
use crate::symbol::{DiskPoint, MatrixSymbol};

/// Largest `n` for which every permutation is tried.
pub const MAX_EXHAUSTIVE: usize = 8;

#[derive(Debug, Clone, Copy, Default)]
pub struct Xi2Options {
    pub solver: SolverOptions,
    /// Random permutations to try when `n > MAX_EXHAUSTIVE` (plus the identity).
    pub perm_samples: Option<usize>,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct XiResult {
    pub z: DiskPoint,
    pub value: f64,
    pub cert: Certificate,
    pub iterations: usize,
    pub converged: bool,
    /// `‖H_{x_i} k_z‖` at the reported certificate.
    pub x_terms: Vec<f64>,
    /// `‖H_{y_i} k_z‖` at the reported certificate.
    pub y_terms: Vec<f64>,
    /// Objective at `A = 0, R = I`.
    pub bound_zero: f64,
    /// Objective at `A = R = I`.
    pub bound_identity: f64,
}

/// `Σ_i ‖H_{v_i} k_z‖` computed independently through the Poisson extension.
pub fn kernel_norm_sum(v: &[MatrixSymbol], z: DiskPoint) -> f64 {
    v.iter().map(|s| HankelOnKernel::new(s, z).norm_sq().sqrt()).sum()
}

fn to_real(v: &CVec) -> Vec<f64> {
    v.iter().flat_map(|c| [c.re, c.im]).collect()
}

fn a_from_params(x: &DVector<f64>, n: usize) -> CMat {
    CMat::from_fn(n, n, |i, l| C64::new(x[2 * (i * n + l)], x[2 * (i * n + l) + 1]))
}

fn params_from_a(a: &CMat) -> DVector<f64> {
    let n = a.nrows();
    let mut x = DVector::zeros(2 * n * n);
    for i in 0..n {
        for l in 0..n {
            x[2 * (i * n + l)] = a[(i, l)].re;
            x[2 * (i * n + l) + 1] = a[(i, l)].im;
        }
    }
    x
}

/// Real affine map from its values at the origin and on the basis vectors.
fn probe(dim: usize, map: impl Fn(&DVector<f64>) -> Vec<f64>) -> AffineNorm {
    let b = DVector::from_vec(map(&DVector::zeros(dim)));
    let mut k = DMatrix::zeros(b.len(), dim);
    for p in 0..dim {
        let mut e = DVector::zeros(dim);
        e[p] = 1.0;
        let col = DVector::from_vec(map(&e)) - &b;
        k.set_column(p, &col);
    }
    AffineNorm { k, b }
}

struct Instance {
    n: usize,
    hf: Vec<CVec>,
    hg: Vec<CVec>,
}

impl Instance {
    fn combo(vs: &[CVec], coeffs: impl Iterator<Item = C64>) -> CVec {
        let len = vs.iter().map(|v| v.len()).max().unwrap_or(0);
        let mut out = CVec::zeros(len);
        for (v, c) in vs.iter().zip(coeffs) {
            out.rows_mut(0, v.len()).axpy(c, v, C64::new(1.0, 0.0));
        }
        out
    }

    fn x_vec(&self, a: &CMat, perm: &[usize], i: usize) -> CVec {
        Self::combo(
            &self.hf,
            (0..self.n).map(|l| C64::new(if perm[i] == l { 1.0 } else { 0.0 }, 0.0) - a[(i, l)]),
        )
    }

    fn y_vec(&self, a: &CMat, i: usize) -> CVec {
        Self::combo(&self.hg, (0..self.n).map(|l| a[(l, i)].conj()))
    }

    fn problem(&self, perm: &[usize]) -> SumOfNorms {
        let n = self.n;
        let dim = 2 * n * n;
        let mut terms = Vec::with_capacity(2 * n);
        for i in 0..n {
            terms.push(probe(dim, |x| to_real(&self.x_vec(&a_from_params(x, n), perm, i))));
            terms.push(probe(dim, |x| to_real(&self.y_vec(&a_from_params(x, n), i))));
        }
        SumOfNorms { dim, domain: Domain::Disk, terms }
    }

    fn objective(&self, a: &CMat, perm: &[usize]) -> f64 {
        (0..self.n).map(|i| self.x_vec(a, perm, i).norm() + self.y_vec(a, i).norm()).sum()
    }
}

fn permutations(n: usize, opts: &Xi2Options) -> Result<Vec<Vec<usize>>> {
    if n <= MAX_EXHAUSTIVE {
        return Ok((0..n).permutations(n).collect());
    }
    let samples = opts.perm_samples.ok_or(Error::TooManyPermutations { n })?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut out = vec![(0..n).collect::<Vec<_>>()];
    for _ in 0..samples {
        let mut p: Vec<usize> = (0..n).collect();
        p.shuffle(&mut rng);
        out.push(p);
    }
    Ok(out)
}

fn check_vector(v: &[MatrixSymbol]) -> Result<()> {
    match v.iter().find(|s| s.n() != 1) {
        Some(s) => Err(Error::DimensionMismatch { expected: 1, found: s.n() }),
        None => Ok(()),
    }
}

/// Warm start from the `z = 0` certificate when the rank-one premise holds.
fn warm_start(f: &[MatrixSymbol], g: &[MatrixSymbol]) -> Option<CMat> {
    let origin = DiskPoint::origin();
    let fv: Vec<CVec> = f.iter().map(|s| HankelOnKernel::new(s, origin).coefficients()).collect();
    let gv: Vec<CVec> = g.iter().map(|s| HankelOnKernel::new(s, origin).coefficients()).collect();
    prop4_solve(&[fv], &gv).ok().map(|c| c.a)
}

pub fn xi2(f: &[MatrixSymbol], g: &[MatrixSymbol], z: DiskPoint, opts: &Xi2Options) -> Result<XiResult> {
    let n = g.len();
    if n == 0 {
        return Err(Error::InvalidArgument("empty vector symbol".into()));
    }
    if f.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: f.len() });
    }
    check_vector(f)?;
    check_vector(g)?;
    let perms = permutations(n, opts)?;
    let inst = Instance {
        n,
        hf: f.iter().map(|s| HankelOnKernel::new(s, z).coefficients()).collect(),
        hg: g.iter().map(|s| HankelOnKernel::new(s, z).coefficients()).collect(),
    };
    let identity: Vec<usize> = (0..n).collect();
    let warm = warm_start(f, g);

    let solutions: Vec<Solution> = perms
        .par_iter()
        .map(|perm| {
            let r = CMat::from_fn(n, n, |i, l| C64::new(if perm[i] == l { 1.0 } else { 0.0 }, 0.0));
            let mut starts = vec![DVector::zeros(2 * n * n), params_from_a(&r)];
            if let (Some(a), true) = (&warm, perm == &identity) {
                starts.push(params_from_a(a));
            }
            convex_subproblem(&inst.problem(perm), &starts, &opts.solver)
        })
        .collect();
    let (best_idx, best) = solutions
        .iter()
        .enumerate()
        .fold(None, |acc: Option<(usize, &Solution)>, (i, s)| match acc {
            Some((_, b)) if b.value <= s.value => acc,
            _ => Some((i, s)),
        })
        .expect("at least one permutation");

    let perm = perms[best_idx].clone();
    let a = a_from_params(&best.x, n);
    let (xs, ys) = symbols_at(f, g, &a, &perm);
    let x_terms: Vec<f64> = xs.iter().map(|s| HankelOnKernel::new(s, z).norm_sq().sqrt()).collect();
    let y_terms: Vec<f64> = ys.iter().map(|s| HankelOnKernel::new(s, z).norm_sq().sqrt()).collect();
    let value = inst.objective(&a, &perm);

    let bound_zero = kernel_norm_sum(f, z);
    let bound_identity = kernel_norm_sum(g, z);
    let slack = 1e-9 * bound_zero.max(bound_identity).max(1.0);
    if value > bound_zero + slack || value > bound_identity + slack {
        return Err(Error::Inconsistent(format!(
            "xi2 value {value:e} exceeds trivial bounds {bound_zero:e}, {bound_identity:e}"
        )));
    }
    let closed_form: f64 = x_terms.iter().chain(&y_terms).sum();
    if (closed_form - value).abs() > 1e-8 * value.max(1.0) {
        return Err(Error::Inconsistent(format!(
            "kernel coefficients give {value:e}, Poisson extension gives {closed_form:e}"
        )));
    }
    let norm = |t: &[f64]| t.iter().map(|v| v * v).sum::<f64>().sqrt();
    let cert = Certificate { a, perm, residual_f: vec![norm(&x_terms)], residual_g: norm(&y_terms) };
    Ok(XiResult {
        z,
        value,
        cert,
        iterations: best.iterations,
        converged: best.converged,
        x_terms,
        y_terms,
        bound_zero,
        bound_identity,
    })
}

/// `x = (R − A) f` and `y = A* g` as scalar symbols.
pub fn symbols_at(f: &[MatrixSymbol], g: &[MatrixSymbol], a: &CMat, perm: &[usize]) -> (Vec<MatrixSymbol>, Vec<MatrixSymbol>) {
    let n = perm.len();
    let xs = (0..n)
        .map(|i| {
            f.iter()
                .enumerate()
                .fold(f[perm[i]].clone(), |acc, (l, fl)| &acc - &fl.scale(a[(i, l)]))
        })
        .collect();
    let ys = (0..n)
        .map(|i| {
            g.iter()
                .enumerate()
                .fold(MatrixSymbol::zero(1), |acc, (l, gl)| &acc + &gl.scale(a[(l, i)].conj()))
        })
        .collect();
    (xs, ys)
}

/// Objective at a given `(A, R)` via the Poisson extension.
pub fn objective_at(f: &[MatrixSymbol], g: &[MatrixSymbol], a: &CMat, perm: &[usize], z: DiskPoint) -> f64 {
    let (xs, ys) = symbols_at(f, g, a, perm);
    kernel_norm_sum(&xs, z) + kernel_norm_sum(&ys, z)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wbar() -> MatrixSymbol {
        MatrixSymbol::scalar([(-1, C64::new(1.0, 0.0))])
    }

    #[test]
    fn scalar_wbar_at_origin_is_one() {
        let r = xi2(&[wbar()], &[wbar()], DiskPoint::origin(), &Xi2Options::default()).unwrap();
        assert!((r.value - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn analytic_f_gives_zero() {
        let f = vec![MatrixSymbol::scalar([(2, C64::new(1.0, 0.0))])];
        let r = xi2(&f, &[wbar()], DiskPoint::new(C64::new(0.3, 0.2)).unwrap(), &Xi2Options::default()).unwrap();
        assert!(r.value <= 1e-12);
        assert_eq!(r.cert.perm, vec![0]);
    }

    #[test]
    fn cancellation_instance_vanishes() {
        let f = vec![wbar(), wbar()];
        let g = vec![wbar(), -&wbar()];
        for z in [C64::new(0.0, 0.0), C64::new(0.5, -0.3), C64::new(-0.9, 0.1)] {
            let r = xi2(&f, &g, DiskPoint::new(z).unwrap(), &Xi2Options::default()).unwrap();
            assert!(r.value <= 1e-6, "{z}: {}", r.value);
            assert!(r.cert.in_unit_ball(1e-12) && r.cert.is_permutation());
        }
    }

    #[test]
    fn large_n_needs_budget() {
        let f = vec![wbar(); 9];
        let err = xi2(&f, &f, DiskPoint::origin(), &Xi2Options::default()).unwrap_err();
        assert!(matches!(err, Error::TooManyPermutations { n: 9 }));
    }
}
