//! `min Σ_t ‖K_t x + b_t‖₂` over a product of intervals or disks.
//!
//! Projected subgradient gets close cheaply; a primal–dual (Chambolle–Pock)
//! phase then drives the duality gap down so the reported value comes with a
//! certified lower bound.

use nalgebra::{DMatrix, DVector};

/// Feasible set for the parameter vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    /// Every coordinate in `[−1, 1]`.
    Box,
    /// Consecutive pairs `(x_{2j}, x_{2j+1})` in the closed unit disk.
    Disk,
}

impl Domain {
    pub fn project(self, x: &mut DVector<f64>) {
        match self {
            Domain::Box => x.apply(|v| *v = v.clamp(-1.0, 1.0)),
            Domain::Disk => {
                for j in 0..x.len() / 2 {
                    let r = x[2 * j].hypot(x[2 * j + 1]);
                    if r > 1.0 {
                        x[2 * j] /= r;
                        x[2 * j + 1] /= r;
                    }
                }
            }
        }
    }

    /// `min_{x ∈ domain} ⟨c, x⟩`.
    fn support_min(self, c: &DVector<f64>) -> f64 {
        match self {
            Domain::Box => -c.iter().map(|v| v.abs()).sum::<f64>(),
            Domain::Disk => -(0..c.len() / 2).map(|j| c[2 * j].hypot(c[2 * j + 1])).sum::<f64>(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct AffineNorm {
    pub k: DMatrix<f64>,
    pub b: DVector<f64>,
}

impl AffineNorm {
    pub fn eval(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.k * x + &self.b
    }
}

#[derive(Debug, Clone)]
pub struct SumOfNorms {
    pub dim: usize,
    pub domain: Domain,
    pub terms: Vec<AffineNorm>,
}

#[derive(Debug, Clone, Copy)]
pub struct SolverOptions {
    pub subgradient_iters: usize,
    pub max_iters: usize,
    /// Stop once `value − lower_bound ≤ gap_tol · max(1, value)`.
    pub gap_tol: f64,
    pub check_every: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { subgradient_iters: 500, max_iters: 100_000, gap_tol: 1e-9, check_every: 20 }
    }
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub x: DVector<f64>,
    pub value: f64,
    pub lower_bound: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl SumOfNorms {
    pub fn value(&self, x: &DVector<f64>) -> f64 {
        self.terms.iter().map(|t| t.eval(x).norm()).sum()
    }

    /// Zero subgradient for terms at a kink.
    pub fn subgradient(&self, x: &DVector<f64>) -> DVector<f64> {
        let mut g = DVector::zeros(self.dim);
        for t in &self.terms {
            let r = t.eval(x);
            let nr = r.norm();
            if nr > 0.0 {
                g += t.k.tr_mul(&r) / nr;
            }
        }
        g
    }

    /// Dual objective at `y` (each `y_t` must lie in the unit ball); a lower
    /// bound on the optimum.
    pub fn dual_value(&self, y: &[DVector<f64>]) -> f64 {
        let mut c = DVector::zeros(self.dim);
        let mut lin = 0.0;
        for (t, yt) in self.terms.iter().zip(y) {
            c += t.k.tr_mul(yt);
            lin += t.b.dot(yt);
        }
        lin + self.domain.support_min(&c)
    }

    /// Dual point aligned with the residuals at `x`.
    fn aligned_dual(&self, x: &DVector<f64>) -> Vec<DVector<f64>> {
        self.terms
            .iter()
            .map(|t| {
                let r = t.eval(x);
                let nr = r.norm();
                if nr > 0.0 {
                    r / nr
                } else {
                    DVector::zeros(r.len())
                }
            })
            .collect()
    }

    fn operator_norm(&self) -> f64 {
        let rows: usize = self.terms.iter().map(|t| t.k.nrows()).sum();
        let mut stacked = DMatrix::zeros(rows, self.dim);
        let mut r = 0;
        for t in &self.terms {
            stacked.view_mut((r, 0), t.k.shape()).copy_from(&t.k);
            r += t.k.nrows();
        }
        if rows == 0 || self.dim == 0 {
            return 0.0;
        }
        stacked.singular_values().max()
    }
}

fn project_ball(y: &mut DVector<f64>) {
    let n = y.norm();
    if n > 1.0 {
        *y /= n;
    }
}

/// Solves from the best of `starts` (projected onto the domain; the origin is
/// used when none are given). Always returns the best iterate seen.
pub fn convex_subproblem(problem: &SumOfNorms, starts: &[DVector<f64>], opts: &SolverOptions) -> Solution {
    let mut candidates: Vec<DVector<f64>> = starts.to_vec();
    if candidates.is_empty() {
        candidates.push(DVector::zeros(problem.dim));
    }
    let mut best_x = None;
    let mut best = f64::INFINITY;
    for mut x in candidates {
        problem.domain.project(&mut x);
        let v = problem.value(&x);
        if v < best {
            best = v;
            best_x = Some(x);
        }
    }
    let mut best_x = best_x.expect("at least one start");
    let mut lower = problem.dual_value(&problem.aligned_dual(&best_x)).max(0.0);
    let done = |value: f64, lower: f64| value - lower <= opts.gap_tol * value.max(1.0);
    if done(best, lower) {
        return Solution { x: best_x, value: best, lower_bound: lower, iterations: 0, converged: true };
    }

    // Projected subgradient, step 1/√t along the normalized subgradient.
    let mut x = best_x.clone();
    let mut iterations = 0;
    for t in 1..=opts.subgradient_iters {
        iterations = t;
        let g = problem.subgradient(&x);
        let gn = g.norm();
        if gn == 0.0 {
            break;
        }
        x -= g * (1.0 / ((t as f64).sqrt() * gn));
        problem.domain.project(&mut x);
        let v = problem.value(&x);
        if v < best {
            best = v;
            best_x = x.clone();
        }
    }
    lower = lower.max(problem.dual_value(&problem.aligned_dual(&best_x)));
    if done(best, lower) {
        return Solution { x: best_x, value: best, lower_bound: lower, iterations, converged: true };
    }

    let l = problem.operator_norm();
    if l == 0.0 {
        // Constant objective.
        return Solution { x: best_x, value: best, lower_bound: best, iterations, converged: true };
    }
    let (tau, sigma) = (0.99 / l, 0.99 / l);
    let mut x = best_x.clone();
    let mut x_bar = x.clone();
    let mut y = problem.aligned_dual(&x);
    for it in 1..=opts.max_iters {
        iterations += 1;
        for (t, yt) in problem.terms.iter().zip(y.iter_mut()) {
            *yt += t.eval(&x_bar) * sigma;
            project_ball(yt);
        }
        let mut grad = DVector::zeros(problem.dim);
        for (t, yt) in problem.terms.iter().zip(&y) {
            grad += t.k.tr_mul(yt);
        }
        let mut x_new = &x - grad * tau;
        problem.domain.project(&mut x_new);
        x_bar = &x_new * 2.0 - &x;
        x = x_new;

        if it % opts.check_every == 0 {
            let v = problem.value(&x);
            if v < best {
                best = v;
                best_x = x.clone();
            }
            lower = lower
                .max(problem.dual_value(&y))
                .max(problem.dual_value(&problem.aligned_dual(&best_x)));
            if done(best, lower) {
                return Solution { x: best_x, value: best, lower_bound: lower, iterations, converged: true };
            }
        }
    }
    Solution { x: best_x, value: best, lower_bound: lower, iterations, converged: false }
}
