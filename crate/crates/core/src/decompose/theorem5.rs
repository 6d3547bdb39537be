//! Zero finite sums of Hankel products `Σ_i H_{f_ki}* H_{g_i}` and the
//! symbol-level certificate that explains them.

use crate::decompose::certificate::{prop4_solve_with_route, Certificate, Route, PROP4_TOL};
use crate::error::{Error, Result};
use crate::hardy::{self, HankelOnKernel};
use crate::linalg::{self, CMat, CVec};
use crate::symbol::{DiskPoint, MatrixSymbol};

/// Entries at most this large count as vanishing.
pub const MEMBERSHIP_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct Theorem5Outcome {
    pub certificate: Certificate,
    pub route: Route,
    /// Every negative-frequency coefficient of `(R − A) f_k` and `A* g` vanishes.
    pub verified: bool,
    pub membership_residual: f64,
}

fn check_scalar(v: &[MatrixSymbol]) -> Result<()> {
    match v.iter().find(|s| s.n() != 1) {
        Some(s) => Err(Error::DimensionMismatch { expected: 1, found: s.n() }),
        None => Ok(()),
    }
}

/// `Σ_i H_{f_i}* H_{g_i}` as one finite matrix.
pub fn hankel_sum(f: &[MatrixSymbol], g: &[MatrixSymbol]) -> Result<CMat> {
    if f.len() != g.len() {
        return Err(Error::DimensionMismatch { expected: g.len(), found: f.len() });
    }
    check_scalar(f)?;
    check_scalar(g)?;
    let parts = f
        .iter()
        .zip(g)
        .map(|(fi, gi)| hardy::hankel_product(fi, gi))
        .collect::<Result<Vec<_>>>()?;
    let size = parts.iter().map(|p| p.nrows()).max().unwrap_or(0);
    let mut total = linalg::zeros(size, size);
    for p in parts {
        total += linalg::zero_pad(&p, size);
    }
    Ok(total)
}

/// `f_-` as its coefficient vector against `w̄, w̄², …`.
fn anti_analytic_vector(f: &MatrixSymbol) -> CVec {
    HankelOnKernel::new(f, DiskPoint::origin()).coefficients()
}

/// Checks that `Σ_i H_{f_ki}* H_{g_i} = 0` for every `k` and builds `(A, R)`
/// from the anti-analytic parts, then tests `(R − A) f_k, A* g ∈ H∞` directly.
pub fn theorem5_check(f_list: &[Vec<MatrixSymbol>], g: &[MatrixSymbol]) -> Result<Theorem5Outcome> {
    check_scalar(g)?;
    let mut max_abs: f64 = 0.0;
    for fk in f_list {
        max_abs = max_abs.max(linalg::max_abs(&hankel_sum(fk, g)?));
    }
    let scale = f_list
        .iter()
        .flatten()
        .chain(g)
        .map(|s| s.max_coeff_abs())
        .fold(1.0, f64::max);
    if max_abs > MEMBERSHIP_TOL * scale * scale {
        return Err(Error::NotZeroInstance { max_abs });
    }

    let fv: Vec<Vec<CVec>> = f_list.iter().map(|fk| fk.iter().map(anti_analytic_vector).collect()).collect();
    let gv: Vec<CVec> = g.iter().map(anti_analytic_vector).collect();
    let (certificate, route) = prop4_solve_with_route(&fv, &gv, PROP4_TOL)?;

    let membership_residual = membership_residual(&certificate, f_list, g);
    Ok(Theorem5Outcome {
        verified: membership_residual <= MEMBERSHIP_TOL * scale,
        certificate,
        route,
        membership_residual,
    })
}

/// Largest negative-frequency coefficient of `(R − A) f_k` and `A* g`.
pub fn membership_residual(cert: &Certificate, f_list: &[Vec<MatrixSymbol>], g: &[MatrixSymbol]) -> f64 {
    let (xs, ys) = combine(cert, f_list, g);
    xs.iter()
        .flatten()
        .chain(&ys)
        .map(|s| s.split().minus.max_coeff_abs())
        .fold(0.0, f64::max)
}

/// The symbols `x_k = (R − A) f_k` and `y = A* g`.
pub fn combine(
    cert: &Certificate,
    f_list: &[Vec<MatrixSymbol>],
    g: &[MatrixSymbol],
) -> (Vec<Vec<MatrixSymbol>>, Vec<MatrixSymbol>) {
    let n = cert.n();
    let xs = f_list
        .iter()
        .map(|fk| {
            (0..n)
                .map(|i| {
                    let mut x = fk[cert.perm[i]].clone();
                    for (l, fl) in fk.iter().enumerate() {
                        x = &x - &fl.scale(cert.a[(i, l)]);
                    }
                    x
                })
                .collect()
        })
        .collect();
    let ys = (0..n)
        .map(|i| {
            g.iter()
                .enumerate()
                .fold(MatrixSymbol::zero(1), |acc, (l, gl)| &acc + &gl.scale(cert.a[(l, i)].conj()))
        })
        .collect();
    (xs, ys)
}

/// One outcome per column `j` of the matrix case: `f_k` is column `k` of
/// `F*` and `g` is column `j` of `G`, so `Σ_i H_{f_ki}* H_{g_ij}` is block
/// `(k, j)` of the semicommutator.
pub fn semicommutator_certificates(f: &MatrixSymbol, g: &MatrixSymbol) -> Result<Vec<Theorem5Outcome>> {
    f.expect_size(g.n())?;
    let fstar = f.adjoint();
    let f_list: Vec<Vec<MatrixSymbol>> = (0..f.n()).map(|k| fstar.column(k)).collect();
    (0..g.n()).map(|j| theorem5_check(&f_list, &g.column(j))).collect()
}
