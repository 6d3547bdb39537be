//! Certificates `(A, R)` for vanishing sums of rank-one operators
//! `Σ_i f_{ki} ⊗ g_i = 0`: `A` in the entrywise unit ball, `R` a permutation,
//! `(R − A) f_k = 0` and `A* g = 0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, CVec, C64};

/// Default relative tolerance for premise and residual checks.
pub const PROP4_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub a: CMat,
    /// `R` as an index map: `(R v)_i = v_{perm[i]}`.
    pub perm: Vec<usize>,
    pub residual_f: Vec<f64>,
    pub residual_g: f64,
}

/// Which construction produced a certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    /// Elimination on the largest `g_j`, one index at a time.
    Inductive,
    /// Orthogonal projection onto the span of the `f` data.
    Projection,
}

impl Certificate {
    /// Identity permutation and the given `A`, residuals computed from data.
    pub fn new(a: CMat, perm: Vec<usize>, f_list: &[Vec<CVec>], g: &[CVec]) -> Self {
        let mut cert = Self { a, perm, residual_f: Vec::new(), residual_g: 0.0 };
        let (rf, rg) = cert.residuals(f_list, g);
        cert.residual_f = rf;
        cert.residual_g = rg;
        cert
    }

    pub fn n(&self) -> usize {
        self.perm.len()
    }

    pub fn r_matrix(&self) -> CMat {
        let n = self.n();
        let mut r = linalg::zeros(n, n);
        for (i, &p) in self.perm.iter().enumerate() {
            r[(i, p)] = C64::new(1.0, 0.0);
        }
        r
    }

    /// `A` has every entry of modulus at most `1 + slack`.
    pub fn in_unit_ball(&self, slack: f64) -> bool {
        self.a.iter().all(|v| v.norm() <= 1.0 + slack)
    }

    pub fn is_permutation(&self) -> bool {
        let mut seen = vec![false; self.n()];
        self.perm.iter().all(|&p| p < seen.len() && !std::mem::replace(&mut seen[p], true))
    }

    /// `(‖(R − A) f_k‖)_k` and `‖A* g‖`, recomputed from scratch.
    pub fn residuals(&self, f_list: &[Vec<CVec>], g: &[CVec]) -> (Vec<f64>, f64) {
        let rf = f_list.iter().map(|fk| norm_of(&self.apply_r_minus_a(fk))).collect();
        (rf, norm_of(&self.apply_a_adjoint(g)))
    }

    /// `((R − A) v)_i = v_{perm[i]} − Σ_l A_il v_l` for a vector of elements.
    pub fn apply_r_minus_a(&self, v: &[CVec]) -> Vec<CVec> {
        let len = max_len(v);
        (0..self.n())
            .map(|i| {
                let mut out = padded(&v[self.perm[i]], len);
                for (l, vl) in v.iter().enumerate() {
                    out -= padded(vl, len) * self.a[(i, l)];
                }
                out
            })
            .collect()
    }

    /// `(A* v)_i = Σ_l conj(A_li) v_l`.
    pub fn apply_a_adjoint(&self, v: &[CVec]) -> Vec<CVec> {
        let len = max_len(v);
        (0..self.n())
            .map(|i| {
                let mut out = CVec::zeros(len);
                for (l, vl) in v.iter().enumerate() {
                    out += padded(vl, len) * self.a[(l, i)].conj();
                }
                out
            })
            .collect()
    }
}

fn max_len(v: &[CVec]) -> usize {
    v.iter().map(|x| x.len()).max().unwrap_or(0)
}

fn padded(v: &CVec, len: usize) -> CVec {
    let mut out = CVec::zeros(len);
    out.rows_mut(0, v.len()).copy_from(v);
    out
}

fn norm_of(v: &[CVec]) -> f64 {
    v.iter().map(|x| x.norm_squared()).sum::<f64>().sqrt()
}

/// Largest `‖Σ_i f_ki g_i*‖_F` over `k`, with its index.
pub fn rank_one_sum_norms(f_list: &[Vec<CVec>], g: &[CVec]) -> Vec<f64> {
    let len = f_list.iter().map(|fk| max_len(fk)).chain([max_len(g)]).max().unwrap_or(0);
    f_list
        .iter()
        .map(|fk| {
            let mut s = linalg::zeros(len, len);
            for (fi, gi) in fk.iter().zip(g) {
                s += padded(fi, len) * padded(gi, len).adjoint();
            }
            s.norm()
        })
        .collect()
}

fn validate(f_list: &[Vec<CVec>], g: &[CVec]) -> Result<usize> {
    let n = g.len();
    if n == 0 {
        return Err(Error::InvalidArgument("empty g".into()));
    }
    for fk in f_list {
        if fk.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: fk.len() });
        }
    }
    Ok(n)
}

/// `(scale of f, scale of g)` as root-sum-of-squares norms.
fn scales(f_list: &[Vec<CVec>], g: &[CVec]) -> (f64, f64) {
    let fs = f_list.iter().map(|fk| norm_of(fk).powi(2)).sum::<f64>().sqrt();
    (fs, norm_of(g))
}

/// Finds `(A, R)` with `(R − A) f_k = 0` and `A* g = 0`, given that every
/// `Σ_i f_ki ⊗ g_i` vanishes.
pub fn prop4_solve(f_list: &[Vec<CVec>], g: &[CVec]) -> Result<Certificate> {
    prop4_solve_with_route(f_list, g, PROP4_TOL).map(|(c, _)| c)
}

/// As [`prop4_solve`], also reporting which construction succeeded. The
/// inductive elimination runs first; the projection handles inputs where
/// the elimination row for `j` does not annihilate `g`.
pub fn prop4_solve_with_route(f_list: &[Vec<CVec>], g: &[CVec], tol: f64) -> Result<(Certificate, Route)> {
    let n = validate(f_list, g)?;
    let len = f_list.iter().map(|fk| max_len(fk)).chain([max_len(g)]).max().unwrap_or(0);
    let f_list: Vec<Vec<CVec>> = f_list.iter().map(|fk| fk.iter().map(|v| padded(v, len)).collect()).collect();
    let g: Vec<CVec> = g.iter().map(|v| padded(v, len)).collect();
    let (f_list, g) = (f_list.as_slice(), g.as_slice());
    let (fs, gs) = scales(f_list, g);
    let premise_tol = tol * fs.max(1.0) * gs.max(1.0);
    for (k, norm) in rank_one_sum_norms(f_list, g).into_iter().enumerate() {
        if norm > premise_tol {
            return Err(Error::PremiseViolated { k, norm });
        }
    }
    let identity: Vec<usize> = (0..n).collect();
    let accept = |c: &Certificate| {
        c.residual_f.iter().all(|&r| r <= tol * fs.max(1.0)) && c.residual_g <= tol * gs.max(1.0) && c.in_unit_ball(1e-12)
    };

    let cert = Certificate::new(inductive(g, tol), identity.clone(), f_list, g);
    if accept(&cert) {
        return Ok((cert, Route::Inductive));
    }
    let cert = Certificate::new(projection(f_list, g), identity, f_list, g);
    if accept(&cert) {
        return Ok((cert, Route::Projection));
    }
    Err(Error::Inconsistent(format!(
        "no certificate within tolerance (residual_f {:?}, residual_g {:e})",
        cert.residual_f, cert.residual_g
    )))
}

/// Elimination on the largest remaining `g_j` (ties to the smallest index).
///
/// `Σ_i f_ki ⊗ g_i = 0` applied to `g_j` gives `f_kj = −Σ_{i≠j} b_i f_ki` with
/// `b_i = ⟨g_j, g_i⟩/⟨g_j, g_j⟩`, `|b_i| ≤ 1`; the sum then reduces to
/// `Σ_{i≠j} f_ki ⊗ (g_i − b̄_i g_j)` on the remaining indices. Once every
/// remaining `g` vanishes the rest of `A` is the identity.
fn inductive(g: &[CVec], tol: f64) -> CMat {
    let n = g.len();
    let mut a = linalg::zeros(n, n);
    let mut rest: Vec<CVec> = g.to_vec();
    let mut active: Vec<usize> = (0..n).collect();
    let zero = tol * rest.iter().map(|v| v.norm()).fold(1.0, f64::max);
    while !active.is_empty() {
        let j = active
            .iter()
            .copied()
            .fold(None, |best: Option<usize>, i| match best {
                Some(b) if rest[b].norm() >= rest[i].norm() => Some(b),
                _ => Some(i),
            })
            .expect("nonempty");
        let gj = rest[j].clone();
        let gj_sq = gj.norm_squared();
        if gj_sq.sqrt() <= zero {
            for &i in &active {
                a[(i, i)] = C64::new(1.0, 0.0);
            }
            break;
        }
        active.retain(|&i| i != j);
        for &i in &active {
            let b = rest[i].dotc(&gj) / gj_sq;
            a[(j, i)] = -b;
            rest[i] -= &gj * b.conj();
        }
    }
    a
}

/// Orthogonal projection onto the nonnegative eigenspace of
/// `ΦΦ*/max(1, ‖Φ‖²) − ΨΨ*/max(1, ‖Ψ‖²)`, where the columns of `Φ` (resp. `Ψ`) are the
/// coordinate vectors `(f_k1[s], …, f_kn[s])` (resp. of `g`). The premise makes
/// the two spans orthogonal, so the projection fixes every `f_k` and kills
/// every `g`; its entries are bounded by its diagonal, hence by one.
fn projection(f_list: &[Vec<CVec>], g: &[CVec]) -> CMat {
    let n = g.len();
    let gram = |vectors: &[&[CVec]]| -> CMat {
        let mut out = linalg::zeros(n, n);
        for v in vectors {
            let len = max_len(v);
            let phi = CMat::from_fn(n, len, |i, s| if s < v[i].len() { v[i][s] } else { C64::new(0.0, 0.0) });
            out += &phi * phi.adjoint();
        }
        out
    };
    let f_refs: Vec<&[CVec]> = f_list.iter().map(|fk| fk.as_slice()).collect();
    let gf = gram(&f_refs);
    let gg = gram(&[g]);
    // Below unit scale, roundoff-sized data must not be blown up to compete.
    let normalize = |m: CMat| {
        let s = linalg::spectral_norm(&m).max(1.0);
        m.unscale(s)
    };
    let (values, vectors) = linalg::hermitian_eigen(&(normalize(gf) - normalize(gg)));
    let mut p = linalg::zeros(n, n);
    for (c, &lambda) in values.iter().enumerate() {
        if lambda >= 0.0 {
            let u = vectors.column(c);
            p += u * u.adjoint();
        }
    }
    p.map(|v| if v.norm() > 1.0 { v.unscale(v.norm()) } else { v })
}
