//! Finite models of Hardy-space operators with polynomial symbols.
//!
//! `H²(Cⁿ)` is indexed by `e_k = w^k ⊗ Cⁿ`, its complement by `w̄^{j+1} ⊗ Cⁿ`.
//! With these bases the Toeplitz section has blocks `A_{i−j}` and the Hankel
//! operator has blocks `A_{−(j+k+1)}`; both are exact for trigonometric
//! polynomials because the Hankel has finite rank.

use crate::error::Result;
use crate::linalg::{self, CMat, CVec, C64};
use crate::symbol::{DiskPoint, MatrixSymbol};

/// Leading `N × N` block section of `T_F`.
#[derive(Debug, Clone, PartialEq)]
pub struct ToeplitzSection {
    pub order: usize,
    pub n: usize,
    pub data: CMat,
}

/// Exact block Hankel matrix of `H_F` on its nonzero support.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteHankel {
    pub n: usize,
    /// `deg_minus` of the symbol; the matrix is `(d·n) × (d·n)`.
    pub d: usize,
    pub data: CMat,
}

/// First `len` Taylor coefficients of the normalized reproducing kernel
/// `k_z(w) = (1 − |z|²)^{1/2} / (1 − z̄w)`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelVec {
    pub z: DiskPoint,
    pub coeffs: CVec,
}

/// `H_f k_z = (f₋ − f₋(z)) k_z` for a scalar symbol `f`.
///
/// The function is kept as the pair (anti-analytic polynomial, kernel); inner
/// products follow from `⟨u k_z, v k_z⟩ = (u v̄)(z)`. The product is itself a
/// polynomial in `w̄`, so [`HankelOnKernel::coefficients`] is exact.
#[derive(Debug, Clone, PartialEq)]
pub struct HankelOnKernel {
    pub z: DiskPoint,
    /// `f₋ − f₋(z)` as a scalar symbol.
    pub factor: MatrixSymbol,
}

/// `Σ_i u_i ⊗ v_i` acting by `h ↦ Σ ⟨h, v_i⟩ u_i` on coefficient vectors.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RankOneSum {
    pub left: Vec<CVec>,
    pub right: Vec<CVec>,
}

/// `n × n` operator matrix whose entries are [`RankOneSum`]s, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockRankOne {
    pub n: usize,
    pub blocks: Vec<RankOneSum>,
}

impl ToeplitzSection {
    pub fn new(f: &MatrixSymbol, order: usize) -> Self {
        assert!(order >= 1, "section order must be positive");
        let n = f.n();
        let mut data = linalg::zeros(order * n, order * n);
        for i in 0..order {
            for j in 0..order {
                if let Some(a) = f.coeff(i as i64 - j as i64) {
                    linalg::set_block(&mut data, i * n, j * n, a);
                }
            }
        }
        Self { order, n, data }
    }

    pub fn block(&self, i: usize, j: usize) -> CMat {
        self.data.view((i * self.n, j * self.n), (self.n, self.n)).into_owned()
    }
}

pub fn toeplitz_section(f: &MatrixSymbol, order: usize) -> ToeplitzSection {
    ToeplitzSection::new(f, order)
}

impl FiniteHankel {
    pub fn new(f: &MatrixSymbol) -> Self {
        let n = f.n();
        let d = f.deg_minus();
        let mut data = linalg::zeros(d * n, d * n);
        for j in 0..d {
            for k in 0..d - j {
                if let Some(a) = f.coeff(-((j + k + 1) as i64)) {
                    linalg::set_block(&mut data, j * n, k * n, a);
                }
            }
        }
        Self { n, d, data }
    }

    pub fn is_zero(&self) -> bool {
        self.d == 0
    }

    /// The matrix zero-padded to `size` block rows and columns.
    pub fn padded(&self, size: usize) -> CMat {
        assert!(size >= self.d);
        linalg::zero_pad(&self.data, size * self.n)
    }
}

pub fn hankel_matrix(f: &MatrixSymbol) -> FiniteHankel {
    FiniteHankel::new(f)
}

/// Exact matrix of `T_{FG} − T_F T_G = H_{F*}* H_G` on `span{e_0..e_{D−1}} ⊗ Cⁿ`,
/// `D = max(deg_plus F, deg_minus G)`. Zero outside that span.
pub fn semicommutator(f: &MatrixSymbol, g: &MatrixSymbol) -> Result<CMat> {
    f.expect_size(g.n())?;
    hankel_product(&f.adjoint(), g)
}

/// Exact `H_F* H_G` on its finite support.
pub fn hankel_product(f: &MatrixSymbol, g: &MatrixSymbol) -> Result<CMat> {
    f.expect_size(g.n())?;
    let hf = FiniteHankel::new(f);
    let hg = FiniteHankel::new(g);
    let size = hf.d.max(hg.d);
    Ok(hf.padded(size).adjoint() * hg.padded(size))
}

impl KernelVec {
    pub fn new(z: DiskPoint, len: usize) -> Self {
        let scale = (1.0 - z.z().norm_sqr()).sqrt();
        let zbar = z.z().conj();
        let mut coeffs = CVec::zeros(len);
        let mut p = C64::new(scale, 0.0);
        for c in coeffs.iter_mut() {
            *c = p;
            p *= zbar;
        }
        Self { z, coeffs }
    }

    pub fn norm_sq(&self) -> f64 {
        self.coeffs.norm_squared()
    }
}

pub fn kernel_vec(z: DiskPoint, len: usize) -> KernelVec {
    KernelVec::new(z, len)
}

impl HankelOnKernel {
    /// `f` must be scalar.
    pub fn new(f: &MatrixSymbol, z: DiskPoint) -> Self {
        assert_eq!(f.n(), 1, "hankel_on_kernel takes scalar symbols");
        let minus = f.split().minus;
        let factor = minus.minus_constant(&minus.poisson_ext(z));
        Self { z, factor }
    }

    pub fn is_zero(&self) -> bool {
        self.factor.is_zero()
    }

    /// `⟨self, other⟩ = (u v̄)(z)`.
    pub fn inner(&self, other: &Self) -> C64 {
        let prod = self
            .factor
            .multiply(&other.factor.adjoint())
            .expect("scalar symbols");
        prod.poisson_ext(self.z)[(0, 0)]
    }

    pub fn norm_sq(&self) -> f64 {
        self.inner(self).re.max(0.0)
    }

    /// Coefficients against `w̄, w̄², …` (entry `p − 1` holds `w^{−p}`).
    ///
    /// `(w̄^m − z̄^m) k_z = c Σ_{i<m} z̄^i w^{i−m}` with `c = (1−|z|²)^{1/2}`, so the
    /// coefficient of `w^{−p}` is `c Σ_{m≥p} a_{−m} z̄^{m−p}`.
    pub fn coefficients(&self) -> CVec {
        let d = self.factor.deg_minus();
        let z = self.z.z();
        let scale = (1.0 - z.norm_sqr()).sqrt();
        let zbar = z.conj();
        // Horner from the top frequency down.
        let mut out = CVec::zeros(d);
        let mut acc = C64::new(0.0, 0.0);
        for p in (1..=d).rev() {
            let a = self.factor.coeff(-(p as i64)).map_or(C64::new(0.0, 0.0), |m| m[(0, 0)]);
            acc = acc * zbar + a;
            out[p - 1] = acc * scale;
        }
        out
    }
}

pub fn hankel_on_kernel(f: &MatrixSymbol, z: DiskPoint) -> HankelOnKernel {
    HankelOnKernel::new(f, z)
}

fn pad(v: &CVec, len: usize) -> CVec {
    let mut out = CVec::zeros(len.max(v.len()));
    out.rows_mut(0, v.len()).copy_from(v);
    out
}

impl RankOneSum {
    pub fn push(&mut self, u: CVec, v: CVec) {
        self.left.push(u);
        self.right.push(v);
    }

    pub fn len(&self) -> usize {
        self.left.len()
    }

    pub fn is_empty(&self) -> bool {
        self.left.is_empty()
    }

    fn dim(&self) -> usize {
        self.left.iter().chain(&self.right).map(|v| v.len()).max().unwrap_or(0)
    }

    /// `h ↦ Σ ⟨h, v_i⟩ u_i`; `h` is zero-extended as needed.
    pub fn apply(&self, h: &CVec) -> CVec {
        let len = self.dim().max(h.len());
        let h = pad(h, len);
        let mut out = CVec::zeros(len);
        for (u, v) in self.left.iter().zip(&self.right) {
            let coef = pad(v, len).dotc(&h);
            out += pad(u, len) * coef;
        }
        out
    }

    /// Dense `Σ u_i v_i*` on the first `len` coordinates.
    pub fn to_dense(&self, len: usize) -> CMat {
        let mut out = linalg::zeros(len, len);
        for (u, v) in self.left.iter().zip(&self.right) {
            let u = pad(u, len).rows(0, len).into_owned();
            let v = pad(v, len).rows(0, len).into_owned();
            out += &u * v.adjoint();
        }
        out
    }

    /// Hilbert–Schmidt norm squared, `Σ_{i,i'} ⟨u_{i'}, u_i⟩⟨v_i, v_{i'}⟩`.
    pub fn hs_norm_sq(&self) -> f64 {
        let len = self.dim();
        let us: Vec<CVec> = self.left.iter().map(|u| pad(u, len)).collect();
        let vs: Vec<CVec> = self.right.iter().map(|v| pad(v, len)).collect();
        let mut total = C64::new(0.0, 0.0);
        for i in 0..us.len() {
            for ip in 0..us.len() {
                total += us[i].dotc(&us[ip]) * vs[ip].dotc(&vs[i]);
            }
        }
        total.re.max(0.0)
    }
}

impl BlockRankOne {
    pub fn block(&self, i: usize, k: usize) -> &RankOneSum {
        &self.blocks[i * self.n + k]
    }

    pub fn hs_norm_sq(&self) -> f64 {
        self.blocks.iter().map(RankOneSum::hs_norm_sq).sum()
    }

    pub fn dim(&self) -> usize {
        self.blocks.iter().map(RankOneSum::dim).max().unwrap_or(0)
    }

    /// Dense operator on `Cⁿ ⊗ C^len`, block `(i, k)` at rows `i·len`.
    pub fn to_dense(&self, len: usize) -> CMat {
        let mut out = linalg::zeros(self.n * len, self.n * len);
        for i in 0..self.n {
            for k in 0..self.n {
                linalg::set_block(&mut out, i * len, k * len, &self.block(i, k).to_dense(len));
            }
        }
        out
    }
}

/// `(Σ_j H_{f_ji} k_z ⊗ H_{g_jk} k_z)_{i,k}`, the finite-rank defect
/// `H_F* H_G − T_{Φ_z}* H_F* H_G T_{Φ_z}` up to anti-unitary equivalence.
pub fn rank_one_defect(f: &MatrixSymbol, g: &MatrixSymbol, z: DiskPoint) -> Result<BlockRankOne> {
    f.expect_size(g.n())?;
    let n = f.n();
    let coefficients = |s: &MatrixSymbol| -> Vec<Vec<CVec>> {
        (0..n)
            .map(|j| (0..n).map(|i| HankelOnKernel::new(&s.entry(j, i), z).coefficients()).collect())
            .collect()
    };
    let hf = coefficients(f);
    let hg = coefficients(g);
    let mut blocks = Vec::with_capacity(n * n);
    for i in 0..n {
        for k in 0..n {
            let mut sum = RankOneSum::default();
            for (fj, gj) in hf.iter().zip(&hg) {
                let (u, v) = (&fj[i], &gj[k]);
                if !u.is_empty() && !v.is_empty() {
                    sum.push(u.clone(), v.clone());
                }
            }
            blocks.push(sum);
        }
    }
    Ok(BlockRankOne { n, blocks })
}

/// Taylor polynomial of `φ_z(w) = (z − w)/(1 − z̄w)` through `w^len`:
/// `z − (1 − |z|²) Σ_{k=1}^{len} z̄^{k−1} w^k`.
pub fn mobius_coeffs(z: DiskPoint, len: usize) -> MatrixSymbol {
    let zc = z.z();
    let scale = 1.0 - zc.norm_sqr();
    let mut coeffs = vec![(0_i64, zc)];
    let mut p = C64::new(scale, 0.0);
    for k in 1..=len {
        coeffs.push((k as i64, -p));
        p *= zc.conj();
    }
    MatrixSymbol::scalar(coeffs)
}

/// Uniform bound on the circle for the omitted tail of [`mobius_coeffs`].
pub fn mobius_tail_bound(z: DiskPoint, len: usize) -> f64 {
    let r = z.modulus();
    (1.0 - r * r) * r.powi(len as i32) / (1.0 - r)
}
