//! Matrix-valued trigonometric polynomials `F(w) = Σ A_k w^k` on the unit
//! circle, together with their harmonic (Poisson) extensions into the disk.

use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, C64};

/// Coefficients whose largest entry falls below this are dropped.
pub const CANONICAL_EPS: f64 = 1e-15;

/// A point of the open unit disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskPoint(C64);

impl DiskPoint {
    pub fn new(z: C64) -> Result<Self> {
        if z.re.is_finite() && z.im.is_finite() && z.norm() < 1.0 {
            Ok(Self(z))
        } else {
            Err(Error::OutsideDisk { re: z.re, im: z.im })
        }
    }

    pub fn from_polar(r: f64, theta: f64) -> Result<Self> {
        Self::new(C64::from_polar(r, theta))
    }

    pub fn origin() -> Self {
        Self(C64::new(0.0, 0.0))
    }

    pub fn z(&self) -> C64 {
        self.0
    }

    pub fn modulus(&self) -> f64 {
        self.0.norm()
    }

    /// `w^k` extended harmonically: `z^k` for `k ≥ 0`, `z̄^{|k|}` otherwise.
    pub fn monomial(&self, k: i64) -> C64 {
        if k >= 0 {
            self.0.powu(k as u32)
        } else {
            self.0.conj().powu(k.unsigned_abs() as u32)
        }
    }
}

/// `F = Σ_k A_k w^k` with finitely many nonzero `n × n` coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixSymbol {
    n: usize,
    coeffs: BTreeMap<i64, CMat>,
}

/// `F = F₊ + F₋`; constants are kept in the analytic part.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitSymbol {
    pub plus: MatrixSymbol,
    pub minus: MatrixSymbol,
}

impl MatrixSymbol {
    pub fn zero(n: usize) -> Self {
        assert!(n > 0, "block size must be positive");
        Self { n, coeffs: BTreeMap::new() }
    }

    /// Builds a symbol from `(k, A_k)` pairs; repeated frequencies are summed.
    pub fn from_coeffs<I>(n: usize, coeffs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, CMat)>,
    {
        let mut out = Self::zero(n);
        for (k, a) in coeffs {
            if a.nrows() != n || a.ncols() != n {
                return Err(Error::DimensionMismatch { expected: n, found: a.nrows().max(a.ncols()) });
            }
            out.accumulate(k, &a);
        }
        out.canonicalize();
        Ok(out)
    }

    /// Scalar (`1 × 1`) symbol from `(k, c_k)` pairs.
    pub fn scalar<I>(coeffs: I) -> Self
    where
        I: IntoIterator<Item = (i64, C64)>,
    {
        Self::from_coeffs(1, coeffs.into_iter().map(|(k, c)| (k, CMat::from_element(1, 1, c))))
            .expect("1x1 blocks always match")
    }

    /// `a · w^k`.
    pub fn monomial(k: i64, a: CMat) -> Self {
        let n = a.nrows();
        Self::from_coeffs(n, [(k, a)]).expect("square coefficient")
    }

    pub fn constant(a: CMat) -> Self {
        Self::monomial(0, a)
    }

    /// Assembles a symbol entrywise from scalar symbols, `entries[i][j]` at `(i, j)`.
    pub fn from_entries(entries: &[Vec<MatrixSymbol>]) -> Result<Self> {
        let n = entries.len();
        let mut out = Self::zero(n.max(1));
        for (i, row) in entries.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: row.len() });
            }
            for (j, s) in row.iter().enumerate() {
                if s.n != 1 {
                    return Err(Error::DimensionMismatch { expected: 1, found: s.n });
                }
                for (&k, a) in &s.coeffs {
                    let mut m = linalg::zeros(n, n);
                    m[(i, j)] = a[(0, 0)];
                    out.accumulate(k, &m);
                }
            }
        }
        out.canonicalize();
        Ok(out)
    }

    /// Block matrix `[[tl, tr], [bl, br]]` of equally sized symbols.
    pub fn block2(tl: &Self, tr: &Self, bl: &Self, br: &Self) -> Result<Self> {
        let n = tl.n;
        for s in [tr, bl, br] {
            s.expect_size(n)?;
        }
        let mut out = Self::zero(2 * n);
        for (part, (r, c)) in [(tl, (0, 0)), (tr, (0, n)), (bl, (n, 0)), (br, (n, n))] {
            for (&k, a) in &part.coeffs {
                let mut m = linalg::zeros(2 * n, 2 * n);
                linalg::set_block(&mut m, r, c, a);
                out.accumulate(k, &m);
            }
        }
        out.canonicalize();
        Ok(out)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeff(&self, k: i64) -> Option<&CMat> {
        self.coeffs.get(&k)
    }

    /// Coefficient at `k`, or the zero matrix.
    pub fn coeff_or_zero(&self, k: i64) -> CMat {
        self.coeffs.get(&k).cloned().unwrap_or_else(|| linalg::zeros(self.n, self.n))
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (i64, &CMat)> {
        self.coeffs.iter().map(|(&k, a)| (k, a))
    }

    pub fn deg_plus(&self) -> usize {
        self.coeffs.keys().next_back().map_or(0, |&k| k.max(0) as usize)
    }

    pub fn deg_minus(&self) -> usize {
        self.coeffs.keys().next().map_or(0, |&k| (-k).max(0) as usize)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// No negative frequencies.
    pub fn is_analytic(&self) -> bool {
        self.deg_minus() == 0
    }

    /// Largest entry modulus over all coefficients.
    pub fn max_coeff_abs(&self) -> f64 {
        self.coeffs.values().map(linalg::max_abs).fold(0.0, f64::max)
    }

    /// Largest coefficient spectral norm.
    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs.values().map(linalg::spectral_norm).fold(0.0, f64::max)
    }

    /// The scalar symbol in position `(i, j)`.
    pub fn entry(&self, i: usize, j: usize) -> Self {
        Self::scalar(self.coeffs.iter().map(|(&k, a)| (k, a[(i, j)])))
    }

    /// Column `j` as a vector of scalar symbols.
    pub fn column(&self, j: usize) -> Vec<Self> {
        (0..self.n).map(|i| self.entry(i, j)).collect()
    }

    pub fn scale(&self, c: C64) -> Self {
        let mut out = self.clone();
        for a in out.coeffs.values_mut() {
            *a *= c;
        }
        out.canonicalize();
        out
    }

    /// `F − C` for a constant matrix `C`.
    pub fn minus_constant(&self, c: &CMat) -> Self {
        let mut out = self.clone();
        out.accumulate(0, &(-c));
        out.canonicalize();
        out
    }

    /// Pointwise value `Σ A_k e^{ikθ}`.
    pub fn eval(&self, theta: f64) -> CMat {
        let mut out = linalg::zeros(self.n, self.n);
        for (&k, a) in &self.coeffs {
            out += a * C64::from_polar(1.0, k as f64 * theta);
        }
        out
    }

    /// `F*` with coefficients `(A_{−k})*`.
    pub fn adjoint(&self) -> Self {
        Self {
            n: self.n,
            coeffs: self.coeffs.iter().map(|(&k, a)| (-k, a.adjoint())).collect(),
        }
    }

    /// Pointwise product `F·G` (Cauchy convolution of coefficients).
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.expect_size(other.n)?;
        let mut out = Self::zero(self.n);
        for (&j, a) in &self.coeffs {
            for (&k, b) in &other.coeffs {
                out.accumulate(j + k, &(a * b));
            }
        }
        out.canonicalize();
        Ok(out)
    }

    pub fn split(&self) -> SplitSymbol {
        let (minus, plus): (BTreeMap<_, _>, BTreeMap<_, _>) =
            self.coeffs.iter().map(|(&k, a)| (k, a.clone())).partition(|(k, _)| *k < 0);
        SplitSymbol {
            plus: Self { n: self.n, coeffs: plus },
            minus: Self { n: self.n, coeffs: minus },
        }
    }

    /// Harmonic extension `Σ_{k≥0} A_k z^k + Σ_{k<0} A_k z̄^{|k|}`.
    pub fn poisson_ext(&self, z: DiskPoint) -> CMat {
        let mut out = linalg::zeros(self.n, self.n);
        for (&k, a) in &self.coeffs {
            out += a * z.monomial(k);
        }
        out
    }

    /// `|M − M(z)|²(z)`: the harmonic extension of `(M − M(z))(M − M(z))*`
    /// evaluated at `z`. Hermitian positive semidefinite.
    pub fn mod_sq_ext(&self, z: DiskPoint) -> CMat {
        let d = self.minus_constant(&self.poisson_ext(z));
        let prod = d.multiply(&d.adjoint()).expect("same block size");
        linalg::hermitian_part(&prod.poisson_ext(z))
    }

    /// Harmonic extension of `(M1 − M1(z))(M2 − M2(z))*` at `z`.
    pub fn cross_ext(&self, other: &Self, z: DiskPoint) -> Result<CMat> {
        self.expect_size(other.n)?;
        let d1 = self.minus_constant(&self.poisson_ext(z));
        let d2 = other.minus_constant(&other.poisson_ext(z));
        Ok(d1.multiply(&d2.adjoint())?.poisson_ext(z))
    }

    pub(crate) fn expect_size(&self, n: usize) -> Result<()> {
        if self.n == n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.n, found: n })
        }
    }

    fn accumulate(&mut self, k: i64, a: &CMat) {
        match self.coeffs.get_mut(&k) {
            Some(existing) => *existing += a,
            None => {
                self.coeffs.insert(k, a.clone());
            }
        }
    }

    fn canonicalize(&mut self) {
        self.coeffs.retain(|_, a| linalg::max_abs(a) >= CANONICAL_EPS);
    }
}

impl SplitSymbol {
    pub fn recombine(&self) -> MatrixSymbol {
        &self.plus + &self.minus
    }
}

impl Add for &MatrixSymbol {
    type Output = MatrixSymbol;

    fn add(self, rhs: Self) -> MatrixSymbol {
        assert_eq!(self.n, rhs.n, "block sizes differ");
        let mut out = self.clone();
        for (&k, a) in &rhs.coeffs {
            out.accumulate(k, a);
        }
        out.canonicalize();
        out
    }
}

impl Sub for &MatrixSymbol {
    type Output = MatrixSymbol;

    fn sub(self, rhs: Self) -> MatrixSymbol {
        self + &(-rhs)
    }
}

impl Neg for &MatrixSymbol {
    type Output = MatrixSymbol;

    fn neg(self) -> MatrixSymbol {
        self.scale(C64::new(-1.0, 0.0))
    }
}
