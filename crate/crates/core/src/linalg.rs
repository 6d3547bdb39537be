//! Small dense helpers over `nalgebra` complex matrices.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub fn zeros(rows: usize, cols: usize) -> CMat {
    CMat::zeros(rows, cols)
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, v| acc.max(v.norm()))
}

/// `(M + M*) / 2`.
pub fn hermitian_part(m: &CMat) -> CMat {
    (m + m.adjoint()).scale(0.5)
}

/// Largest singular value.
pub fn spectral_norm(m: &CMat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone()
        .singular_values()
        .iter()
        .fold(0.0_f64, |acc, &s| acc.max(s))
}

pub fn frobenius_sq(m: &CMat) -> f64 {
    m.iter().map(|v| v.norm_sqr()).sum()
}

/// Eigenvalues (ascending) and eigenvectors of the Hermitian part of `m`.
pub fn hermitian_eigen(m: &CMat) -> (Vec<f64>, CMat) {
    let eig = hermitian_part(m).symmetric_eigen();
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMat::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Square root of a Hermitian PSD matrix. Eigenvalues below `-floor` are
/// rejected. Eigenvalues within the eigensolver's backward error
/// (`64·n·ε·‖m‖`) are taken as exact zeros: their square roots would
/// otherwise turn roundoff into `√ε`-sized noise.
pub fn psd_sqrt(m: &CMat, floor: f64) -> Result<CMat> {
    let n = m.nrows();
    if n == 0 {
        return Ok(m.clone());
    }
    let (values, vectors) = hermitian_eigen(m);
    if values[0] < -floor {
        return Err(Error::NotPsd { min_eig: values[0] });
    }
    let top = values[0].abs().max(values[n - 1].abs());
    let noise = 64.0 * n as f64 * f64::EPSILON * top;
    let mut scaled = vectors.clone();
    for (c, &lambda) in values.iter().enumerate() {
        let s = if lambda <= noise { 0.0 } else { lambda.sqrt() };
        for r in 0..n {
            scaled[(r, c)] *= s;
        }
    }
    Ok(hermitian_part(&(scaled * vectors.adjoint())))
}

pub fn min_eigenvalue(m: &CMat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    hermitian_eigen(m).0[0]
}

/// Copy `block` into `target` with its top-left corner at `(row, col)`.
pub fn set_block(target: &mut CMat, row: usize, col: usize, block: &CMat) {
    target
        .view_mut((row, col), (block.nrows(), block.ncols()))
        .copy_from(block);
}

/// Enlarge `m` with zero rows and columns to `size × size`.
pub fn zero_pad(m: &CMat, size: usize) -> CMat {
    let mut out = zeros(size, size);
    set_block(&mut out, 0, 0, m);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_of_complex_hermitian_squares_back() {
        let a = CMat::from_row_slice(
            2,
            2,
            &[C64::new(2.0, 0.0), C64::new(0.5, 0.7), C64::new(0.5, -0.7), C64::new(1.0, 0.0)],
        );
        let s = psd_sqrt(&a, 1e-12).unwrap();
        assert!(max_abs(&(&s * &s - &a)) < 1e-13);
        assert!(max_abs(&(s.adjoint() - &s)) < 1e-15);
    }

    #[test]
    fn sqrt_rejects_indefinite() {
        let a = CMat::from_diagonal(&CVec::from_vec(vec![C64::new(1.0, 0.0), C64::new(-1e-6, 0.0)]));
        assert!(matches!(psd_sqrt(&a, 1e-12), Err(Error::NotPsd { .. })));
    }

    #[test]
    fn sqrt_clamps_roundoff_negatives() {
        let a = CMat::from_diagonal(&CVec::from_vec(vec![C64::new(4.0, 0.0), C64::new(-1e-14, 0.0)]));
        let s = psd_sqrt(&a, 1e-12).unwrap();
        assert!((s[(0, 0)].re - 2.0).abs() < 1e-15);
        assert_eq!(s[(1, 1)].re, 0.0);
    }

    #[test]
    fn spectral_norm_of_rank_one() {
        let u = CVec::from_vec(vec![C64::new(3.0, 0.0), C64::new(0.0, 4.0)]);
        let m = &u * u.adjoint();
        assert!((spectral_norm(&m) - 25.0).abs() < 1e-12);
    }
}
