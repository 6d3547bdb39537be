//! Computable compactness and vanishing criteria for semi-commutators and
//! commutators of block Toeplitz operators.
//!
//! The central object is the criterion matrix
//! `[|(F₊)* − (F₊)*(z)|²(z)]^{1/2} [|G₋ − G₋(z)|²(z)]^{1/2}`, whose norm tends
//! to zero as `|z| → 1` exactly when `T_{FG} − T_F T_G` is compact, and which
//! vanishes at one (hence every) point exactly when the semi-commutator is zero.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hardy;
use crate::linalg::{self, CMat};
use crate::symbol::{DiskPoint, MatrixSymbol};

/// Thresholds separating structural zeros from roundoff.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Max-abs entry below which an exactly computed matrix counts as zero.
    pub exact_zero: f64,
    /// Criterion norm below which the criterion counts as zero.
    pub criterion_zero: f64,
    /// Negative eigenvalues above `-psd_floor · max(1, ‖M‖)` are clamped.
    pub psd_floor: f64,
    /// Relative agreement demanded of the two trace routes.
    pub trace_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { exact_zero: 1e-12, criterion_zero: 1e-10, psd_floor: 1e-12, trace_rel: 1e-9 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionReport {
    pub z: DiskPoint,
    pub left_factor: CMat,
    pub right_factor: CMat,
    /// `left_factor^{1/2} · right_factor^{1/2}`.
    pub criterion: CMat,
    /// Spectral norm of `criterion`.
    pub norm: f64,
    /// `tr(left · right)`, the squared Frobenius norm of `criterion`.
    pub trace_value: f64,
}

impl CriterionReport {
    pub fn from_factors(z: DiskPoint, left: CMat, right: CMat, tol: &Tolerances) -> Result<Self> {
        let floor = |m: &CMat| tol.psd_floor * linalg::spectral_norm(m).max(1.0);
        let left_root = linalg::psd_sqrt(&left, floor(&left))?;
        let right_root = linalg::psd_sqrt(&right, floor(&right))?;
        let criterion = left_root * right_root;
        let norm = linalg::spectral_norm(&criterion);
        let trace_value = linalg::frobenius_sq(&criterion);
        Ok(Self { z, left_factor: left, right_factor: right, criterion, norm, trace_value })
    }
}

/// Criterion for `T_{FG} − T_F T_G = H_{F*}* H_G`.
pub fn criterion(f: &MatrixSymbol, g: &MatrixSymbol, z: DiskPoint) -> Result<CriterionReport> {
    criterion_with(f, g, z, &Tolerances::default())
}

pub fn criterion_with(
    f: &MatrixSymbol,
    g: &MatrixSymbol,
    z: DiskPoint,
    tol: &Tolerances,
) -> Result<CriterionReport> {
    f.expect_size(g.n())?;
    let left = f.split().plus.adjoint().mod_sq_ext(z);
    let right = g.split().minus.mod_sq_ext(z);
    CriterionReport::from_factors(z, left, right, tol)
}

/// Criterion for the Hankel product `H_F* H_G` itself:
/// `[|F₋ − F₋(z)|²(z)]^{1/2} [|G₋ − G₋(z)|²(z)]^{1/2}`.
///
/// `criterion(F, G, z)` equals `hankel_product_criterion(F*, G, z)`.
pub fn hankel_product_criterion(
    f: &MatrixSymbol,
    g: &MatrixSymbol,
    z: DiskPoint,
) -> Result<CriterionReport> {
    f.expect_size(g.n())?;
    let left = f.split().minus.mod_sq_ext(z);
    let right = g.split().minus.mod_sq_ext(z);
    CriterionReport::from_factors(z, left, right, &Tolerances::default())
}

/// Both evaluations of `trace{T*T}` for the rank-one defect of `H_{F*}* H_G`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceDefect {
    /// `tr[|(F*)₋ − (F*)₋(z)|²(z) · |G₋ − G₋(z)|²(z)]`.
    pub poisson: f64,
    /// Hilbert–Schmidt norm² of the explicit rank-one assembly.
    pub gram: f64,
    pub relative_gap: f64,
}

pub fn relative_gap(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

pub fn trace_defect_routes(f: &MatrixSymbol, g: &MatrixSymbol, z: DiskPoint) -> Result<TraceDefect> {
    f.expect_size(g.n())?;
    let fstar = f.adjoint();
    let left = fstar.split().minus.mod_sq_ext(z);
    let right = g.split().minus.mod_sq_ext(z);
    let poisson = (left * right).trace().re;
    let gram = hardy::rank_one_defect(&fstar, g, z)?.hs_norm_sq();
    Ok(TraceDefect { poisson, gram, relative_gap: relative_gap(poisson, gram) })
}

/// `trace{T*T}` of the defect, returned from the Poisson route after checking
/// it against the Gram route.
pub fn trace_defect(f: &MatrixSymbol, g: &MatrixSymbol, z: DiskPoint) -> Result<f64> {
    let tol = Tolerances::default();
    let t = trace_defect_routes(f, g, z)?;
    // Sub-1e-24 values are roundoff on both routes.
    if t.relative_gap > tol.trace_rel && t.poisson.max(t.gram) > 1e-24 {
        return Err(Error::TraceMismatch { poisson: t.poisson, gram: t.gram, relative: t.relative_gap });
    }
    Ok(t.poisson)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommutatorReport {
    /// Largest coefficient norm of `FG − GF`.
    pub residual: f64,
    pub report: CriterionReport,
    /// Max-abs gap between the block assembly and the stacked-symbol factors.
    pub assembly_gap: f64,
}

/// `B = [F −G; 0 0]`, `C = [G 0; F 0]`, so that `H_{B*}* H_C` carries
/// `H_{F*}* H_G − H_{G*}* H_F` in its top-left block.
pub fn commutator_symbols(f: &MatrixSymbol, g: &MatrixSymbol) -> Result<(MatrixSymbol, MatrixSymbol)> {
    f.expect_size(g.n())?;
    let zero = MatrixSymbol::zero(f.n());
    let b = MatrixSymbol::block2(f, &(-g), &zero, &zero)?;
    let c = MatrixSymbol::block2(g, &zero, f, &zero)?;
    Ok((b, c))
}

fn assemble(tl: CMat, tr: CMat, bl: CMat, br: CMat) -> CMat {
    let n = tl.nrows();
    let mut out = linalg::zeros(2 * n, 2 * n);
    linalg::set_block(&mut out, 0, 0, &tl);
    linalg::set_block(&mut out, 0, n, &tr);
    linalg::set_block(&mut out, n, 0, &bl);
    linalg::set_block(&mut out, n, n, &br);
    out
}

fn commutator_residual(f: &MatrixSymbol, g: &MatrixSymbol) -> Result<f64> {
    Ok((&f.multiply(g)? - &g.multiply(f)?).max_coeff_norm())
}

/// Criterion for `T_F T_G − T_G T_F`, assembled blockwise from `F₊, G₊, F₋, G₋`
/// and cross-checked against the factors of the stacked pair `(B, C)`.
pub fn commutator_criterion(f: &MatrixSymbol, g: &MatrixSymbol, z: DiskPoint) -> Result<CommutatorReport> {
    f.expect_size(g.n())?;
    let tol = Tolerances::default();
    let residual = commutator_residual(f, g)?;
    let (fs, gs) = (f.split(), g.split());
    let (fp_star, gp_star) = (fs.plus.adjoint(), gs.plus.adjoint());
    let (fm, gm) = (&fs.minus, &gs.minus);

    let left = assemble(
        fp_star.mod_sq_ext(z),
        -fp_star.cross_ext(&gp_star, z)?,
        -gp_star.cross_ext(&fp_star, z)?,
        gp_star.mod_sq_ext(z),
    );
    let right = assemble(gm.mod_sq_ext(z), gm.cross_ext(fm, z)?, fm.cross_ext(gm, z)?, fm.mod_sq_ext(z));
    let left = linalg::hermitian_part(&left);
    let right = linalg::hermitian_part(&right);

    let (b, c) = commutator_symbols(f, g)?;
    let direct_left = b.split().plus.adjoint().mod_sq_ext(z);
    let direct_right = c.split().minus.mod_sq_ext(z);
    let assembly_gap = linalg::max_abs(&(&left - &direct_left)).max(linalg::max_abs(&(&right - &direct_right)));
    let scale = linalg::max_abs(&direct_left).max(linalg::max_abs(&direct_right)).max(1.0);
    if assembly_gap > 1e-10 * scale {
        return Err(Error::Inconsistent(format!("commutator block assembly off by {assembly_gap:e}")));
    }

    let report = CriterionReport::from_factors(z, left, right, &tol)?;
    Ok(CommutatorReport { residual, report, assembly_gap })
}

/// Commutator criterion with `G = F*`, measuring essential normality of `T_F`.
///
/// With `X = (F₊)* − (F₊)*(z)` and `W = F₋ − F₋(z)` the factors reduce to
/// `[[XX*, −XW*], [−WX*, WW*]](z)` and `[[XX*, XW*], [WX*, WW*]](z)`.
pub fn normality_criterion(f: &MatrixSymbol, z: DiskPoint) -> Result<CommutatorReport> {
    let tol = Tolerances::default();
    let fstar = f.adjoint();
    let residual = commutator_residual(f, &fstar)?;
    let s = f.split();
    let x = s.plus.adjoint();
    let w = &s.minus;
    let xx = x.mod_sq_ext(z);
    let ww = w.mod_sq_ext(z);
    let xw = x.cross_ext(w, z)?;
    let wx = w.cross_ext(&x, z)?;
    let left = linalg::hermitian_part(&assemble(xx.clone(), -&xw, -&wx, ww.clone()));
    let right = linalg::hermitian_part(&assemble(xx, xw, wx, ww));

    let general = commutator_criterion(f, &fstar, z)?;
    let assembly_gap = linalg::max_abs(&(&left - &general.report.left_factor))
        .max(linalg::max_abs(&(&right - &general.report.right_factor)));
    let scale = linalg::max_abs(&left).max(linalg::max_abs(&right)).max(1.0);
    if assembly_gap > 1e-10 * scale {
        return Err(Error::Inconsistent(format!("normality reduction off by {assembly_gap:e}")));
    }
    let report = CriterionReport::from_factors(z, left, right, &tol)?;
    Ok(CommutatorReport { residual, report, assembly_gap })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZeroCheck {
    pub zero: bool,
    pub semicommutator_max_abs: f64,
    pub criterion_norm_at_origin: f64,
}

/// Decides `T_{FG} = T_F T_G` from the exact Hankel product and confirms the
/// verdict with the criterion at `z = 0`.
pub fn zero_semicommutator_check(f: &MatrixSymbol, g: &MatrixSymbol) -> Result<ZeroCheck> {
    zero_semicommutator_check_with(f, g, &Tolerances::default())
}

pub fn zero_semicommutator_check_with(f: &MatrixSymbol, g: &MatrixSymbol, tol: &Tolerances) -> Result<ZeroCheck> {
    let semicommutator_max_abs = linalg::max_abs(&hardy::semicommutator(f, g)?);
    let criterion_norm_at_origin = criterion_with(f, g, DiskPoint::origin(), tol)?.norm;
    let zero = semicommutator_max_abs <= tol.exact_zero;
    if zero != (criterion_norm_at_origin <= tol.criterion_zero) {
        return Err(Error::Inconsistent(format!(
            "semicommutator max-abs {semicommutator_max_abs:e} but criterion norm at 0 is {criterion_norm_at_origin:e}"
        )));
    }
    Ok(ZeroCheck { zero, semicommutator_max_abs, criterion_norm_at_origin })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanMode {
    Semicommutator,
    Commutator,
    Normality,
}

impl std::str::FromStr for ScanMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "semicommutator" => Ok(Self::Semicommutator),
            "commutator" => Ok(Self::Commutator),
            "normality" => Ok(Self::Normality),
            other => Err(Error::InvalidArgument(format!("unknown scan mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanRow {
    pub r: f64,
    pub theta: f64,
    pub norm: f64,
    pub trace: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ScanTable {
    pub rows: Vec<ScanRow>,
}

/// Evaluates the chosen criterion on the polar grid `radii × angles`. Rows are
/// ordered radius-major regardless of evaluation order.
pub fn radial_scan(
    f: &MatrixSymbol,
    g: &MatrixSymbol,
    radii: &[f64],
    angles: &[f64],
    mode: ScanMode,
) -> Result<ScanTable> {
    f.expect_size(g.n())?;
    if let Some(&r) = radii.iter().find(|r| !(0.0..1.0).contains(*r)) {
        return Err(Error::InvalidArgument(format!("radius {r} is outside [0, 1)")));
    }
    let grid: Vec<(f64, f64)> = radii.iter().flat_map(|&r| angles.iter().map(move |&t| (r, t))).collect();
    let rows = grid
        .par_iter()
        .map(|&(r, theta)| {
            let z = DiskPoint::from_polar(r, theta)?;
            let report = match mode {
                ScanMode::Semicommutator => criterion(f, g, z)?,
                ScanMode::Commutator => commutator_criterion(f, g, z)?.report,
                ScanMode::Normality => normality_criterion(f, z)?.report,
            };
            Ok(ScanRow { r, theta, norm: report.norm, trace: report.trace_value })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScanTable { rows })
}
