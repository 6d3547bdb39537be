//! Text formats: symbol JSON, scan CSV, report and certificate JSON.
//!
//! JSON floats use the shortest representation that round-trips exactly; CSV
//! floats carry 17 significant digits.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::criteria::{CriterionReport, ScanTable};
use crate::decompose::{Certificate, XiResult};
use crate::error::{Error, Result};
use crate::linalg::{CMat, C64};
use crate::symbol::{DiskPoint, MatrixSymbol};

#[derive(Debug, Serialize, Deserialize)]
struct SymbolFile {
    n: usize,
    coeffs: Vec<CoeffEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
struct CoeffEntry {
    k: i64,
    re: Vec<Vec<f64>>,
    #[serde(default)]
    im: Option<Vec<Vec<f64>>>,
}

fn check_grid(rows: &[Vec<f64>], n: usize, what: &str, k: i64) -> Result<()> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Error::Format(format!("coefficient {k}: {what} is not {n}×{n}")));
    }
    if rows.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::Format(format!("coefficient {k}: non-finite {what} entry")));
    }
    Ok(())
}

pub fn symbol_from_json(text: &str) -> Result<MatrixSymbol> {
    let file: SymbolFile = serde_json::from_str(text)?;
    symbol_from_file(file)
}

pub fn symbol_from_value(value: Value) -> Result<MatrixSymbol> {
    symbol_from_file(serde_json::from_value(value)?)
}

fn symbol_from_file(file: SymbolFile) -> Result<MatrixSymbol> {
    let n = file.n;
    if n == 0 {
        return Err(Error::Format("n must be positive".into()));
    }
    let mut coeffs = Vec::with_capacity(file.coeffs.len());
    for c in file.coeffs {
        check_grid(&c.re, n, "re", c.k)?;
        if let Some(im) = &c.im {
            check_grid(im, n, "im", c.k)?;
        }
        let m = CMat::from_fn(n, n, |i, j| C64::new(c.re[i][j], c.im.as_ref().map_or(0.0, |im| im[i][j])));
        coeffs.push((c.k, m));
    }
    MatrixSymbol::from_coeffs(n, coeffs)
}

/// Drops the sign of negative zero so it never reaches the output.
fn unsigned_zero(v: f64) -> f64 {
    v + 0.0
}

fn parts(m: &CMat) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let grid = |f: fn(&C64) -> f64| {
        (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| unsigned_zero(f(&m[(i, j)]))).collect()).collect()
    };
    (grid(|c| c.re), grid(|c| c.im))
}

pub fn symbol_to_value(s: &MatrixSymbol) -> Value {
    let coeffs = s
        .coeffs()
        .map(|(k, m)| {
            let (re, im) = parts(m);
            CoeffEntry { k, re, im: Some(im) }
        })
        .collect();
    serde_json::to_value(SymbolFile { n: s.n(), coeffs }).expect("plain data")
}

/// Coefficients in ascending frequency order.
pub fn symbol_to_json(s: &MatrixSymbol) -> String {
    serde_json::to_string_pretty(&symbol_to_value(s)).expect("plain data")
}

/// `{"re": [[…]], "im": [[…]]}`.
pub fn matrix_value(m: &CMat) -> Value {
    let (re, im) = parts(m);
    json!({ "re": re, "im": im })
}

pub fn point_value(z: DiskPoint) -> Value {
    json!([z.z().re, z.z().im])
}

pub fn report_value(r: &CriterionReport) -> Value {
    json!({
        "z": point_value(r.z),
        "norm": r.norm,
        "trace": r.trace_value,
        "left_factor": matrix_value(&r.left_factor),
        "right_factor": matrix_value(&r.right_factor),
    })
}

/// `{"A": rows of [re, im] pairs, "R": index map, "residual_f": […], "residual_g": …}`.
pub fn certificate_value(c: &Certificate) -> Value {
    let a: Vec<Vec<[f64; 2]>> = (0..c.a.nrows())
        .map(|i| (0..c.a.ncols()).map(|j| [unsigned_zero(c.a[(i, j)].re), unsigned_zero(c.a[(i, j)].im)]).collect())
        .collect();
    json!({ "A": a, "R": c.perm, "residual_f": c.residual_f, "residual_g": c.residual_g })
}

pub fn certificate_from_value(v: &Value) -> Result<Certificate> {
    #[derive(Deserialize)]
    struct Raw {
        #[serde(rename = "A")]
        a: Vec<Vec<[f64; 2]>>,
        #[serde(rename = "R")]
        r: Vec<usize>,
        residual_f: Vec<f64>,
        residual_g: f64,
    }
    let raw: Raw = serde_json::from_value(v.clone())?;
    let n = raw.r.len();
    if raw.a.len() != n || raw.a.iter().any(|row| row.len() != n) {
        return Err(Error::Format(format!("A is not {n}×{n}")));
    }
    let a = CMat::from_fn(n, n, |i, j| C64::new(raw.a[i][j][0], raw.a[i][j][1]));
    let cert = Certificate { a, perm: raw.r, residual_f: raw.residual_f, residual_g: raw.residual_g };
    if !cert.is_permutation() {
        return Err(Error::Format("R is not a permutation".into()));
    }
    Ok(cert)
}

pub fn xi_value(x: &XiResult) -> Value {
    json!({
        "z": point_value(x.z),
        "value": x.value,
        "certificate": certificate_value(&x.cert),
        "iterations": x.iterations,
        "converged": x.converged,
        "x_terms": x.x_terms,
        "y_terms": x.y_terms,
        "bound_zero": x.bound_zero,
        "bound_identity": x.bound_identity,
    })
}

/// 17 significant digits.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn scan_to_csv(table: &ScanTable) -> String {
    let mut out = String::from("r,theta,norm,trace\n");
    for row in &table.rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            format_float(row.r),
            format_float(row.theta),
            format_float(row.norm),
            format_float(row.trace)
        );
    }
    out
}
