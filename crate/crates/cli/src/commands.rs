use std::f64::consts::TAU;
use std::fs;
use std::io::Write;
use std::path::Path;

use btl_core::criteria::{self, ScanMode, Tolerances};
use btl_core::decompose::{self, Xi2Options};
use btl_core::generate::{self, Kind};
use btl_core::linalg::{self, C64};
use btl_core::{hardy, io, DiskPoint, MatrixSymbol};
use serde_json::{json, Value};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: String, source: btl_core::Error },
    #[error(transparent)]
    Core(#[from] btl_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Route(String),
}

impl CliError {
    /// 2 usage, 3 parse/IO, 4 dimension mismatch, 5 route fault, 1 anything else.
    pub fn exit_code(&self) -> u8 {
        use btl_core::Error as E;
        match self {
            Self::Usage(_) => 2,
            Self::Io { .. } | Self::Parse { .. } => 3,
            Self::Route(_) => 5,
            Self::Core(e) => match e {
                E::InvalidArgument(_) | E::OutsideDisk { .. } => 2,
                E::Json(_) | E::Format(_) => 3,
                E::DimensionMismatch { .. } => 4,
                E::Inconsistent(_) | E::TraceMismatch { .. } => 5,
                _ => 1,
            },
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn read_symbol(path: &Path) -> Result<MatrixSymbol> {
    let shown = || path.display().to_string();
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: shown(), source })?;
    io::symbol_from_json(&text).map_err(|source| CliError::Parse { path: shown(), source })
}

fn read_pair(f: &Path, g: &Path) -> Result<(MatrixSymbol, MatrixSymbol)> {
    let (f, g) = (read_symbol(f)?, read_symbol(g)?);
    if f.n() != g.n() {
        return Err(btl_core::Error::DimensionMismatch { expected: f.n(), found: g.n() }.into());
    }
    Ok((f, g))
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|()| stdout.flush())
                .map_err(|source| CliError::Io { path: "<stdout>".into(), source })
        }
    }
}

fn emit_json(v: &Value) -> Result<()> {
    emit(&format!("{}\n", serde_json::to_string_pretty(v).expect("plain data")), None)
}

fn point(z: &[f64]) -> Result<DiskPoint> {
    Ok(DiskPoint::new(C64::new(z[0], z[1]))?)
}

fn check_column(column: usize, n: usize) -> Result<()> {
    if column >= n {
        return Err(CliError::Usage(format!("column {column} is out of range for block size {n}")));
    }
    Ok(())
}

fn angle_grid(count: usize) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(CliError::Usage("at least one angle is required".into()));
    }
    Ok((0..count).map(|j| TAU * j as f64 / count as f64).collect())
}

/// `BTL_THREADS` wins over `--threads`; both absent means available parallelism.
pub fn thread_count(env: Option<&str>, flag: Option<usize>) -> Result<usize> {
    let requested = match env {
        Some(s) => Some(s.trim().parse::<usize>().map_err(|_| CliError::Usage(format!("BTL_THREADS={s:?} is not a count")))?),
        None => flag,
    };
    match requested {
        Some(0) => Err(CliError::Usage("thread count must be positive".into())),
        Some(t) => Ok(t),
        None => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

fn pool(threads: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {threads} worker threads: {e}")))
}

pub fn single_threaded<T: Send>(job: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    pool(1)?.install(job)
}

pub fn check_zero_semicommutator(f: &Path, g: &Path, exact_zero: f64, criterion_zero: f64) -> Result<()> {
    if !(exact_zero > 0.0 && criterion_zero > 0.0) {
        return Err(CliError::Usage("tolerances must be positive".into()));
    }
    let (f, g) = read_pair(f, g)?;
    let tol = Tolerances { exact_zero, criterion_zero, ..Tolerances::default() };
    let check = criteria::zero_semicommutator_check_with(&f, &g, &tol)?;
    let certificates = if check.zero {
        decompose::semicommutator_certificates(&f, &g)?
            .iter()
            .enumerate()
            .map(|(j, o)| {
                json!({
                    "column": j,
                    "route": o.route,
                    "verified": o.verified,
                    "membership_residual": o.membership_residual,
                    "certificate": io::certificate_value(&o.certificate),
                })
            })
            .collect()
    } else {
        Vec::new()
    };
    emit_json(&json!({
        "zero": check.zero,
        "semicommutator_max_abs": check.semicommutator_max_abs,
        "criterion_norm_at_origin": check.criterion_norm_at_origin,
        "certificates": certificates,
    }))
}

/// Max entry of `[T_F, T_G] − T_{FG − GF} = H_{G*}* H_F − H_{F*}* H_G`.
fn hankel_commutator(f: &MatrixSymbol, g: &MatrixSymbol) -> Result<f64> {
    let (fg, gf) = (hardy::semicommutator(f, g)?, hardy::semicommutator(g, f)?);
    let size = fg.nrows().max(gf.nrows());
    let diff = linalg::zero_pad(&gf, size) - linalg::zero_pad(&fg, size);
    Ok(if diff.is_empty() { 0.0 } else { linalg::max_abs(&diff) })
}

fn commutator_verdict(f: &MatrixSymbol, g: &MatrixSymbol, report: &criteria::CommutatorReport) -> Result<Value> {
    let tol = Tolerances::default();
    let hankel_max_abs = hankel_commutator(f, g)?;
    Ok(json!({
        "zero": report.residual <= tol.exact_zero && hankel_max_abs <= tol.exact_zero,
        "symbol_commutator_residual": report.residual,
        "hankel_difference_max_abs": hankel_max_abs,
        "criterion_norm_at_origin": report.report.norm,
        "assembly_gap": report.assembly_gap,
    }))
}

pub fn check_zero_commutator(f: &Path, g: &Path) -> Result<()> {
    let (f, g) = read_pair(f, g)?;
    let report = criteria::commutator_criterion(&f, &g, DiskPoint::origin())?;
    emit_json(&commutator_verdict(&f, &g, &report)?)
}

pub fn check_normal(f: &Path) -> Result<()> {
    let f = read_symbol(f)?;
    let report = criteria::normality_criterion(&f, DiskPoint::origin())?;
    emit_json(&commutator_verdict(&f, &f.adjoint(), &report)?)
}

pub fn scan(
    f: &Path,
    g: &Path,
    mode: ScanMode,
    radii: &[f64],
    angles: usize,
    out: Option<&Path>,
    threads: usize,
) -> Result<()> {
    let (f, g) = read_pair(f, g)?;
    let angles = angle_grid(angles)?;
    let table = pool(threads)?.install(|| criteria::radial_scan(&f, &g, radii, &angles, mode))?;
    emit(&io::scan_to_csv(&table), out)
}

pub fn certificate(
    f: &Path,
    g: &Path,
    column: usize,
    z: Option<&[f64]>,
    perm_samples: Option<usize>,
    seed: u64,
) -> Result<()> {
    let (f, g) = read_pair(f, g)?;
    check_column(column, f.n())?;
    let mut out = match z {
        Some(z) => {
            let opts = Xi2Options { perm_samples, seed, ..Xi2Options::default() };
            let res = decompose::xi2(&f.column(column), &g.column(column), point(z)?, &opts)?;
            let mut v = io::certificate_value(&res.cert);
            v["z"] = io::point_value(res.z);
            v["value"] = json!(res.value);
            v["converged"] = json!(res.converged);
            v["iterations"] = json!(res.iterations);
            v
        }
        None => {
            let f_list: Vec<Vec<MatrixSymbol>> = (0..f.n()).map(|k| f.column(k)).collect();
            let outcome = decompose::theorem5_check(&f_list, &g.column(column))?;
            let mut v = io::certificate_value(&outcome.certificate);
            v["route"] = json!(outcome.route);
            v["verified"] = json!(outcome.verified);
            v["membership_residual"] = json!(outcome.membership_residual);
            v
        }
    };
    out["column"] = json!(column);
    emit_json(&out)
}

pub fn xi2(f: &Path, g: &Path, column: usize, z: &[f64], perm_samples: Option<usize>, seed: u64) -> Result<()> {
    let (f, g) = read_pair(f, g)?;
    check_column(column, f.n())?;
    let opts = Xi2Options { perm_samples, seed, ..Xi2Options::default() };
    let res = decompose::xi2(&f.column(column), &g.column(column), point(z)?, &opts)?;
    emit_json(&io::xi_value(&res))
}

pub fn trace_identity(f: &Path, g: &Path, radii: &[f64], angles: usize) -> Result<()> {
    let (f, g) = read_pair(f, g)?;
    let angles = angle_grid(angles)?;
    let tol = Tolerances::default();
    let mut worst = json!(null);
    let mut max_gap = 0.0f64;
    let mut points = 0usize;
    for &r in radii {
        for &theta in &angles {
            let z = DiskPoint::from_polar(r, theta)?;
            let t = criteria::trace_defect_routes(&f, &g, z)?;
            points += 1;
            // Values below 1e-24 are roundoff on both routes.
            let gap = if t.poisson.max(t.gram) > 1e-24 { t.relative_gap } else { 0.0 };
            if gap > max_gap || worst.is_null() {
                max_gap = max_gap.max(gap);
                worst = json!({ "z": io::point_value(z), "poisson": t.poisson, "gram": t.gram });
            }
        }
    }
    let agree = max_gap <= tol.trace_rel;
    emit_json(&json!({ "points": points, "max_relative_gap": max_gap, "agree": agree, "worst": worst }))?;
    if agree {
        Ok(())
    } else {
        Err(CliError::Route(format!("trace routes disagree: relative gap {max_gap:e}")))
    }
}

pub fn generate(kind: Kind, n: usize, degree: usize, seed: u64, phase: f64, out: Option<&Path>) -> Result<()> {
    let symbol = match kind {
        Kind::Squarewave => {
            if n == 0 {
                return Err(CliError::Usage("block size must be positive".into()));
            }
            generate::squarewave(n, degree, phase)
        }
        other => generate::generate(other, n, degree, seed)?,
    };
    emit(&format!("{}\n", io::symbol_to_json(&symbol)), out)
}
