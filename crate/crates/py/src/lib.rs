//! Python bindings: matrix symbols, the semi-commutator/commutator criteria and
//! the decomposition certificates. Matrices cross the boundary as nested lists
//! of `complex`.

use btl_core::criteria::{self, CommutatorReport, CriterionReport, ScanMode};
use btl_core::decompose::{self, Certificate, Theorem5Outcome, XiResult, Xi2Options};
use btl_core::linalg::{CMat, CVec, C64};
use btl_core::{generate, hardy, io, DiskPoint, MatrixSymbol};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

create_exception!(btl, BtlError, PyValueError, "Raised when a btl computation cannot be completed.");

fn err(e: btl_core::Error) -> PyErr {
    BtlError::new_err(e.to_string())
}

type Rows = Vec<Vec<C64>>;

fn rows(m: &CMat) -> Rows {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()
}

fn matrix(rows: &[Vec<C64>], n: usize) -> PyResult<CMat> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(PyValueError::new_err(format!("expected a {n}×{n} matrix")));
    }
    Ok(CMat::from_fn(n, n, |i, j| rows[i][j]))
}

fn point(z: C64) -> PyResult<DiskPoint> {
    DiskPoint::new(z).map_err(err)
}

/// Matrix trigonometric polynomial `Σ_k A_k w^k` with `n × n` coefficients.
#[pyclass(name = "Symbol", module = "btl", skip_from_py_object)]
#[derive(Clone)]
pub struct PySymbol {
    inner: MatrixSymbol,
}

impl From<MatrixSymbol> for PySymbol {
    fn from(inner: MatrixSymbol) -> Self {
        Self { inner }
    }
}

#[pymethods]
impl PySymbol {
    /// `coeffs` maps each frequency `k` to an `n × n` nested list.
    #[new]
    fn new(n: usize, coeffs: Vec<(i64, Rows)>) -> PyResult<Self> {
        let parsed = coeffs.iter().map(|(k, m)| Ok((*k, matrix(m, n)?))).collect::<PyResult<Vec<_>>>()?;
        Ok(MatrixSymbol::from_coeffs(n, parsed).map_err(err)?.into())
    }

    #[staticmethod]
    fn scalar(coeffs: Vec<(i64, C64)>) -> Self {
        MatrixSymbol::scalar(coeffs).into()
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(io::symbol_from_json(text).map_err(err)?.into())
    }

    fn to_json(&self) -> String {
        io::symbol_to_json(&self.inner)
    }

    #[staticmethod]
    #[pyo3(signature = (n, degree, phase = 0.0))]
    fn squarewave(n: usize, degree: usize, phase: f64) -> PyResult<Self> {
        if n == 0 {
            return Err(PyValueError::new_err("block size must be positive"));
        }
        Ok(generate::squarewave(n, degree, phase).into())
    }

    #[staticmethod]
    #[pyo3(signature = (n, degree, seed = 0))]
    fn random(n: usize, degree: usize, seed: u64) -> PyResult<Self> {
        Ok(generate::generate(generate::Kind::Random, n, degree, seed).map_err(err)?.into())
    }

    #[staticmethod]
    #[pyo3(signature = (n, degree, seed = 0))]
    fn analytic(n: usize, degree: usize, seed: u64) -> PyResult<Self> {
        Ok(generate::generate(generate::Kind::Analytic, n, degree, seed).map_err(err)?.into())
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn deg_plus(&self) -> usize {
        self.inner.deg_plus()
    }

    #[getter]
    fn deg_minus(&self) -> usize {
        self.inner.deg_minus()
    }

    fn is_analytic(&self) -> bool {
        self.inner.is_analytic()
    }

    fn coeffs(&self) -> Vec<(i64, Rows)> {
        self.inner.coeffs().map(|(k, m)| (k, rows(m))).collect()
    }

    fn adjoint(&self) -> Self {
        self.inner.adjoint().into()
    }

    /// `(F₊, F₋)` with the constant term in `F₊`.
    fn split(&self) -> (Self, Self) {
        let s = self.inner.split();
        (s.plus.into(), s.minus.into())
    }

    fn column(&self, j: usize) -> PyResult<Vec<Self>> {
        if j >= self.inner.n() {
            return Err(PyValueError::new_err(format!("column {j} out of range")));
        }
        Ok(self.inner.column(j).into_iter().map(Self::from).collect())
    }

    fn eval(&self, theta: f64) -> Rows {
        rows(&self.inner.eval(theta))
    }

    fn poisson_ext(&self, z: C64) -> PyResult<Rows> {
        Ok(rows(&self.inner.poisson_ext(point(z)?)))
    }

    /// `[|F − F(z)|²](z)`, positive semidefinite.
    fn mod_sq_ext(&self, z: C64) -> PyResult<Rows> {
        Ok(rows(&self.inner.mod_sq_ext(point(z)?)))
    }

    fn __mul__(&self, other: &Self) -> PyResult<Self> {
        Ok(self.inner.multiply(&other.inner).map_err(err)?.into())
    }

    fn __add__(&self, other: &Self) -> PyResult<Self> {
        same_size(&self.inner, &other.inner)?;
        Ok((&self.inner + &other.inner).into())
    }

    fn __sub__(&self, other: &Self) -> PyResult<Self> {
        same_size(&self.inner, &other.inner)?;
        Ok((&self.inner - &other.inner).into())
    }

    fn __neg__(&self) -> Self {
        (-&self.inner).into()
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        let ks: Vec<String> = self.inner.coeffs().map(|(k, _)| k.to_string()).collect();
        format!("Symbol(n={}, frequencies=[{}])", self.inner.n(), ks.join(", "))
    }
}

fn same_size(a: &MatrixSymbol, b: &MatrixSymbol) -> PyResult<()> {
    if a.n() != b.n() {
        return Err(err(btl_core::Error::DimensionMismatch { expected: a.n(), found: b.n() }));
    }
    Ok(())
}

#[pyclass(name = "CriterionReport", module = "btl", frozen)]
pub struct PyCriterionReport {
    #[pyo3(get)]
    z: C64,
    #[pyo3(get)]
    norm: f64,
    #[pyo3(get)]
    trace: f64,
    #[pyo3(get)]
    criterion: Rows,
    #[pyo3(get)]
    left_factor: Rows,
    #[pyo3(get)]
    right_factor: Rows,
}

impl From<&CriterionReport> for PyCriterionReport {
    fn from(r: &CriterionReport) -> Self {
        Self {
            z: r.z.z(),
            norm: r.norm,
            trace: r.trace_value,
            criterion: rows(&r.criterion),
            left_factor: rows(&r.left_factor),
            right_factor: rows(&r.right_factor),
        }
    }
}

#[pymethods]
impl PyCriterionReport {
    fn __repr__(&self) -> String {
        format!("CriterionReport(z={}, norm={:e}, trace={:e})", self.z, self.norm, self.trace)
    }
}

#[pyclass(name = "Certificate", module = "btl", frozen)]
pub struct PyCertificate {
    inner: Certificate,
}

#[pymethods]
impl PyCertificate {
    #[getter]
    fn a(&self) -> Rows {
        rows(&self.inner.a)
    }

    /// Permutation as an index array: row `i` of `R` has its 1 in column `r[i]`.
    #[getter]
    fn r(&self) -> Vec<usize> {
        self.inner.perm.clone()
    }

    #[getter]
    fn residual_f(&self) -> Vec<f64> {
        self.inner.residual_f.clone()
    }

    #[getter]
    fn residual_g(&self) -> f64 {
        self.inner.residual_g
    }

    fn in_unit_ball(&self) -> bool {
        self.inner.in_unit_ball(1e-12)
    }

    fn to_json(&self) -> String {
        io::certificate_value(&self.inner).to_string()
    }

    fn __repr__(&self) -> String {
        let c = &self.inner;
        format!("Certificate(r={:?}, residual_f={:?}, residual_g={:e})", c.perm, c.residual_f, c.residual_g)
    }
}

#[pyclass(name = "Theorem5Outcome", module = "btl", frozen)]
pub struct PyTheorem5Outcome {
    #[pyo3(get)]
    certificate: Py<PyCertificate>,
    #[pyo3(get)]
    route: String,
    #[pyo3(get)]
    verified: bool,
    #[pyo3(get)]
    membership_residual: f64,
}

fn outcome(py: Python<'_>, o: Theorem5Outcome) -> PyResult<PyTheorem5Outcome> {
    Ok(PyTheorem5Outcome {
        certificate: Py::new(py, PyCertificate { inner: o.certificate })?,
        route: format!("{:?}", o.route).to_lowercase(),
        verified: o.verified,
        membership_residual: o.membership_residual,
    })
}

#[pyclass(name = "XiResult", module = "btl", frozen)]
pub struct PyXiResult {
    #[pyo3(get)]
    z: C64,
    #[pyo3(get)]
    value: f64,
    #[pyo3(get)]
    certificate: Py<PyCertificate>,
    #[pyo3(get)]
    iterations: usize,
    #[pyo3(get)]
    converged: bool,
    #[pyo3(get)]
    x_terms: Vec<f64>,
    #[pyo3(get)]
    y_terms: Vec<f64>,
    #[pyo3(get)]
    bound_zero: f64,
    #[pyo3(get)]
    bound_identity: f64,
}

fn xi_result(py: Python<'_>, r: XiResult) -> PyResult<PyXiResult> {
    Ok(PyXiResult {
        z: r.z.z(),
        value: r.value,
        certificate: Py::new(py, PyCertificate { inner: r.cert })?,
        iterations: r.iterations,
        converged: r.converged,
        x_terms: r.x_terms,
        y_terms: r.y_terms,
        bound_zero: r.bound_zero,
        bound_identity: r.bound_identity,
    })
}

fn inner(v: &[PyRef<'_, PySymbol>]) -> Vec<MatrixSymbol> {
    v.iter().map(|s| s.inner.clone()).collect()
}

fn commutator_tuple(r: &CommutatorReport) -> (f64, PyCriterionReport) {
    (r.residual, (&r.report).into())
}

/// Exact `T_{FG} − T_F T_G = H_{F*}* H_G` as a finite matrix.
#[pyfunction]
fn semicommutator(f: &PySymbol, g: &PySymbol) -> PyResult<Rows> {
    Ok(rows(&hardy::semicommutator(&f.inner, &g.inner).map_err(err)?))
}

/// The truncated Toeplitz matrix `[A_{i−j}]` with `order × order` blocks.
#[pyfunction]
fn toeplitz_section(f: &PySymbol, order: usize) -> Rows {
    rows(&hardy::toeplitz_section(&f.inner, order).data)
}

#[pyfunction]
fn criterion(f: &PySymbol, g: &PySymbol, z: C64) -> PyResult<PyCriterionReport> {
    Ok((&criteria::criterion(&f.inner, &g.inner, point(z)?).map_err(err)?).into())
}

/// `(‖FG − GF‖, report)`.
#[pyfunction]
fn commutator_criterion(f: &PySymbol, g: &PySymbol, z: C64) -> PyResult<(f64, PyCriterionReport)> {
    Ok(commutator_tuple(&criteria::commutator_criterion(&f.inner, &g.inner, point(z)?).map_err(err)?))
}

/// `(‖FF* − F*F‖, report)`.
#[pyfunction]
fn normality_criterion(f: &PySymbol, z: C64) -> PyResult<(f64, PyCriterionReport)> {
    Ok(commutator_tuple(&criteria::normality_criterion(&f.inner, point(z)?).map_err(err)?))
}

/// `(poisson, gram, relative_gap)`.
#[pyfunction]
fn trace_defect_routes(f: &PySymbol, g: &PySymbol, z: C64) -> PyResult<(f64, f64, f64)> {
    let t = criteria::trace_defect_routes(&f.inner, &g.inner, point(z)?).map_err(err)?;
    Ok((t.poisson, t.gram, t.relative_gap))
}

/// `(zero, semicommutator_max_abs, criterion_norm_at_origin)`.
#[pyfunction]
fn zero_semicommutator_check(f: &PySymbol, g: &PySymbol) -> PyResult<(bool, f64, f64)> {
    let c = criteria::zero_semicommutator_check(&f.inner, &g.inner).map_err(err)?;
    Ok((c.zero, c.semicommutator_max_abs, c.criterion_norm_at_origin))
}

/// Rows `(r, theta, norm, trace)`, radius-major.
#[pyfunction]
#[pyo3(signature = (f, g, radii, angles, mode = "semicommutator"))]
fn radial_scan(
    py: Python<'_>,
    f: &PySymbol,
    g: &PySymbol,
    radii: Vec<f64>,
    angles: Vec<f64>,
    mode: &str,
) -> PyResult<Vec<(f64, f64, f64, f64)>> {
    let mode: ScanMode = mode.parse().map_err(err)?;
    let (f, g) = (f.inner.clone(), g.inner.clone());
    let table = py.detach(|| criteria::radial_scan(&f, &g, &radii, &angles, mode)).map_err(err)?;
    Ok(table.rows.iter().map(|r| (r.r, r.theta, r.norm, r.trace)).collect())
}

/// Certificate `(A, R)` with `(R − A) f_k = 0` and `A* g = 0` for vectors
/// satisfying `Σ_i f_ki ⊗ g_i = 0`.
#[pyfunction]
fn prop4_solve(f_list: Vec<Vec<Vec<C64>>>, g: Vec<Vec<C64>>) -> PyResult<PyCertificate> {
    let vec = |v: &Vec<C64>| CVec::from_column_slice(v);
    let f: Vec<Vec<CVec>> = f_list.iter().map(|fk| fk.iter().map(vec).collect()).collect();
    let g: Vec<CVec> = g.iter().map(vec).collect();
    Ok(PyCertificate { inner: decompose::prop4_solve(&f, &g).map_err(err)? })
}

/// Scalar-symbol vectors `f_k` and `g` with `Σ_i H_{f_ki}* H_{g_i} = 0`.
#[pyfunction]
fn theorem5_check(
    py: Python<'_>,
    f_list: Vec<Vec<PyRef<'_, PySymbol>>>,
    g: Vec<PyRef<'_, PySymbol>>,
) -> PyResult<PyTheorem5Outcome> {
    let f: Vec<Vec<MatrixSymbol>> = f_list.iter().map(|fk| inner(fk)).collect();
    outcome(py, decompose::theorem5_check(&f, &inner(&g)).map_err(err)?)
}

/// One certificate check per column of `G` for a zero semi-commutator.
#[pyfunction]
fn semicommutator_certificates(py: Python<'_>, f: &PySymbol, g: &PySymbol) -> PyResult<Vec<PyTheorem5Outcome>> {
    decompose::semicommutator_certificates(&f.inner, &g.inner)
        .map_err(err)?
        .into_iter()
        .map(|o| outcome(py, o))
        .collect()
}

#[pyfunction]
#[pyo3(signature = (f, g, z, perm_samples = None, seed = 0))]
fn xi2(
    py: Python<'_>,
    f: Vec<PyRef<'_, PySymbol>>,
    g: Vec<PyRef<'_, PySymbol>>,
    z: C64,
    perm_samples: Option<usize>,
    seed: u64,
) -> PyResult<PyXiResult> {
    let (f, g, z) = (inner(&f), inner(&g), point(z)?);
    let opts = Xi2Options { perm_samples, seed, ..Xi2Options::default() };
    let r = py.detach(|| decompose::xi2(&f, &g, z, &opts)).map_err(err)?;
    xi_result(py, r)
}

#[pymodule]
pub fn btl(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("BtlError", m.py().get_type::<BtlError>())?;
    m.add_class::<PySymbol>()?;
    m.add_class::<PyCriterionReport>()?;
    m.add_class::<PyCertificate>()?;
    m.add_class::<PyTheorem5Outcome>()?;
    m.add_class::<PyXiResult>()?;
    m.add_function(wrap_pyfunction!(semicommutator, m)?)?;
    m.add_function(wrap_pyfunction!(toeplitz_section, m)?)?;
    m.add_function(wrap_pyfunction!(criterion, m)?)?;
    m.add_function(wrap_pyfunction!(commutator_criterion, m)?)?;
    m.add_function(wrap_pyfunction!(normality_criterion, m)?)?;
    m.add_function(wrap_pyfunction!(trace_defect_routes, m)?)?;
    m.add_function(wrap_pyfunction!(zero_semicommutator_check, m)?)?;
    m.add_function(wrap_pyfunction!(radial_scan, m)?)?;
    m.add_function(wrap_pyfunction!(prop4_solve, m)?)?;
    m.add_function(wrap_pyfunction!(theorem5_check, m)?)?;
    m.add_function(wrap_pyfunction!(semicommutator_certificates, m)?)?;
    m.add_function(wrap_pyfunction!(xi2, m)?)?;
    Ok(())
}
