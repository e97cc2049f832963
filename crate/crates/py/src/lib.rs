//! Python module `pyblockineq`.
//!
//! Matrices cross the boundary as nested lists of Python `complex`
//! (row-major); anything accepting `complex` also accepts `float`.

use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use blockineq::blockops::{self, BlockShape};
use blockineq::cones;
use blockineq::error::{CheckError, GenerateError, LinalgError};
use blockineq::generators::{self, GeneratorConfig};
use blockineq::harness::{self, Params, SearchConfig, SuiteConfig};
use blockineq::inequalities::{self, CheckId};
use blockineq::matkernel::{self, ComplexMatrix};

create_exception!(pyblockineq, HypothesisError, PyValueError, "Input is outside the class the inequality is stated for.");

type Rows = Vec<Vec<Complex64>>;

fn linalg_err(e: LinalgError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn gen_err(e: GenerateError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn check_err(e: CheckError) -> PyErr {
    match e {
        CheckError::Hypothesis { .. } => HypothesisError::new_err(e.to_string()),
        CheckError::Linalg(e) => linalg_err(e),
    }
}

fn harness_err(e: harness::HarnessError) -> PyErr {
    match e {
        harness::HarnessError::Usage(s) => PyValueError::new_err(s),
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

fn to_matrix(rows: Rows) -> PyResult<ComplexMatrix> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|row| row.len() != c) {
        return Err(PyValueError::new_err("ragged matrix rows"));
    }
    ComplexMatrix::new(r, c, rows.into_iter().flatten().collect()).map_err(linalg_err)
}

fn to_rows(a: &ComplexMatrix) -> Rows {
    (0..a.rows()).map(|i| (0..a.cols()).map(|j| a[(i, j)]).collect()).collect()
}

fn parse_check(name: &str) -> PyResult<CheckId> {
    name.parse().map_err(PyValueError::new_err)
}

fn json_to_py<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (text,))
}

/// An `mn x mn` matrix viewed as an `m x m` grid of `n x n` blocks.
#[pyclass(name = "BlockMatrix", module = "pyblockineq", from_py_object)]
#[derive(Clone)]
struct PyBlockMatrix {
    inner: blockops::BlockMatrix,
}

#[pymethods]
impl PyBlockMatrix {
    #[new]
    fn new(m: usize, n: usize, rows: Rows) -> PyResult<Self> {
        let inner = blockops::BlockMatrix::new(m, n, to_matrix(rows)?).map_err(linalg_err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    #[pyo3(signature = (seed, m, n, index = 0, rank = None))]
    fn rand_psd(seed: u64, m: usize, n: usize, index: u64, rank: Option<usize>) -> PyResult<Self> {
        let mut cfg = GeneratorConfig::new(seed, m, n).index(index);
        cfg.rank = rank;
        Ok(Self { inner: generators::rand_psd_block(&cfg).map_err(gen_err)? })
    }

    #[staticmethod]
    #[pyo3(signature = (seed, m, n, index = 0, terms = None))]
    fn rand_ppt(seed: u64, m: usize, n: usize, index: u64, terms: Option<usize>) -> PyResult<Self> {
        let mut cfg = GeneratorConfig::new(seed, m, n).index(index);
        cfg.terms = terms;
        Ok(Self { inner: generators::rand_ppt_separable(&cfg).map_err(gen_err)? })
    }

    #[staticmethod]
    #[pyo3(signature = (seed, m, n, alpha, index = 0))]
    fn rand_sector(seed: u64, m: usize, n: usize, alpha: f64, index: u64) -> PyResult<Self> {
        let cfg = GeneratorConfig::new(seed, m, n).index(index).alpha(alpha);
        Ok(Self { inner: generators::rand_sector_block(&cfg).map_err(gen_err)? })
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        let inner = harness::load_matrix(path).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(Self { inner })
    }

    fn save(&self, path: &str) -> PyResult<()> {
        harness::save_matrix(path, &self.inner).map_err(|e| PyRuntimeError::new_err(e.to_string()))
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn to_list(&self) -> Rows {
        to_rows(self.inner.matrix())
    }

    fn block(&self, i: usize, j: usize) -> PyResult<Rows> {
        Ok(to_rows(&self.inner.block_at(i, j).map_err(linalg_err)?))
    }

    fn trace(&self) -> Complex64 {
        self.inner.trace()
    }

    fn partial_trace_1(&self) -> Rows {
        to_rows(&self.inner.partial_trace_1())
    }

    fn partial_trace_2(&self) -> Rows {
        to_rows(&self.inner.partial_trace_2())
    }

    fn partial_transpose(&self) -> Self {
        Self { inner: self.inner.partial_transpose() }
    }

    fn is_ppt(&self, tol: Option<f64>) -> PyResult<bool> {
        let v = cones::is_ppt(&self.inner, tol.unwrap_or(cones::DEFAULT_PSD_TOL)).map_err(linalg_err)?;
        Ok(v.is_ppt())
    }

    fn __repr__(&self) -> String {
        format!("BlockMatrix(m={}, n={})", self.inner.m(), self.inner.n())
    }
}

/// Outcome of one inequality check.
#[pyclass(name = "Verdict", module = "pyblockineq", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyVerdict {
    inner: inequalities::Verdict,
}

#[pymethods]
impl PyVerdict {
    #[getter]
    fn id(&self) -> &'static str {
        self.inner.id.as_str()
    }

    #[getter]
    fn lhs(&self) -> f64 {
        self.inner.lhs
    }

    #[getter]
    fn rhs(&self) -> f64 {
        self.inner.rhs
    }

    #[getter]
    fn gap(&self) -> f64 {
        self.inner.gap
    }

    #[getter]
    fn tolerance(&self) -> f64 {
        self.inner.tolerance
    }

    #[getter]
    fn holds(&self) -> bool {
        self.inner.holds
    }

    #[getter]
    fn scale_note(&self) -> &str {
        &self.inner.scale_note
    }

    /// Divisor applied before evaluation (1.0 when none).
    #[getter]
    fn divisor(&self) -> f64 {
        self.inner.normalization.map_or(1.0, |n| n.divisor)
    }

    #[getter]
    fn terms<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let d = PyDict::new(py);
        for (k, v) in self.inner.terms.iter() {
            d.set_item(k, v)?;
        }
        Ok(d)
    }

    fn __repr__(&self) -> String {
        let v = &self.inner;
        format!("Verdict(id={:?}, lhs={}, rhs={}, gap={}, holds={})", v.id.as_str(), v.lhs, v.rhs, v.gap, v.holds)
    }
}

fn verdict(r: Result<inequalities::Verdict, CheckError>) -> PyResult<PyVerdict> {
    r.map(|inner| PyVerdict { inner }).map_err(check_err)
}

/// Runs a single-matrix check by id (`main`, `lin`, `ando`, ...).
#[pyfunction]
#[pyo3(signature = (check, a, q = 1.0, alpha = None))]
fn check(check: &str, a: &PyBlockMatrix, q: f64, alpha: Option<f64>) -> PyResult<PyVerdict> {
    verdict(inequalities::check_block(parse_check(check)?, &a.inner, q, alpha))
}

#[pyfunction]
fn check_det_four(x: Rows, y: Rows, w: Rows, z: Rows) -> PyResult<PyVerdict> {
    verdict(inequalities::check_det_four(&to_matrix(x)?, &to_matrix(y)?, &to_matrix(w)?, &to_matrix(z)?))
}

#[pyfunction]
fn check_three_term(a: Rows, b: Rows, c: Rows) -> PyResult<PyVerdict> {
    verdict(inequalities::check_three_term(&to_matrix(a)?, &to_matrix(b)?, &to_matrix(c)?))
}

/// All check ids, in report order.
#[pyfunction]
fn check_ids() -> Vec<&'static str> {
    CheckId::ALL.iter().map(CheckId::as_str).collect()
}

#[pyfunction]
fn lu_det(a: Rows) -> PyResult<Complex64> {
    matkernel::lu_det(&to_matrix(a)?).map_err(linalg_err)
}

/// Eigenvalues (descending) and eigenvector columns of a Hermitian matrix.
#[pyfunction]
fn hermitian_eig(a: Rows) -> PyResult<(Vec<f64>, Rows)> {
    let s = matkernel::hermitian_eig(&to_matrix(a)?).map_err(linalg_err)?;
    Ok((s.eigenvalues.clone(), to_rows(&s.eigenvectors)))
}

#[pyfunction]
fn singular_values(a: Rows) -> PyResult<Vec<f64>> {
    matkernel::singular_values(&to_matrix(a)?).map_err(linalg_err)
}

#[pyfunction]
fn schatten_norm(a: Rows, q: f64) -> PyResult<f64> {
    matkernel::schatten_norm(&to_matrix(a)?, q).map_err(linalg_err)
}

/// `(alpha_min, re_pd)`: smallest sector half-angle containing W(A).
#[pyfunction]
fn sector_margin(a: Rows) -> PyResult<(f64, bool)> {
    let s = cones::sector_margin(&to_matrix(a)?).map_err(linalg_err)?;
    Ok((s.alpha_min, s.re_pd))
}

#[pyfunction]
#[pyo3(signature = (a, tol = cones::DEFAULT_PSD_TOL))]
fn is_psd(a: Rows, tol: f64) -> PyResult<bool> {
    Ok(cones::is_psd(&to_matrix(a)?, tol).map_err(linalg_err)?.is_psd)
}

/// Runs a verification suite and returns the report as plain Python data.
#[pyfunction]
#[pyo3(signature = (checks, dims, trials, seed, alphas = None, qs = None, workers = None))]
#[allow(clippy::too_many_arguments)]
fn run_suite<'py>(
    py: Python<'py>,
    checks: Vec<String>,
    dims: Vec<(usize, usize)>,
    trials: usize,
    seed: u64,
    alphas: Option<Vec<f64>>,
    qs: Option<Vec<f64>>,
    workers: Option<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let checks = checks.iter().map(|c| parse_check(c)).collect::<PyResult<Vec<_>>>()?;
    let dims = dims.into_iter().map(|(m, n)| BlockShape::new(m, n)).collect();
    let mut cfg = SuiteConfig::new(checks, dims, trials, seed);
    if let Some(a) = alphas {
        cfg.alphas = a;
    }
    if let Some(q) = qs {
        cfg.qs = q;
    }
    let report = py.detach(|| harness::run_suite(&cfg, workers)).map_err(harness_err)?;
    let text = serde_json::to_string(&report).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    json_to_py(py, &text)
}

/// Hill-climbing search for the smallest gap of one check.
#[pyfunction]
#[pyo3(signature = (check, m, n, budget, seed, q = None, alpha = None, explore = false))]
#[allow(clippy::too_many_arguments)]
fn minimize_gap<'py>(
    py: Python<'py>,
    check: &str,
    m: usize,
    n: usize,
    budget: usize,
    seed: u64,
    q: Option<f64>,
    alpha: Option<f64>,
    explore: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let mut cfg = SearchConfig::new(parse_check(check)?, BlockShape::new(m, n), budget, seed);
    cfg.params = Params { q, alpha };
    cfg.explore = explore;
    let rec = py.detach(|| harness::minimize_gap(&cfg)).map_err(harness_err)?;
    let text = serde_json::to_string(&rec).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    json_to_py(py, &text)
}

#[pymodule]
fn pyblockineq(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("HypothesisError", m.py().get_type::<HypothesisError>())?;
    m.add_class::<PyBlockMatrix>()?;
    m.add_class::<PyVerdict>()?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add_function(wrap_pyfunction!(check_det_four, m)?)?;
    m.add_function(wrap_pyfunction!(check_three_term, m)?)?;
    m.add_function(wrap_pyfunction!(check_ids, m)?)?;
    m.add_function(wrap_pyfunction!(lu_det, m)?)?;
    m.add_function(wrap_pyfunction!(hermitian_eig, m)?)?;
    m.add_function(wrap_pyfunction!(singular_values, m)?)?;
    m.add_function(wrap_pyfunction!(schatten_norm, m)?)?;
    m.add_function(wrap_pyfunction!(sector_margin, m)?)?;
    m.add_function(wrap_pyfunction!(is_psd, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    m.add_function(wrap_pyfunction!(minimize_gap, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn list_conversion() {
        let rows = vec![vec![Complex64::new(1.0, 2.0), Complex64::new(0.0, 0.0)], vec![Complex64::new(3.0, 0.0), Complex64::new(0.0, -1.0)]];
        let a = to_matrix(rows.clone()).unwrap();
        assert_eq!(to_rows(&a), rows);
        assert!(to_matrix(vec![vec![Complex64::new(1.0, 0.0)], vec![]]).is_err());
        assert!(parse_check("main").is_ok() && parse_check("x").is_err());
    }
}
