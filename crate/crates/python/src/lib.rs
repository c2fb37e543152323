//! Python bindings: `import celcs`.

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyInt};

use celcs::counting::{self, DescentKind};
use celcs::cube::{self, CubeDecomposition};
use celcs::descent;
use celcs::harness::Harness;
use celcs::{BruteForce, CountQuery, CountResult, TheoremId};

create_exception!(celcs, CelcsError, PyException);

fn err(e: celcs::Error) -> PyErr {
    CelcsError::new_err(e.to_string())
}

fn engine(budget: Option<u64>) -> BruteForce {
    budget.map(BruteForce::new).unwrap_or_else(BruteForce::from_env)
}

/// A binary sequence of period `2^n`.
#[pyclass(name = "Seq", module = "celcs", frozen, eq, hash, from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PySeq(celcs::Seq);

/// A sequence argument: a `Seq` or its text form.
#[derive(FromPyObject)]
enum SeqArg {
    Seq(PySeq),
    Text(String),
}

impl SeqArg {
    fn get(self) -> PyResult<celcs::Seq> {
        match self {
            SeqArg::Seq(s) => Ok(s.0),
            SeqArg::Text(t) => celcs::parse_sequence(&t, None).map_err(err),
        }
    }
}

#[pymethods]
impl PySeq {
    /// Parses binary digits (whitespace ignored) or `0x` hex.
    #[new]
    #[pyo3(signature = (text, n = None))]
    fn new(text: &str, n: Option<u32>) -> PyResult<Self> {
        celcs::parse_sequence(text, n).map(PySeq).map_err(err)
    }

    #[staticmethod]
    fn zero(n: u32) -> Self {
        PySeq(celcs::Seq::zero(n))
    }

    #[staticmethod]
    fn from_positions(n: u32, positions: Vec<usize>) -> PyResult<Self> {
        celcs::Seq::from_positions(n, &positions).map(PySeq).map_err(err)
    }

    #[getter]
    fn n(&self) -> u32 {
        self.0.n()
    }

    #[getter]
    fn weight(&self) -> usize {
        self.0.weight()
    }

    fn positions(&self) -> Vec<usize> {
        self.0.positions()
    }

    fn bits(&self) -> Vec<bool> {
        (0..self.0.len()).map(|i| self.0.get(i)).collect()
    }

    fn linear_complexity(&self) -> u64 {
        self.0.linear_complexity()
    }

    fn left(&self) -> PyResult<Self> {
        self.0.left().map(PySeq).map_err(err)
    }

    fn right(&self) -> PyResult<Self> {
        self.0.right().map(PySeq).map_err(err)
    }

    fn phi(&self) -> PyResult<Self> {
        self.0.phi().map(PySeq).map_err(err)
    }

    fn __add__(&self, other: SeqArg) -> PyResult<Self> {
        self.0.add(&other.get()?).map(PySeq).map_err(err)
    }

    fn __xor__(&self, other: SeqArg) -> PyResult<Self> {
        self.__add__(other)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __str__(&self) -> String {
        self.0.to_text()
    }

    fn __repr__(&self) -> String {
        format!("Seq({:?})", self.0.to_text())
    }
}

/// Exponent set `S(2^n - L)`.
#[pyclass(name = "Mask", module = "celcs", frozen, eq, hash, from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyMask(celcs::Mask);

#[pymethods]
impl PyMask {
    #[new]
    fn new(n: u32, indices: Vec<u32>) -> PyResult<Self> {
        celcs::Mask::from_indices(n, &indices).map(PyMask).map_err(err)
    }

    /// The mask of complexity `lc`, `0 < lc <= 2^n`.
    #[staticmethod]
    fn from_lc(n: u32, lc: u64) -> PyResult<Self> {
        celcs::Mask::from_lc(n, lc).map(PyMask).map_err(err)
    }

    #[staticmethod]
    fn parse(n: u32, text: &str) -> PyResult<Self> {
        celcs::Mask::parse(n, text).map(PyMask).map_err(err)
    }

    #[getter]
    fn n(&self) -> u32 {
        self.0.n()
    }

    #[getter]
    fn lc(&self) -> u64 {
        self.0.lc()
    }

    #[getter]
    fn weight(&self) -> u32 {
        self.0.weight()
    }

    fn indices(&self) -> Vec<u32> {
        self.0.indices().collect()
    }

    fn __and__(&self, other: &PyMask) -> PyResult<Self> {
        self.0.intersect(&other.0).map(PyMask).map_err(err)
    }

    fn __or__(&self, other: &PyMask) -> PyResult<Self> {
        self.0.union(&other.0).map(PyMask).map_err(err)
    }

    fn __sub__(&self, other: &PyMask) -> PyResult<Self> {
        self.0.difference(&other.0).map(PyMask).map_err(err)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Mask({}, {:?})", self.0.n(), self.indices())
    }
}

/// A cube: `2^m` positions closed under a set of edges with distinct 2-adic
/// exponents.
#[pyclass(name = "Cube", module = "celcs", frozen, eq, from_py_object)]
#[derive(Clone, PartialEq, Eq)]
struct PyCube(celcs::Cube);

#[pymethods]
impl PyCube {
    #[staticmethod]
    fn from_offsets(n: u32, base: u64, offsets: Vec<u64>) -> PyResult<Self> {
        celcs::Cube::from_offsets(n, base, &offsets).map(PyCube).map_err(err)
    }

    #[staticmethod]
    fn from_positions(n: u32, positions: Vec<usize>) -> PyResult<Self> {
        celcs::Cube::from_positions(n, &positions).map(PyCube).map_err(err)
    }

    #[staticmethod]
    fn from_seq(s: SeqArg) -> PyResult<Self> {
        celcs::Cube::from_seq(&s.get()?).map(PyCube).map_err(err)
    }

    #[staticmethod]
    fn parse(n: u32, text: &str) -> PyResult<Self> {
        celcs::Cube::parse(n, text).map(PyCube).map_err(err)
    }

    #[getter]
    fn n(&self) -> u32 {
        self.0.n()
    }

    #[getter]
    fn dim(&self) -> u32 {
        self.0.dim()
    }

    #[getter]
    fn lc(&self) -> u64 {
        self.0.lc()
    }

    #[getter]
    fn base(&self) -> usize {
        self.0.base()
    }

    fn positions(&self) -> Vec<usize> {
        self.0.positions().to_vec()
    }

    fn offsets(&self) -> Option<Vec<u64>> {
        self.0.offsets()
    }

    fn exponents(&self) -> PyMask {
        PyMask(self.0.exponents())
    }

    fn to_seq(&self) -> PySeq {
        PySeq(self.0.to_seq())
    }

    fn __str__(&self) -> String {
        self.0.to_text()
    }

    fn __repr__(&self) -> String {
        format!("Cube({}, {:?})", self.0.n(), self.0.to_text())
    }
}

fn decomposition(d: CubeDecomposition) -> (Vec<PyCube>, Option<PySeq>) {
    (d.cubes.into_iter().map(PyCube).collect(), d.remainder.map(PySeq))
}

/// Games-Chan linear complexity.
#[pyfunction]
fn lc(s: SeqArg) -> PyResult<u64> {
    Ok(s.get()?.linear_complexity())
}

/// Linear complexity by repeated division by `x + 1`.
#[pyfunction]
fn lc_poly_oracle(s: SeqArg) -> PyResult<u64> {
    Ok(celcs::lc_poly_oracle(&s.get()?))
}

#[pyfunction]
#[pyo3(signature = (s, k, budget = None))]
fn kerror_lc(s: SeqArg, k: u64, budget: Option<u64>) -> PyResult<u64> {
    engine(budget).kerror_lc(&s.get()?, k).map_err(err)
}

/// Critical points `[(k, L_k), ...]`.
#[pyfunction]
#[pyo3(signature = (s, budget = None))]
fn celcs_points(s: SeqArg, budget: Option<u64>) -> PyResult<Vec<(u64, u64)>> {
    Ok(engine(budget).celcs(&s.get()?).map_err(err)?.points().to_vec())
}

#[pyfunction]
#[pyo3(signature = (s, k, budget = None))]
fn error_witness(s: SeqArg, k: u64, budget: Option<u64>) -> PyResult<PySeq> {
    engine(budget).error_witness(&s.get()?, k).map(PySeq).map_err(err)
}

#[pyfunction]
fn first_descent_k(s: SeqArg) -> PyResult<u64> {
    celcs::spectrum::first_descent_k(&s.get()?).map_err(err)
}

/// `(cubes, remainder)` of the standard decomposition.
#[pyfunction]
fn standard_decomposition(s: SeqArg) -> PyResult<(Vec<PyCube>, Option<PySeq>)> {
    Ok(decomposition(cube::standard_decomposition(&s.get()?)))
}

/// `(cubes, remainder)` of the k-error decomposition, optionally stopped
/// after `partial` cubes.
#[pyfunction]
#[pyo3(signature = (s, partial = None, budget = None))]
fn kerror_decomposition(
    s: SeqArg,
    partial: Option<usize>,
    budget: Option<u64>,
) -> PyResult<(Vec<PyCube>, Option<PySeq>)> {
    let s = s.get()?;
    let e = engine(budget);
    let d = match partial {
        Some(m) => cube::kerror_decomposition_partial_with(&s, m, &e),
        None => cube::kerror_decomposition_with(&s, &e),
    };
    d.map(decomposition).map_err(err)
}

#[pyfunction]
fn k2_second_descent(s0: &PyMask, s1: &PyMask) -> PyResult<u64> {
    descent::k2_second_descent(&s0.0, &s1.0).map_err(err)
}

/// `"REDUCED"` or `"PLAIN"`.
#[pyfunction]
fn k3_conditions(s0: &PyMask, s1: &PyMask, s2: &PyMask) -> PyResult<String> {
    Ok(descent::k3_conditions(&s0.0, &s1.0, &s2.0).map_err(err)?.to_string())
}

#[pyfunction]
fn k3_third_descent(s0: &PyMask, s1: &PyMask, s2: &PyMask) -> PyResult<u64> {
    descent::k3_third_descent(&s0.0, &s1.0, &s2.0).map_err(err)
}

#[pyfunction]
fn prop31_next_k(si: &PyMask, ki: u64) -> PyResult<u64> {
    descent::prop31_next_k(&si.0, ki).map_err(err)
}

fn kind(name: &str) -> PyResult<DescentKind> {
    match name {
        "3err" => Ok(DescentKind::ThreeError),
        "4err" => Ok(DescentKind::FourError),
        _ => Err(CelcsError::new_err(format!(
            "kind must be \"3err\" or \"4err\", got {name:?}"
        ))),
    }
}

#[pyfunction]
#[pyo3(signature = (kind_name, first, i0 = None))]
fn second_descent_possible(kind_name: &str, first: &PyMask, i0: Option<u32>) -> PyResult<bool> {
    counting::second_descent_possible(kind(kind_name)?, &first.0, i0).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (kind_name, n, i, j, lc, i0 = None))]
fn allowed_final_lc(kind_name: &str, n: u32, i: u32, j: u32, lc: u64, i0: Option<u32>) -> PyResult<bool> {
    counting::allowed_final_lc(kind(kind_name)?, n, i0, i, j, lc).map_err(err)
}

fn count_value(py: Python<'_>, c: CountResult) -> PyResult<Bound<'_, PyAny>> {
    PyInt::new(py, 1).call_method1("__lshift__", (c.exponent,))
}

/// Number of sequences of period `2^n` and complexity `lc`.
#[pyfunction]
fn rueppel_count(py: Python<'_>, n: u32, lc: u64) -> PyResult<Bound<'_, PyAny>> {
    count_value(py, counting::rueppel_count(n, lc).map_err(err)?)
}

/// Sequences of full complexity with first descent to `2^n - 2^i - 2^j` and
/// third-error complexity `lc`.
#[pyfunction]
fn count_t43(py: Python<'_>, n: u32, i: u32, j: u32, lc: u64) -> PyResult<Bound<'_, PyAny>> {
    let q = CountQuery { n, i0: None, i, j, lc };
    count_value(py, counting::count_t43(&q).map_err(err)?)
}

/// Sequences of complexity `2^n - 2^i0` with second descent to
/// `2^n - 2^i - 2^j` and fourth-error complexity `lc`.
#[pyfunction]
fn count_t53(py: Python<'_>, n: u32, i0: u32, i: u32, j: u32, lc: u64) -> PyResult<Bound<'_, PyAny>> {
    let q = CountQuery {
        n,
        i0: Some(i0),
        i,
        j,
        lc,
    };
    count_value(py, counting::count_t53(&q).map_err(err)?)
}

/// Verification report as a dict; sampled when `samples` is given.
#[pyfunction]
#[pyo3(signature = (theorem, n, samples = None, seed = 0, budget = None))]
fn verify<'py>(
    py: Python<'py>,
    theorem: &str,
    n: u32,
    samples: Option<u64>,
    seed: u64,
    budget: Option<u64>,
) -> PyResult<Bound<'py, PyAny>> {
    let id: TheoremId = theorem.parse().map_err(err)?;
    let harness = Harness {
        engine: engine(budget),
        ..Harness::default()
    };
    let report = py
        .detach(|| match samples {
            Some(samples) => harness.verify_sampled(id, n, samples, seed),
            None => harness.verify_exhaustive(id, n),
        })
        .map_err(err)?;
    let text = serde_json::to_string(&report).expect("reports serialize");
    py.import("json")?.call_method1("loads", (text,))
}

/// `{L: count}` over all sequences of period `2^n`.
#[pyfunction]
fn lc_histogram<'py>(py: Python<'py>, n: u32) -> PyResult<Bound<'py, PyDict>> {
    let h = py.detach(|| Harness::default().lc_histogram(n)).map_err(err)?;
    let d = PyDict::new(py);
    for (l, c) in h {
        d.set_item(l, c)?;
    }
    Ok(d)
}

#[pymodule(name = "celcs")]
fn celcs_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("CelcsError", m.py().get_type::<CelcsError>())?;
    m.add_class::<PySeq>()?;
    m.add_class::<PyMask>()?;
    m.add_class::<PyCube>()?;
    m.add_function(wrap_pyfunction!(lc, m)?)?;
    m.add_function(wrap_pyfunction!(lc_poly_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(kerror_lc, m)?)?;
    m.add_function(wrap_pyfunction!(celcs_points, m)?)?;
    m.add("celcs", m.getattr("celcs_points")?)?;
    m.add_function(wrap_pyfunction!(error_witness, m)?)?;
    m.add_function(wrap_pyfunction!(first_descent_k, m)?)?;
    m.add_function(wrap_pyfunction!(standard_decomposition, m)?)?;
    m.add_function(wrap_pyfunction!(kerror_decomposition, m)?)?;
    m.add_function(wrap_pyfunction!(k2_second_descent, m)?)?;
    m.add_function(wrap_pyfunction!(k3_conditions, m)?)?;
    m.add_function(wrap_pyfunction!(k3_third_descent, m)?)?;
    m.add_function(wrap_pyfunction!(prop31_next_k, m)?)?;
    m.add_function(wrap_pyfunction!(second_descent_possible, m)?)?;
    m.add_function(wrap_pyfunction!(allowed_final_lc, m)?)?;
    m.add_function(wrap_pyfunction!(rueppel_count, m)?)?;
    m.add_function(wrap_pyfunction!(count_t43, m)?)?;
    m.add_function(wrap_pyfunction!(count_t53, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(lc_histogram, m)?)?;
    Ok(())
}
