//! Python bindings. Artifacts cross the boundary as their JSON text so
//! that Python code sees exactly the files the CLI writes.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use wzcert::fact1::{Mode, SignChoice};
use wzcert::holonomic::{self, Recurrence, RecurrenceJson};
use wzcert::pipeline::{self, Config};
use wzcert::squares::{self, Extracted};
use wzcert::tables::{self, CoeffTable, Exponent, TableJson};
use wzcert::wz::{self, Ansatz, CertificateJson};
use wzcert::{Error, Vars};

fn err(e: Error) -> PyErr {
    match e {
        Error::Parse { .. } | Error::Usage(_) | Error::Schema(_) | Error::Json(_) => PyValueError::new_err(e.to_string()),
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> PyResult<String> {
    serde_json::to_string_pretty(v).map_err(|e| err(e.into()))
}

/// Exact multivariate polynomial with rational coefficients.
#[pyclass(name = "Poly", frozen, eq, from_py_object)]
#[derive(Clone, PartialEq)]
struct PyPoly(wzcert::Poly);

#[pymethods]
impl PyPoly {
    #[new]
    #[pyo3(signature = (text, vars = vec!["c".to_string()]))]
    fn new(text: &str, vars: Vec<String>) -> PyResult<Self> {
        wzcert::Poly::parse(text, &Vars::new(vars)).map(PyPoly).map_err(err)
    }

    #[getter]
    fn vars(&self) -> Vec<String> {
        self.0.vars().names().to_vec()
    }

    /// Value at a point given as rational strings, one per variable.
    fn evaluate(&self, point: Vec<String>) -> PyResult<String> {
        let pt = point
            .iter()
            .map(|s| wzcert::poly::parse_rational(s))
            .collect::<wzcert::Result<Vec<_>>>()
            .map_err(err)?;
        if pt.len() != self.0.vars().len() {
            return Err(PyValueError::new_err("one value per variable"));
        }
        Ok(self.0.eval_all(&pt).to_string())
    }

    fn __add__(&self, other: &PyPoly) -> PyResult<PyPoly> {
        self.0.same_vars(&other.0).map_err(err)?;
        Ok(PyPoly(&self.0 + &other.0))
    }

    fn __mul__(&self, other: &PyPoly) -> PyResult<PyPoly> {
        self.0.same_vars(&other.0).map_err(err)?;
        Ok(PyPoly(&self.0 * &other.0))
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Poly('{}', {:?})", self.0, self.0.vars().names())
    }
}

/// Table of `[z^n w^k]` coefficients, entries as polynomials in `c`.
#[pyclass(name = "CoeffTable", frozen)]
struct PyCoeffTable(CoeffTable);

#[pymethods]
impl PyCoeffTable {
    #[staticmethod]
    #[pyo3(signature = (n_max, exponent = "-1/2"))]
    fn expand(n_max: usize, exponent: &str) -> PyResult<Self> {
        let e = Exponent::parse(exponent).map_err(err)?;
        Ok(PyCoeffTable(CoeffTable::from_series(e, &tables::kernel_series(e, n_max))))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let j: TableJson = serde_json::from_str(text).map_err(|e| err(e.into()))?;
        CoeffTable::from_json(&j).map(PyCoeffTable).map_err(err)
    }

    #[staticmethod]
    fn from_csv(text: &str) -> PyResult<Self> {
        CoeffTable::from_csv(text.as_bytes()).map(PyCoeffTable).map_err(err)
    }

    #[getter]
    fn n_max(&self) -> usize {
        self.0.n_max
    }

    #[getter]
    fn exponent(&self) -> String {
        self.0.exponent.to_string()
    }

    fn get(&self, k: usize, n: usize) -> Option<PyPoly> {
        self.0.value(k, n).map(PyPoly)
    }

    fn to_json(&self) -> PyResult<String> {
        to_json(&self.0.to_json())
    }

    fn to_csv(&self) -> PyResult<String> {
        let mut buf = Vec::new();
        self.0.to_csv(&mut buf).map_err(err)?;
        Ok(String::from_utf8(buf).expect("csv is utf-8"))
    }

    /// Nonnegativity sample on `{0, 1/m, …, 1}`; returns the number of
    /// negative values.
    #[pyo3(signature = (m = 10))]
    fn negatives_on_grid(&self, m: i64) -> usize {
        tables::sample_nonneg(&self.0, &tables::uniform_grid(m)).negatives.len()
    }

    fn __len__(&self) -> usize {
        self.0.entries().count()
    }
}

/// Linear recurrence with polynomial coefficients.
#[pyclass(name = "Recurrence", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyRecurrence(Recurrence);

#[pymethods]
impl PyRecurrence {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let j: RecurrenceJson = serde_json::from_str(text).map_err(|e| err(e.into()))?;
        Recurrence::from_json(&j).map(PyRecurrence).map_err(err)
    }

    #[getter]
    fn order(&self) -> usize {
        self.0.order()
    }

    #[getter]
    fn vars(&self) -> Vec<String> {
        self.0.vars().names().to_vec()
    }

    fn coeffs(&self) -> Vec<PyPoly> {
        self.0.coeffs().iter().cloned().map(PyPoly).collect()
    }

    fn specialize(&self, name: &str, value: &str) -> PyResult<Self> {
        let v = wzcert::poly::parse_rational(value).map_err(err)?;
        self.0.specialize(name, &v).map(PyRecurrence).map_err(err)
    }

    fn symmetric_square(&self) -> PyResult<Self> {
        holonomic::symmetric_square(&self.0).map(PyRecurrence).map_err(err)
    }

    fn equal_up_to_scalar(&self, other: &PyRecurrence) -> bool {
        holonomic::operator_equal_up_to_scalar(&self.0, &other.0)
    }

    /// Values `a_{n0}, …, a_{n_end}` from the given initial values.
    #[pyo3(signature = (initials, n0, n_end, params = Vec::new()))]
    fn unroll(&self, initials: Vec<PyPoly>, n0: i64, n_end: i64, params: Vec<(String, String)>) -> PyResult<Vec<PyPoly>> {
        let init: Vec<wzcert::Poly> = initials.into_iter().map(|p| p.0).collect();
        let pv = params
            .iter()
            .map(|(k, v)| Ok((k.as_str(), wzcert::poly::parse_rational(v)?)))
            .collect::<wzcert::Result<Vec<_>>>()
            .map_err(err)?;
        holonomic::unroll(&self.0, &init, n0, n_end, &pv)
            .map(|v| v.into_iter().map(PyPoly).collect())
            .map_err(err)
    }

    fn to_json(&self) -> PyResult<String> {
        to_json(&self.0.to_json())
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }
}

/// Telescoping certificate for the `Q^{-1/2}` kernel.
#[pyclass(name = "Certificate", frozen)]
struct PyCertificate(wz::Certificate);

#[pymethods]
impl PyCertificate {
    /// Solve the ansatz `"standard"`, `"printed"` or `"k0"`.
    #[staticmethod]
    #[pyo3(signature = (ansatz = "standard", k = None))]
    fn find(ansatz: &str, k: Option<i64>) -> PyResult<Self> {
        let a = match ansatz {
            "standard" => Ansatz::standard(),
            "printed" => Ansatz::printed(),
            "k0" => Ansatz::k0(),
            other => return Err(PyValueError::new_err(format!("unknown ansatz `{other}`"))),
        };
        wz::find_certificate(&a, k).map(PyCertificate).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let j: CertificateJson = serde_json::from_str(text).map_err(|e| err(e.into()))?;
        wz::Certificate::from_json(&j).map(PyCertificate).map_err(err)
    }

    fn to_json(&self) -> PyResult<String> {
        to_json(&self.0.to_json())
    }

    #[pyo3(signature = (seed = 0, points = 20))]
    fn verify(&self, seed: u64, points: usize) -> bool {
        wz::verify_certificate_with(&self.0, seed, points).ok()
    }

    fn recurrence(&self) -> PyResult<PyRecurrence> {
        wz::rec2_from_certificate(&self.0).map(PyRecurrence).map_err(err)
    }
}

/// Square certificate of a polynomial in `c` as
/// `(rho, e_c, e_1mc, L)`, or `None` for the zero polynomial.
#[pyfunction]
fn square_certificate(p: &PyPoly) -> PyResult<Option<(String, u32, u32, PyPoly)>> {
    match squares::extract(&p.0).map_err(err)? {
        Extracted::Zero => Ok(None),
        Extracted::Cert(c) => Ok(Some((c.rho.to_string(), c.e_c, c.e_1mc, PyPoly(c.l)))),
    }
}

#[pyfunction]
fn poly_sqrt(p: &PyPoly) -> Option<PyPoly> {
    squares::poly_sqrt(&p.0).map(PyPoly)
}

/// Fact-1 residual report as JSON.
#[pyfunction]
#[pyo3(signature = (order, mode = "total", sign = "auto"))]
fn verify_fact1(order: usize, mode: &str, sign: &str) -> PyResult<String> {
    let mode: Mode = mode.parse().map_err(err)?;
    let sign: SignChoice = sign.parse().map_err(err)?;
    to_json(&pipeline::run_fact1(order, mode, sign).map_err(err)?.to_json())
}

/// Full pipeline; returns `(exit_code, report_json)`.
#[pyfunction]
#[pyo3(signature = (n_max = 12, seed = 0, certificate = None, certificate_k0 = None, out_dir = None))]
fn prove_fact2(
    py: Python<'_>,
    n_max: usize,
    seed: u64,
    certificate: Option<&PyCertificate>,
    certificate_k0: Option<&PyCertificate>,
    out_dir: Option<std::path::PathBuf>,
) -> PyResult<(i32, String)> {
    let config = Config {
        n_max,
        seed,
        certificate: certificate.map(|c| c.0.clone()),
        certificate_k0: certificate_k0.map(|c| c.0.clone()),
        out_dir: out_dir.clone(),
        ..Config::default()
    };
    let (report, art) = py.detach(|| pipeline::run_prove_fact2(&config));
    if let Some(dir) = &out_dir {
        pipeline::write_outputs(dir, &report, &art).map_err(err)?;
    }
    Ok((report.exit_code(), report.to_json_string().map_err(err)?))
}

#[pymodule]
fn wzcert_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPoly>()?;
    m.add_class::<PyCoeffTable>()?;
    m.add_class::<PyRecurrence>()?;
    m.add_class::<PyCertificate>()?;
    m.add_function(wrap_pyfunction!(square_certificate, m)?)?;
    m.add_function(wrap_pyfunction!(poly_sqrt, m)?)?;
    m.add_function(wrap_pyfunction!(verify_fact1, m)?)?;
    m.add_function(wrap_pyfunction!(prove_fact2, m)?)?;
    Ok(())
}
