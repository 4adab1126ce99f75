//! Python bindings: point counting, zeta functions and the zeta-element checks.

use std::fmt::Display;

use frobzeta::cli::CliError;
use frobzeta::variety::{self, SchemeSpec};
use frobzeta::zetael::{self, Level};
use frobzeta::zetafn::{self, RationalFn};
use num_bigint::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err(e: impl Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn level(p: u64, k: u32, n: Option<usize>) -> PyResult<Level> {
    match n {
        Some(n) => Level::group(p, k, n),
        None => Level::plain(p, k),
    }
    .map_err(err)
}

/// A scheme over a finite field, read from scheme-file TOML.
#[pyclass(name = "Scheme", frozen)]
struct PyScheme(SchemeSpec);

#[pymethods]
impl PyScheme {
    #[new]
    fn new(toml: &str) -> PyResult<Self> {
        variety::parse_scheme_file(toml).map(PyScheme).map_err(err)
    }

    #[staticmethod]
    fn from_file(path: &str) -> PyResult<Self> {
        SchemeSpec::from_file(path).map(PyScheme).map_err(err)
    }

    /// `#X(F_{q^n})`.
    fn count(&self, n: u32) -> PyResult<u64> {
        variety::count_points(&self.0, n).map_err(err)
    }

    /// Counts for `n = 1..=big_n`.
    fn counts(&self, big_n: u32) -> PyResult<Vec<u64>> {
        variety::count_series(&self.0, big_n).map_err(err)
    }

    /// The zeta function as `(numerator, denominator)` coefficient lists.
    fn zeta(&self) -> PyResult<(Vec<BigInt>, Vec<BigInt>)> {
        let r = zetafn::reconstruct_from_counts(|n| variety::count_series(&self.0, n as u32).map_err(CliError::from)).map_err(err)?;
        Ok(parts(&r.function))
    }

    fn digest(&self) -> String {
        self.0.digest()
    }

    fn __repr__(&self) -> String {
        format!("Scheme({} over F_{}, {})", self.0.ambient(), self.0.base().size(), self.0.digest())
    }
}

fn parts(f: &RationalFn) -> (Vec<BigInt>, Vec<BigInt>) {
    (f.numerator().to_vec(), f.denominator().to_vec())
}

/// Zeta coefficients `Z(u) mod u^{order+1}` from counts, as `(num, den)` pairs.
#[pyfunction]
fn zeta_series(counts: Vec<u64>, order: usize) -> PyResult<Vec<(BigInt, BigInt)>> {
    let s = zetafn::zeta_series(&counts, order).map_err(err)?;
    Ok(s.coeffs().iter().map(|c| (c.numer().clone(), c.denom().clone())).collect())
}

/// A free `Z_p`-module of finite rank with an endomorphism `phi`.
#[pyclass(name = "PhiModule", frozen, from_py_object)]
#[derive(Clone)]
struct PyPhiModule(zetael::PhiModule);

#[pymethods]
impl PyPhiModule {
    #[new]
    fn new(p: u64, phi: Vec<Vec<i64>>) -> PyResult<Self> {
        zetael::PhiModule::new(p, phi).map(PyPhiModule).map_err(err)
    }

    #[getter]
    fn p(&self) -> u64 {
        self.0.p()
    }

    #[getter]
    fn rank(&self) -> usize {
        self.0.rank()
    }

    #[getter]
    fn phi(&self) -> Vec<Vec<i64>> {
        self.0.phi().to_vec()
    }

    fn det(&self) -> BigInt {
        self.0.det()
    }

    /// `det(1 - phi u)`, constant term first.
    fn charpoly(&self) -> Vec<BigInt> {
        self.0.charpoly()
    }

    fn direct_sum(&self, other: &PyPhiModule) -> PyResult<Self> {
        self.0.direct_sum(&other.0).map(PyPhiModule).map_err(err)
    }

    fn induced(&self, d: u32) -> PyResult<Self> {
        self.0.induced(d).map(PyPhiModule).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("PhiModule(p={}, {})", self.0.p(), self.0)
    }
}

/// A finite set of closed points with modules, or a catalogued variety.
#[pyclass(name = "SiteObject", frozen)]
struct PySiteObject(zetael::SiteObject);

#[pymethods]
impl PySiteObject {
    /// `⊔ Spec F_{q^d}` over `F_q`, given `(d, module)` pairs.
    #[staticmethod]
    fn points(q: u64, components: Vec<(u32, PyPhiModule)>) -> Self {
        PySiteObject(zetael::SiteObject::Points { q, components: components.into_iter().map(|(d, m)| (d, m.0)).collect() })
    }

    /// A catalogue entry such as `"P2/F3"`, with coefficients `Z_p`.
    #[staticmethod]
    fn catalog(name: &str, p: u64) -> PyResult<Self> {
        zetael::catalog_entry(name, p).map(|e| PySiteObject(zetael::SiteObject::Catalog(e))).map_err(err)
    }

    #[getter]
    fn q(&self) -> u64 {
        self.0.q()
    }

    /// The L-function as `(numerator, denominator)`.
    fn lfunction(&self) -> PyResult<(Vec<BigInt>, Vec<BigInt>)> {
        self.0.lfunction().map(|f| parts(&f)).map_err(err)
    }

    /// Coordinate of the zeta element as JSON.
    #[pyo3(signature = (p, k, n=None))]
    fn zeta_element(&self, p: u64, k: u32, n: Option<usize>) -> PyResult<String> {
        let z = zetael::zeta_element(&self.0, &level(p, k, n)?).map_err(err)?;
        Ok(z.coordinate().to_json().to_string())
    }

    /// Coordinate of the zeta element against the acyclicity trivialisation,
    /// as JSON, or `None` when undefined at this level.
    #[pyo3(signature = (p, k, n=None))]
    fn acyclicity(&self, p: u64, k: u32, n: Option<usize>) -> PyResult<Option<String>> {
        let z = zetael::zeta_element(&self.0, &level(p, k, n)?).map_err(err)?;
        Ok(zetael::acyclicity_coordinate(&z).value().map(|c| c.to_json().to_string()))
    }

    fn __repr__(&self) -> String {
        format!("SiteObject({})", self.0.describe())
    }
}

/// Outcome of one check.
#[pyclass(name = "Report", frozen)]
struct PyReport(zetael::Report);

#[pymethods]
impl PyReport {
    #[getter]
    fn check(&self) -> &str {
        &self.0.check
    }

    #[getter]
    fn object(&self) -> &str {
        &self.0.object
    }

    /// `"PASS"`, `"FAIL"`, `"INCONCLUSIVE"` or `"HYPOTHESIS-FAILURE"`.
    #[getter]
    fn verdict(&self) -> String {
        self.0.verdict.to_string()
    }

    #[getter]
    fn detail(&self) -> &str {
        &self.0.detail
    }

    fn json(&self) -> PyResult<String> {
        serde_json::to_string(&self.0).map_err(err)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Report({} on {}: {})", self.0.check, self.0.object, self.0.verdict)
    }
}

fn report(r: Result<zetael::Report, zetael::ZetaElError>) -> PyResult<PyReport> {
    r.map(PyReport).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (obj, n, k=2))]
fn verify_zeta_eq_element(obj: &PySiteObject, n: usize, k: u32) -> PyResult<PyReport> {
    report(zetael::verify_zeta_eq_element(&obj.0, n, k))
}

#[pyfunction]
#[pyo3(signature = (obj, k=2))]
fn verify_zeta_value(obj: &PySiteObject, k: u32) -> PyResult<PyReport> {
    report(zetael::verify_zeta_value(&obj.0, k))
}

#[pyfunction]
#[pyo3(signature = (obj, n_big, n, k=2))]
fn verify_base_change(obj: &PySiteObject, n_big: usize, n: usize, k: u32) -> PyResult<PyReport> {
    report(zetael::verify_base_change(&obj.0, n_big, n, k))
}

#[pyfunction]
#[pyo3(signature = (obj, chain, k=2))]
fn verify_norm_system(obj: &PySiteObject, chain: Vec<usize>, k: u32) -> PyResult<PyReport> {
    report(zetael::verify_norm_system(&obj.0, &chain, k))
}

#[pyfunction]
#[pyo3(signature = (q, sub, total, quot, k=2, n=None))]
fn verify_triangle(q: u64, sub: &PyPhiModule, total: &PyPhiModule, quot: &PyPhiModule, k: u32, n: Option<usize>) -> PyResult<PyReport> {
    let level = level(total.0.p(), k, n)?;
    report(zetael::verify_triangle(q, &sub.0, &total.0, &quot.0, &level))
}

#[pyfunction]
#[pyo3(signature = (q, d, m, k=2, n=None))]
fn verify_pushforward(q: u64, d: u32, m: &PyPhiModule, k: u32, n: Option<usize>) -> PyResult<PyReport> {
    let level = level(m.0.p(), k, n)?;
    report(zetael::verify_pushforward(q, d, &m.0, &level))
}

/// Names accepted by [`validate_catalog`], without the `/F_q` suffix.
#[pyfunction]
fn catalog_names() -> Vec<&'static str> {
    zetael::CATALOG_NAMES.to_vec()
}

/// Compares a catalogue entry's cohomological L-function with point counts.
#[pyfunction]
#[pyo3(signature = (name, p=5))]
fn validate_catalog(name: &str, p: u64) -> PyResult<PyReport> {
    let entry = zetael::catalog_entry(name, p).map_err(err)?;
    report(zetael::validate_catalog(&entry))
}

#[pymodule]
fn frobzeta_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("CONVENTION", zetael::CONVENTION)?;
    m.add_class::<PyScheme>()?;
    m.add_class::<PyPhiModule>()?;
    m.add_class::<PySiteObject>()?;
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(zeta_series, m)?)?;
    m.add_function(wrap_pyfunction!(verify_zeta_eq_element, m)?)?;
    m.add_function(wrap_pyfunction!(verify_zeta_value, m)?)?;
    m.add_function(wrap_pyfunction!(verify_base_change, m)?)?;
    m.add_function(wrap_pyfunction!(verify_norm_system, m)?)?;
    m.add_function(wrap_pyfunction!(verify_triangle, m)?)?;
    m.add_function(wrap_pyfunction!(verify_pushforward, m)?)?;
    m.add_function(wrap_pyfunction!(catalog_names, m)?)?;
    m.add_function(wrap_pyfunction!(validate_catalog, m)?)?;
    Ok(())
}
