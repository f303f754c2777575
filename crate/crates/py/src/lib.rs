//! Python bindings: parameters, Fock representations, relation checks,
//! deformed calculus, OPE and correlator functions. Reports come back as
//! plain dicts.

use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use qdeform_core::document::{point_value, ReportDocument};
use qdeform_core::laurent::LaurentPoly;
use qdeform_core::suites::{self, Point, Suite};
use qdeform_core::{correlators, fock, ope, qcalculus, relations, Error, RawParams, RelationId};

fn to_py_err(err: Error) -> PyErr {
    PyValueError::new_err(format!("{}: {err}", err.kind()))
}

fn json_to_py<'py>(py: Python<'py>, value: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn poly_from(map: HashMap<i64, Complex64>) -> LaurentPoly {
    LaurentPoly::from_terms(map)
}

fn poly_to(poly: &LaurentPoly) -> BTreeMap<i64, Complex64> {
    poly.terms().collect()
}

/// Validated (p, q; alpha, gamma, l) parameters.
#[pyclass(name = "DeformationParams", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyParams {
    inner: qdeform_core::DeformationParams,
}

#[pymethods]
impl PyParams {
    #[new]
    #[pyo3(signature = (p, q, alpha = 1.0, gamma = 1.0, l = 1.0, ladder = false))]
    fn new(p: f64, q: f64, alpha: f64, gamma: f64, l: f64, ladder: bool) -> PyResult<Self> {
        let inner = if ladder {
            qdeform_core::DeformationParams::ladder(p, q, alpha, gamma, l)
        } else {
            qdeform_core::DeformationParams::new(p, q, alpha, gamma, l)
        };
        inner.map(|inner| PyParams { inner }).map_err(to_py_err)
    }

    #[getter]
    fn p(&self) -> f64 {
        self.inner.p()
    }

    #[getter]
    fn q(&self) -> f64 {
        self.inner.q()
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.alpha()
    }

    #[getter]
    fn gamma(&self) -> f64 {
        self.inner.gamma()
    }

    #[getter]
    fn l(&self) -> f64 {
        self.inner.l()
    }

    /// Ladder step s = l / (alpha gamma).
    #[getter]
    fn step(&self) -> f64 {
        self.inner.step()
    }

    #[getter]
    fn is_ladder(&self) -> bool {
        self.inner.is_ladder()
    }

    fn bracket(&self, x: f64) -> f64 {
        self.inner.bracket(x)
    }

    fn bracket_factorial(&self, n: u32) -> f64 {
        self.inner.bracket_factorial(n)
    }

    fn __repr__(&self) -> String {
        let r = self.inner.raw();
        format!("DeformationParams(p={}, q={}, alpha={}, gamma={}, l={})", r.p, r.q, r.alpha, r.gamma, r.l)
    }
}

fn variant_from(name: &str) -> PyResult<fock::Variant> {
    use fock::Variant::*;
    [GD, GChJ, GChJShifted, GHYShifted]
        .into_iter()
        .find(|v| v.name() == name)
        .ok_or_else(|| PyValueError::new_err(format!("unknown variant {name:?}")))
}

/// Truncated Fock representation of one oscillator variant.
#[pyclass(name = "FockRep", frozen)]
struct PyFockRep {
    inner: fock::FockRep,
}

fn rows(m: &nalgebra::DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

#[pymethods]
impl PyFockRep {
    #[new]
    #[pyo3(signature = (variant, params, dim, nu0 = 0.0))]
    fn new(variant: &str, params: PyParams, dim: usize, nu0: f64) -> PyResult<Self> {
        let inner = fock::build(variant_from(variant)?, &params.inner, dim, nu0).map_err(to_py_err)?;
        Ok(PyFockRep { inner })
    }

    #[getter]
    fn variant(&self) -> &'static str {
        self.inner.variant.name()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim
    }

    #[getter]
    fn a(&self) -> Vec<Vec<f64>> {
        rows(&self.inner.a)
    }

    #[getter]
    fn adag(&self) -> Vec<Vec<f64>> {
        rows(&self.inner.adag)
    }

    #[getter]
    fn numbers(&self) -> Vec<f64> {
        self.inner.numbers()
    }

    /// Check one named relation, e.g. "GChJ_8"; returns a report dict.
    #[pyo3(signature = (relation, tol = 1e-10))]
    fn check<'py>(&self, py: Python<'py>, relation: &str, tol: f64) -> PyResult<Bound<'py, PyAny>> {
        let id = RelationId::from_name(relation)
            .ok_or_else(|| PyValueError::new_err(format!("unknown relation {relation:?}")))?;
        let report = relations::check_relation(&self.inner, id, tol).map_err(to_py_err)?;
        let value = serde_json::json!({
            "relation": report.relation,
            "residual": report.residual,
            "verdict": report.verdict.label(),
            "note": report.note,
        });
        json_to_py(py, &value)
    }

    fn casimir_c1(&self) -> PyResult<Vec<Vec<f64>>> {
        relations::casimir_c1(&self.inner).map(|m| rows(&m)).map_err(to_py_err)
    }
}

#[pyfunction]
fn deformed_derivative(phi: HashMap<i64, Complex64>, params: PyParams) -> BTreeMap<i64, Complex64> {
    poly_to(&qcalculus::deformed_derivative(&poly_from(phi), &params.inner))
}

#[pyfunction]
fn delta_n(phi: HashMap<i64, Complex64>, n: i64, h: f64, params: PyParams) -> BTreeMap<i64, Complex64> {
    poly_to(&qcalculus::delta_n(&poly_from(phi), n, h, &params.inner))
}

#[pyfunction]
fn general_variation(
    phi: HashMap<i64, Complex64>,
    eps: HashMap<i64, Complex64>,
    h: f64,
    params: PyParams,
) -> PyResult<BTreeMap<i64, Complex64>> {
    qcalculus::general_variation(&poly_from(phi), &poly_from(eps), h, &params.inner)
        .map(|p| poly_to(&p))
        .map_err(to_py_err)
}

#[pyfunction]
fn ope_residue_variation(phi: HashMap<i64, Complex64>, n: i64, h: f64, params: PyParams) -> BTreeMap<i64, Complex64> {
    poly_to(&ope::ope_residue_variation(&poly_from(phi), n, h, &params.inner))
}

/// Coefficients of [L_n, phi_m] by mode index.
#[pyfunction]
fn mode_bracket(
    n: i64,
    m: i64,
    h: f64,
    modes: HashMap<i64, Complex64>,
    params: PyParams,
) -> (BTreeMap<i64, Complex64>, Complex64) {
    let modes: BTreeMap<i64, Complex64> = modes.into_iter().collect();
    let result = ope::mode_bracket(n, m, h, &modes, &params.inner);
    (result.coefficients, result.expected)
}

#[pyfunction]
fn virasoro_structure(n: i64, m: i64, params: PyParams) -> (f64, f64, f64) {
    ope::virasoro_structure(n, m, &params.inner)
}

#[pyfunction]
#[pyo3(signature = (x, r, rel_tol = 1e-12))]
fn qpochhammer(x: Complex64, r: f64, rel_tol: f64) -> PyResult<Complex64> {
    correlators::qpochhammer(x, r, rel_tol).map(|q| q.value).map_err(to_py_err)
}

#[pyfunction]
fn h_a(z: Complex64, a: Complex64, r: f64) -> PyResult<Complex64> {
    correlators::h_a(z, a, r).map_err(to_py_err)
}

#[pyfunction]
fn two_point(z1: Complex64, z2: Complex64, h: f64, params: PyParams) -> PyResult<Complex64> {
    correlators::two_point(z1, z2, h, &params.inner).map_err(to_py_err)
}

/// Largest Delta(K-1) Ward residual over the standard sample points.
#[pyfunction]
#[pyo3(signature = (h, params, omega = None))]
fn ward_residual(h: f64, params: PyParams, omega: Option<f64>) -> PyResult<f64> {
    let points = correlators::sample_points(h, &params.inner).map_err(to_py_err)?;
    let omega = omega.unwrap_or(-2.0 * h);
    correlators::ward_residual(h, h, &params.inner, &points, omega, 1e-8).map(|r| r.residual).map_err(to_py_err)
}

/// Run a named suite at one point; returns the record as a dict.
#[pyfunction]
#[pyo3(signature = (suite, p, q, alpha = 1.0, gamma = 1.0, l = 1.0, nu0 = 0.0, h = 1.0, j = 1.0, dim = 8, tol = 1e-10))]
#[allow(clippy::too_many_arguments)]
fn run_suite<'py>(
    py: Python<'py>,
    suite: &str,
    p: f64,
    q: f64,
    alpha: f64,
    gamma: f64,
    l: f64,
    nu0: f64,
    h: f64,
    j: f64,
    dim: usize,
    tol: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let suite: Suite = suite.parse().map_err(PyValueError::new_err)?;
    let point = Point { params: RawParams::new(p, q, alpha, gamma, l), nu0, h, j, dim };
    let record = suites::run_suite(suite, &point, tol);
    let doc = ReportDocument::new(serde_json::json!({"point": point_value(&point)}), vec![record], false);
    let value = doc.to_value();
    json_to_py(py, &value["records"][0])
}

#[pymodule]
fn qdeform(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyParams>()?;
    m.add_class::<PyFockRep>()?;
    m.add_function(wrap_pyfunction!(deformed_derivative, m)?)?;
    m.add_function(wrap_pyfunction!(delta_n, m)?)?;
    m.add_function(wrap_pyfunction!(general_variation, m)?)?;
    m.add_function(wrap_pyfunction!(ope_residue_variation, m)?)?;
    m.add_function(wrap_pyfunction!(mode_bracket, m)?)?;
    m.add_function(wrap_pyfunction!(virasoro_structure, m)?)?;
    m.add_function(wrap_pyfunction!(qpochhammer, m)?)?;
    m.add_function(wrap_pyfunction!(h_a, m)?)?;
    m.add_function(wrap_pyfunction!(two_point, m)?)?;
    m.add_function(wrap_pyfunction!(ward_residual, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    Ok(())
}
