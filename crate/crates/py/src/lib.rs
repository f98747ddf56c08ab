//! Python bindings. Reports come back as plain dicts and lists.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

use fracyam::compactify::{self, CompactKind};
use fracyam::geometry::{self, WarpSpec};
use fracyam::scattering::{self, SolveOptions};
use fracyam::{escobar, specfun, verify, yamabe, Error};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Domain { .. } | Error::Pole(_) | Error::InvalidWarp(_) | Error::Config(_) | Error::Unsupported(_) => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

/// Serialize through JSON into native Python objects.
fn to_object<T: Serialize>(py: Python<'_>, v: &T) -> PyResult<Py<PyAny>> {
    let s = serde_json::to_string(v).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (s,))?.unbind())
}

fn warp_from(kind: &str, epsilon: f64, a: f64, delta: f64) -> PyResult<WarpSpec> {
    match kind {
        "hyperbolic" => Ok(WarpSpec::Hyperbolic),
        "flat" => Ok(WarpSpec::Flat),
        "perturbed" => Ok(WarpSpec::Perturbed { epsilon, a }),
        "deficit" => Ok(WarpSpec::Deficit { delta }),
        _ => Err(PyValueError::new_err(format!("unknown warp kind '{kind}'"))),
    }
}

#[pyfunction]
fn log_gamma(x: f64) -> PyResult<(f64, f64)> {
    let g = specfun::log_gamma(x).map_err(to_py)?;
    Ok((g.ln_abs, g.sign))
}

#[pyfunction]
fn d_gamma(gamma: f64) -> PyResult<f64> {
    specfun::d_gamma(gamma).map_err(to_py)
}

#[pyfunction]
fn sphere_multiplier(n: usize, gamma: f64, k: usize) -> PyResult<f64> {
    specfun::sphere_multiplier(n, gamma, k).map_err(to_py)
}

#[pyfunction]
fn sphere_volume(n: usize) -> f64 {
    specfun::sphere_volume(n)
}

#[pyfunction]
fn sphere_constants(py: Python<'_>, n: usize, gamma: f64) -> PyResult<Py<PyAny>> {
    to_object(py, &specfun::sphere_constants(n, gamma).map_err(to_py)?)
}

#[pyfunction]
fn scattering_multiplier(py: Python<'_>, n: usize, gamma: f64, k: usize) -> PyResult<Py<PyAny>> {
    let r = py.detach(|| scattering::scattering_multiplier(n, gamma, k)).map_err(to_py)?;
    to_object(py, &r)
}

/// Radially symmetric metric `dt² + φ(t)² g_S`.
#[pyclass(name = "WarpedMetric", frozen)]
struct PyWarpedMetric {
    inner: geometry::WarpedMetric,
}

#[pymethods]
impl PyWarpedMetric {
    #[new]
    #[pyo3(signature = (n, kind = "hyperbolic", epsilon = 0.0, a = 2.0, delta = 0.0))]
    fn new(n: usize, kind: &str, epsilon: f64, a: f64, delta: f64) -> PyResult<Self> {
        let inner = geometry::make_warped_metric(n, warp_from(kind, epsilon, a, delta)?).map_err(to_py)?;
        Ok(PyWarpedMetric { inner })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n
    }

    /// `(φ, φ′, φ″)` at `t`.
    fn phi(&self, t: f64) -> (f64, f64, f64) {
        let [a, b, c] = self.inner.phi(t);
        (a, b, c)
    }

    fn volume_data(&self, py: Python<'_>, grid: Vec<f64>) -> PyResult<Py<PyAny>> {
        to_object(py, &geometry::volume_data(&self.inner, &grid).map_err(to_py)?)
    }

    fn curvature_report(&self, py: Python<'_>, grid: Vec<f64>) -> PyResult<Py<PyAny>> {
        to_object(py, &geometry::curvature_report(&self.inner, &grid).map_err(to_py)?)
    }

    fn __repr__(&self) -> String {
        format!("WarpedMetric(n={}, warp={:?})", self.inner.n, self.inner.warp)
    }
}

/// The `k = 0` scattering solution normalized to `F₀ = 1`.
#[pyclass(name = "AdaptedProfile", frozen)]
struct PyAdaptedProfile {
    inner: scattering::AdaptedProfile,
}

#[pymethods]
impl PyAdaptedProfile {
    #[new]
    #[pyo3(signature = (n, gamma, t_max = 30.0))]
    fn new(py: Python<'_>, n: usize, gamma: f64, t_max: f64) -> PyResult<Self> {
        let opts = SolveOptions {
            t_max,
            ..SolveOptions::default()
        };
        let inner = py.detach(|| scattering::adapted_profile(n, gamma, opts)).map_err(to_py)?;
        Ok(PyAdaptedProfile { inner })
    }

    /// `(Φ, Φ′, Φ″)` at `t`.
    fn phi(&self, t: f64) -> PyResult<(f64, f64, f64)> {
        let [a, b, c] = self.inner.phi(t).map_err(to_py)?;
        Ok((a, b, c))
    }

    #[getter]
    fn g0(&self) -> f64 {
        self.inner.g0
    }

    #[getter]
    fn g0_expected(&self) -> f64 {
        self.inner.g0_expected
    }

    #[getter]
    fn f1(&self) -> f64 {
        self.inner.f1
    }

    #[getter]
    fn monotone(&self) -> bool {
        self.inner.monotone
    }

    fn solution_csv(&self) -> String {
        self.inner.solution.to_csv()
    }
}

fn kind_from(kind: &str, gamma: Option<f64>) -> PyResult<CompactKind> {
    let need = || gamma.ok_or_else(|| PyValueError::new_err(format!("compactification '{kind}' needs gamma")));
    match kind {
        "type_i" => Ok(CompactKind::TypeI { gamma: need()? }),
        "type_ii" => Ok(CompactKind::TypeII { gamma: need()? }),
        "hemisphere" => Ok(CompactKind::Hemisphere),
        _ => Err(PyValueError::new_err(format!("unknown compactification '{kind}'"))),
    }
}

/// `ρ² g₊` for a metric and a choice of defining function.
#[pyclass(name = "Compactification", frozen)]
struct PyCompactification {
    inner: compactify::Compactification,
}

#[pymethods]
impl PyCompactification {
    #[new]
    #[pyo3(signature = (metric, kind, gamma = None))]
    fn new(py: Python<'_>, metric: &PyWarpedMetric, kind: &str, gamma: Option<f64>) -> PyResult<Self> {
        let k = kind_from(kind, gamma)?;
        let m = metric.inner;
        let inner = py
            .detach(|| compactify::build_compactification(k, &m, SolveOptions::default()))
            .map_err(to_py)?;
        Ok(PyCompactification { inner })
    }

    fn weighted_j(&self, py: Python<'_>, grid: Vec<f64>) -> PyResult<Py<PyAny>> {
        to_object(py, &compactify::weighted_j(&self.inner, &grid).map_err(to_py)?)
    }

    fn mean_curvature(&self, py: Python<'_>, grid: Vec<f64>) -> PyResult<Py<PyAny>> {
        to_object(py, &compactify::mean_curvature_weighted(&self.inner, &grid).map_err(to_py)?)
    }

    fn boundary_volume(&self, py: Python<'_>, grid: Vec<f64>) -> PyResult<Py<PyAny>> {
        to_object(py, &compactify::boundary_volume(&self.inner, &grid).map_err(to_py)?)
    }

    /// Energy of the constant function on the region `t ≤ r_max`.
    fn energy(&self, py: Python<'_>, r_max: f64) -> PyResult<Py<PyAny>> {
        to_object(py, &compactify::energy(&self.inner, |_| [1.0, 0.0], r_max).map_err(to_py)?)
    }

    fn profile_csv(&self, grid: Vec<f64>) -> PyResult<String> {
        compactify::profile_csv(&self.inner, &grid).map_err(to_py)
    }
}

#[pyfunction]
fn rayleigh_quotient(n: usize, gamma: f64, coeffs: Vec<f64>) -> PyResult<f64> {
    let t = yamabe::ZonalTrial::new(n, coeffs).map_err(to_py)?;
    yamabe::rayleigh_quotient(n, gamma, &t).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (n, gamma, kmax = 16, restarts = 8, seed = 0))]
fn minimize_rayleigh(py: Python<'_>, n: usize, gamma: f64, kmax: usize, restarts: usize, seed: u64) -> PyResult<Py<PyAny>> {
    let opts = yamabe::MinimizeOptions {
        kmax,
        restarts,
        seed,
        ..Default::default()
    };
    let r = py.detach(|| yamabe::minimize_rayleigh(n, gamma, &opts)).map_err(to_py)?;
    to_object(py, &r)
}

#[pyfunction]
fn theorem_chain_report(py: Python<'_>, n: usize, gamma: f64, metric: &PyWarpedMetric, grid: Vec<f64>) -> PyResult<Py<PyAny>> {
    to_object(py, &yamabe::theorem_chain_report(n, gamma, &metric.inner, &grid).map_err(to_py)?)
}

#[pyfunction]
fn hemisphere_check(py: Python<'_>, n: usize, grid: Vec<f64>) -> PyResult<Py<PyAny>> {
    let r = py.detach(|| escobar::hemisphere_check(n, &grid)).map_err(to_py)?;
    to_object(py, &r)
}

#[pyfunction]
fn yb_value(n: usize, y1: f64) -> f64 {
    escobar::yb_value(n, y1)
}

#[pyfunction]
fn run_criterion(py: Python<'_>, id: u8) -> PyResult<Py<PyAny>> {
    let r = py.detach(|| verify::run_criterion(id));
    to_object(py, &r)
}

#[pyfunction]
fn verify_all(py: Python<'_>) -> PyResult<Py<PyAny>> {
    let r = py.detach(verify::verify_all);
    to_object(py, &r)
}

#[pymodule]
#[pyo3(name = "fracyam")]
fn fracyam_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyWarpedMetric>()?;
    m.add_class::<PyAdaptedProfile>()?;
    m.add_class::<PyCompactification>()?;
    m.add_function(wrap_pyfunction!(log_gamma, m)?)?;
    m.add_function(wrap_pyfunction!(d_gamma, m)?)?;
    m.add_function(wrap_pyfunction!(sphere_multiplier, m)?)?;
    m.add_function(wrap_pyfunction!(sphere_volume, m)?)?;
    m.add_function(wrap_pyfunction!(sphere_constants, m)?)?;
    m.add_function(wrap_pyfunction!(scattering_multiplier, m)?)?;
    m.add_function(wrap_pyfunction!(rayleigh_quotient, m)?)?;
    m.add_function(wrap_pyfunction!(minimize_rayleigh, m)?)?;
    m.add_function(wrap_pyfunction!(theorem_chain_report, m)?)?;
    m.add_function(wrap_pyfunction!(hemisphere_check, m)?)?;
    m.add_function(wrap_pyfunction!(yb_value, m)?)?;
    m.add_function(wrap_pyfunction!(run_criterion, m)?)?;
    m.add_function(wrap_pyfunction!(verify_all, m)?)?;
    Ok(())
}
