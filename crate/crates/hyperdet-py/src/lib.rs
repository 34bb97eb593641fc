//! Python bindings: kernel parameters, determinants, tau curves and constant extraction.

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

use hyperdet::asymptotics as asy;
use hyperdet::error::Error;
use hyperdet::fredholm::{self, Decay};
use hyperdet::kernels;
use hyperdet::painleve;
use hyperdet::reference::AlgebraicSolution;

create_exception!(_hyperdet, HyperdetError, PyException, "Numerical failure inside hyperdet.");
create_exception!(_hyperdet, NonConvergenceError, HyperdetError, "An iteration or integration did not converge.");

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Domain(_)
        | Error::DegenerateParams(_)
        | Error::InsufficientGrid(_)
        | Error::SingularGamma(_)
        | Error::NoAdmissibleBranch(_) => PyValueError::new_err(e.to_string()),
        Error::NonConvergence(_) | Error::StepSizeUnderflow { .. } => NonConvergenceError::new_err(e.to_string()),
        _ => HyperdetError::new_err(e.to_string()),
    }
}

/// The quadruple (z, z', w, w') of the hypergeometric kernel.
#[pyclass(name = "KernelParams", frozen, skip_from_py_object)]
#[derive(Clone, Copy)]
struct PyKernelParams(kernels::KernelParams);

#[pymethods]
impl PyKernelParams {
    #[new]
    fn new(z: f64, zp: f64, w: f64, wp: f64) -> PyResult<Self> {
        kernels::KernelParams::new(z, zp, w, wp).map(Self).map_err(to_py)
    }

    #[getter]
    fn z(&self) -> f64 {
        self.0.z
    }

    #[getter]
    fn zp(&self) -> f64 {
        self.0.z_prime
    }

    #[getter]
    fn w(&self) -> f64 {
        self.0.w
    }

    #[getter]
    fn wp(&self) -> f64 {
        self.0.w_prime
    }

    /// z + z' + w + w'.
    fn c(&self) -> f64 {
        self.0.c()
    }

    /// (theta_0, theta_1, theta_t, theta_inf) of the associated Painleve VI.
    fn theta(&self) -> (f64, f64, f64, f64) {
        let t = self.0.theta();
        (t[0], t[1], t[2], t[3])
    }

    /// kappa in D(t) = 1 - kappa t^(1+c) + ...
    fn kappa(&self) -> PyResult<f64> {
        asy::kappa(&self.0).map_err(to_py)
    }

    /// Conjectured constant C of the t -> 1 expansion.
    fn conjectured_c(&self) -> PyResult<f64> {
        asy::conjectured_c(&self.0).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        let p = self.0;
        format!("KernelParams(z={}, zp={}, w={}, wp={})", p.z, p.z_prime, p.w, p.w_prime)
    }
}

#[pyclass(name = "DetResult", frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
struct PyDetResult {
    value: f64,
    log_value: f64,
    order_used: usize,
    error_estimate: f64,
}

impl From<fredholm::DetResult> for PyDetResult {
    fn from(d: fredholm::DetResult) -> Self {
        Self { value: d.value, log_value: d.log_value, order_used: d.order_used, error_estimate: d.error_estimate }
    }
}

#[pymethods]
impl PyDetResult {
    fn __repr__(&self) -> String {
        format!("DetResult(value={:.17e}, order_used={})", self.value, self.order_used)
    }
}

#[pyclass(name = "TauCurve", frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
struct PyTauCurve {
    t: Vec<f64>,
    ln_d: Vec<f64>,
    sigma: Vec<f64>,
    sigma_prime: Vec<f64>,
    i1_drift: Vec<f64>,
    i2_drift: Vec<f64>,
    failure: Option<String>,
}

#[pyclass(name = "ExtractionReport", frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
struct PyExtractionReport {
    extracted_c: f64,
    conjectured_c: f64,
    abs_error: f64,
    rel_error: f64,
    fit_window: (f64, f64),
    fit_error: f64,
    correction_coeff: f64,
    fit_exponent: f64,
    residual_decay_rate: f64,
    samples_used: usize,
    condition_number: f64,
}

impl From<asy::ExtractionReport> for PyExtractionReport {
    fn from(r: asy::ExtractionReport) -> Self {
        Self {
            extracted_c: r.extracted_c,
            conjectured_c: r.conjectured_c,
            abs_error: r.abs_error,
            rel_error: r.rel_error,
            fit_window: r.fit_window,
            fit_error: r.fit_error,
            correction_coeff: r.correction_coeff,
            fit_exponent: r.fit_exponent,
            residual_decay_rate: r.residual_decay_rate,
            samples_used: r.samples_used,
            condition_number: r.condition_number,
        }
    }
}

/// det(1 - K) of the hypergeometric kernel on (0, t).
#[pyfunction]
#[pyo3(signature = (params, t, order = 32, tol = 1e-9))]
fn fredholm_det(py: Python<'_>, params: &PyKernelParams, t: f64, order: usize, tol: f64) -> PyResult<PyDetResult> {
    let p = params.0;
    py.detach(|| {
        let k = kernels::build_f21_kernel(&p)?;
        fredholm::fredholm_det_finite_tol(&k, t, order, p.c(), tol)
    })
    .map(Into::into)
    .map_err(to_py)
}

/// det(1 - K_L) of the Whittaker kernel on (s, inf).
#[pyfunction]
#[pyo3(signature = (z, zp, w, s, order = 64, tol = 1e-9))]
fn whittaker_det(py: Python<'_>, z: f64, zp: f64, w: f64, s: f64, order: usize, tol: f64) -> PyResult<PyDetResult> {
    py.detach(|| {
        let k = kernels::build_whittaker_kernel(z, zp, w)?;
        fredholm::fredholm_det_semiinfinite_tol(&k, s, order, Decay::Exp, tol)
    })
    .map(Into::into)
    .map_err(to_py)
}

/// det(1 - K_M) of the Macdonald kernel on (xi, inf).
#[pyfunction]
#[pyo3(signature = (z, zp, xi, order = 64, tol = 1e-9))]
fn macdonald_det(py: Python<'_>, z: f64, zp: f64, xi: f64, order: usize, tol: f64) -> PyResult<PyDetResult> {
    py.detach(|| {
        let k = kernels::build_macdonald_kernel(z, zp)?;
        fredholm::fredholm_det_semiinfinite_tol(&k, xi, order, Decay::ExpSqrt, tol)
    })
    .map(Into::into)
    .map_err(to_py)
}

/// ln D, sigma and first-integral drift on an increasing grid in (t0, 1).
#[pyfunction]
#[pyo3(signature = (params, grid, t0 = 1e-3, tol = 1e-12))]
fn tau_curve(py: Python<'_>, params: &PyKernelParams, grid: Vec<f64>, t0: f64, tol: f64) -> PyResult<PyTauCurve> {
    let p = params.0;
    let c = py.detach(|| painleve::integrate_tau(&p, t0, &grid, tol)).map_err(to_py)?;
    Ok(PyTauCurve {
        t: c.sigma.grid,
        ln_d: c.ln_d,
        sigma: c.sigma.sigma,
        sigma_prime: c.sigma.sigma_prime,
        i1_drift: c.i1_drift,
        i2_drift: c.i2_drift,
        failure: c.failure,
    })
}

/// Fit C from D(t) on t in [t_lo, t_hi] and compare with the conjectured value.
#[pyfunction]
#[pyo3(signature = (params, t_lo = 0.95, t_hi = 0.999, samples = 41, fit_exponent = None))]
fn extract_constant(
    py: Python<'_>,
    params: &PyKernelParams,
    t_lo: f64,
    t_hi: f64,
    samples: usize,
    fit_exponent: Option<f64>,
) -> PyResult<PyExtractionReport> {
    let p = params.0;
    py.detach(|| {
        let grid = painleve::log_endpoint_grid(t_lo, t_hi, samples);
        let curve = painleve::integrate_tau(&p, 1e-3f64.min(0.5 * t_lo), &grid, 1e-12)?;
        if let Some(msg) = curve.failure {
            return Err(Error::NonConvergence(msg));
        }
        let data: Vec<(f64, f64)> = grid.iter().zip(&curve.ln_d).map(|(&t, &l)| (t, l.exp())).collect();
        let opts = asy::ExtractOptions { window: (1.0 - t_hi, 1.0 - t_lo), fit_exponent, conjectured: asy::conjectured_c(&p)? };
        asy::extract_constant(&data, &asy::t1_expansion(&p)?, &opts)
    })
    .map(Into::into)
    .map_err(to_py)
}

/// Conjectured C_L of the Whittaker determinant at s -> 0.
#[pyfunction]
fn conjectured_c_l(z: f64, zp: f64, w: f64) -> PyResult<f64> {
    asy::limit_constants_pv(z, zp, w).map(|r| r.1).map_err(to_py)
}

/// Conjectured C_M of the Macdonald determinant at xi -> 0.
#[pyfunction]
fn conjectured_c_m(z: f64, zp: f64) -> PyResult<f64> {
    asy::limit_constants_piii(z, zp).map(|r| r.1).map_err(to_py)
}

/// ln G(x) for the Barnes G-function.
#[pyfunction]
fn log_barnes_g(x: f64) -> PyResult<f64> {
    hyperdet::specfun::log_barnes_g(x).map_err(to_py)
}

/// (alpha, beta) of the bosonic tau function at r -> 0.
#[pyfunction]
fn tracy_beta(nu: f64) -> PyResult<(f64, f64)> {
    asy::tracy_beta(nu).map_err(to_py)
}

fn example(name: &str, theta1: f64) -> PyResult<AlgebraicSolution> {
    match name {
        "ex1" => AlgebraicSolution::ex1(theta1).map_err(to_py),
        "ex2" => Ok(AlgebraicSolution::ex2()),
        "ex3" => Ok(AlgebraicSolution::ex3()),
        _ => Err(PyValueError::new_err(format!("unknown example {name:?}; expected ex1, ex2 or ex3"))),
    }
}

/// Closed-form ln tau(t) of an algebraic solution ("ex1", "ex2" or "ex3").
#[pyfunction]
#[pyo3(signature = (name, t, theta1 = 0.0))]
fn example_ln_tau(name: &str, t: f64, theta1: f64) -> PyResult<f64> {
    example(name, theta1)?.ln_tau(t).map_err(to_py)
}

/// Kernel parameters of an algebraic solution.
#[pyfunction]
#[pyo3(signature = (name, theta1 = 0.0))]
fn example_params(name: &str, theta1: f64) -> PyResult<PyKernelParams> {
    Ok(PyKernelParams(example(name, theta1)?.params))
}

/// Run the command-line interface with the given arguments; returns the exit code.
#[pyfunction]
fn run_cli(py: Python<'_>, args: Vec<String>) -> i32 {
    py.detach(|| hyperdet::cli::main_with_args(std::iter::once("hyperdet".to_string()).chain(args)))
}

#[pymodule]
fn _hyperdet(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyKernelParams>()?;
    m.add_class::<PyDetResult>()?;
    m.add_class::<PyTauCurve>()?;
    m.add_class::<PyExtractionReport>()?;
    m.add("HyperdetError", m.py().get_type::<HyperdetError>())?;
    m.add("NonConvergenceError", m.py().get_type::<NonConvergenceError>())?;
    m.add_function(wrap_pyfunction!(fredholm_det, m)?)?;
    m.add_function(wrap_pyfunction!(whittaker_det, m)?)?;
    m.add_function(wrap_pyfunction!(macdonald_det, m)?)?;
    m.add_function(wrap_pyfunction!(tau_curve, m)?)?;
    m.add_function(wrap_pyfunction!(extract_constant, m)?)?;
    m.add_function(wrap_pyfunction!(conjectured_c_l, m)?)?;
    m.add_function(wrap_pyfunction!(conjectured_c_m, m)?)?;
    m.add_function(wrap_pyfunction!(log_barnes_g, m)?)?;
    m.add_function(wrap_pyfunction!(tracy_beta, m)?)?;
    m.add_function(wrap_pyfunction!(example_ln_tau, m)?)?;
    m.add_function(wrap_pyfunction!(example_params, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    let names = [
        "KernelParams", "DetResult", "TauCurve", "ExtractionReport", "HyperdetError", "NonConvergenceError",
        "fredholm_det", "whittaker_det", "macdonald_det", "tau_curve", "extract_constant", "conjectured_c_l",
        "conjectured_c_m", "log_barnes_g", "tracy_beta", "example_ln_tau", "example_params", "run_cli",
    ];
    m.add("__all__", names.to_vec())?;
    Ok(())
}
