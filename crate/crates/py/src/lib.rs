//! Python bindings. Trajectories and grids come back as dicts of column lists.

use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use cvent::analysis::{self, SweepSpec};
use cvent::oracle::{self as core_oracle, OracleConfig};
use cvent::ring;
use cvent::{CventError, IntegratorConfig, Mode};

create_exception!(cvent, IntegrationError, PyRuntimeError);
create_exception!(cvent, TruncationError, PyRuntimeError);

fn to_py(e: CventError) -> PyErr {
    match e {
        CventError::Domain(_) | CventError::InvalidParameter { .. } => PyValueError::new_err(e.to_string()),
        CventError::Truncation { .. } => TruncationError::new_err(e.to_string()),
        CventError::SweepPoint { ref source, .. } if matches!(**source, CventError::Truncation { .. }) => {
            TruncationError::new_err(e.to_string())
        }
        _ => IntegrationError::new_err(e.to_string()),
    }
}

trait IntoPy<T> {
    fn py_err(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for cvent::Result<T> {
    fn py_err(self) -> PyResult<T> {
        self.map_err(to_py)
    }
}

#[pyclass(name = "RingParams", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyRingParams(ring::RingParams);

#[pymethods]
impl PyRingParams {
    /// Ring with self-coupling `sigma_p` and round-trip transmission `a_p`.
    #[new]
    fn new(sigma_p: f64, a_p: f64) -> PyResult<Self> {
        ring::RingParams::from_sigma(sigma_p, a_p).py_err().map(Self)
    }

    /// Ring at the self-coupling that maximizes the pump strength.
    #[staticmethod]
    fn optimal(a_p: f64) -> PyResult<Self> {
        let s = ring::optimum_sigma(a_p).py_err()?;
        Self::new(s, a_p)
    }

    #[getter]
    fn kappa_p(&self) -> f64 {
        self.0.kappa_p()
    }

    #[getter]
    fn sigma_p(&self) -> f64 {
        self.0.sigma_p()
    }

    #[getter]
    fn a_p(&self) -> f64 {
        self.0.a_p()
    }

    /// `Γ_P T_R = 2(1 − σ_P a_P)`
    #[getter]
    fn pump_decay_rate(&self) -> f64 {
        self.0.pump_decay_rate()
    }

    #[getter]
    fn strength_factor(&self) -> f64 {
        self.0.strength_factor()
    }

    fn in_validity_regime(&self) -> bool {
        self.0.in_validity_regime()
    }

    fn __repr__(&self) -> String {
        format!("RingParams(sigma_p={}, a_p={})", self.0.sigma_p(), self.0.a_p())
    }
}

#[pyclass(name = "State", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyState(cvent::SqueezedThermalState);

#[pymethods]
impl PyState {
    #[new]
    #[pyo3(signature = (u, phi=0.0, n1=0.0, n2=0.0, t_tilde=0.0))]
    fn new(u: f64, phi: f64, n1: f64, n2: f64, t_tilde: f64) -> PyResult<Self> {
        cvent::SqueezedThermalState::new(u, phi, n1, n2, t_tilde).py_err().map(Self)
    }

    #[staticmethod]
    fn vacuum() -> Self {
        Self(cvent::SqueezedThermalState::vacuum(0.0))
    }

    #[getter]
    fn u(&self) -> f64 {
        self.0.u
    }

    #[getter]
    fn phi(&self) -> f64 {
        self.0.phi
    }

    #[getter]
    fn n1(&self) -> f64 {
        self.0.n1
    }

    #[getter]
    fn n2(&self) -> f64 {
        self.0.n2
    }

    #[getter]
    fn t_tilde(&self) -> f64 {
        self.0.t_tilde
    }

    /// `Δ²₁,₂` with matched homodyne phases, or offset by `delta_theta` [rad].
    #[pyo3(signature = (delta_theta=0.0))]
    fn correlation_variance(&self, delta_theta: f64) -> f64 {
        cvent::correlation_variance_offset(&self.0, delta_theta)
    }

    /// Single-mode quadrature noise of mode 1 or 2.
    fn quadrature_noise(&self, mode: u8) -> PyResult<f64> {
        let m = match mode {
            1 => Mode::One,
            2 => Mode::Two,
            _ => return Err(PyValueError::new_err(format!("mode must be 1 or 2, got {mode}"))),
        };
        Ok(cvent::quadrature_noise(&self.0, m))
    }

    fn mean_photons(&self) -> (f64, f64) {
        (self.0.mean_photons(Mode::One), self.0.mean_photons(Mode::Two))
    }

    fn __repr__(&self) -> String {
        let s = &self.0;
        format!("State(u={}, phi={}, n1={}, n2={}, t_tilde={})", s.u, s.phi, s.n1, s.n2, s.t_tilde)
    }
}

#[pyclass(name = "Pump", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyPump(cvent::PumpModel);

#[pymethods]
impl PyPump {
    /// Gaussian channel pulse of duration `tau_tilde` filtered by `ring`.
    #[staticmethod]
    fn ring(g0: f64, tau_tilde: f64, ring: PyRingParams) -> PyResult<Self> {
        cvent::PumpModel::ring(g0, tau_tilde, ring.0).py_err().map(Self)
    }

    #[staticmethod]
    fn gaussian(g0: f64, tau_tilde: f64) -> PyResult<Self> {
        cvent::PumpModel::gaussian(g0, tau_tilde).py_err().map(Self)
    }

    #[staticmethod]
    fn constant(g: f64) -> PyResult<Self> {
        cvent::PumpModel::constant(g).py_err().map(Self)
    }

    /// `g(t̃)`
    fn __call__(&self, t_tilde: f64) -> f64 {
        self.0.g(t_tilde)
    }

    #[getter]
    fn tau_tilde(&self) -> Option<f64> {
        self.0.tau_tilde()
    }

    fn __repr__(&self) -> String {
        format!("Pump({:?})", self.0)
    }
}

fn window(pump: &cvent::PumpModel, step: f64, t_start: Option<f64>, t_end: Option<f64>) -> PyResult<IntegratorConfig> {
    let default = match pump.tau_tilde() {
        Some(tau) => IntegratorConfig::for_pulse(tau, step).py_err()?,
        None => IntegratorConfig::new(0.0, 10.0, step).py_err()?,
    };
    IntegratorConfig::new(t_start.unwrap_or(default.t_start), t_end.unwrap_or(default.t_end), step).py_err()
}

/// Integrates the phase-matched system from a thermal start.
///
/// Returns a dict with lists `t_tilde, u, n1, n2, g, delta_sq`.
#[pyfunction]
#[pyo3(signature = (pump, zeta=0.0, step=1e-3, t_start=None, t_end=None, n1=0.0, n2=0.0))]
#[allow(clippy::too_many_arguments)]
fn simulate<'py>(
    py: Python<'py>,
    pump: PyPump,
    zeta: f64,
    step: f64,
    t_start: Option<f64>,
    t_end: Option<f64>,
    n1: f64,
    n2: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let cfg = window(&pump.0, step, t_start, t_end)?;
    let start = cvent::SqueezedThermalState::thermal(n1, n2, cfg.t_start).py_err()?;
    let tr = py.detach(|| cvent::integrate(&start, &pump.0, zeta, &cfg)).py_err()?;
    let d = PyDict::new(py);
    let col = |f: fn(&cvent::Sample) -> f64| tr.samples.iter().map(f).collect::<Vec<_>>();
    d.set_item("t_tilde", col(|s| s.t_tilde))?;
    d.set_item("u", col(|s| s.state.u))?;
    d.set_item("n1", col(|s| s.state.n1))?;
    d.set_item("n2", col(|s| s.state.n2))?;
    d.set_item("g", col(|s| s.g))?;
    d.set_item("delta_sq", col(|s| s.delta_sq))?;
    Ok(d)
}

/// Minimum of the correlation variance along one pulse, with the state there.
#[pyfunction]
#[pyo3(signature = (pump, zeta=0.0, step=1e-3, delta_theta=0.0))]
fn minimum_variance<'py>(
    py: Python<'py>,
    pump: PyPump,
    zeta: f64,
    step: f64,
    delta_theta: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let cfg = window(&pump.0, step, None, None)?;
    let m = py
        .detach(|| {
            let tr = cvent::integrate(&cvent::SqueezedThermalState::vacuum(cfg.t_start), &pump.0, zeta, &cfg)?;
            cvent::find_minimum_by(&tr, |s| cvent::correlation_variance_offset(&s.state, delta_theta))
        })
        .py_err()?;
    let d = PyDict::new(py);
    d.set_item("delta_sq_min", m.delta_sq_min)?;
    d.set_item("t_min", m.t_min)?;
    d.set_item("state", PyState(m.state))?;
    d.set_item("g", m.g)?;
    d.set_item("at_boundary", m.at_boundary)?;
    Ok(d)
}

/// Minimum variance over a `(tau_tilde, zeta)` grid.
///
/// Returns long-format columns plus the refined global minimum.
#[pyfunction]
#[pyo3(signature = (g0, ring, n_tau=81, n_zeta=81, delta_theta=0.0, step=1e-3))]
fn sweep<'py>(
    py: Python<'py>,
    g0: f64,
    ring: PyRingParams,
    n_tau: usize,
    n_zeta: usize,
    delta_theta: f64,
    step: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let mut spec = SweepSpec::grid(g0, ring.0, n_tau, n_zeta);
    spec.step = step;
    let (grid, best) = py
        .detach(|| {
            let grid = analysis::sweep_offset(&spec, delta_theta)?;
            let best = analysis::global_minimum(&grid)?;
            Ok::<_, CventError>((grid, best))
        })
        .py_err()?;
    let rows: Vec<_> = grid.iter().collect();
    let d = PyDict::new(py);
    d.set_item("tau_tilde", rows.iter().map(|r| r.0).collect::<Vec<_>>())?;
    d.set_item("zeta", rows.iter().map(|r| r.1).collect::<Vec<_>>())?;
    d.set_item("delta_sq_min", rows.iter().map(|r| r.2.delta_sq_min).collect::<Vec<_>>())?;
    d.set_item("t_min", rows.iter().map(|r| r.2.t_min).collect::<Vec<_>>())?;
    let g = PyDict::new(py);
    g.set_item("tau_tilde", best.tau_tilde)?;
    g.set_item("zeta", best.zeta)?;
    g.set_item("delta_sq_min", best.delta_sq_min)?;
    g.set_item("t_min", best.t_min)?;
    d.set_item("global_minimum", g)?;
    Ok(d)
}

/// Analytic trajectory against the truncated Fock-space Lindblad solution.
#[pyfunction]
#[pyo3(signature = (pump, zeta=0.0, n_max=core_oracle::DEFAULT_N_MAX, dt=core_oracle::DEFAULT_DT, t_start=None, t_end=None, n1=0.0, n2=0.0))]
#[allow(clippy::too_many_arguments)]
fn oracle_compare<'py>(
    py: Python<'py>,
    pump: PyPump,
    zeta: f64,
    n_max: usize,
    dt: f64,
    t_start: Option<f64>,
    t_end: Option<f64>,
    n1: f64,
    n2: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let w = window(&pump.0, dt, t_start, t_end)?;
    let mut cfg = OracleConfig::new(w.t_start, w.t_end);
    cfg.n_max = n_max;
    cfg.dt = dt;
    let start = cvent::SqueezedThermalState::thermal(n1, n2, w.t_start).py_err()?;
    let g = pump.0.evaluator();
    let r = py.detach(|| core_oracle::compare_with_analytic(&start, g, zeta, &cfg)).py_err()?;
    let d = PyDict::new(py);
    d.set_item("t_tilde", r.rows.iter().map(|x| x.t_tilde).collect::<Vec<_>>())?;
    d.set_item("analytic_delta_sq", r.rows.iter().map(|x| x.analytic_delta_sq).collect::<Vec<_>>())?;
    d.set_item("oracle_delta_sq", r.rows.iter().map(|x| x.oracle_delta_sq).collect::<Vec<_>>())?;
    d.set_item("max_dev_n1", r.max_dev_n1)?;
    d.set_item("max_dev_n2", r.max_dev_n2)?;
    d.set_item("max_dev_delta_sq", r.max_dev_delta_sq)?;
    d.set_item("max_deviation", r.max_deviation())?;
    Ok(d)
}

/// Pulse duration maximizing the peak in-ring pump strength.
#[pyfunction]
fn optimum_tau() -> f64 {
    ring::optimum_tau()
}

#[pyfunction]
fn optimum_sigma(a_p: f64) -> PyResult<f64> {
    ring::optimum_sigma(a_p).py_err()
}

#[pyfunction]
fn g_max(g0: f64, ring: PyRingParams) -> f64 {
    ring::g_max(g0, &ring.0)
}

/// Closed-form estimate `1/(1 + g_max)` of the minimum variance.
#[pyfunction]
fn predicted_min_variance(g0: f64, ring: PyRingParams) -> f64 {
    ring::predicted_min_variance(g0, &ring.0)
}

/// Pump-off thermal occupations after `t_tilde`.
#[pyfunction]
fn thermal_decay(n1: f64, n2: f64, zeta: f64, t_tilde: f64) -> PyResult<(f64, f64)> {
    let p = cvent::CavityParams::from_zeta(zeta).py_err()?;
    cvent::thermal_decay(n1, n2, &p, t_tilde).py_err()
}

#[pymodule]
#[pyo3(name = "cvent")]
fn cvent_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyRingParams>()?;
    m.add_class::<PyState>()?;
    m.add_class::<PyPump>()?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(minimum_variance, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_compare, m)?)?;
    m.add_function(wrap_pyfunction!(optimum_tau, m)?)?;
    m.add_function(wrap_pyfunction!(optimum_sigma, m)?)?;
    m.add_function(wrap_pyfunction!(g_max, m)?)?;
    m.add_function(wrap_pyfunction!(predicted_min_variance, m)?)?;
    m.add_function(wrap_pyfunction!(thermal_decay, m)?)?;
    m.add("IntegrationError", m.py().get_type::<IntegrationError>())?;
    m.add("TruncationError", m.py().get_type::<TruncationError>())?;
    Ok(())
}
