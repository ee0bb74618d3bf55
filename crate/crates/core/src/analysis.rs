//! Minimum-variance landscapes over pulse duration and loss asymmetry, and the
//! minimum variance as a function of pump amplitude.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{find_minimum_by, integrate, IntegratorConfig, VarianceMinimum, DEFAULT_STEP};
use crate::error::{invalid, CventError, Result};
use crate::optimize::golden_section;
use crate::ring::{optimum_sigma, optimum_tau, predicted_min_variance, PumpModel, RingParams};
use crate::state::{check_zeta, correlation_variance_offset, SqueezedThermalState};

/// Step of the refinement run at the best grid point.
pub const REFINE_STEP: f64 = 2e-4;

/// `n` evenly spaced values on `[lo, hi]`. When `lo = −hi` the values are
/// mirror images of each other bit for bit.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => {
            let h = (hi - lo) / (n - 1) as f64;
            let mut v: Vec<f64> = (0..n).map(|i| lo + i as f64 * h).collect();
            v[n - 1] = hi;
            if lo == -hi {
                for i in 0..n / 2 {
                    v[n - 1 - i] = -v[i];
                }
                if n % 2 == 1 {
                    v[n / 2] = 0.0;
                }
            }
            v
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub tau_values: Vec<f64>,
    pub zeta_values: Vec<f64>,
    pub g0: f64,
    pub ring: RingParams,
    /// Homodyne phase offset [rad].
    pub delta_theta: f64,
    pub step: f64,
    /// Fixed integration window; `None` uses the per-pulse default.
    pub window: Option<(f64, f64)>,
}

impl SweepSpec {
    /// 81 × 81 grid over `τ̃ ∈ [0.5, 5]`, `ζ ∈ [−0.8, 0.8]`.
    pub fn default_grid(g0: f64, ring: RingParams) -> Self {
        Self::grid(g0, ring, 81, 81)
    }

    pub fn grid(g0: f64, ring: RingParams, n_tau: usize, n_zeta: usize) -> Self {
        Self {
            tau_values: linspace(0.5, 5.0, n_tau),
            zeta_values: linspace(-0.8, 0.8, n_zeta),
            g0,
            ring,
            delta_theta: 0.0,
            step: DEFAULT_STEP,
            window: None,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.tau_values.is_empty() || self.zeta_values.is_empty() {
            return Err(invalid("grid", "tau and zeta axes must be nonempty"));
        }
        for &z in &self.zeta_values {
            check_zeta(z)?;
        }
        if !self.delta_theta.is_finite() {
            return Err(invalid("delta_theta", "must be finite"));
        }
        PumpModel::ring(self.g0, 1.0, self.ring)?;
        self.integrator(1.0).map(|_| ())
    }

    fn integrator(&self, tau: f64) -> Result<IntegratorConfig> {
        match self.window {
            Some((a, b)) => IntegratorConfig::new(a, b, self.step),
            None => IntegratorConfig::for_pulse(tau, self.step),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub delta_sq_min: f64,
    pub t_min: f64,
    pub n1_at_min: f64,
    pub n2_at_min: f64,
    /// Pump strength at `t_min`.
    pub g_at_min: f64,
    pub at_boundary: bool,
}

impl From<VarianceMinimum> for GridPoint {
    fn from(m: VarianceMinimum) -> Self {
        Self {
            delta_sq_min: m.delta_sq_min,
            t_min: m.t_min,
            n1_at_min: m.state.n1,
            n2_at_min: m.state.n2,
            g_at_min: m.g,
            at_boundary: m.at_boundary,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub spec: SweepSpec,
    /// Row-major over `(tau, zeta)`.
    pub results: Vec<GridPoint>,
}

impl SweepGrid {
    pub fn at(&self, i_tau: usize, i_zeta: usize) -> &GridPoint {
        &self.results[i_tau * self.spec.zeta_values.len() + i_zeta]
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.spec.tau_values.len(), self.spec.zeta_values.len())
    }

    /// `(i_tau, i_zeta)` of the smallest grid value.
    pub fn argmin(&self) -> (usize, usize) {
        let nz = self.spec.zeta_values.len();
        let k = (0..self.results.len())
            .min_by(|&a, &b| self.results[a].delta_sq_min.total_cmp(&self.results[b].delta_sq_min))
            .expect("nonempty grid");
        (k / nz, k % nz)
    }

    /// Iterates `(tau, zeta, point)` in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (f64, f64, &GridPoint)> + '_ {
        let nz = self.spec.zeta_values.len();
        self.results
            .iter()
            .enumerate()
            .map(move |(k, p)| (self.spec.tau_values[k / nz], self.spec.zeta_values[k % nz], p))
    }
}

/// Minimum of the (offset) correlation variance for one pulse and asymmetry.
pub fn point_minimum(
    g0: f64,
    tau_tilde: f64,
    zeta: f64,
    ring: &RingParams,
    delta_theta: f64,
    cfg: &IntegratorConfig,
) -> Result<VarianceMinimum> {
    let pump = PumpModel::ring(g0, tau_tilde, *ring)?;
    let traj = integrate(&SqueezedThermalState::vacuum(cfg.t_start), &pump, zeta, cfg)?;
    if delta_theta == 0.0 {
        find_minimum_by(&traj, |s| s.delta_sq)
    } else {
        find_minimum_by(&traj, |s| correlation_variance_offset(&s.state, delta_theta))
    }
}

/// Sweeps the grid, minimizing the offset correlation variance along each
/// trajectory. Points run in parallel and land at their own grid coordinate.
pub fn sweep_offset(spec: &SweepSpec, delta_theta: f64) -> Result<SweepGrid> {
    let mut spec = spec.clone();
    spec.delta_theta = delta_theta;
    spec.validate()?;
    let nz = spec.zeta_values.len();
    let results = (0..spec.tau_values.len() * nz)
        .into_par_iter()
        .map(|k| {
            let (tau, zeta) = (spec.tau_values[k / nz], spec.zeta_values[k % nz]);
            spec.integrator(tau)
                .and_then(|cfg| point_minimum(spec.g0, tau, zeta, &spec.ring, delta_theta, &cfg))
                .map(GridPoint::from)
                .map_err(|e| CventError::SweepPoint { tau_tilde: tau, zeta, source: Box::new(e) })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepGrid { spec, results })
}

/// Sweeps the grid with phase-matched homodyne angles.
pub fn sweep_min_variance(spec: &SweepSpec) -> Result<SweepGrid> {
    sweep_offset(spec, 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GlobalMinimum {
    pub tau_tilde: f64,
    pub zeta: f64,
    pub delta_sq_min: f64,
    pub t_min: f64,
    pub n1_at_min: f64,
    pub n2_at_min: f64,
}

/// Best grid point re-run with the finer refinement step.
pub fn global_minimum(grid: &SweepGrid) -> Result<GlobalMinimum> {
    let (i, j) = grid.argmin();
    let spec = &grid.spec;
    let (tau, zeta) = (spec.tau_values[i], spec.zeta_values[j]);
    let mut fine = spec.clone();
    fine.step = REFINE_STEP;
    let cfg = fine.integrator(tau)?;
    let m = point_minimum(spec.g0, tau, zeta, &spec.ring, spec.delta_theta, &cfg)
        .map_err(|e| CventError::SweepPoint { tau_tilde: tau, zeta, source: Box::new(e) })?;
    Ok(GlobalMinimum {
        tau_tilde: tau,
        zeta,
        delta_sq_min: m.delta_sq_min,
        t_min: m.t_min,
        n1_at_min: m.state.n1,
        n2_at_min: m.state.n2,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct G0Point {
    pub g0: f64,
    /// Pulse duration minimizing the variance at `ζ = 0`.
    pub tau_tilde: f64,
    pub delta_sq_min_numeric: f64,
    /// Variance minimum at the peak-strength pulse duration.
    pub delta_sq_at_tau_opt: f64,
    pub delta_sq_min_formula: f64,
    /// `n₁ + n₂` at the minimum.
    pub total_thermal: f64,
    pub t_min: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct G0Curve {
    pub a_p: f64,
    pub sigma_p: f64,
    pub points: Vec<G0Point>,
}

/// Range searched for the best pulse duration.
pub const TAU_SEARCH: (f64, f64) = (0.5, 5.0);
const TAU_XTOL: f64 = 1e-3;

/// Numeric minimum variance at `ζ = 0` against the closed-form estimate, one
/// point per pump amplitude.
///
/// The numeric value minimizes over the pulse duration as well. The value at
/// the peak-strength duration is kept alongside. `sigma_p` is used when
/// `use_optimum_sigma` is false.
pub fn g0_curve(
    g0_values: &[f64],
    a_p: f64,
    use_optimum_sigma: bool,
    sigma_p: f64,
    step: f64,
) -> Result<G0Curve> {
    let sigma = if use_optimum_sigma { optimum_sigma(a_p)? } else { sigma_p };
    let ring = RingParams::from_sigma(sigma, a_p)?;
    if let Some(&bad) = g0_values.iter().find(|&&g| !(g > 0.0 && g.is_finite())) {
        return Err(invalid("g0", format!("values must be positive, got {bad}")));
    }
    let tau_opt = optimum_tau();
    let points = g0_values
        .par_iter()
        .map(|&g0| -> Result<G0Point> {
            let at = |tau: f64| -> Result<VarianceMinimum> {
                point_minimum(g0, tau, 0.0, &ring, 0.0, &IntegratorConfig::for_pulse(tau, step)?)
            };
            let search = golden_section(
                |tau| at(tau).map(|m| m.delta_sq_min).unwrap_or(f64::INFINITY),
                TAU_SEARCH.0,
                TAU_SEARCH.1,
                TAU_XTOL,
                100,
            );
            let best = at(search.x)?;
            Ok(G0Point {
                g0,
                tau_tilde: search.x,
                delta_sq_min_numeric: best.delta_sq_min,
                delta_sq_at_tau_opt: at(tau_opt)?.delta_sq_min,
                delta_sq_min_formula: predicted_min_variance(g0, &ring),
                total_thermal: best.state.total_thermal(),
                t_min: best.t_min,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(G0Curve { a_p, sigma_p: sigma, points })
}
