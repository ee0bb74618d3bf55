//! Brute-force check of the squeezed-thermal solution: the full Lindblad
//! equation on a truncated two-mode Fock space, compared moment by moment
//! against the integrated reduced system.

mod expm;
mod fock;

use serde::{Deserialize, Serialize};

pub use expm::{expm, norm1, SQUARING_THRESHOLD};
pub use fock::{
    build_hamiltonian, build_squeezed_thermal, extract_moments, lindblad_step, quadrature_variance,
    FockDensityMatrix, OracleMoments, StepCoupling, TruncationWarning, THERMAL_DEFICIT_LIMIT,
    TRACE_DRIFT_LIMIT,
};

use num_complex::Complex64 as C64;

use crate::dynamics::{integrate_with, IntegratorConfig};
use crate::error::{invalid, CventError, Result};
use crate::state::{check_zeta, correlation_variance, Mode, SqueezedThermalState};

pub const DEFAULT_N_MAX: usize = 14;
pub const DEFAULT_DT: f64 = 5e-3;
/// Population allowed in the two highest Fock shells.
pub const TOP_SHELL_LIMIT: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    pub n_max: usize,
    pub dt: f64,
    pub t_start: f64,
    pub t_end: f64,
    /// Number of evenly spaced rows kept in the report.
    pub rows: usize,
}

impl OracleConfig {
    pub fn new(t_start: f64, t_end: f64) -> Self {
        Self { n_max: DEFAULT_N_MAX, dt: DEFAULT_DT, t_start, t_end, rows: 20 }
    }

    fn validate(&self) -> Result<()> {
        if self.n_max < 1 {
            return Err(invalid("n_max", "cutoff must be at least 1"));
        }
        if self.rows < 2 {
            return Err(invalid("rows", "need at least two report rows"));
        }
        IntegratorConfig::new(self.t_start, self.t_end, self.dt).map(|_| ())
    }
}

/// Analytic and oracle values at one time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleRow {
    pub t_tilde: f64,
    pub analytic_n1: f64,
    pub analytic_n2: f64,
    pub analytic_delta_sq: f64,
    pub oracle_n1: f64,
    pub oracle_n2: f64,
    pub oracle_delta_sq: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub rows: Vec<OracleRow>,
    /// Maxima over every integration step, not just the reported rows.
    pub max_dev_n1: f64,
    pub max_dev_n2: f64,
    pub max_dev_delta_sq: f64,
    pub max_trace_error: f64,
    pub max_hermiticity_defect: f64,
    pub max_top_shell_population: f64,
}

impl OracleReport {
    pub fn max_deviation(&self) -> f64 {
        self.max_dev_n1.max(self.max_dev_n2).max(self.max_dev_delta_sq)
    }
}

/// Integrates the reduced system and the Lindblad equation side by side.
///
/// Both run in `t̃` with decay rates `1 ± ζ` and coupling `λ = g(t̃)/2`. The
/// pump phase is zero in the rotating frame, so the phase-locked squeezing
/// parameter of an initial state is `ξ = i·u`.
pub fn compare_with_analytic<G>(
    initial: &SqueezedThermalState,
    g: G,
    zeta: f64,
    cfg: &OracleConfig,
) -> Result<OracleReport>
where
    G: Fn(f64) -> f64,
{
    check_zeta(zeta)?;
    cfg.validate()?;
    let icfg = IntegratorConfig::new(cfg.t_start, cfg.t_end, cfg.dt)?;
    let analytic = integrate_with(initial, &g, zeta, &icfg)?;

    let (mut rho, _) = build_squeezed_thermal(
        initial.u,
        std::f64::consts::FRAC_PI_2,
        initial.n1,
        initial.n2,
        cfg.n_max,
    )?;
    let (g1, g2) = (1.0 + zeta, 1.0 - zeta);
    let steps = icfg.steps();
    let keep: Vec<usize> = (0..cfg.rows).map(|k| k * steps / (cfg.rows - 1)).collect();

    let mut report = OracleReport {
        rows: Vec::with_capacity(cfg.rows),
        max_dev_n1: 0.0,
        max_dev_n2: 0.0,
        max_dev_delta_sq: 0.0,
        max_trace_error: 0.0,
        max_hermiticity_defect: 0.0,
        max_top_shell_population: 0.0,
    };
    let lambda = |t: f64| C64::new(g(t) / 2.0, 0.0);

    for (i, sample) in analytic.samples.iter().enumerate() {
        let top = rho.top_shell_population();
        report.max_top_shell_population = report.max_top_shell_population.max(top);
        if top > TOP_SHELL_LIMIT {
            return Err(CventError::Truncation { population: top, limit: TOP_SHELL_LIMIT });
        }
        let m = extract_moments(&rho);
        let s = &sample.state;
        let a = (s.mean_photons(Mode::One), s.mean_photons(Mode::Two), correlation_variance(s));
        report.max_dev_n1 = report.max_dev_n1.max((m.mean_n1 - a.0).abs());
        report.max_dev_n2 = report.max_dev_n2.max((m.mean_n2 - a.1).abs());
        report.max_dev_delta_sq = report.max_dev_delta_sq.max((m.delta_sq - a.2).abs());
        report.max_trace_error = report.max_trace_error.max((rho.trace() - 1.0).norm());
        if keep.binary_search(&i).is_ok() {
            report.max_hermiticity_defect =
                report.max_hermiticity_defect.max(rho.hermiticity_defect());
            report.rows.push(OracleRow {
                t_tilde: sample.t_tilde,
                analytic_n1: a.0,
                analytic_n2: a.1,
                analytic_delta_sq: a.2,
                oracle_n1: m.mean_n1,
                oracle_n2: m.mean_n2,
                oracle_delta_sq: m.delta_sq,
            });
        }
        if i == steps {
            break;
        }
        let t = sample.t_tilde;
        let h = cfg.dt;
        let coupling = StepCoupling { start: lambda(t), mid: lambda(t + 0.5 * h), end: lambda(t + h) };
        rho = lindblad_step(&rho, coupling, g1, g2, h)?;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::rhs_general;
    use crate::state::{thermal_decay, CavityParams};

    #[test]
    fn cw_pump_matches_reduced_solution() {
        let mut cfg = OracleConfig::new(0.0, 3.0);
        cfg.n_max = 12;
        let r = compare_with_analytic(&SqueezedThermalState::vacuum(0.0), |_| 0.6, 0.0, &cfg).unwrap();
        assert!(r.max_deviation() < 1e-4, "{r:?}");
        assert!(r.max_trace_error < 1e-6);
        assert_eq!(r.rows.len(), 20);
    }

    #[test]
    fn thermal_decay_matches_closed_form() {
        let mut cfg = OracleConfig::new(0.0, 3.0);
        cfg.n_max = 20;
        let start = SqueezedThermalState::thermal(0.5, 0.2, 0.0).unwrap();
        let zeta = 0.4;
        let r = compare_with_analytic(&start, |_| 0.0, zeta, &cfg).unwrap();
        let p = CavityParams::from_zeta(zeta).unwrap();
        for row in &r.rows {
            let (a, b) = thermal_decay(0.5, 0.2, &p, row.t_tilde).unwrap();
            assert!((row.oracle_n1 - a).abs() < 1e-6 && (row.oracle_n2 - b).abs() < 1e-6);
        }
    }

    #[test]
    fn truncation_monitor_fires() {
        let mut cfg = OracleConfig::new(0.0, 2.0);
        cfg.n_max = 3;
        let err = compare_with_analytic(&SqueezedThermalState::vacuum(0.0), |_| 1.5, 0.0, &cfg)
            .unwrap_err();
        assert!(matches!(err, CventError::Truncation { .. }));
    }

    /// Recovers `(u, φ, n₁ + n₂, n₁ − n₂)` from Fock moments, with `φ` in the
    /// drive convention of the general equations of motion.
    fn ansatz_from_moments(m: &OracleMoments) -> (f64, f64, f64, f64) {
        let a = 1.0 + m.mean_n1 + m.mean_n2;
        let two_m = 2.0 * m.pair_corr.norm();
        let u = 0.5 * (two_m / a).atanh();
        let total = (a * a - two_m * two_m).sqrt() - 1.0;
        (u, m.pair_corr.arg(), total, m.mean_n1 - m.mean_n2)
    }

    #[test]
    fn general_equations_match_oracle_off_lock() {
        // detuned phase and unequal losses: exercises every term of the general form
        let params = CavityParams::new(1.3, 0.7, 0.0, 0.0, 0.0).unwrap();
        let lambda = C64::from_polar(0.35, 0.4);
        let (u0, phi0, n1, n2) = (0.3, -0.6, 0.15, 0.05);
        // Fock state uses the squeezing-operator phase, which is φ + π here
        let (mut rho, _) =
            build_squeezed_thermal(u0, phi0 + std::f64::consts::PI, n1, n2, 16).unwrap();
        let mut s = SqueezedThermalState::new(u0, phi0, n1, n2, 0.0).unwrap();
        let dt = 2e-3;
        for _ in 0..500 {
            rho = lindblad_step(&rho, lambda, params.gamma1(), params.gamma2(), dt).unwrap();
            let f = |s: &SqueezedThermalState| rhs_general(s, lambda, &params).unwrap();
            let shift = |s: &SqueezedThermalState, k: (f64, f64, f64, f64), h: f64| SqueezedThermalState {
                u: s.u + h * k.0,
                phi: s.phi + h * k.1,
                n1: s.n1 + h * k.2,
                n2: s.n2 + h * k.3,
                t_tilde: s.t_tilde + h,
            };
            let k1 = f(&s);
            let k2 = f(&shift(&s, k1, dt / 2.0));
            let k3 = f(&shift(&s, k2, dt / 2.0));
            let k4 = f(&shift(&s, k3, dt));
            let k = (
                (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0) / 6.0,
                (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1) / 6.0,
                (k1.2 + 2.0 * k2.2 + 2.0 * k3.2 + k4.2) / 6.0,
                (k1.3 + 2.0 * k2.3 + 2.0 * k3.3 + k4.3) / 6.0,
            );
            s = shift(&s, k, dt);
        }
        let (u, phi, total, diff) = ansatz_from_moments(&extract_moments(&rho));
        let dphi = (phi - s.phi).rem_euclid(2.0 * std::f64::consts::PI);
        assert!((u - s.u).abs() < 1e-5, "u {u} vs {}", s.u);
        assert!(dphi.min(2.0 * std::f64::consts::PI - dphi) < 1e-5, "phi {phi} vs {}", s.phi);
        assert!((total - (s.n1 + s.n2)).abs() < 1e-5);
        assert!((diff - (s.n1 - s.n2)).abs() < 1e-5);
    }
}
