use std::fmt;

use anyhow::Context;
use cvent::analysis::{g0_curve, global_minimum, sweep_offset, SweepSpec};
use cvent::dynamics::DEFAULT_STEP;
use cvent::oracle::{compare_with_analytic, OracleConfig, DEFAULT_DT};
use cvent::ring::{g_max, optimum_sigma, optimum_tau, predicted_min_variance};
use cvent::{
    correlation_variance_offset, find_minimum_by, integrate, integrate_with, thermal_decay, CavityParams,
    IntegratorConfig, SqueezedThermalState,
};

use crate::config::{config_err, Amplitude, RunConfig, Variant};
use crate::output::{Meta, Table};

/// Largest analytic-vs-oracle deviation `validate` accepts.
pub const VALIDATE_TOLERANCE: f64 = 1e-3;
/// Largest pump amplitude the default Fock cutoff is budgeted for.
pub const VALIDATE_MAX_G0: f64 = 1.0;
const DECAY_WINDOW: (f64, f64) = (0.0, 5.0);
const CW_WINDOW: (f64, f64) = (0.0, 10.0);

/// Oracle and analytic moments disagree. The table is still written.
#[derive(Debug)]
pub struct ValidationFailed {
    pub deviation: f64,
}

impl fmt::Display for ValidationFailed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "oracle deviation {:e} exceeds {VALIDATE_TOLERANCE:e}", self.deviation)
    }
}

impl std::error::Error for ValidationFailed {}

fn base_parameters(cfg: &RunConfig) -> Vec<(&'static str, Meta)> {
    let variant = match cfg.variant {
        Variant::Ring => "ring",
        Variant::Gaussian => "gaussian",
        Variant::Constant => "constant",
    };
    let mut p = vec![("pump", Meta::from(variant)), ("g0", cfg.g0.into())];
    if let Amplitude::Physical { gamma_plus } = cfg.amplitude {
        p.push(("gamma_plus_per_s", gamma_plus.into()));
    }
    p.extend([
        ("tau_tilde", cfg.tau_tilde.into()),
        ("a_p", cfg.ring.a_p().into()),
        ("sigma_p", cfg.ring.sigma_p().into()),
        ("zeta", cfg.zeta.into()),
        ("offset_mrad", cfg.offset_mrad().into()),
    ]);
    p
}

/// Integration window: flags first, then the pulse default for the variant.
fn window(cfg: &RunConfig, step: f64) -> anyhow::Result<IntegratorConfig> {
    let default = match cfg.variant {
        Variant::Constant => IntegratorConfig::new(CW_WINDOW.0, CW_WINDOW.1, step)?,
        _ => IntegratorConfig::for_pulse(cfg.tau_tilde, step)?,
    };
    let (a, b) = (cfg.t_start.unwrap_or(default.t_start), cfg.t_end.unwrap_or(default.t_end));
    if b <= a {
        return Err(config_err("integrator", format!("empty window [{a}, {b}]")).into());
    }
    Ok(IntegratorConfig::new(a, b, step)?)
}

fn warn_regime(cfg: &RunConfig) {
    if cfg.variant == Variant::Ring && !cfg.ring.in_validity_regime() {
        eprintln!(
            "warning: 1 - sigma_p*a_p = {:.4} is outside the small-loss regime of the ring-field approximation",
            cfg.ring.detuning_loss()
        );
    }
}

pub fn simulate(cfg: &RunConfig) -> anyhow::Result<Table> {
    warn_regime(cfg);
    let step = cfg.step.unwrap_or(DEFAULT_STEP);
    let icfg = window(cfg, step)?;
    let start = SqueezedThermalState::thermal(cfg.n1, cfg.n2, icfg.t_start)?;
    let traj = integrate(&start, &cfg.pump()?, cfg.zeta, &icfg)?;
    let dt = cfg.delta_theta;
    let variance = |s: &SqueezedThermalState| correlation_variance_offset(s, dt);

    let mut t = Table::new("simulate", &["t_tilde", "u", "n1", "n2", "g", "delta_sq"]);
    t.parameters = base_parameters(cfg);
    t.parameters.extend([
        ("step", step.into()),
        ("t_start", icfg.t_start.into()),
        ("t_end", icfg.t_end.into()),
        ("n1_initial", cfg.n1.into()),
        ("n2_initial", cfg.n2.into()),
    ]);
    for s in &traj.samples {
        t.push(vec![s.t_tilde, s.state.u, s.state.n1, s.state.n2, s.g, variance(&s.state)]);
    }
    let m = find_minimum_by(&traj, |s| variance(&s.state))?;
    t.summary.extend([
        ("delta_sq_min", m.delta_sq_min.into()),
        ("t_min", m.t_min.into()),
        ("min_at_boundary", Meta::from(if m.at_boundary { "true" } else { "false" })),
    ]);
    // first return above 1 after the variance has dipped below it
    let crossing = traj
        .samples
        .windows(2)
        .find(|w| variance(&w[0].state) < 1.0 && variance(&w[1].state) >= 1.0)
        .map(|w| w[1].t_tilde);
    if let Some(tc) = crossing {
        t.summary.push(("t_cross_above_1", tc.into()));
    }
    Ok(t)
}

pub fn sweep(cfg: &RunConfig) -> anyhow::Result<Table> {
    if cfg.variant != Variant::Ring {
        return Err(config_err("pump", "sweep scans the ring pump only").into());
    }
    warn_regime(cfg);
    let mut spec = SweepSpec::grid(cfg.g0, cfg.ring, cfg.n_tau, cfg.n_zeta);
    if cfg.n_tau == 1 {
        spec.tau_values = vec![cfg.tau_tilde];
    }
    if cfg.n_zeta == 1 {
        spec.zeta_values = vec![cfg.zeta];
    }
    spec.step = cfg.step.unwrap_or(DEFAULT_STEP);
    spec.window = match (cfg.t_start, cfg.t_end) {
        (Some(a), Some(b)) => Some((a, b)),
        (None, None) => None,
        _ => return Err(config_err("integrator", "sweep needs both t_start and t_end, or neither").into()),
    };
    let grid = sweep_offset(&spec, cfg.delta_theta)?;
    let best = global_minimum(&grid)?;

    let mut t = Table::new("sweep", &["tau_tilde", "zeta", "delta_sq_min", "t_min", "n1_min", "n2_min"]);
    t.parameters = base_parameters(cfg);
    t.parameters.retain(|(k, _)| !matches!(*k, "tau_tilde" | "zeta"));
    t.parameters.extend([
        ("step", spec.step.into()),
        ("n_tau", (cfg.n_tau as f64).into()),
        ("n_zeta", (cfg.n_zeta as f64).into()),
    ]);
    for (tau, zeta, p) in grid.iter() {
        t.push(vec![tau, zeta, p.delta_sq_min, p.t_min, p.n1_at_min, p.n2_at_min]);
    }
    t.summary.extend([
        ("global_tau_tilde", best.tau_tilde.into()),
        ("global_zeta", best.zeta.into()),
        ("global_delta_sq_min", best.delta_sq_min.into()),
        ("global_t_min", best.t_min.into()),
    ]);
    let boundary = grid.results.iter().filter(|p| p.at_boundary).count();
    if boundary > 0 {
        t.summary.push(("points_min_at_window_edge", (boundary as f64).into()));
    }
    Ok(t)
}

pub fn optimize(cfg: &RunConfig) -> anyhow::Result<Table> {
    warn_regime(cfg);
    let a_p = cfg.ring.a_p();
    let sigma_opt = optimum_sigma(a_p)?;
    let step = cfg.step.unwrap_or(DEFAULT_STEP);
    let curve = g0_curve(&[cfg.g0], a_p, false, cfg.ring.sigma_p(), step)?;
    let p = curve.points[0];
    let predicted = predicted_min_variance(cfg.g0, &cfg.ring);

    let mut t = Table::new(
        "optimize",
        &[
            "tau_opt",
            "sigma_opt",
            "g_max",
            "predicted_min",
            "numeric_min",
            "numeric_tau_tilde",
            "numeric_t_min",
            "total_thermal",
            "relative_difference",
        ],
    );
    t.parameters = base_parameters(cfg);
    t.parameters.retain(|(k, _)| !matches!(*k, "tau_tilde" | "zeta" | "offset_mrad" | "pump"));
    t.parameters.push(("step", step.into()));
    t.push(vec![
        optimum_tau(),
        sigma_opt,
        g_max(cfg.g0, &cfg.ring),
        predicted,
        p.delta_sq_min_numeric,
        p.tau_tilde,
        p.t_min,
        p.total_thermal,
        (predicted - p.delta_sq_min_numeric).abs() / p.delta_sq_min_numeric,
    ]);
    Ok(t)
}

pub fn validate(cfg: &RunConfig) -> anyhow::Result<Table> {
    if cfg.g0 > VALIDATE_MAX_G0 {
        return Err(config_err(
            "pump.g0",
            format!("validate needs g0 <= {VALIDATE_MAX_G0} to keep the Fock cutoff adequate, got {}", cfg.g0),
        )
        .into());
    }
    warn_regime(cfg);
    let dt = cfg.step.unwrap_or(DEFAULT_DT);
    let icfg = window(cfg, dt)?;
    let mut ocfg = OracleConfig::new(icfg.t_start, icfg.t_end);
    ocfg.n_max = cfg.n_max;
    ocfg.dt = dt;
    ocfg.rows = cfg.rows;
    let start = SqueezedThermalState::thermal(cfg.n1, cfg.n2, icfg.t_start)?;
    let pump = cfg.pump()?.evaluator();
    let report = compare_with_analytic(&start, pump, cfg.zeta, &ocfg)?;

    let mut t = Table::new(
        "validate",
        &[
            "t_tilde",
            "analytic_n1",
            "oracle_n1",
            "analytic_n2",
            "oracle_n2",
            "analytic_delta_sq",
            "oracle_delta_sq",
        ],
    );
    t.parameters = base_parameters(cfg);
    t.parameters.retain(|(k, _)| *k != "offset_mrad");
    t.parameters.extend([
        ("n_max", (cfg.n_max as f64).into()),
        ("dt", dt.into()),
        ("t_start", icfg.t_start.into()),
        ("t_end", icfg.t_end.into()),
        ("n1_initial", cfg.n1.into()),
        ("n2_initial", cfg.n2.into()),
    ]);
    for r in &report.rows {
        t.push(vec![
            r.t_tilde,
            r.analytic_n1,
            r.oracle_n1,
            r.analytic_n2,
            r.oracle_n2,
            r.analytic_delta_sq,
            r.oracle_delta_sq,
        ]);
    }
    t.summary.extend([
        ("max_dev_n1", report.max_dev_n1.into()),
        ("max_dev_n2", report.max_dev_n2.into()),
        ("max_dev_delta_sq", report.max_dev_delta_sq.into()),
        ("max_trace_error", report.max_trace_error.into()),
        ("max_top_shell_population", report.max_top_shell_population.into()),
        ("tolerance", VALIDATE_TOLERANCE.into()),
    ]);
    Ok(t)
}

/// Deviation that makes `validate` fail, if any.
pub fn validation_failure(t: &Table) -> Option<ValidationFailed> {
    let worst = t
        .summary
        .iter()
        .filter(|(k, _)| k.starts_with("max_dev"))
        .filter_map(|(_, v)| match v {
            Meta::Num(x) => Some(*x),
            Meta::Text(_) => None,
        })
        .fold(0.0, f64::max);
    (worst > VALIDATE_TOLERANCE).then_some(ValidationFailed { deviation: worst })
}

pub fn decay(cfg: &RunConfig) -> anyhow::Result<Table> {
    let step = cfg.step.unwrap_or(DEFAULT_STEP);
    let (a, b) = (cfg.t_start.unwrap_or(DECAY_WINDOW.0), cfg.t_end.unwrap_or(DECAY_WINDOW.1));
    let icfg = IntegratorConfig::new(a, b, step)?;
    let params = CavityParams::from_zeta(cfg.zeta)?;
    let start = SqueezedThermalState::thermal(cfg.n1, cfg.n2, a)?;
    let traj = integrate_with(&start, |_| 0.0, cfg.zeta, &icfg)?;

    let mut t = Table::new("decay", &["t_tilde", "n1_closed_form", "n2_closed_form", "n1_ode", "n2_ode"]);
    t.parameters = vec![
        ("zeta", cfg.zeta.into()),
        ("n1_initial", cfg.n1.into()),
        ("n2_initial", cfg.n2.into()),
        ("step", step.into()),
        ("t_start", a.into()),
        ("t_end", b.into()),
    ];
    let mut worst: f64 = 0.0;
    for s in &traj.samples {
        let (c1, c2) = thermal_decay(cfg.n1, cfg.n2, &params, s.t_tilde - a)
            .with_context(|| format!("closed form at t~ = {}", s.t_tilde))?;
        worst = worst.max((c1 - s.state.n1).abs()).max((c2 - s.state.n2).abs());
        t.push(vec![s.t_tilde, c1, c2, s.state.n1, s.state.n2]);
    }
    t.summary.push(("max_abs_difference", worst.into()));
    Ok(t)
}
