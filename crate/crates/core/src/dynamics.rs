//! Equations of motion for `(u, φ, n₁, n₂)` and their fixed-step integration.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, CventError, Result};
use crate::optimize::parabola_vertex;
use crate::ring::PumpModel;
use crate::state::{check_zeta, correlation_variance, CavityParams, SqueezedThermalState};

/// Below this squeezing amplitude the phase equation is not evaluated.
pub const U_FLOOR: f64 = 1e-12;

/// Negative excursions of `u`, `n₁`, `n₂` smaller than this are rounding and
/// get clamped to zero.
const CLAMP_TOL: f64 = 1e-12;

pub const DEFAULT_STEP: f64 = 1e-3;

/// Thermal-number rate for one mode, `n(r_o·sinh²u − r_s·cosh²u) + r_o·sinh²u`,
/// where `r_s` is the mode's own relative decay rate and `r_o` the other one.
///
/// Shared by both modes so that `ζ → −ζ` swaps them bit for bit.
#[inline]
fn thermal_rate(n: f64, r_self: f64, r_other: f64, s2: f64, c2: f64) -> f64 {
    n * (r_other * s2 - r_self * c2) + r_other * s2
}

/// Phase-matched equations of motion in `t̃ = Γ₊t`.
///
/// Returns `(du/dt̃, dn₁/dt̃, dn₂/dt̃)`. The squeezing phase follows the pump and
/// drops out.
pub fn rhs_reduced(state: &SqueezedThermalState, g: f64, zeta: f64) -> (f64, f64, f64) {
    reduced(state.u, state.n1, state.n2, g, zeta)
}

#[inline]
fn reduced(u: f64, n1: f64, n2: f64, g: f64, zeta: f64) -> (f64, f64, f64) {
    // sinh and cosh from one exp_m1, without cancellation at small u
    let em1 = u.exp_m1();
    let inv = 1.0 / (1.0 + em1);
    let sh = 0.5 * (em1 + em1 * inv);
    let ch = 0.5 * (1.0 + em1 + inv);
    let (s2, c2) = (sh * sh, ch * ch);
    let (r1, r2) = (1.0 + zeta, 1.0 - zeta);
    let du = g / 2.0 - sh * ch / (n1 + n2 + 1.0) * (1.0 + zeta * (n2 - n1));
    (du, thermal_rate(n1, r1, r2, s2, c2), thermal_rate(n2, r2, r1, s2, c2))
}

/// Equations of motion in physical time for an arbitrary squeezing phase.
///
/// `pump_field` is `λ = γE_P(t)/ħ`, the complex pair-creation rate. Here `φ`
/// is the angle at which the drive `Im(λe^{−iφ})` is maximal, so for a pump
/// `|λ|e^{iθ}e^{−iω_s(t−tᵢ)}` the phase-locked solution is [`squeezing_phase`].
///
/// Returns `(du/dt, dφ/dt, dn₁/dt, dn₂/dt)`.
pub fn rhs_general(
    state: &SqueezedThermalState,
    pump_field: C64,
    params: &CavityParams,
) -> Result<(f64, f64, f64, f64)> {
    let (u, n1, n2) = (state.u, state.n1, state.n2);
    if !(u > U_FLOOR) {
        return Err(CventError::PhaseSingularity { u, floor: U_FLOOR });
    }
    let (g1, g2) = (params.gamma1(), params.gamma2());
    let s2 = u.sinh().powi(2);
    let c2 = u.cosh().powi(2);
    let drive = pump_field * C64::from_polar(1.0, -state.phi);

    let damping = (2.0 * u).sinh() / (2.0 * (n1 + n2 + 1.0))
        * (params.gamma_plus() + params.gamma_minus() * (n2 - n1));
    let du = drive.im - damping;
    // φ here is arg(−ξ); in terms of arg ξ the sign of the second term flips
    let dphi = -params.omega_s() - 2.0 * drive.re / (2.0 * u).tanh();
    Ok((du, dphi, thermal_rate(n1, g1, g2, s2, c2), thermal_rate(n2, g2, g1, s2, c2)))
}

/// Phase-locked squeezing phase `−ω_s(t − tᵢ) − π/2 + θ`.
pub fn squeezing_phase(t: f64, t_i: f64, theta: f64, omega_s: f64) -> f64 {
    -omega_s * (t - t_i) - std::f64::consts::FRAC_PI_2 + theta
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Method {
    #[default]
    Rk4,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub t_start: f64,
    pub t_end: f64,
    pub step: f64,
    pub method: Method,
}

impl IntegratorConfig {
    pub fn new(t_start: f64, t_end: f64, step: f64) -> Result<Self> {
        let cfg = Self { t_start, t_end, step, method: Method::Rk4 };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Window `[−5τ̃, max(5τ̃, 10)]`, which starts where the pump is negligible
    /// and runs long enough to see the post-pulse decay.
    pub fn for_pulse(tau_tilde: f64, step: f64) -> Result<Self> {
        if !(tau_tilde > 0.0) {
            return Err(invalid("tau", format!("must be positive, got {tau_tilde}")));
        }
        Self::new(-5.0 * tau_tilde, (5.0 * tau_tilde).max(10.0), step)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_start.is_finite() && self.t_end.is_finite()) {
            return Err(invalid("t_start", "window bounds must be finite"));
        }
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(invalid("step", format!("must be positive, got {}", self.step)));
        }
        if !(self.t_end > self.t_start) {
            return Err(invalid(
                "t_end",
                format!("must exceed t_start ({} <= {})", self.t_end, self.t_start),
            ));
        }
        if self.steps() < 2 {
            return Err(invalid("step", "window must span at least two steps"));
        }
        Ok(())
    }

    /// Number of whole steps in the window.
    pub fn steps(&self) -> usize {
        ((self.t_end - self.t_start) / self.step * (1.0 + 1e-12)).floor() as usize
    }

    pub fn time(&self, i: usize) -> f64 {
        self.t_start + i as f64 * self.step
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t_tilde: f64,
    pub state: SqueezedThermalState,
    pub g: f64,
    pub delta_sq: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub step: f64,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.t_tilde)
    }

    /// First time at which `Δ²` rises through `level`, linearly interpolated.
    pub fn first_crossing_above(&self, level: f64) -> Option<f64> {
        self.samples.windows(2).find_map(|w| {
            let (a, b) = (&w[0], &w[1]);
            (a.delta_sq < level && b.delta_sq >= level).then(|| {
                a.t_tilde + (level - a.delta_sq) / (b.delta_sq - a.delta_sq) * (b.t_tilde - a.t_tilde)
            })
        })
    }

    pub fn max_delta_sq(&self) -> Option<f64> {
        self.samples.iter().map(|s| s.delta_sq).reduce(f64::max)
    }
}

fn clamp_component(v: f64, t: f64) -> Result<f64> {
    if !v.is_finite() || v < -CLAMP_TOL {
        return Err(CventError::Integration { t_tilde: t });
    }
    Ok(v.max(0.0))
}

/// Integrates the phase-matched system with fixed-step RK4.
///
/// The initial state is placed at `cfg.t_start`; its `t_tilde` is ignored.
pub fn integrate(
    initial: &SqueezedThermalState,
    pump: &PumpModel,
    zeta: f64,
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    integrate_with(initial, pump.evaluator(), zeta, cfg)
}

/// [`integrate`] for an arbitrary pump strength `g(t̃)`.
pub fn integrate_with<G>(
    initial: &SqueezedThermalState,
    g: G,
    zeta: f64,
    cfg: &IntegratorConfig,
) -> Result<Trajectory>
where
    G: Fn(f64) -> f64,
{
    initial.validate()?;
    check_zeta(zeta)?;
    cfg.validate()?;

    let h = cfg.step;
    let n = cfg.steps();
    let phi = initial.phi;
    let at = |u, n1, n2, t| SqueezedThermalState { u, phi, n1, n2, t_tilde: t };

    let mut samples = Vec::with_capacity(n + 1);
    let (mut u, mut n1, mut n2) = (initial.u, initial.n1, initial.n2);
    let mut g_t = g(cfg.t_start);
    for i in 0..=n {
        let t = cfg.time(i);
        let s = at(u, n1, n2, t);
        samples.push(Sample { t_tilde: t, state: s, g: g_t, delta_sq: correlation_variance(&s) });
        if i == n {
            break;
        }

        let t_next = cfg.time(i + 1);
        let (g_mid, g_next) = (g(t + 0.5 * h), g(t_next));
        let k1 = reduced(u, n1, n2, g_t, zeta);
        let k2 = reduced(u + 0.5 * h * k1.0, n1 + 0.5 * h * k1.1, n2 + 0.5 * h * k1.2, g_mid, zeta);
        let k3 = reduced(u + 0.5 * h * k2.0, n1 + 0.5 * h * k2.1, n2 + 0.5 * h * k2.2, g_mid, zeta);
        let k4 = reduced(u + h * k3.0, n1 + h * k3.1, n2 + h * k3.2, g_next, zeta);
        u = clamp_component(u + h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0), t_next)?;
        n1 = clamp_component(n1 + h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1), t_next)?;
        n2 = clamp_component(n2 + h / 6.0 * (k1.2 + 2.0 * k2.2 + 2.0 * k3.2 + k4.2), t_next)?;
        g_t = g_next;
    }
    Ok(Trajectory { samples, step: h })
}

/// Located minimum of a trajectory observable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VarianceMinimum {
    pub t_min: f64,
    pub delta_sq_min: f64,
    /// State interpolated to `t_min`.
    pub state: SqueezedThermalState,
    /// Pump strength interpolated to `t_min`.
    pub g: f64,
    /// The discrete minimum sits on the first or last sample, so the window is
    /// too short to contain the true minimum.
    pub at_boundary: bool,
}

/// Minimum of `Δ²` over the sampled window.
pub fn find_minimum_variance(traj: &Trajectory) -> Result<VarianceMinimum> {
    find_minimum_by(traj, |s| s.delta_sq)
}

/// Minimum of an arbitrary per-sample observable, refined by a parabola
/// through the discrete minimum and its two neighbours.
pub fn find_minimum_by<F>(traj: &Trajectory, f: F) -> Result<VarianceMinimum>
where
    F: Fn(&Sample) -> f64,
{
    let s = &traj.samples;
    if s.is_empty() {
        return Err(CventError::EmptyTrajectory);
    }
    let values: Vec<f64> = s.iter().map(&f).collect();
    let mut i = 0;
    for (j, &v) in values.iter().enumerate() {
        if v < values[i] {
            i = j;
        }
    }
    let last = s.len() - 1;
    if i == 0 || i == last {
        return Ok(VarianceMinimum {
            t_min: s[i].t_tilde,
            delta_sq_min: values[i],
            state: s[i].state,
            g: s[i].g,
            at_boundary: true,
        });
    }

    let (a, b, c) = (&s[i - 1], &s[i], &s[i + 1]);
    let vertex = parabola_vertex((a.t_tilde, values[i - 1]), (b.t_tilde, values[i]), (c.t_tilde, values[i + 1]));
    let (t_min, v_min) = match vertex {
        Some((t, v)) if t >= a.t_tilde && t <= c.t_tilde && v <= values[i] => (t, v),
        _ => (b.t_tilde, values[i]),
    };

    // quadratic Lagrange interpolation through the same three samples
    let (t0, t1, t2) = (a.t_tilde, b.t_tilde, c.t_tilde);
    let l0 = (t_min - t1) * (t_min - t2) / ((t0 - t1) * (t0 - t2));
    let l1 = (t_min - t0) * (t_min - t2) / ((t1 - t0) * (t1 - t2));
    let l2 = (t_min - t0) * (t_min - t1) / ((t2 - t0) * (t2 - t1));
    let lerp = |x0: f64, x1: f64, x2: f64| l0 * x0 + l1 * x1 + l2 * x2;
    let state = SqueezedThermalState {
        u: lerp(a.state.u, b.state.u, c.state.u).max(0.0),
        phi: b.state.phi,
        n1: lerp(a.state.n1, b.state.n1, c.state.n1).max(0.0),
        n2: lerp(a.state.n2, b.state.n2, c.state.n2).max(0.0),
        t_tilde: t_min,
    };
    Ok(VarianceMinimum {
        t_min,
        delta_sq_min: v_min,
        state,
        g: lerp(a.g, b.g, c.g),
        at_boundary: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{optimum_tau, RingParams};
    use crate::state::{thermal_decay, Mode};
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn ring_pump(g0: f64) -> PumpModel {
        PumpModel::ring(g0, optimum_tau(), RingParams::from_sigma(0.868, 0.99).unwrap()).unwrap()
    }

    fn vac() -> SqueezedThermalState {
        SqueezedThermalState::vacuum(0.0)
    }

    #[test]
    fn reduced_rhs_examples() {
        assert_eq!(rhs_reduced(&vac(), 0.0, 0.3), (0.0, 0.0, 0.0));
        for zeta in [-0.7, 0.0, 0.4] {
            assert_eq!(rhs_reduced(&vac(), 4.0, zeta), (2.0, 0.0, 0.0));
        }
        let s = SqueezedThermalState::new(0.5, 0.0, 0.0, 0.0, 0.0).unwrap();
        let (du, dn1, dn2) = rhs_reduced(&s, 0.0, 0.0);
        assert!((du + 1f64.sinh() / 2.0).abs() < 1e-15);
        assert!((dn1 - 0.5f64.sinh().powi(2)).abs() < 1e-15);
        assert_eq!(dn1, dn2);
    }

    #[test]
    fn general_rhs_refuses_vacuum() {
        let p = CavityParams::from_zeta(0.0).unwrap();
        let err = rhs_general(&vac(), C64::new(1.0, 0.0), &p).unwrap_err();
        assert!(matches!(err, CventError::PhaseSingularity { .. }));
    }

    #[test]
    fn general_rhs_equal_losses_single_mode_form() {
        let p = CavityParams::new(2.0, 2.0, 5.0, 3.0, 0.0).unwrap();
        let s = SqueezedThermalState::new(0.4, 0.3, 0.7, 0.7, 0.0).unwrap();
        let (_, _, dn1, dn2) = rhs_general(&s, C64::new(0.2, -1.1), &p).unwrap();
        assert_eq!(dn1, dn2);
    }

    #[test]
    fn general_rhs_phase_locked_matches_reduced() {
        let (w1, w2, theta) = (7.0, 4.5, 0.8);
        let p = CavityParams::new(1.4, 0.6, w1, w2, theta).unwrap();
        let (ti, t) = (0.2, 1.35);
        let amp = 0.9;
        let lambda = C64::from_polar(amp, theta - p.omega_s() * (t - ti));
        let phi = squeezing_phase(t, ti, theta, p.omega_s());
        let s = SqueezedThermalState::new(0.6, phi, 0.3, 0.8, t).unwrap();
        let (du, dphi, dn1, dn2) = rhs_general(&s, lambda, &p).unwrap();

        let gp = p.gamma_plus();
        let (ru, rn1, rn2) = rhs_reduced(&s, 2.0 * amp / gp, p.zeta());
        assert!((du - gp * ru).abs() < 1e-14);
        assert!((dn1 - gp * rn1).abs() < 1e-14);
        assert!((dn2 - gp * rn2).abs() < 1e-14);
        assert!((dphi + p.omega_s()).abs() < 1e-12);
    }

    #[test]
    fn squeezing_phase_examples() {
        assert_eq!(squeezing_phase(3.0, 3.0, 0.0, 11.0), -FRAC_PI_2);
        let ws = 2.5;
        let full = squeezing_phase(2.0 * PI / ws, 0.0, 0.0, ws);
        assert!((full + FRAC_PI_2 + 2.0 * PI).abs() < 1e-14);
        assert!(((full + FRAC_PI_2).rem_euclid(2.0 * PI)).min(2.0 * PI - (full + FRAC_PI_2).rem_euclid(2.0 * PI)) < 1e-12);
        assert_eq!(squeezing_phase(1.0, 1.0, FRAC_PI_2, 4.0), 0.0);
    }

    #[test]
    fn config_validation() {
        assert!(IntegratorConfig::new(0.0, 1.0, 0.0).is_err());
        assert!(IntegratorConfig::new(1.0, 1.0, 0.1).is_err());
        assert!(IntegratorConfig::new(0.0, 1.0, 0.6).is_err());
        let c = IntegratorConfig::new(0.0, 1.0, 0.5).unwrap();
        assert_eq!(c.steps(), 2);
        let c = IntegratorConfig::for_pulse(1.0, 1e-3).unwrap();
        assert_eq!((c.t_start, c.t_end), (-5.0, 10.0));
        assert_eq!(c.steps(), 15_000);
    }

    #[test]
    fn trajectory_invariants() {
        let cfg = IntegratorConfig::new(-3.0, 4.0, 0.01).unwrap();
        let tr = integrate(&vac(), &ring_pump(2.0), 0.2, &cfg).unwrap();
        assert_eq!(tr.len(), 701);
        for (i, s) in tr.samples.iter().enumerate() {
            assert_eq!(s.t_tilde, -3.0 + i as f64 * 0.01);
            assert_eq!(s.delta_sq, correlation_variance(&s.state));
        }
    }

    #[test]
    fn pump_off_vacuum_stays_vacuum() {
        let cfg = IntegratorConfig::new(0.0, 5.0, 1e-3).unwrap();
        let tr = integrate(&vac(), &PumpModel::constant(0.0).unwrap(), 0.5, &cfg).unwrap();
        assert!(tr.samples.iter().all(|s| s.state.u == 0.0 && s.state.n1 == 0.0 && s.delta_sq == 1.0));
    }

    #[test]
    fn pump_off_thermal_matches_closed_form() {
        for zeta in [-0.6, 0.0, 0.35] {
            let cfg = IntegratorConfig::new(-1.0, 6.0, 1e-3).unwrap();
            let start = SqueezedThermalState::thermal(2.0, 2.0, 0.0).unwrap();
            let tr = integrate(&start, &PumpModel::constant(0.0).unwrap(), zeta, &cfg).unwrap();
            let p = CavityParams::from_zeta(zeta).unwrap();
            for s in &tr.samples {
                let (a, b) = thermal_decay(2.0, 2.0, &p, s.t_tilde - cfg.t_start).unwrap();
                assert!((s.state.n1 - a).abs() < 1e-10 && (s.state.n2 - b).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn zeta_swap_is_exact() {
        let cfg = IntegratorConfig::new(-8.0, 10.0, 2e-3).unwrap();
        let p = ring_pump(4.0);
        let a = integrate(&vac(), &p, 0.37, &cfg).unwrap();
        let b = integrate(&vac(), &p, -0.37, &cfg).unwrap();
        for (x, y) in a.samples.iter().zip(&b.samples) {
            assert_eq!(x.state.n1, y.state.n2);
            assert_eq!(x.state.n2, y.state.n1);
            assert_eq!(x.state.u, y.state.u);
        }
    }

    #[test]
    fn zero_zeta_keeps_modes_equal() {
        let cfg = IntegratorConfig::for_pulse(optimum_tau(), 1e-3).unwrap();
        let tr = integrate(&vac(), &ring_pump(4.0), 0.0, &cfg).unwrap();
        assert!(tr.samples.iter().all(|s| (s.state.n1 - s.state.n2).abs() <= 1e-12));
    }

    #[test]
    fn rk4_is_fourth_order() {
        let pump = ring_pump(4.0);
        let run = |h: f64| {
            let cfg = IntegratorConfig::new(-4.0, 6.0, h).unwrap();
            *integrate(&vac(), &pump, 0.3, &cfg).unwrap().samples.last().unwrap()
        };
        let h = 0.04;
        let (coarse, fine, reference) = (run(h), run(h / 2.0), run(h / 8.0));
        let err = |s: &Sample| {
            (s.state.u - reference.state.u)
                .abs()
                .max((s.state.n1 - reference.state.n1).abs())
                .max((s.state.n2 - reference.state.n2).abs())
        };
        let ratio = err(&coarse) / err(&fine);
        assert!((12.0..=20.0).contains(&ratio), "error ratio {ratio}");
    }

    #[test]
    fn minimum_of_monotone_series_flags_boundary() {
        let samples = (0..10)
            .map(|i| Sample {
                t_tilde: i as f64,
                state: vac(),
                g: 0.0,
                delta_sq: 1.0 - 0.05 * i as f64,
            })
            .collect();
        let m = find_minimum_variance(&Trajectory { samples, step: 1.0 }).unwrap();
        assert!(m.at_boundary);
        assert_eq!(m.t_min, 9.0);
        let empty = Trajectory { samples: vec![], step: 1.0 };
        assert_eq!(find_minimum_variance(&empty).unwrap_err(), CventError::EmptyTrajectory);
    }

    #[test]
    fn minimum_identity_at_minimum() {
        let tau = optimum_tau();
        for zeta in [0.0, 0.2, -0.5] {
            let cfg = IntegratorConfig::for_pulse(tau, 1e-3).unwrap();
            let tr = integrate(&vac(), &ring_pump(4.0), zeta, &cfg).unwrap();
            let m = find_minimum_variance(&tr).unwrap();
            assert!(!m.at_boundary);
            let rhs = (1.0 + zeta * (m.state.n2 - m.state.n1)) / (1.0 + m.g);
            assert!((m.delta_sq_min - rhs).abs() < 1e-3, "zeta {zeta}: {} vs {rhs}", m.delta_sq_min);
        }
    }

    #[test]
    fn minimum_refinement_recovers_parabola() {
        let samples = (0..7)
            .map(|i| {
                let t = i as f64 * 0.5;
                Sample { t_tilde: t, state: vac(), g: t, delta_sq: (t - 1.3).powi(2) + 0.2 }
            })
            .collect();
        let m = find_minimum_variance(&Trajectory { samples, step: 0.5 }).unwrap();
        assert!((m.t_min - 1.3).abs() < 1e-12);
        assert!((m.delta_sq_min - 0.2).abs() < 1e-12);
        assert!((m.g - 1.3).abs() < 1e-12);
    }

    #[test]
    fn pump_off_thermal_numbers_nonincreasing_without_squeezing() {
        let start = SqueezedThermalState::thermal(3.0, 0.5, 0.0).unwrap();
        let cfg = IntegratorConfig::new(0.0, 4.0, 5e-3).unwrap();
        let tr = integrate(&start, &PumpModel::constant(0.0).unwrap(), 0.6, &cfg).unwrap();
        for w in tr.samples.windows(2) {
            assert!(w[1].state.total_thermal() <= w[0].state.total_thermal());
        }
    }

    #[test]
    fn pump_off_squeezing_feeds_thermal_numbers() {
        // decay of a squeezed vacuum turns pair correlations into thermal noise
        let start = SqueezedThermalState::new(1.0, 0.0, 0.0, 0.0, 0.0).unwrap();
        let (_, dn1, dn2) = rhs_reduced(&start, 0.0, 0.0);
        assert!(dn1 > 0.0 && dn2 > 0.0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn pump_off_decays_monotonically(
            u0 in 0.0..2.0f64,
            n1 in 0.0..1.0f64,
            n2 in 0.0..1.0f64,
            zeta in -0.9..0.9f64,
        ) {
            let start = SqueezedThermalState::new(u0, 0.0, n1, n2, 0.0).unwrap();
            let cfg = IntegratorConfig::new(0.0, 4.0, 5e-3).unwrap();
            let tr = integrate(&start, &PumpModel::constant(0.0).unwrap(), zeta, &cfg).unwrap();
            let photons = |s: &SqueezedThermalState| s.mean_photons(Mode::One) + s.mean_photons(Mode::Two);
            for w in tr.samples.windows(2) {
                prop_assert!(w[1].state.u <= w[0].state.u);
                prop_assert!(photons(&w[1].state) <= photons(&w[0].state) * (1.0 + 1e-12));
            }
        }
    }
}
