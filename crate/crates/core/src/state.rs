//! Cavity parameters, the squeezed-thermal state and its closed-form noise
//! functions.
//!
//! All state quantities are dimensionless. Time is measured as `t̃ = Γ₊·t`
//! where `Γ₊ = (Γ₁ + Γ₂)/2`; conversion to physical time only happens at the
//! command-line boundary.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, CventError, Result};

/// Static physics of the two-mode cavity.
///
/// Decay rates are intensity decay rates in inverse physical time. The loss
/// asymmetry `zeta = (Γ₁ − Γ₂)/(Γ₁ + Γ₂)` always lies strictly inside (−1, 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CavityParams {
    gamma1: f64,
    gamma2: f64,
    omega1: f64,
    omega2: f64,
    theta: f64,
}

impl CavityParams {
    pub fn new(gamma1: f64, gamma2: f64, omega1: f64, omega2: f64, theta: f64) -> Result<Self> {
        if !(gamma1 > 0.0 && gamma1.is_finite()) {
            return Err(invalid("gamma1", format!("must be positive and finite, got {gamma1}")));
        }
        if !(gamma2 > 0.0 && gamma2.is_finite()) {
            return Err(invalid("gamma2", format!("must be positive and finite, got {gamma2}")));
        }
        if !(omega1.is_finite() && omega2.is_finite() && theta.is_finite()) {
            return Err(invalid("omega", "frequencies and phase must be finite"));
        }
        Ok(Self { gamma1, gamma2, omega1, omega2, theta })
    }

    /// Dimensionless cavity with `Γ₊ = 1` and the given loss asymmetry.
    pub fn from_zeta(zeta: f64) -> Result<Self> {
        check_zeta(zeta)?;
        Self::new(1.0 + zeta, 1.0 - zeta, 0.0, 0.0, 0.0)
    }

    pub fn with_frequencies(mut self, omega1: f64, omega2: f64) -> Self {
        self.omega1 = omega1;
        self.omega2 = omega2;
        self
    }

    pub fn with_theta(mut self, theta: f64) -> Self {
        self.theta = theta;
        self
    }

    pub fn gamma1(&self) -> f64 {
        self.gamma1
    }

    pub fn gamma2(&self) -> f64 {
        self.gamma2
    }

    pub fn gamma_plus(&self) -> f64 {
        (self.gamma1 + self.gamma2) / 2.0
    }

    pub fn gamma_minus(&self) -> f64 {
        (self.gamma1 - self.gamma2) / 2.0
    }

    pub fn zeta(&self) -> f64 {
        self.gamma_minus() / self.gamma_plus()
    }

    pub fn omega1(&self) -> f64 {
        self.omega1
    }

    pub fn omega2(&self) -> f64 {
        self.omega2
    }

    pub fn omega_s(&self) -> f64 {
        self.omega1 + self.omega2
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

pub(crate) fn check_zeta(zeta: f64) -> Result<()> {
    if zeta.is_finite() && zeta.abs() < 1.0 {
        Ok(())
    } else {
        Err(invalid("zeta", format!("|zeta| must be < 1, got {zeta}")))
    }
}

/// One of the two cavity modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    One,
    Two,
}

impl Mode {
    pub fn other(self) -> Self {
        match self {
            Mode::One => Mode::Two,
            Mode::Two => Mode::One,
        }
    }
}

/// Two-mode squeezed thermal state `Ŝ(ξ)·ρ̂_th·Ŝ†(ξ)` with `ξ = u·e^{iφ}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqueezedThermalState {
    pub u: f64,
    pub phi: f64,
    pub n1: f64,
    pub n2: f64,
    pub t_tilde: f64,
}

impl SqueezedThermalState {
    pub fn new(u: f64, phi: f64, n1: f64, n2: f64, t_tilde: f64) -> Result<Self> {
        let s = Self { u, phi, n1, n2, t_tilde };
        s.validate()?;
        Ok(s)
    }

    pub fn vacuum(t_tilde: f64) -> Self {
        Self { u: 0.0, phi: 0.0, n1: 0.0, n2: 0.0, t_tilde }
    }

    /// Unsqueezed product of thermal states.
    pub fn thermal(n1: f64, n2: f64, t_tilde: f64) -> Result<Self> {
        Self::new(0.0, 0.0, n1, n2, t_tilde)
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [("u", self.u), ("n1", self.n1), ("n2", self.n2)];
        for (name, v) in fields {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(CventError::Domain(format!("{name} must be finite and >= 0, got {v}")));
            }
        }
        if !self.phi.is_finite() || !self.t_tilde.is_finite() {
            return Err(CventError::Domain("phi and t_tilde must be finite".into()));
        }
        Ok(())
    }

    pub fn thermal_number(&self, mode: Mode) -> f64 {
        match mode {
            Mode::One => self.n1,
            Mode::Two => self.n2,
        }
    }

    pub fn total_thermal(&self) -> f64 {
        self.n1 + self.n2
    }

    /// `⟨b̂_j†b̂_j⟩ = n_j·cosh²u + (n_k + 1)·sinh²u`
    pub fn mean_photons(&self, mode: Mode) -> f64 {
        let (s, c) = (self.u.sinh(), self.u.cosh());
        self.thermal_number(mode) * c * c + (self.thermal_number(mode.other()) + 1.0) * s * s
    }

    /// `|⟨b̂₁b̂₂⟩| = (1 + n₁ + n₂)·sinh(2u)/2`
    pub fn pair_amplitude(&self) -> f64 {
        (1.0 + (self.n1 + self.n2)) * (2.0 * self.u).sinh() / 2.0
    }
}

/// Single-mode thermal occupation from its Boltzmann variable
/// `x = exp(−ħω/k_B T)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermalOccupation {
    x: f64,
}

impl ThermalOccupation {
    pub fn from_boltzmann(x: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&x) {
            return Err(invalid("x", format!("Boltzmann variable must lie in [0, 1), got {x}")));
        }
        Ok(Self { x })
    }

    pub fn from_mean(n: f64) -> Result<Self> {
        if !(n >= 0.0 && n.is_finite()) {
            return Err(invalid("n", format!("occupation must be finite and >= 0, got {n}")));
        }
        Ok(Self { x: n / (1.0 + n) })
    }

    pub fn boltzmann(&self) -> f64 {
        self.x
    }

    pub fn mean(&self) -> f64 {
        self.x / (1.0 - self.x)
    }
}

/// Free decay of a two-mode thermal state: `n_j(t) = n_j(0)·exp(−Γ_j t)`.
///
/// `t` is physical time in the units of `params`' decay rates.
pub fn thermal_decay(n0_1: f64, n0_2: f64, params: &CavityParams, t: f64) -> Result<(f64, f64)> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(CventError::Domain(format!("decay time must be >= 0, got {t}")));
    }
    if !(n0_1 >= 0.0 && n0_2 >= 0.0 && n0_1.is_finite() && n0_2.is_finite()) {
        return Err(CventError::Domain(format!(
            "initial occupations must be >= 0, got ({n0_1}, {n0_2})"
        )));
    }
    Ok((n0_1 * (-params.gamma1() * t).exp(), n0_2 * (-params.gamma2() * t).exp()))
}

/// Noise `Δχ_j` of a single-mode quadrature. Phase independent and ≥ 1/2.
pub fn quadrature_noise(state: &SqueezedThermalState, mode: Mode) -> f64 {
    let u = state.u;
    let (c, s) = (u.cosh(), u.sinh());
    let nj = state.thermal_number(mode);
    let nk = state.thermal_number(mode.other());
    (0.25 * (2.0 * u).cosh() + 0.5 * c * c * nj + 0.5 * s * s * nk).sqrt()
}

/// Variance of `χ̂₁(α₁) + sign·χ̂₂(α₂)` for the squeezed thermal state, as a
/// function of `angle_sum = α₁ + α₂`.
fn joint_quadrature_variance(state: &SqueezedThermalState, angle_sum: f64, sign: f64) -> f64 {
    let two_u = 2.0 * state.u;
    0.5 * (1.0 + (state.n1 + state.n2))
        * (two_u.cosh() - sign * (state.phi + angle_sum).cos() * two_u.sinh())
}

/// `(⟨(ΔX)²⟩, ⟨(ΔY)²⟩)` for `X̂ = χ̂₁(β₁) + χ̂₂(β₂)` and
/// `Ŷ = χ̂₁(β₁ + π/2) − χ̂₂(β₂ + π/2)`, given `beta_sum = β₁ + β₂`.
pub fn quadrature_xy_variances(state: &SqueezedThermalState, beta_sum: f64) -> (f64, f64) {
    let x = joint_quadrature_variance(state, beta_sum, 1.0);
    let y = joint_quadrature_variance(state, beta_sum + std::f64::consts::PI, -1.0);
    (x, y)
}

/// Correlation variance `Δ²₁,₂ = (1 + n₁ + n₂)·e^{−2u}` with the local
/// oscillator phases matched to the squeezing phase (`β₁ + β₂ = −φ`).
pub fn correlation_variance(state: &SqueezedThermalState) -> f64 {
    (1.0 + (state.n1 + state.n2)) * (-2.0 * state.u).exp()
}

/// Correlation variance when the homodyne phase sum misses `−φ` by
/// `delta_theta`: `(1 + n₁ + n₂)·[cosh 2u − cos δθ·sinh 2u]`.
pub fn correlation_variance_offset(state: &SqueezedThermalState, delta_theta: f64) -> f64 {
    if delta_theta == 0.0 {
        return correlation_variance(state);
    }
    let two_u = 2.0 * state.u;
    (1.0 + (state.n1 + state.n2)) * (two_u.cosh() - delta_theta.cos() * two_u.sinh())
}

/// Inseparability criterion: the two modes are entangled iff `Δ²₁,₂ < 1`.
pub fn is_entangled(variance: f64) -> bool {
    variance < 1.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn st(u: f64, n1: f64, n2: f64) -> SqueezedThermalState {
        SqueezedThermalState::new(u, 0.0, n1, n2, 0.0).unwrap()
    }

    #[test]
    fn derived_rates() {
        let p = CavityParams::new(3.0, 1.0, 2.0, 5.0, 0.1).unwrap();
        assert_eq!(p.gamma_plus(), 2.0);
        assert_eq!(p.gamma_minus(), 1.0);
        assert_eq!(p.zeta(), 0.5);
        assert_eq!(p.omega_s(), 7.0);
    }

    #[test]
    fn rejects_bad_cavity() {
        assert!(CavityParams::new(0.0, 1.0, 0.0, 0.0, 0.0).is_err());
        assert!(CavityParams::new(1.0, -2.0, 0.0, 0.0, 0.0).is_err());
        assert!(CavityParams::from_zeta(1.0).is_err());
        assert!(CavityParams::from_zeta(-1.2).is_err());
        let p = CavityParams::from_zeta(1.0 / 3.0).unwrap();
        assert!((p.gamma1() - 2.0 * p.gamma2()).abs() < 1e-15);
    }

    #[test]
    fn occupation_from_boltzmann() {
        let t = ThermalOccupation::from_boltzmann(0.5).unwrap();
        assert_eq!(t.mean(), 1.0);
        assert_eq!(ThermalOccupation::from_boltzmann(0.0).unwrap().mean(), 0.0);
        assert!(ThermalOccupation::from_boltzmann(1.0).is_err());
        assert!(ThermalOccupation::from_boltzmann(-0.1).is_err());
        let back = ThermalOccupation::from_mean(3.0).unwrap();
        assert!((back.boltzmann() - 0.75).abs() < 1e-15);
    }

    #[test]
    fn decay_examples() {
        let p = CavityParams::new(1.0, 1.0, 0.0, 0.0, 0.0).unwrap();
        assert_eq!(thermal_decay(1.0, 1.0, &p, 0.0).unwrap(), (1.0, 1.0));
        let q = CavityParams::new(2.7, 0.4, 0.0, 0.0, 0.0).unwrap();
        assert_eq!(thermal_decay(0.0, 0.0, &q, 5.0).unwrap(), (0.0, 0.0));

        let g2 = 0.8;
        let r = CavityParams::new(2.0 * g2, g2, 0.0, 0.0, 0.0).unwrap();
        let (a, b) = thermal_decay(2.0, 2.0, &r, 1.0 / g2).unwrap();
        assert!((a - 2.0 * (-2.0f64).exp()).abs() < 1e-15);
        assert!((b - 2.0 * (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn decay_rejects_negative_inputs() {
        let p = CavityParams::new(1.0, 1.0, 0.0, 0.0, 0.0).unwrap();
        assert!(thermal_decay(1.0, 1.0, &p, -0.1).is_err());
        assert!(thermal_decay(-1.0, 1.0, &p, 0.1).is_err());
    }

    #[test]
    fn quadrature_noise_examples() {
        let vac = SqueezedThermalState::vacuum(0.0);
        assert_eq!(quadrature_noise(&vac, Mode::One), 0.5);
        let th = st(0.0, 1.0, 0.0);
        assert!((quadrature_noise(&th, Mode::One) - 3f64.sqrt() / 2.0).abs() < 1e-15);
        let sq = st(1.0, 0.0, 0.0);
        assert!((quadrature_noise(&sq, Mode::One) - (2f64.cosh() / 4.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn correlation_variance_examples() {
        assert_eq!(correlation_variance(&SqueezedThermalState::vacuum(0.0)), 1.0);
        assert!((correlation_variance(&st(2f64.ln(), 0.0, 0.0)) - 0.25).abs() < 1e-15);
        let want = 2.5 * (-1.0f64).exp();
        assert!((correlation_variance(&st(0.5, 1.0, 0.5)) - want).abs() < 1e-15);
    }

    #[test]
    fn offset_examples() {
        let s = st(1.0, 0.0, 0.0);
        assert!((correlation_variance_offset(&s, FRAC_PI_2) - 2f64.cosh()).abs() < 1e-12);
        assert!(correlation_variance_offset(&s, 0.01) > correlation_variance(&s));
    }

    #[test]
    fn entanglement_threshold() {
        assert!(is_entangled(0.25));
        assert!(!is_entangled(1.0));
        assert!(!is_entangled(60.0));
    }

    #[test]
    fn phase_matched_x_variance_is_half_the_correlation_variance() {
        let s = SqueezedThermalState::new(0.8, 0.3, 0.4, 1.1, 0.0).unwrap();
        let (x, y) = quadrature_xy_variances(&s, -s.phi);
        assert!((x + y - correlation_variance(&s)).abs() < 1e-14);
    }

    #[test]
    fn mean_photons_of_squeezed_vacuum() {
        let s = st(0.5, 0.0, 0.0);
        let sh2 = 0.5f64.sinh().powi(2);
        assert!((s.mean_photons(Mode::One) - sh2).abs() < 1e-15);
        assert!((s.mean_photons(Mode::Two) - sh2).abs() < 1e-15);
    }

    fn state_strategy() -> impl Strategy<Value = SqueezedThermalState> {
        (0.0..3.0f64, -PI..PI, 0.0..20.0f64, 0.0..20.0f64)
            .prop_map(|(u, phi, n1, n2)| SqueezedThermalState::new(u, phi, n1, n2, 0.0).unwrap())
    }

    proptest! {
        #[test]
        fn quadrature_noise_never_below_vacuum(s in state_strategy()) {
            prop_assert!(quadrature_noise(&s, Mode::One) >= 0.5);
            prop_assert!(quadrature_noise(&s, Mode::Two) >= 0.5);
        }

        #[test]
        fn zero_offset_reduces_exactly(s in state_strategy()) {
            prop_assert_eq!(correlation_variance_offset(&s, 0.0), correlation_variance(&s));
            // the general expression agrees with the closed form at δθ = 0 up to cancellation
            let two_u = 2.0 * s.u;
            let general = (1.0 + s.n1 + s.n2) * (two_u.cosh() - two_u.sinh());
            let cv = correlation_variance(&s);
            prop_assert!((general - cv).abs() <= 1e-12 * (1.0 + s.n1 + s.n2) * two_u.cosh());
        }

        #[test]
        fn offset_monotone_in_angle(s in state_strategy(), a in 0.0..PI, b in 0.0..PI) {
            prop_assume!(s.u > 1e-6);
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            let vlo = correlation_variance_offset(&s, lo);
            let vhi = correlation_variance_offset(&s, hi);
            prop_assert!(vhi >= vlo * (1.0 - 1e-12));
            prop_assert!(correlation_variance_offset(&s, -hi) == vhi);
        }

        #[test]
        fn x_and_y_variances_agree(s in state_strategy(), beta in -PI..PI) {
            let (x, y) = quadrature_xy_variances(&s, beta);
            prop_assert!((x - y).abs() <= 1e-13 * x.abs().max(1.0));
        }

        #[test]
        fn decay_composes(n1 in 0.0..50.0f64, n2 in 0.0..50.0f64,
                          g1 in 0.01..5.0f64, g2 in 0.01..5.0f64,
                          t1 in 0.0..4.0f64, t2 in 0.0..4.0f64) {
            let p = CavityParams::new(g1, g2, 0.0, 0.0, 0.0).unwrap();
            let (a1, a2) = thermal_decay(n1, n2, &p, t1).unwrap();
            let (b1, b2) = thermal_decay(a1, a2, &p, t2).unwrap();
            let (c1, c2) = thermal_decay(n1, n2, &p, t1 + t2).unwrap();
            prop_assert!((b1 - c1).abs() <= 1e-12 * c1.max(1e-300));
            prop_assert!((b2 - c2).abs() <= 1e-12 * c2.max(1e-300));
        }
    }
}
