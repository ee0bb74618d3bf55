//! Pump models: constant, bare Gaussian, and a Gaussian pulse filtered by a
//! side-coupled ring resonator.
//!
//! For the ring, the average signal/idler decay rate is identified with the
//! pump decay rate of the ring, `Γ₊ = Γ_P = 2(1 − σ_P a_P)/T_R`. In units of
//! `t̃ = Γ₊ t` the pump pulse shape then depends only on `τ̃`, and the ring
//! parameters enter through the single factor `κ_P a_P / √(1 − σ_P a_P)`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, CventError, Result};
use crate::optimize::golden_section;
use crate::special::{erfc, erfcx};

/// Speed of light in vacuum [m/s].
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// `(1 − σ_P a_P)` above which the ring-field approximation is flagged.
pub const REGIME_THRESHOLD: f64 = 0.2;

const COUPLING_TOL: f64 = 1e-12;

/// `√(8 ln 2)`, ratio of the intensity FWHM to the field standard deviation.
pub fn fwhm_factor() -> f64 {
    (8.0 * std::f64::consts::LN_2).sqrt()
}

/// Point-coupled ring resonator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RingParams {
    kappa_p: f64,
    sigma_p: f64,
    a_p: f64,
    /// Round-trip time `T_R`, in whatever time unit the caller uses.
    pub t_r: f64,
    pub radius: Option<f64>,
    pub n_eff: Option<f64>,
    mode_numbers: Option<(u64, u64, u64)>,
}

impl RingParams {
    /// Builds a lossless coupler from the self-coupling; `κ_P = √(1 − σ_P²)`.
    pub fn from_sigma(sigma_p: f64, a_p: f64) -> Result<Self> {
        if !(sigma_p > 0.0 && sigma_p < 1.0) {
            return Err(invalid("sigma_p", format!("must lie in (0, 1), got {sigma_p}")));
        }
        Self::new((1.0 - sigma_p * sigma_p).sqrt(), sigma_p, a_p)
    }

    pub fn new(kappa_p: f64, sigma_p: f64, a_p: f64) -> Result<Self> {
        if !(sigma_p > 0.0 && sigma_p < 1.0) {
            return Err(invalid("sigma_p", format!("must lie in (0, 1), got {sigma_p}")));
        }
        if !(a_p > 0.0 && a_p <= 1.0) {
            return Err(invalid("a_p", format!("must lie in (0, 1], got {a_p}")));
        }
        let defect = kappa_p * kappa_p + sigma_p * sigma_p - 1.0;
        if !(kappa_p > 0.0) || defect.abs() > COUPLING_TOL {
            return Err(invalid(
                "kappa_p",
                format!("kappa^2 + sigma^2 must equal 1 (off by {defect:e})"),
            ));
        }
        Ok(Self { kappa_p, sigma_p, a_p, t_r: 1.0, radius: None, n_eff: None, mode_numbers: None })
    }

    pub fn with_round_trip(mut self, t_r: f64) -> Result<Self> {
        if !(t_r > 0.0 && t_r.is_finite()) {
            return Err(invalid("t_r", format!("round-trip time must be positive, got {t_r}")));
        }
        self.t_r = t_r;
        Ok(self)
    }

    /// Geometry of a physical ring; sets `T_R = 2πR·n_eff/c` (SI units).
    pub fn with_geometry(mut self, radius: f64, n_eff: f64) -> Result<Self> {
        if !(radius > 0.0 && n_eff > 0.0) {
            return Err(invalid("radius", "radius and n_eff must be positive"));
        }
        self.radius = Some(radius);
        self.n_eff = Some(n_eff);
        self.with_round_trip(2.0 * PI * radius * n_eff / SPEED_OF_LIGHT)
    }

    pub fn with_mode_numbers(mut self, m_p: u64, m_1: u64, m_2: u64) -> Result<Self> {
        if m_p != m_1 + m_2 {
            return Err(invalid("m_p", format!("pump mode {m_p} must equal {m_1} + {m_2}")));
        }
        self.mode_numbers = Some((m_p, m_1, m_2));
        Ok(self)
    }

    pub fn kappa_p(&self) -> f64 {
        self.kappa_p
    }

    pub fn sigma_p(&self) -> f64 {
        self.sigma_p
    }

    pub fn a_p(&self) -> f64 {
        self.a_p
    }

    pub fn mode_numbers(&self) -> Option<(u64, u64, u64)> {
        self.mode_numbers
    }

    /// `1 − σ_P a_P`
    pub fn detuning_loss(&self) -> f64 {
        1.0 - self.sigma_p * self.a_p
    }

    /// Pump decay rate `Γ_P = 2(1 − σ_P a_P)/T_R`.
    pub fn pump_decay_rate(&self) -> f64 {
        2.0 * self.detuning_loss() / self.t_r
    }

    /// `κ_P a_P / √(1 − σ_P a_P)`, the only combination the in-ring pump
    /// strength depends on.
    pub fn strength_factor(&self) -> f64 {
        self.kappa_p * self.a_p / self.detuning_loss().sqrt()
    }

    pub fn in_validity_regime(&self) -> bool {
        self.detuning_loss() <= REGIME_THRESHOLD
    }
}

/// Dimensionless pump strength `g(t̃)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PumpModel {
    /// Continuous wave.
    Constant { g: f64 },
    /// Gaussian pump acting directly on the cavity, peak `g0` at `t̃ = 0` and
    /// intensity FWHM `tau_tilde`.
    GaussianDirect { g0: f64, tau_tilde: f64 },
    /// Gaussian channel pulse of intensity FWHM `tau_tilde` filtered by a ring.
    RingGaussian { g0: f64, tau_tilde: f64, ring: RingParams },
}

/// Pump strength sample with its validity flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PumpStrength {
    pub g: f64,
    /// Ring-field approximation used outside `(1 − σ_P a_P) <= 0.2`.
    pub out_of_regime: bool,
}

impl PumpModel {
    pub fn constant(g: f64) -> Result<Self> {
        let m = PumpModel::Constant { g };
        m.validate()?;
        Ok(m)
    }

    pub fn gaussian(g0: f64, tau_tilde: f64) -> Result<Self> {
        let m = PumpModel::GaussianDirect { g0, tau_tilde };
        m.validate()?;
        Ok(m)
    }

    pub fn ring(g0: f64, tau_tilde: f64, ring: RingParams) -> Result<Self> {
        let m = PumpModel::RingGaussian { g0, tau_tilde, ring };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        let (g, tau) = match *self {
            PumpModel::Constant { g } => (g, 1.0),
            PumpModel::GaussianDirect { g0, tau_tilde } => (g0, tau_tilde),
            PumpModel::RingGaussian { g0, tau_tilde, .. } => (g0, tau_tilde),
        };
        if !(g >= 0.0 && g.is_finite()) {
            return Err(invalid("g0", format!("pump amplitude must be finite and >= 0, got {g}")));
        }
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(invalid("tau", format!("pulse duration must be positive, got {tau}")));
        }
        Ok(())
    }

    pub fn tau_tilde(&self) -> Option<f64> {
        match *self {
            PumpModel::Constant { .. } => None,
            PumpModel::GaussianDirect { tau_tilde, .. } => Some(tau_tilde),
            PumpModel::RingGaussian { tau_tilde, .. } => Some(tau_tilde),
        }
    }

    /// `g(t̃)`
    pub fn g(&self, t_tilde: f64) -> f64 {
        match *self {
            PumpModel::Constant { g } => g,
            PumpModel::GaussianDirect { g0, tau_tilde } => {
                let b = fwhm_factor() / (2.0 * tau_tilde);
                g0 * (-(b * t_tilde).powi(2)).exp()
            }
            PumpModel::RingGaussian { g0, tau_tilde, ring } => {
                g0 * ring.strength_factor() * ring_pulse_shape(t_tilde, tau_tilde)
            }
        }
    }

    /// `g(t̃)` with the per-model constants hoisted out, for hot loops.
    pub fn evaluator(&self) -> impl Fn(f64) -> f64 + Send + Sync + 'static {
        let l = fwhm_factor();
        let (kind, scale, a, b) = match *self {
            PumpModel::Constant { g } => (0u8, g, 0.0, 0.0),
            PumpModel::GaussianDirect { g0, tau_tilde } => (1, g0, 0.0, l / (2.0 * tau_tilde)),
            PumpModel::RingGaussian { g0, tau_tilde, ring } => (
                2,
                g0 * ring.strength_factor() * (tau_tilde / (2.0 * l * l)).sqrt(),
                tau_tilde / (2.0 * l),
                l / (2.0 * tau_tilde),
            ),
        };
        move |t| match kind {
            0 => scale,
            1 => scale * (-(b * t).powi(2)).exp(),
            _ => scale * filtered_gaussian(t, a, b),
        }
    }

    pub fn out_of_regime(&self) -> bool {
        matches!(self, PumpModel::RingGaussian { ring, .. } if !ring.in_validity_regime())
    }
}

/// Pump strength at `t̃`, with the regime flag of the model.
pub fn pump_strength(t_tilde: f64, model: &PumpModel) -> PumpStrength {
    PumpStrength { g: model.g(t_tilde), out_of_regime: model.out_of_regime() }
}

/// `√π·exp(z² − b²t²)·erfc(z)` with `z = a − b·t`.
///
/// The Gaussian factor is folded into the exponent so the product stays
/// finite: for `z > 0` it is `erfcx(z)·exp(−b²t²)`, otherwise
/// `exp(a² − 2abt)·erfc(z)` where `erfc(z) ∈ [1, 2]`.
fn filtered_gaussian(t: f64, a: f64, b: f64) -> f64 {
    let z = a - b * t;
    let v = if z > 0.0 {
        erfcx(z) * (-(b * t).powi(2)).exp()
    } else {
        (a * a - 2.0 * a * b * t).exp() * erfc(z)
    };
    PI.sqrt() * v
}

/// In-ring pump strength per unit `g0·κ_P a_P/√(1 − σ_P a_P)`, with `Γ₊ = Γ_P`:
///
/// `(1/√2)·√(τ̃/8ln2)·√π·e^{z²}erfc(z)·exp(−2ln2·t̃²/τ̃²)`,
/// `z = τ̃/(2√(8ln2)) − √(8ln2)·t̃/(2τ̃)`.
pub fn ring_pulse_shape(t_tilde: f64, tau_tilde: f64) -> f64 {
    let l = fwhm_factor();
    let a = tau_tilde / (2.0 * l);
    let b = l / (2.0 * tau_tilde);
    (tau_tilde / (2.0 * l * l)).sqrt() * filtered_gaussian(t_tilde, a, b)
}

/// Channel pulse envelope `√(T_R/τ)·exp(−2ln2·t²/τ²)`; the carrier is left out.
pub fn channel_field_envelope(t: f64, tau: f64, t_r: f64) -> Result<f64> {
    if !(tau > 0.0) || !(t_r > 0.0) {
        return Err(CventError::Domain(format!(
            "tau and t_r must be positive, got tau = {tau}, t_r = {t_r}"
        )));
    }
    let b = fwhm_factor() / (2.0 * tau);
    Ok((t_r / tau).sqrt() * (-(b * t).powi(2)).exp())
}

/// Intensity buildup `|E_R(ω)|²/|E_CH(ω)|²` of the ring.
pub fn buildup(omega: f64, ring: &RingParams) -> f64 {
    let (s, a, k) = (ring.sigma_p, ring.a_p, ring.kappa_p);
    k * k * a * a / (1.0 - 2.0 * s * a * (omega * ring.t_r).cos() + s * s * a * a)
}

/// `|E_R(t)| / |E_CH,peak|` for a ring driven by the Gaussian channel pulse,
/// in the single-resonance approximation.
///
/// `gamma_plus` converts `t̃`, `τ̃` to the ring's time unit. It need not equal
/// the ring's pump decay rate.
pub fn ring_field_factor(t_tilde: f64, tau_tilde: f64, ring: &RingParams, gamma_plus: f64) -> f64 {
    let l = fwhm_factor();
    let tau_over_tr = tau_tilde / (gamma_plus * ring.t_r);
    let a = ring.detuning_loss() * tau_over_tr / l;
    let b = l / (2.0 * tau_tilde);
    tau_over_tr * ring.kappa_p * ring.a_p / l * filtered_gaussian(t_tilde, a, b)
}

/// Peak of the unit-amplitude ring pulse shape over `t̃`, with its location.
pub fn ring_pulse_peak(tau_tilde: f64) -> (f64, f64) {
    // the shape is a Gaussian convolved with a one-sided exponential, so it is
    // unimodal; the peak sits between the pulse centre and a few decay times later
    let m = golden_section(
        |t| -ring_pulse_shape(t, tau_tilde),
        -tau_tilde,
        tau_tilde + 20.0,
        1e-11,
        400,
    );
    (m.x, -m.value)
}

struct PulseOptimum {
    tau_tilde: f64,
    peak_constant: f64,
}

fn pulse_optimum() -> &'static PulseOptimum {
    static CELL: OnceLock<PulseOptimum> = OnceLock::new();
    CELL.get_or_init(|| {
        let m = golden_section(|tau| -ring_pulse_peak(tau).1, 0.1, 10.0, 1e-10, 400);
        PulseOptimum { tau_tilde: m.x, peak_constant: -m.value }
    })
}

/// Pulse duration `τ̃` that maximizes the peak in-ring pump strength.
///
/// Independent of `g0` and of the ring parameters, which only scale `g`.
pub fn optimum_tau() -> f64 {
    pulse_optimum().tau_tilde
}

/// `g_max / (g0·κ_P a_P/√(1 − σ_P a_P))` at the optimum pulse duration.
pub fn peak_strength_constant() -> f64 {
    pulse_optimum().peak_constant
}

/// Peak in-ring pump strength for an optimally short pulse.
pub fn g_max(g0: f64, ring: &RingParams) -> f64 {
    peak_strength_constant() * g0 * ring.strength_factor()
}

/// Self-coupling that maximizes `κ_P a_P/√(1 − σ_P a_P)` for a given loss.
pub fn optimum_sigma(a_p: f64) -> Result<f64> {
    if !(a_p > 0.0 && a_p <= 1.0) {
        return Err(CventError::Domain(format!("a_p must lie in (0, 1], got {a_p}")));
    }
    Ok((1.0 - (1.0 - a_p * a_p).sqrt()) / a_p)
}

/// Small-asymmetry estimate of the minimum correlation variance,
/// `1/(1 + g_max)`.
pub fn predicted_min_variance(g0: f64, ring: &RingParams) -> f64 {
    1.0 / (1.0 + g_max(g0, ring))
}

/// `g0 = 2|γ|E₀/(ħΓ₊)` with `|γ|/ħ = χ⁽²⁾·√(ω₁ω₂)` (SI units).
pub fn g0_from_physical(chi2: f64, e0: f64, omega1: f64, omega2: f64, gamma_plus: f64) -> Result<f64> {
    if !(gamma_plus > 0.0) {
        return Err(invalid("gamma_plus", "must be positive"));
    }
    if !(omega1 > 0.0 && omega2 > 0.0) {
        return Err(invalid("omega", "frequencies must be positive"));
    }
    Ok(2.0 * chi2.abs() * (omega1 * omega2).sqrt() * e0.abs() / gamma_plus)
}
