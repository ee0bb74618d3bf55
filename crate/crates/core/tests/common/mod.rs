//! Reference routes shared by the integration tests and the acceptance runner.
#![allow(dead_code)]

use std::f64::consts::{LN_2, PI};

use cvent::optimize::golden_section;
use cvent::RingParams;
use num_complex::Complex64 as C64;

/// Channel spectrum `∫ E_CH(t)·e^{iδt} dt` of `√(T_R/τ)·exp(−2ln2·t²/τ²)`.
fn channel_spectrum(delta: f64, tau: f64, t_r: f64) -> f64 {
    let alpha = 2.0 * LN_2 / (tau * tau);
    (t_r / tau).sqrt() * (PI / alpha).sqrt() * (-delta * delta / (4.0 * alpha)).exp()
}

/// Ring response `E_R(δ)/E_CH(δ) = iκa·e^{iδT_R}/(1 − σa·e^{iδT_R})`.
fn ring_transfer(delta: f64, ring: &RingParams) -> C64 {
    let e = C64::from_polar(1.0, delta * ring.t_r);
    let ka = ring.kappa_p() * ring.a_p();
    C64::new(0.0, ka) * e / (1.0 - ring.sigma_p() * ring.a_p() * e)
}

/// Trapezoid inverse transform on `samples` frequencies spanning ±20 spectral
/// FWHM, normalized by the channel peak amplitude.
pub fn ring_field_inverse_ft(t: f64, tau: f64, ring: &RingParams, samples: usize) -> f64 {
    let fwhm = 4.0 * LN_2 / tau;
    let span = 20.0 * fwhm;
    let h = 2.0 * span / (samples - 1) as f64;
    let mut acc = C64::new(0.0, 0.0);
    for k in 0..samples {
        let d = -span + k as f64 * h;
        let w = if k == 0 || k == samples - 1 { 0.5 } else { 1.0 };
        acc += ring_transfer(d, ring) * channel_spectrum(d, tau, ring.t_r) * C64::from_polar(w, -d * t);
    }
    (acc * h / (2.0 * PI)).norm() / (ring.t_r / tau).sqrt()
}

/// Same field from the round-trip expansion of the transfer function:
/// `iκa·Σ_{k≥1} (σa)^{k−1}·E_CH(t − kT_R)`.
pub fn ring_field_series(t: f64, tau: f64, ring: &RingParams) -> f64 {
    let q = ring.sigma_p() * ring.a_p();
    let alpha = 2.0 * LN_2 / (tau * tau);
    let mut sum = 0.0;
    let mut w = 1.0;
    for k in 1..100_000 {
        let s = t - k as f64 * ring.t_r;
        sum += w * (-alpha * s * s).exp();
        w *= q;
        if w < 1e-18 && s < -6.0 * tau {
            break;
        }
    }
    ring.kappa_p() * ring.a_p() * sum
}

/// Maximum of `f` over `[lo, hi]` for a unimodal `f`, as `(t, value)`.
pub fn peak<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> (f64, f64) {
    let m = golden_section(|t| -f(t), lo, hi, 1e-7, 200);
    (m.x, -m.value)
}

/// Relative peak deviation of the closed-form ring field from the inverse
/// transform, for the pulse `τ` given in round-trip units (`T_R = 1`).
pub fn ring_peak_deviation(tau: f64, ring: &RingParams) -> f64 {
    let gp = ring.pump_decay_rate();
    let bracket = (-tau, 3.0 * tau + 10.0 / ring.detuning_loss());
    let (_, exact) = peak(|t| ring_field_inverse_ft(t, tau, ring, 1 << 16), bracket.0, bracket.1);
    let (_, approx) =
        peak(|t| cvent::ring_field_factor(t * gp, tau * gp, ring, gp), bracket.0, bracket.1);
    (approx - exact).abs() / exact
}
