mod common;

use common::*;
use cvent::ring::{optimum_tau, RingParams};
use cvent::ring_field_factor;

fn ring() -> RingParams {
    RingParams::from_sigma(0.868, 0.99).unwrap()
}

#[test]
fn quadrature_and_round_trip_series_agree() {
    let r = ring();
    let tau = 5.72;
    for t in [-3.0, 0.0, 2.5, 6.0, 15.0, 40.0] {
        let a = ring_field_inverse_ft(t, tau, &r, 1 << 16);
        let b = ring_field_series(t, tau, &r);
        assert!((a - b).abs() < 1e-9 * b.max(1e-3), "t = {t}: {a} vs {b}");
    }
}

#[test]
fn closed_form_converges_to_transform_for_long_pulses() {
    let r = ring();
    let devs: Vec<f64> = [1.5, 5.0, 20.0].iter().map(|&tau| ring_peak_deviation(tau, &r)).collect();
    assert!(devs[0] > devs[1] && devs[1] > devs[2], "{devs:?}");
    assert!(devs[0] < 0.1, "{devs:?}");
}

#[test]
fn long_pulse_peak_approaches_on_resonance_buildup() {
    // quasi-static limit: |E_R| → κa/(1 − σa) times the channel amplitude
    let r = ring();
    let tau = 2000.0;
    let (_, exact) = peak(|t| ring_field_series(t, tau, &r), -tau, tau);
    let want = r.kappa_p() * r.a_p() / r.detuning_loss();
    assert!((exact - want).abs() < 2e-3 * want);
    let gp = r.pump_decay_rate();
    let (_, approx) = peak(|t| ring_field_factor(t * gp, tau * gp, &r, gp), -tau, tau);
    assert!((approx - want).abs() < 2e-3 * want);
}

#[test]
fn transform_tail_drains_at_round_trip_loss_rate() {
    // exact intensity decay rate is −2ln(σa)/T_R; the closed form uses 2(1 − σa)/T_R
    let r = ring();
    let tau = optimum_tau() / r.pump_decay_rate();
    let (t1, t2) = (60.0, 80.0);
    let slope = (ring_field_series(t2, tau, &r).powi(2).ln() - ring_field_series(t1, tau, &r).powi(2).ln())
        / (t2 - t1);
    let q = r.sigma_p() * r.a_p();
    assert!((slope - 2.0 * q.ln()).abs() < 1e-3 * q.ln().abs(), "{slope}");
}
