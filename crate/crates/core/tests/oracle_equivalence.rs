use cvent::oracle::{compare_with_analytic, OracleConfig};
use cvent::ring::{optimum_tau, RingParams};
use cvent::{IntegratorConfig, PumpModel, SqueezedThermalState};

fn pulse_window() -> (f64, f64) {
    let w = IntegratorConfig::for_pulse(optimum_tau(), 1e-3).unwrap();
    (w.t_start, w.t_end)
}

#[test]
fn weak_pulse_moments_match_over_window() {
    let ring = RingParams::from_sigma(0.868, 0.99).unwrap();
    let g = PumpModel::ring(0.5, optimum_tau(), ring).unwrap().evaluator();
    let (t0, t1) = pulse_window();
    let cfg = OracleConfig::new(t0, t1);
    for zeta in [0.0, 1.0 / 3.0] {
        let r = compare_with_analytic(&SqueezedThermalState::vacuum(t0), &g, zeta, &cfg).unwrap();
        assert_eq!(r.rows.len(), 20);
        // the pulse must actually populate the modes for the comparison to mean anything
        let peak = r.rows.iter().map(|row| row.oracle_n1).fold(0.0, f64::max);
        let dip = r.rows.iter().map(|row| row.oracle_delta_sq).fold(f64::INFINITY, f64::min);
        assert!(peak > 0.01 && dip < 0.9, "peak n1 {peak}, min variance {dip}");
        assert!(r.max_deviation() < 1e-3, "zeta {zeta}: {r:?}");
        assert!(r.max_trace_error < 1e-6 && r.max_hermiticity_defect < 1e-10);
        eprintln!("zeta {zeta}: peak n1 {peak:.4}, min variance {dip:.4}, dev {:.2e}", r.max_deviation());
    }
}
