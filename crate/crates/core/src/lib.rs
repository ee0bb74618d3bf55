//! Pulsed two-mode squeezing in a lossy cavity: exact squeezed-thermal
//! dynamics, a ring-resonator pump model, a truncated-Fock Lindblad oracle and
//! parameter sweeps of the resulting inseparability measure.

// `!(x > 0.0)` is how NaN gets rejected along with the out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod dynamics;
pub mod error;
pub mod optimize;
pub mod oracle;
pub mod ring;
pub mod special;
pub mod state;

pub use dynamics::{
    find_minimum_by, find_minimum_variance, integrate, integrate_with, rhs_general, rhs_reduced,
    squeezing_phase, IntegratorConfig, Sample, Trajectory, VarianceMinimum,
};
pub use error::{CventError, Result};
pub use ring::{
    buildup, channel_field_envelope, g0_from_physical, g_max, optimum_sigma, optimum_tau,
    predicted_min_variance, pump_strength, ring_field_factor, PumpModel, PumpStrength, RingParams,
};
pub use state::{
    correlation_variance, correlation_variance_offset, is_entangled, quadrature_noise,
    quadrature_xy_variances, thermal_decay, CavityParams, Mode, SqueezedThermalState,
    ThermalOccupation,
};
pub use analysis::{
    g0_curve, global_minimum, sweep_min_variance, sweep_offset, G0Curve, G0Point, GlobalMinimum,
    SweepGrid, SweepSpec,
};
