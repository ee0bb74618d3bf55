use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CventError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error(
        "general squeezing-phase equation is singular at u = {u:e} (<= {floor:e}); \
         start vacuum runs from the reduced system, where the phase is fixed by the pump phase"
    )]
    PhaseSingularity { u: f64, floor: f64 },

    #[error("integration produced a non-finite state at t~ = {t_tilde}")]
    Integration { t_tilde: f64 },

    #[error("trajectory is empty")]
    EmptyTrajectory,

    #[error("sweep point (tau~ = {tau_tilde}, zeta = {zeta}) failed: {source}")]
    SweepPoint {
        tau_tilde: f64,
        zeta: f64,
        #[source]
        source: Box<CventError>,
    },

    #[error("trace drifted by {drift:e} in one step (limit {limit:e}); reduce the step size")]
    TraceDrift { drift: f64, limit: f64 },

    #[error("Fock truncation inadequate: {population:e} of the population sits in the top shells (limit {limit:e})")]
    Truncation { population: f64, limit: f64 },
}

pub type Result<T> = std::result::Result<T, CventError>;

pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> CventError {
    CventError::InvalidParameter { field, reason: reason.into() }
}
