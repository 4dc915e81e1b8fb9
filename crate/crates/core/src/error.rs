use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("non-finite sample at index {index}")]
    NonFinite { index: usize },

    #[error("negative derivative order {0} (inverse derivatives are not supported)")]
    NegativeOrder(f64),

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("adaptive quadrature did not converge: estimate {estimate:e}, error bound {error:e}")]
    Quadrature { estimate: f64, error: f64 },

    #[error("solitary-wave iteration did not converge after {iterations} iterations (last relative change {last_change:e})")]
    NoConvergence { iterations: usize, last_change: f64 },

    #[error("solitary-wave iteration collapsed to zero at iteration {iteration}")]
    Collapse { iteration: usize },

    #[error("time step {dt} exceeds the transport bound {bound}")]
    TimeStepTooLarge { dt: f64, bound: f64 },

    #[error("solution became non-finite at t = {t}; last good state kept at t = {last_good_time}")]
    BlowUp {
        t: f64,
        last_good_time: f64,
        last_good: Vec<f64>,
    },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("identity does not close: residual {residual:e} against scale {scale:e}")]
    ClosureFailure { residual: f64, scale: f64 },

    #[error("trajectory unsuitable: {0}")]
    Trajectory(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
