use crate::game::InclusiveProfile;
use crate::solver::EquilibriumReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch for {what}: expected {expected}, got {got}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    /// The iteration budget ran out. `partial` carries the last iterate when
    /// the solver had a full profile to report.
    #[error("{solver} did not converge after {iterations} iterations (residual {residual:.3e})")]
    NonConvergence {
        solver: &'static str,
        iterations: usize,
        residual: f64,
        partial: Option<Box<EquilibriumReport>>,
    },

    /// Deviation dynamics revisited a state or exhausted the round budget
    /// without reaching a verified equilibrium. `recent` holds the last
    /// distinct profiles, oldest first.
    #[error("best-response cycle suspected after {rounds} rounds ({} recent states)", recent.len())]
    CycleSuspected {
        rounds: usize,
        recent: Vec<InclusiveProfile>,
    },

    #[error("singular evaluation point: {0}")]
    Singular(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
