use thiserror::Error;

/// Errors raised by the game models, solvers and oracles.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LottoError {
    #[error("budget {name} must be positive and finite, got {value}")]
    NonPositiveBudget { name: &'static str, value: f64 },

    #[error("invalid valuations: {0}")]
    InvalidValuation(String),

    #[error("battlefield {index} has zero value; no contest takes place there")]
    DegenerateBattlefield { index: usize },

    #[error("battlefield index {index} out of range for {count} battlefields")]
    BattlefieldOutOfRange { index: usize, count: usize },

    #[error("invalid pre-commitment: {0}")]
    InvalidPrecommitment(String),

    #[error("matched battlefield {index} is not a pre-commitment target")]
    NotATarget { index: usize },

    #[error("response spends {spent} but the budget is {budget}")]
    InfeasibleResponse { spent: f64, budget: f64 },

    #[error("{size} targets exceed the enumeration cap of {cap}; use the randomized grid oracle")]
    EnumerationCap { size: usize, cap: usize },

    #[error("epsilon {epsilon} is not a usable offset (must be positive and below {limit})")]
    EpsilonTooLarge { epsilon: f64, limit: f64 },

    #[error("alpha must lie in (0, 1/2], got {0}")]
    InvalidAlpha(f64),

    #[error("{name} must be positive, got {value}")]
    Domain { name: &'static str, value: f64 },

    #[error("root search did not converge: residual {residual:e} at sigma {sigma} after {iterations} iterations")]
    Convergence {
        sigma: f64,
        residual: f64,
        iterations: usize,
    },

    #[error("sigma {sigma} is not a zero of the solution function (residual {residual:e})")]
    InvalidEquilibrium { sigma: f64, residual: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}

impl LottoError {
    /// Short machine-readable tag for the error class.
    pub fn kind(&self) -> &'static str {
        match self {
            LottoError::NonPositiveBudget { .. } => "non_positive_budget",
            LottoError::InvalidValuation(_) => "invalid_valuation",
            LottoError::DegenerateBattlefield { .. } => "degenerate_battlefield",
            LottoError::BattlefieldOutOfRange { .. } => "battlefield_out_of_range",
            LottoError::InvalidPrecommitment(_) => "invalid_precommitment",
            LottoError::NotATarget { .. } => "not_a_target",
            LottoError::InfeasibleResponse { .. } => "infeasible_response",
            LottoError::EnumerationCap { .. } => "enumeration_cap",
            LottoError::EpsilonTooLarge { .. } => "epsilon_too_large",
            LottoError::InvalidAlpha(_) => "invalid_alpha",
            LottoError::Domain { .. } => "domain",
            LottoError::Convergence { .. } => "convergence",
            LottoError::InvalidEquilibrium { .. } => "invalid_equilibrium",
            LottoError::Precondition(_) => "precondition",
            LottoError::InvalidGrid(_) => "invalid_grid",
        }
    }
}

pub type Result<T> = std::result::Result<T, LottoError>;
