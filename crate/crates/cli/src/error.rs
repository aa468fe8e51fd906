use softmotion::PlanError;
use thiserror::Error;

/// Failure of a command, carrying its exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),

    #[error("{0}")]
    Plan(#[from] PlanError),

    #[error("{path}: {source}")]
    File {
        path: String,
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Exit code of a successful command.
pub const EXIT_OK: i32 = 0;
/// Exit code for usage and input errors.
pub const EXIT_INPUT: i32 = 2;
/// Exit code when the inputs are valid but no plan exists.
pub const EXIT_INFEASIBLE: i32 = 3;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Plan(
                PlanError::NoSolution(_)
                | PlanError::InfeasibleDuration { .. }
                | PlanError::Unreachable
                | PlanError::BudgetExceeded(_),
            ) => EXIT_INFEASIBLE,
            _ => EXIT_INPUT,
        }
    }
}
