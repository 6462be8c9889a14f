use std::fmt;

use semwave::Error;

/// Exit 1: a numerical check failed or the computation broke down.
pub const EXIT_CHECK: u8 = 1;
/// Exit 2: bad usage, bad parameters or unreadable input.
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub kind: &'static str,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, kind: "usage", message: message.into() }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, kind: "io", message: message.into() }
    }

    pub fn check(message: impl Into<String>) -> Self {
        Failure { code: EXIT_CHECK, kind: "check_failed", message: message.into() }
    }

    /// One JSON object on a single line, for the diagnostic stream.
    pub fn to_json_line(&self) -> String {
        serde_json::json!({ "error": self.kind, "exit_code": self.code, "message": self.message }).to_string()
    }

    pub fn context(mut self, prefix: &str) -> Self {
        self.message = format!("{prefix}: {}", self.message);
        self
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.message)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, kind) = match &e {
            Error::InvalidParameter(_) => (EXIT_USAGE, "invalid_parameter"),
            Error::IncompatibleGrids(_) => (EXIT_USAGE, "incompatible_grids"),
            Error::WrongMethod(_) => (EXIT_USAGE, "wrong_method"),
            Error::UnsupportedCombination(_) => (EXIT_USAGE, "unsupported_combination"),
            Error::UnknownQuantity(_) => (EXIT_USAGE, "unknown_quantity"),
            Error::Parse(_) => (EXIT_USAGE, "parse"),
            Error::Io(_) => (EXIT_USAGE, "io"),
            Error::DegenerateEmbedding(_) => (EXIT_USAGE, "degenerate_embedding"),
            Error::DegenerateState(_) => (EXIT_CHECK, "degenerate_state"),
            Error::DegenerateVector(_) => (EXIT_CHECK, "degenerate_vector"),
            Error::ConvergenceFailure { .. } => (EXIT_CHECK, "convergence_failure"),
        };
        Failure { code, kind, message: e.to_string() }
    }
}
