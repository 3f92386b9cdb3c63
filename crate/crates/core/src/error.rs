use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("parent structure is cyclic (involves `{0}`)")]
    Cycle(String),

    #[error("cpt `{child}` row {row} sums to {sum}, not 1")]
    RowNotNormalized { child: String, row: usize, sum: f64 },

    #[error("cpt `{child}` has entry {value} outside [0, 1]")]
    EntryOutOfRange { child: String, value: f64 },

    #[error("cpt `{child}` holds {found} entries, expected {expected}")]
    TableShape {
        child: String,
        expected: usize,
        found: usize,
    },

    #[error("target variable `{0}` has no normal state")]
    MissingNormalState(String),

    #[error("invalid network: {0}")]
    InvalidNetwork(String),

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("variable `{variable}` has no state `{state}`")]
    UnknownState { variable: String, state: String },

    #[error("variable `{0}` is bound twice")]
    DuplicateBinding(String),

    #[error("variable `{0}` is not bound")]
    UnboundVariable(String),

    #[error("variables bound in both assignments: {0}")]
    Overlap(String),

    #[error("{0} must not be empty")]
    EmptyAssignment(&'static str),

    #[error("evidence has probability zero")]
    ZeroProbabilityEvidence,

    #[error("probability {0} lies outside [0, 1]")]
    InvalidProbability(f64),

    #[error("explanation has prior probability 0")]
    ImpossibleExplanation,

    #[error("explanation has prior probability 1; no alternative explanation exists")]
    CertainExplanation,

    #[error("conditional prior P(y|x) is {0}; the conditional Bayes factor is undefined")]
    DegenerateConditional(f64),

    #[error("explanation has posterior probability 1; inclusion boundary is infinite")]
    InfiniteBoundary,

    #[error("{what} needs {needed} entries, budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        budget: u128,
    },

    #[error("no candidate explanation has a prior strictly between 0 and 1 and a positive posterior")]
    NoCandidates,

    #[error("no test case found within {attempts} sampling attempts")]
    CasesExhausted { attempts: u64 },

    #[error("method `{0}` produces a single solution and cannot run with k > 1")]
    SingleSolutionMethod(&'static str),

    #[error("{0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn syntax(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Syntax {
            line,
            column,
            message: message.into(),
        }
    }
}
