use std::fmt;

use thiserror::Error;

/// Which resource of an [`EvalBudget`](crate::control::EvalBudget) ran out.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Resource {
    /// A value would need more bits than allowed. Since every evaluator in
    /// this crate is monotone, the true result is at least `2^limit`.
    Bits,
    /// The step counter hit its cap. Nothing is known about the result.
    Steps,
    /// A structural cap such as the number of tree nodes.
    Nodes,
}

impl fmt::Display for Resource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Resource::Bits => "result bits",
            Resource::Steps => "steps",
            Resource::Nodes => "nodes",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("budget exceeded: {resource} limit {limit}")]
    BudgetExceeded { resource: Resource, limit: u64 },

    #[error("subtraction undefined: {subtrahend} is not included in {minuend}")]
    SubtractUndefined { minuend: String, subtrahend: String },

    #[error("dimension {dim} does not occur in {tau}")]
    ElementAbsent { dim: u32, tau: String },

    #[error("invalid control function: {0}")]
    InvalidControl(String),

    #[error("argument {x} is outside the table domain 0..{len}")]
    OutsideTable { x: String, len: usize },

    #[error("sequence is not bad: x[{i}] <= x[{j}]")]
    NotBad { i: usize, j: usize },

    #[error("sequence is not {r}-bad: index {index} has goodness {goodness}")]
    NotRBad { r: usize, index: usize, goodness: usize },

    #[error("sequence is not controlled at index {index}: norm {norm} >= {bound}")]
    NotControlled { index: usize, norm: String, bound: String },

    #[error("malformed sequence: {0}")]
    MalformedSequence(String),

    #[error("ranking function {rank} is negative ({value}) at {state}")]
    RankNegative { rank: usize, value: String, state: String },

    #[error("pair not covered by any relation: {from} -> {to}")]
    CoverageGap { from: String, to: String },

    #[error("program does not terminate from {0}")]
    NonTerminating(String),

    #[error("usage error at token {token:?}: {message}")]
    Usage { token: String, message: String },

    #[error("model parse error at line {line}: {message}")]
    ModelParse { line: usize, message: String },

    #[error("precondition violated: {0}")]
    Precondition(String),
}

impl Error {
    pub(crate) fn bits(limit: u64) -> Self {
        Error::BudgetExceeded { resource: Resource::Bits, limit }
    }

    pub(crate) fn steps(limit: u64) -> Self {
        Error::BudgetExceeded { resource: Resource::Steps, limit }
    }

    pub(crate) fn usage(token: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Usage { token: token.into(), message: message.into() }
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::ModelParse { line, message: message.into() }
    }

    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }

    /// Stable name used in reports.
    pub fn name(&self) -> &'static str {
        match self {
            Error::BudgetExceeded { .. } => "BudgetExceeded",
            Error::SubtractUndefined { .. } => "SubtractUndefined",
            Error::ElementAbsent { .. } => "ElementAbsent",
            Error::InvalidControl(_) => "InvalidControl",
            Error::OutsideTable { .. } => "OutsideTable",
            Error::NotBad { .. } => "NotBad",
            Error::NotRBad { .. } => "NotRBad",
            Error::NotControlled { .. } => "NotControlled",
            Error::MalformedSequence(_) => "MalformedSequence",
            Error::RankNegative { .. } => "RankNegative",
            Error::CoverageGap { .. } => "CoverageGap",
            Error::NonTerminating(_) => "NonTerminating",
            Error::Usage { .. } => "UsageError",
            Error::ModelParse { .. } => "ModelParseError",
            Error::Precondition(_) => "Precondition",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
