use std::fmt;

/// Errors surfaced by parsing, size caps, and the randomized harness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A function-spec string does not match the grammar.
    BadSpec(String),
    /// An operation restricted to small n was invoked above its cap.
    CapExceeded {
        op: &'static str,
        n: u8,
        cap: u8,
    },
    /// Variable index outside 1..=n.
    VarOutOfRange {
        var: u8,
        n: u8,
    },
    /// Mismatched variable counts between two objects.
    ArityMismatch {
        expected: u8,
        got: u8,
    },
    /// Blocks must contain at least one variable.
    EmptyBlock,
    /// A maxonomial was requested from a constant polynomial.
    ConstantPolynomial,
    BadRational(String),
    BadAssignment(String),
    /// Approximation error must satisfy 0 < epsilon < 1/2.
    EpsilonOutOfRange(String),
    /// Per-run error of a randomized algorithm must be below 1/2.
    ErrorBoundOutOfRange(String),
    /// No subset of a maxonomial flips the function value. This is a
    /// falsification condition: it cannot happen for a valid witness.
    MaxonomialWitnessMissing {
        input: String,
    },
    /// Exact expectations are only defined for explicit tree mixtures.
    NotExplicit(&'static str),
    /// The built-in algorithm catalog covers named families only.
    UnsupportedFamily(String),
    /// A randomized run queried more variables than it declared.
    QueryBudgetExceeded {
        budget: u32,
    },
    /// Mixture weights must be positive and sum to one.
    BadMixture(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::BadSpec(msg) => write!(f, "bad function spec: {msg}"),
            Error::CapExceeded { op, n, cap } => {
                write!(f, "{op} supports n <= {cap}, got n = {n}")
            }
            Error::VarOutOfRange { var, n } => {
                write!(f, "variable x{var} out of range 1..={n}")
            }
            Error::ArityMismatch { expected, got } => {
                write!(f, "expected {expected} variables, got {got}")
            }
            Error::EmptyBlock => write!(f, "block must be nonempty"),
            Error::ConstantPolynomial => {
                write!(f, "constant polynomial has no maxonomial")
            }
            Error::BadRational(msg) => write!(f, "bad rational: {msg}"),
            Error::BadAssignment(msg) => write!(f, "bad assignment: {msg}"),
            Error::EpsilonOutOfRange(msg) => {
                write!(f, "epsilon out of range (need 0 < eps < 1/2): {msg}")
            }
            Error::ErrorBoundOutOfRange(msg) => {
                write!(f, "error bound out of range (need 0 <= e < 1/2): {msg}")
            }
            Error::MaxonomialWitnessMissing { input } => {
                write!(f, "no subset of the maxonomial flips f at {input}")
            }
            Error::NotExplicit(what) => {
                write!(f, "{what} requires an explicit tree mixture")
            }
            Error::UnsupportedFamily(name) => {
                write!(f, "no built-in algorithms for spec {name}")
            }
            Error::QueryBudgetExceeded { budget } => {
                write!(f, "run exceeded its query budget of {budget}")
            }
            Error::BadMixture(msg) => write!(f, "bad mixture: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
