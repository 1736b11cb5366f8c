use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("infeasible moment: M = {moment} is below the floor 1/(n+1) = {floor} (n = {n})")]
    InfeasibleMoment { n: u32, moment: f64, floor: f64 },

    #[error("lipschitz violation on segment {segment}: slope {slope} < -rho = {neg_rho}")]
    LipschitzViolation { segment: usize, slope: f64, neg_rho: f64 },

    #[error("monotonicity violation on segment {segment}: value rises from {from} to {to}")]
    MonotonicityViolation { segment: usize, from: f64, to: f64 },

    #[error("bad knots: {0}")]
    BadKnots(String),

    #[error("(a, tau) = ({a}, {tau}) lies outside max(1/2, a) < tau < a + 1")]
    OutOfRegion { a: f64, tau: f64 },

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("unsupported dimension n = {0}")]
    UnsupportedDimension(u32),

    #[error("unsupported combination: {0}")]
    UnsupportedCombination(String),

    #[error("budget exceeded: requested {requested} eigenvalues, cap is {cap}")]
    BudgetExceeded { requested: usize, cap: usize },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("no spectrum oracle: {0}")]
    NoSpectrumOracle(String),

    #[error("parse error: {0}")]
    Parse(String),
}
