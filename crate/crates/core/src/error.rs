use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure a planner, oracle or simulator can report.
///
/// Variant names double as the stable machine-readable error names printed
/// by the CLI (see [`Error::name`]).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pulse intensity must be positive, got {0}")]
    NonPositiveLambda(f64),
    #[error("interval length must be positive, got {0}")]
    NonPositiveLength(f64),
    #[error("density value {value} at piece {index} is negative")]
    NegativeDensity { index: usize, value: f64 },
    #[error("breakpoints must be strictly increasing and consistent with the values: {0}")]
    UnorderedBreakpoints(String),
    #[error("accuracy {epsilon} must lie strictly inside (0, {length})")]
    EpsilonOutOfRange { epsilon: f64, length: f64 },
    #[error("load profile grid does not match the prior grid")]
    GridMismatch,
    #[error("probability mass {value} at index {index} is negative")]
    NegativeMass { index: usize, value: f64 },
    #[error("probability masses sum to {0}, expected 1")]
    NotNormalized(f64),
    #[error("multiplier root is not bracketed: {0}")]
    RootNotBracketed(String),
    #[error("k = {k} must lie in 1..={n}")]
    KOutOfRange { n: usize, k: usize },
    #[error("aperture {0} must lie in (0, 1]")]
    LOutOfRange(f64),
    #[error("apertures must satisfy 0 < {current} < {previous} <= 1")]
    ApertureOrderViolation { previous: f64, current: f64 },
    #[error("invalid aperture ladder: {0}")]
    LadderInvalid(String),
    #[error("no stationary ladder with {steps} steps reaches the target accuracy")]
    NoSolution { steps: usize },
    #[error("no feasible step count found")]
    AllInfeasible,
    #[error("receiver count {0} is outside the supported range")]
    NOutOfRange(usize),
    #[error("an all-zero receiver response cannot accompany a registered pulse")]
    ZeroResponse,
    #[error("accuracy ratio {ratio} violates the M = {stages} geometric regime bound {bound}")]
    RegimeViolation { stages: usize, ratio: f64, bound: f64 },
    #[error("constrained minimizer did not converge after {0} iterations")]
    NotConverged(usize),
    #[error("budget {budget} exceeds the largest feasible load {capacity}")]
    Infeasible { budget: f64, capacity: f64 },
    #[error("plan ended at width {width} above the requested accuracy {epsilon}")]
    PlanExhausted { width: f64, epsilon: f64 },
    #[error("decoded segment {decoded} differs from emitting segment {expected}")]
    DecodeError { expected: usize, decoded: usize },
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
}

impl Error {
    /// Stable identifier of the variant, e.g. `"EpsilonOutOfRange"`.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NonPositiveLambda(_) => "NonPositiveLambda",
            Error::NonPositiveLength(_) => "NonPositiveLength",
            Error::NegativeDensity { .. } => "NegativeDensity",
            Error::UnorderedBreakpoints(_) => "UnorderedBreakpoints",
            Error::EpsilonOutOfRange { .. } => "EpsilonOutOfRange",
            Error::GridMismatch => "GridMismatch",
            Error::NegativeMass { .. } => "NegativeMass",
            Error::NotNormalized(_) => "NotNormalized",
            Error::RootNotBracketed(_) => "RootNotBracketed",
            Error::KOutOfRange { .. } => "KOutOfRange",
            Error::LOutOfRange(_) => "LOutOfRange",
            Error::ApertureOrderViolation { .. } => "ApertureOrderViolation",
            Error::LadderInvalid(_) => "LadderInvalid",
            Error::NoSolution { .. } => "NoSolution",
            Error::AllInfeasible => "AllInfeasible",
            Error::NOutOfRange(_) => "NOutOfRange",
            Error::ZeroResponse => "ZeroResponse",
            Error::RegimeViolation { .. } => "RegimeViolation",
            Error::NotConverged(_) => "NotConverged",
            Error::Infeasible { .. } => "Infeasible",
            Error::PlanExhausted { .. } => "PlanExhausted",
            Error::DecodeError { .. } => "DecodeError",
            Error::InvalidScenario(_) => "InvalidScenario",
        }
    }
}

pub(crate) fn check_epsilon(epsilon: f64, length: f64) -> Result<()> {
    if epsilon.is_finite() && epsilon > 0.0 && epsilon < length {
        Ok(())
    } else {
        Err(Error::EpsilonOutOfRange { epsilon, length })
    }
}
