use thiserror::Error;

/// Every failure the library reports.
///
/// Variant names double as the machine-readable tags printed by the CLI, so
/// they are kept stable.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("DimensionTooSmall: N = {0} but N >= 3 is required")]
    DimensionTooSmall(u32),
    #[error("DegenerateWeight: N - 2 + a = {0} must be positive")]
    DegenerateWeight(f64),
    #[error("InvalidExponent: p = {0} must exceed 1")]
    InvalidExponent(f64),
    #[error("InadmissibleWeights: {0}")]
    InadmissibleWeights(&'static str),
    #[error("NotCritical: p = {p} differs from p_critical = {p_critical}")]
    NotCritical { p: f64, p_critical: f64 },
    #[error("BalanceViolated: (N+b)/q + 1 = {lhs} but (N+a)/2 = {rhs}")]
    BalanceViolated { lhs: f64, rhs: f64 },
    #[error("BandViolated: a - 2 <= 2b/q <= a fails with 2b/q = {0}")]
    BandViolated(f64),
    #[error("DerivativeUndefinedAtOrigin: sigma = {0} < 1")]
    DerivativeUndefinedAtOrigin(f64),
    #[error("NotInSerrinSupercriticalRange: p = {p} <= p_serrin = {p_serrin}")]
    NotInSerrinSupercriticalRange { p: f64, p_serrin: f64 },
    #[error("NonpositiveRadius: r = {0}")]
    NonpositiveRadius(f64),
    #[error("InvalidConfig: {0}")]
    InvalidConfig(String),
    #[error("StepSizeUnderflow at t = {0}")]
    StepSizeUnderflow(f64),
    #[error("TooManySteps: gave up at t = {0}")]
    TooManySteps(f64),
    #[error("BracketInvalid: {0}")]
    BracketInvalid(String),
    #[error("NonpositiveNode at index {0}")]
    NonpositiveNode(usize),
    #[error("RangeExceeded: R = {radius} outside [{lo}, {hi}]")]
    RangeExceeded { radius: f64, lo: f64, hi: f64 },
    #[error("NonpositiveSolution: v <= 0 before R = {0}")]
    NonpositiveSolution(f64),
    #[error("NonintegrableProfile: {0}")]
    NonintegrableProfile(String),
    #[error("SymmetryBreakingRegion: b = {b} exceeds q*beta_FS(a) = {threshold}")]
    SymmetryBreakingRegion { b: f64, threshold: f64 },
    #[error("Parse: {0}")]
    Parse(String),
}

impl Error {
    /// Short variant tag, e.g. `"DimensionTooSmall"`.
    pub fn name(&self) -> &'static str {
        match self {
            Error::DimensionTooSmall(_) => "DimensionTooSmall",
            Error::DegenerateWeight(_) => "DegenerateWeight",
            Error::InvalidExponent(_) => "InvalidExponent",
            Error::InadmissibleWeights(_) => "InadmissibleWeights",
            Error::NotCritical { .. } => "NotCritical",
            Error::BalanceViolated { .. } => "BalanceViolated",
            Error::BandViolated(_) => "BandViolated",
            Error::DerivativeUndefinedAtOrigin(_) => "DerivativeUndefinedAtOrigin",
            Error::NotInSerrinSupercriticalRange { .. } => "NotInSerrinSupercriticalRange",
            Error::NonpositiveRadius(_) => "NonpositiveRadius",
            Error::InvalidConfig(_) => "InvalidConfig",
            Error::StepSizeUnderflow(_) => "StepSizeUnderflow",
            Error::TooManySteps(_) => "TooManySteps",
            Error::BracketInvalid(_) => "BracketInvalid",
            Error::NonpositiveNode(_) => "NonpositiveNode",
            Error::RangeExceeded { .. } => "RangeExceeded",
            Error::NonpositiveSolution(_) => "NonpositiveSolution",
            Error::NonintegrableProfile(_) => "NonintegrableProfile",
            Error::SymmetryBreakingRegion { .. } => "SymmetryBreakingRegion",
            Error::Parse(_) => "Parse",
        }
    }

    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::StepSizeUnderflow(_) | Error::TooManySteps(_) | Error::NonintegrableProfile(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
