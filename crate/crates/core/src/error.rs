use thiserror::Error;

/// Errors shared across the toolkit.
///
/// Budget and cap exits are deliberately distinct from mathematical
/// failures: exceeding a resource budget never stands in for a negative
/// answer, it only means the instance was too large for the configured
/// limits.
#[derive(Debug, Error)]
pub enum Error {
    #[error("ring mismatch: {0}")]
    RingMismatch(String),

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("negative exponent on non-inverted variable `{0}`")]
    NegativeExponent(String),

    #[error("image of inverted variable `{0}` is not a unit in the target ring")]
    NonUnitImageForInvertedVariable(String),

    #[error("operation requires a plain polynomial but the input is Laurent")]
    LaurentInput,

    #[error("polynomial is not univariate in `{0}` after specialization")]
    NotUnivariateAfterSpecialization(String),

    #[error("resource budget exceeded after {steps} reduction steps (cap {cap})")]
    ResourceBudgetExceeded { steps: u64, cap: u64 },

    #[error("iteration cap exceeded for variable `{0}`")]
    CapExceeded(String),

    #[error("derivation is not certified locally nilpotent")]
    NotCertifiedNilpotent,

    #[error("denominator is zero modulo the relations")]
    ZeroDenominator,

    #[error("divisor element does not lie in the center ideal")]
    FNotInCenter,

    #[error("residues of (f, a0, a1) do not generate the unit ideal")]
    UnitIdealCheckFailed,

    #[error("no {0}x{0} minors exist for this presentation")]
    BadCodim(usize),

    #[error("point {point} does not lie on the required curve {curve}")]
    PointNotOnRequiredCurve { point: String, curve: String },

    #[error("final exceptional curve meets the removed curves in more than one point")]
    RuleCViolated,

    #[error("requested level {level} is below the minimal level {l0}")]
    LevelBelowL0 { level: i64, l0: i64 },

    #[error("cocycle class is trivial near the puncture; no affine extension exists")]
    TrivialNearO,

    #[error("homogeneous part has degree {r}, exceeding the bound m+n-2 = {bound}")]
    DegreeTooHigh { r: i64, bound: i64 },

    #[error("synthesis stuck at stage {stage}: {reason}")]
    SynthesisStuck { stage: usize, reason: String },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
