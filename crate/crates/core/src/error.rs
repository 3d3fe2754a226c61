use thiserror::Error;

/// Errors raised by the approximation engines and their building blocks.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A theorem's hypothesis on the coefficient set or the boundary point fails.
    #[error("hypothesis not satisfied: {reason}")]
    NotApplicable { reason: String },

    #[error("coefficient set is contained in a closed half-plane through the origin")]
    NotSpanning,

    #[error("no exponent below {cap} reaches the requested accuracy {eps}")]
    HorizonExhausted { cap: u64, eps: f64 },

    #[error("boundary point is not admissible here: {0}")]
    InvalidZeta(String),

    #[error("no admissible evaluation point found in the region")]
    RegionTooThin,

    #[error("internal verification failed: {0}")]
    VerificationFailed(String),

    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("certificate would need {needed} explicit terms (limit {limit})")]
    CertificateTooLarge { needed: u64, limit: u64 },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn not_applicable(reason: impl Into<String>) -> Self {
        Error::NotApplicable { reason: reason.into() }
    }

    /// True for failures that mean "the hypothesis does not hold" rather than
    /// "something went wrong".
    pub fn is_hypothesis_failure(&self) -> bool {
        matches!(self, Error::NotApplicable { .. } | Error::NotSpanning | Error::InvalidZeta(_))
    }

    /// Short machine-readable tag.
    pub fn reason_code(&self) -> String {
        match self {
            Error::InvalidInput(_) => "invalid-input".into(),
            Error::NotApplicable { reason } => reason.clone(),
            Error::NotSpanning => "half-plane-contained".into(),
            Error::HorizonExhausted { .. } => "horizon-exhausted".into(),
            Error::InvalidZeta(_) => "invalid-zeta".into(),
            Error::RegionTooThin => "region-too-thin".into(),
            Error::VerificationFailed(_) => "verification-failed".into(),
            Error::BudgetExceeded(_) => "budget-exceeded".into(),
            Error::CertificateTooLarge { .. } => "certificate-too-large".into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
