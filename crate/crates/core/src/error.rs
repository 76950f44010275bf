use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the library can report.
///
/// Variants split into two families that the command line maps onto distinct
/// exit statuses: validation problems (bad inputs, unmet preconditions) and
/// numerical-stability problems (kernel overflow, failed reconstruction).
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid value for `{param}`: {reason}")]
    InvalidParameter { param: &'static str, reason: String },

    #[error("`{param}` = {got} is below the required minimum {required}")]
    Resolution {
        param: &'static str,
        required: usize,
        got: usize,
    },

    #[error("{what}: evaluable range is empty (need {needed}, have {have})")]
    Size {
        what: &'static str,
        needed: usize,
        have: usize,
    },

    #[error("spectral support is degenerate: {0}")]
    DegenerateSupport(String),

    #[error("|z| = {modulus} lies inside the unit disk; the transfer function is only evaluated on |z| >= 1")]
    Domain { modulus: f64 },

    #[error(
        "kernel overflow: gamma^(1 + 2mu/(q-1)) = {exponent} exceeds {limit}; use a smaller gamma or a larger q"
    )]
    KernelOverflow { exponent: f64, limit: f64 },

    #[error(
        "kernel is not causal: epsilon = {epsilon} >= 2 puts the singularity at z = {pole} outside the unit disk; increase gamma"
    )]
    NotCausal { epsilon: f64, pole: f64 },

    #[error("kernel taps did not decay below trunc_tol within {horizon} taps; increase N")]
    TruncationHorizon { horizon: usize },

    #[error("kernel reconstruction residual {residual:e} exceeds {limit:e}; increase N")]
    Reconstruction { residual: f64, limit: f64 },

    #[error("parse error in {source_name}: {reason}")]
    Parse { source_name: String, reason: String },

    #[error("at gamma = {gamma}: {source}")]
    AtGamma {
        gamma: f64,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(param: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            param,
            reason: reason.into(),
        }
    }

    pub(crate) fn parse(source_name: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Parse {
            source_name: source_name.into(),
            reason: reason.into(),
        }
    }

    /// True for failures caused by floating-point range or conditioning rather
    /// than by the caller's inputs.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::KernelOverflow { .. }
            | Error::TruncationHorizon { .. }
            | Error::Reconstruction { .. } => true,
            Error::AtGamma { source, .. } => source.is_numerical(),
            _ => false,
        }
    }

    /// Short machine-readable reason code.
    pub fn reason_code(&self) -> &'static str {
        match self {
            Error::InvalidParameter { .. } => "invalid_parameter",
            Error::Resolution { .. } => "insufficient_resolution",
            Error::Size { .. } => "empty_range",
            Error::DegenerateSupport(_) => "degenerate_support",
            Error::Domain { .. } => "outside_domain",
            Error::KernelOverflow { .. } => "kernel_overflow",
            Error::NotCausal { .. } => "kernel_not_causal",
            Error::TruncationHorizon { .. } => "truncation_horizon",
            Error::Reconstruction { .. } => "reconstruction_failed",
            Error::Parse { .. } | Error::Json(_) | Error::Csv(_) => "bad_format",
            Error::AtGamma { source, .. } => source.reason_code(),
            Error::Io(_) => "io",
        }
    }

    /// Name of the parameter at fault, when one is identifiable.
    pub fn param(&self) -> Option<&'static str> {
        match self {
            Error::InvalidParameter { param, .. } | Error::Resolution { param, .. } => Some(param),
            Error::Size { .. } => Some("length"),
            Error::DegenerateSupport(_) => Some("omega"),
            Error::Domain { .. } => Some("z"),
            Error::KernelOverflow { .. } | Error::NotCausal { .. } => Some("gamma"),
            Error::TruncationHorizon { .. } | Error::Reconstruction { .. } => Some("n"),
            Error::AtGamma { source, .. } => source.param(),
            _ => None,
        }
    }
}
