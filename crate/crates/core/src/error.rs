use thiserror::Error;

/// Errors raised by complex construction, homology and the catalogs.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("{what} budget of {limit} exceeded (reached dimension {reached_dim})")]
    Budget {
        what: &'static str,
        limit: usize,
        reached_dim: usize,
    },

    #[error("time budget exhausted (reached dimension {reached_dim})")]
    TimeBudget { reached_dim: usize },

    #[error("no closed form for {space} n={n} k={k}")]
    UnsupportedRegime { space: &'static str, n: u32, k: u32 },

    #[error("complex is truncated at dimension {0}; enumerate further before asking for this")]
    Truncated(usize),

    #[error("homology needs simplices up to dimension {needed}, complex enumerated to {have}")]
    InsufficientDepth { needed: usize, have: usize },

    #[error("projected facet collapsed from {before} to {after} vertices")]
    ProjectionCollision { before: usize, after: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Invalid(_) => "invalid",
            Error::Budget { .. } | Error::TimeBudget { .. } => "budget",
            Error::UnsupportedRegime { .. } => "unsupported_regime",
            Error::Truncated(_) => "truncated",
            Error::InsufficientDepth { .. } => "insufficient_depth",
            Error::ProjectionCollision { .. } => "projection_collision",
            Error::Io(_) => "io",
        }
    }

    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget { .. } | Error::TimeBudget { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
