use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter or configuration value violates its contract.
    #[error("invalid configuration: {0}")]
    Config(&'static str),

    #[error("invalid model parameter `{key}`: {reason}")]
    Param { key: &'static str, reason: &'static str },

    #[error("cannot parse model parameters: {0}")]
    Parse(alloc::string::String),

    /// Probability reached the edge band of the truncated momentum lattice.
    #[error(
        "edge leakage {leakage:.3e} exceeds {threshold:.1e} after kick {kick}; \
         enlarge the grid size or re-center m_min"
    )]
    Leakage { leakage: f64, threshold: f64, kick: u64 },

    /// Leakage inside one realization of a noise ensemble.
    #[error("realization {realization}: {source}")]
    Realization {
        realization: u64,
        #[source]
        source: alloc::boxed::Box<Error>,
    },

    #[error("fit window [{n_min}, {n_max}] is invalid for a series of length {len} (need at least 10 points)")]
    FitWindow { n_min: usize, n_max: usize, len: usize },

    #[error("momentum distribution is not normalized (total probability {0})")]
    Unnormalized(f64),
}

impl Error {
    /// True for failures of the numerical guards (as opposed to bad input).
    pub fn is_numerical_guard(&self) -> bool {
        match self {
            Error::Leakage { .. } => true,
            Error::Realization { source, .. } => source.is_numerical_guard(),
            _ => false,
        }
    }
}
