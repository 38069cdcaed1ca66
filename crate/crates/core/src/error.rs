use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("distribution has no finite mean")]
    NoFiniteMean,
    #[error("distribution has no density")]
    NoDensity,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("deadline distribution is infinite; the Y/Loynes sequences diverge")]
    InfiniteDeadline,
    #[error("model failed the stability gate: {0}")]
    UnstableModel(String),
    #[error("arrival process is not Poisson (arrival law must be Exponential)")]
    NotPoissonArrivals,
    #[error("patience law is not Exponential")]
    PatienceNotExponential,
    #[error("fixed point did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error("estimated density mass beyond x_max = {x_max} is {mass:.3e}; increase x_max")]
    TailMassTooLarge { mass: f64, x_max: f64 },
    #[error("series did not decay within {terms} terms")]
    SeriesDiverges { terms: usize },
    #[error("grid too short: {usable} usable points, need at least 16")]
    GridTooShort { usable: usize },
    #[error("only {exceedances} Monte Carlo exceedances at the top grid point, need at least 200")]
    InsufficientTailData { exceedances: u64 },
}

impl Error {
    /// True for errors caused by the model or its parameters, as opposed to
    /// numerical failures.
    pub fn is_model_error(&self) -> bool {
        !self.is_numerical()
    }

    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. }
                | Error::TailMassTooLarge { .. }
                | Error::SeriesDiverges { .. }
                | Error::GridTooShort { .. }
                | Error::InsufficientTailData { .. }
        )
    }
}
