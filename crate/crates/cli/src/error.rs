use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("invalid parameters: {0}")]
    Parameters(oner_core::Error),

    #[error("numerical failure: {0}")]
    Numerical(oner_core::Error),

    #[error("data ingestion error: {0}")]
    Ingestion(oner_core::Error),

    #[error("cannot write output: {0}")]
    Output(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Config(_) | Self::Parameters(_) | Self::Output(_) => 2,
            Self::Numerical(_) => 3,
            Self::Ingestion(_) => 4,
        }
    }
}

impl From<oner_core::Error> for CliError {
    fn from(e: oner_core::Error) -> Self {
        use oner_core::Error as E;
        match e {
            E::IntegrationFailure { .. } | E::InvalidDensity(_) | E::NonUniformSampling(_) => {
                Self::Numerical(e)
            }
            E::Table { .. } | E::Extrapolation { .. } | E::Io(_) => Self::Ingestion(e),
            other => Self::Parameters(other),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        Self::Output(std::io::Error::other(e))
    }
}
