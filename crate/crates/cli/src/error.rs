use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("unknown model family '{0}' (see `lifeinfo list-models`)")]
    UnknownModel(String),

    #[error("unknown measure '{0}' (see `lifeinfo list-measures`)")]
    UnknownMeasure(String),

    #[error(transparent)]
    Model(#[from] lifeinfo::error::Error),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
