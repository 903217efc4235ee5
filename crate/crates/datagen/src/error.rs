use thiserror::Error;

#[derive(Debug, Error)]
pub enum GenError {
    #[error("invalid generator config: {0}")]
    InvalidConfig(String),
    #[error("dictionary {0} is empty")]
    EmptyDictionary(&'static str),
    #[error("failed to start worker pool: {0}")]
    Pool(String),
    #[error(transparent)]
    Model(#[from] snbkit_core::ModelError),
}
