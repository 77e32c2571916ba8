use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid potential: {0}")]
    InvalidPotential(String),
    #[error("undefined result: {0}")]
    Undefined(String),
    #[error("node proximity: density {rho:e} below floor at x = {x} Å")]
    NodeProximity { x: f64, rho: f64 },
    #[error("config error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
