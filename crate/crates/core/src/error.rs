use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("frequency {omega:e} rad/s sits on a pole of the response")]
    Pole { omega: f64 },

    #[error("quadrature did not converge: estimated error {error:e} exceeds tolerance {tolerance:e} after {subdivisions} subdivisions")]
    Convergence {
        error: f64,
        tolerance: f64,
        subdivisions: usize,
    },

    #[error("series for {what} did not converge")]
    Series { what: &'static str },

    #[error("resonant terms need a lifted degeneracy; states {0} and {1} have equal energy (is B > 0?)")]
    Degenerate(String, String),

    #[error("unknown {kind} `{name}` (known: {known})")]
    Unknown {
        kind: &'static str,
        name: String,
        known: String,
    },

    #[error("config error at `{key}`: {message}")]
    Config { key: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
