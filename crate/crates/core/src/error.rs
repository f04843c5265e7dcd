use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A configuration key is missing, duplicated or out of range.
    #[error("config key `{key}`: {msg}")]
    Config { key: String, msg: String },

    #[error("config file: {0}")]
    ConfigParse(String),

    #[error("element grid is empty (radius {radius_m} m < spacing/2 = {half_spacing_m} m)")]
    EmptyGrid { radius_m: f64, half_spacing_m: f64 },

    #[error("no target angle in (-pi/2, pi/2) produces tilt angle {gamma_c_rad} rad")]
    NoGammaSolution { gamma_c_rad: f64 },

    /// An argument fell outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The constant path-sum conic misses the aperture entirely.
    #[error("path sum {l} m has no arc inside the aperture")]
    EmptyArc { l: f64 },

    /// Caller broke an operation's precondition (misaligned lengths etc).
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("ambiguity peak undefined: spectrum has no energy")]
    UndefinedPeak,

    #[error("inconclusive check: {0}")]
    Inconclusive(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn config(key: &str, msg: impl Into<String>) -> Self {
        Error::Config {
            key: key.to_string(),
            msg: msg.into(),
        }
    }
}
