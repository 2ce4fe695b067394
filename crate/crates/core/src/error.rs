use crate::channel::LinkId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error(
        "link {link}: estimation-error variance {sigma_e2} must stay below the channel variance {omega}"
    )]
    DegenerateVariance {
        link: LinkId,
        sigma_e2: f64,
        omega: f64,
    },

    #[error("relay index {index} is outside 1..={relays}")]
    RelayOutOfRange { index: usize, relays: usize },

    #[error("argument {0} is outside the domain of the function")]
    Domain(f64),

    #[error("config: {0}")]
    Config(String),

    #[error("{0}")]
    Numeric(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
