use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("site {site} is not part of a graph with {len} sites")]
    UnknownSite { site: usize, len: usize },

    #[error("configuration has {got} entries, expected {expected}")]
    ConfigurationLength { got: usize, expected: usize },

    #[error("parameter out of range: {0}")]
    Parameter(String),

    #[error("value {0} is not a member of the update alphabet")]
    NotInAlphabet(f64),

    #[error("alphabet cannot be enumerated: {0}")]
    AlphabetUnavailable(String),

    #[error("order between sites {0} and {1} is unresolved inside the ambient graph")]
    UnresolvedOrder(usize, usize),

    #[error("chains did not coalesce within the horizon cap of {cap} sweeps")]
    HorizonCap { cap: u64 },

    #[error("no agreement up to the cap {cap}")]
    Unresolved { cap: usize },

    #[error("state space of {states} configurations exceeds the enumeration cap of 2^{cap_bits}")]
    EnumerationCap { states: f64, cap_bits: u32 },

    #[error("distributions live on different universes ({0} vs {1} atoms)")]
    UniverseMismatch(usize, usize),

    #[error("duplicate ordering label at sites {0} and {1}")]
    DuplicateLabel(usize, usize),

    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}
