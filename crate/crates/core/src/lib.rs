//! Exact sampling of monotone spin systems through coupled plus/minus
//! heat-bath dynamics and coupling from the past.

pub mod cftp;
pub mod error;
pub mod escoupling;
pub mod experiment;
pub mod lattice;
pub mod oracle;
pub mod order;
pub mod rng;
pub mod spec;

pub use error::{Error, Result};
