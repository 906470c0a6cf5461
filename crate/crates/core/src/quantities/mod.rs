//! Uncertain values, physical constants and state labels.

mod constants;
mod format;
mod state;
mod uncertain;

pub use constants::{ConstantsSet, NuclearCharge};
pub use format::{format_parenthesis, format_parenthesis_with, ParenthesisStyle};
pub use state::{parse_state, StateLabel};
pub use uncertain::UncertainValue;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuantityError {
    #[error("{what} must be finite, got {got}")]
    NonFinite { what: &'static str, got: f64 },
    #[error("sigma must be non-negative, got {0}")]
    NegativeSigma(f64),
    #[error("invalid constants: {0}")]
    Constants(String),
    #[error("nuclear charge must be >= 1")]
    ZeroCharge,
    #[error("Z = {z} gives Z*alpha = {z_alpha:.6} >= 1")]
    ZAlphaDomain { z: u32, z_alpha: f64 },
    #[error("{0}")]
    State(String),
}
