//! Reduction and extrapolation of one-loop self-energy tables for
//! hydrogen-like ions.
//!
//! Tabulated reduced self energies F(Z) are turned into remainder functions
//! of the Zα expansion, extrapolated in Z (or in 1/n) with a sliding-window
//! polynomial cascade, and converted back to energy shifts with uncertainties.

pub mod cli;
pub mod dataset;
pub mod extrap;
pub mod pipeline;
pub mod quantities;
pub mod reduction;

pub use quantities::{ConstantsSet, NuclearCharge, StateLabel, UncertainValue};
