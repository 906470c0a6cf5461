//! Sliding-window polynomial extrapolation.
//!
//! Every run of `k + 1` consecutive nodes defines an interpolating polynomial
//! of degree `k`; evaluating each one at the target abscissa and watching how
//! the values settle as the window order grows gives the limit estimate and
//! an order-to-order uncertainty.

mod cascade;
mod neville;
mod policy;

pub use cascade::{cascade, Tableau, TableauColumn, TableauEntry};
pub use neville::{neville_at, Grid};
pub use policy::{estimate_limit, ConvergencePolicy, ExtrapolationResult, NEGLIGIBLE_CHANGE};

use thiserror::Error;

use crate::quantities::{QuantityError, UncertainValue};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExtrapError {
    #[error("{nodes} nodes but {values} values")]
    LengthMismatch { nodes: usize, values: usize },
    #[error("need at least 2 nodes, got {0}")]
    TooFewNodes(usize),
    #[error("non-finite abscissa {0}")]
    NonFinite(f64),
    #[error("duplicate node {node} at index {index}")]
    DuplicateNode { index: usize, node: f64 },
    #[error("nodes must increase; node {node} at index {index} does not")]
    NotIncreasing { index: usize, node: f64 },
    #[error("order {max_order} needs more than {nodes} nodes")]
    OrderTooLarge { max_order: usize, nodes: usize },
    #[error("need at least 2 interpolation orders, got {0}")]
    TooFewOrders(usize),
    #[error("changes between successive orders keep growing; no order can be trusted")]
    NonConvergent { trace: Box<Tableau> },
    #[error("duplicate principal quantum number n = {0}")]
    DuplicateN(u32),
    #[error("principal quantum numbers must be >= 1")]
    ZeroN,
    #[error(transparent)]
    Quantity(#[from] QuantityError),
}

/// Extrapolates values known at several principal quantum numbers to
/// `target_n`, working in the variable 1/n.
pub fn extrapolate_in_n(
    points: &[(u32, UncertainValue)],
    target_n: u32,
    policy: ConvergencePolicy,
) -> Result<ExtrapolationResult, ExtrapError> {
    if target_n == 0 || points.iter().any(|(n, _)| *n == 0) {
        return Err(ExtrapError::ZeroN);
    }
    let mut sorted = points.to_vec();
    // ascending 1/n
    sorted.sort_by_key(|p| std::cmp::Reverse(p.0));
    if let Some(w) = sorted.windows(2).find(|w| w[0].0 == w[1].0) {
        return Err(ExtrapError::DuplicateN(w[0].0));
    }
    let nodes = sorted.iter().map(|(n, _)| 1.0 / f64::from(*n)).collect();
    let values = sorted.iter().map(|(_, v)| *v).collect();
    let grid = Grid::new(nodes, values, "1/n")?;
    let target = 1.0 / f64::from(target_n);
    let tableau = cascade(&grid, target, grid.len() - 1)?;

    if tableau.max_order() == 1 {
        // A single straight line: judge it against the nearest data point.
        let entry = &tableau.columns()[0].entries[0];
        let nearest = grid
            .nodes()
            .iter()
            .zip(grid.values())
            .min_by(|a, b| (a.0 - target).abs().total_cmp(&(b.0 - target).abs()))
            .map(|(_, v)| v.value())
            .expect("grid has nodes");
        let order_sigma = (entry.value.value() - nearest).abs();
        let data_sigma = entry.value.sigma();
        return Ok(ExtrapolationResult {
            estimate: UncertainValue::new(entry.value.value(), data_sigma.hypot(order_sigma))?,
            order_used: 1,
            data_sigma,
            order_sigma,
            trace: tableau,
        });
    }
    estimate_limit(&tableau, policy)
}
