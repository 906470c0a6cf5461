use super::cascade::Tableau;
use super::ExtrapError;
use crate::quantities::UncertainValue;

/// A change between successive orders this small, relative to the
/// estimates themselves, is treated as exact agreement.
pub const NEGLIGIBLE_CHANGE: f64 = 1e-11;

/// How the interpolation order of the final estimate is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ConvergencePolicy {
    /// Largest order whose change from the previous order is a new running
    /// minimum. Stops short of orders where noise amplification dominates.
    #[default]
    MinimalChange,
    /// Increase the order while the change keeps shrinking; stop at the
    /// first increase.
    StopAtFirstIncrease,
    /// Always use this order.
    FixedOrder(usize),
}

/// Limit estimate and its uncertainty budget.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtrapolationResult {
    pub estimate: UncertainValue,
    pub order_used: usize,
    /// Input uncertainty propagated through the chosen window.
    pub data_sigma: f64,
    /// Change of the innermost estimate from the neighbouring order.
    pub order_sigma: f64,
    pub trace: Tableau,
}

pub fn estimate_limit(
    tableau: &Tableau,
    policy: ConvergencePolicy,
) -> Result<ExtrapolationResult, ExtrapError> {
    let orders = tableau.max_order();
    if orders < 2 {
        return Err(ExtrapError::TooFewOrders(orders));
    }
    let estimates: Vec<f64> = (1..=orders)
        .map(|k| tableau.innermost(k).map(|e| e.value.value()))
        .collect::<Option<_>>()
        .ok_or(ExtrapError::TooFewOrders(orders))?;
    // changes[i] = |e_{i+2} - e_{i+1}|, the change on reaching order i + 2
    let changes: Vec<f64> = estimates.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let change_at = |order: usize| changes[order.max(2) - 2];

    let order = match policy {
        ConvergencePolicy::FixedOrder(k) => {
            if k == 0 || k > orders {
                return Err(ExtrapError::OrderTooLarge {
                    max_order: k,
                    nodes: tableau.node_count(),
                });
            }
            k
        }
        ConvergencePolicy::MinimalChange | ConvergencePolicy::StopAtFirstIncrease => {
            let scale = estimates.iter().fold(0.0f64, |m, e| m.max(e.abs()));
            if let Some(i) = changes.iter().position(|&d| d <= NEGLIGIBLE_CHANGE * scale) {
                // order i + 1 already agrees with order i + 2
                return Ok(finish(tableau, i + 1, changes[i]));
            }
            if changes.len() >= 2 && changes.windows(2).all(|w| w[1] > w[0]) {
                return Err(ExtrapError::NonConvergent {
                    trace: Box::new(tableau.clone()),
                });
            }
            if policy == ConvergencePolicy::MinimalChange {
                let mut best = 0;
                for (i, &d) in changes.iter().enumerate() {
                    if d < changes[best] {
                        best = i;
                    }
                }
                best + 2
            } else {
                let run = changes.windows(2).take_while(|w| w[1] < w[0]).count();
                run + 2
            }
        }
    };
    Ok(finish(tableau, order, change_at(order)))
}

fn finish(tableau: &Tableau, order: usize, order_sigma: f64) -> ExtrapolationResult {
    let entry = tableau.innermost(order).expect("order within tableau");
    let data_sigma = entry.value.sigma();
    ExtrapolationResult {
        estimate: UncertainValue::new(entry.value.value(), data_sigma.hypot(order_sigma))
            .expect("finite tableau entries"),
        order_used: order,
        data_sigma,
        order_sigma,
        trace: tableau.clone(),
    }
}
