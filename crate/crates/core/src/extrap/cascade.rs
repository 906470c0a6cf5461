use super::neville::{interpolate_window, Grid};
use super::ExtrapError;
use crate::quantities::UncertainValue;

/// One window of `order + 1` consecutive nodes, evaluated at the target.
#[derive(Debug, Clone, PartialEq)]
pub struct TableauEntry {
    pub window_start: usize,
    pub mean_abscissa: f64,
    pub value: UncertainValue,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableauColumn {
    pub order: usize,
    /// Ordered by window start, hence by mean abscissa.
    pub entries: Vec<TableauEntry>,
}

/// Sliding-window interpolants of every order, evaluated at one target.
#[derive(Debug, Clone, PartialEq)]
pub struct Tableau {
    target: f64,
    variable_label: String,
    node_count: usize,
    pub(crate) columns: Vec<TableauColumn>,
}

impl Tableau {
    pub fn target(&self) -> f64 {
        self.target
    }

    pub fn variable_label(&self) -> &str {
        &self.variable_label
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn columns(&self) -> &[TableauColumn] {
        &self.columns
    }

    pub fn max_order(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, order: usize) -> Option<&TableauColumn> {
        order.checked_sub(1).and_then(|i| self.columns.get(i))
    }

    /// Entry whose window mean lies closest to the target.
    pub fn innermost(&self, order: usize) -> Option<&TableauEntry> {
        let col = self.column(order)?;
        col.entries.iter().min_by(|a, b| {
            let da = (a.mean_abscissa - self.target).abs();
            let db = (b.mean_abscissa - self.target).abs();
            da.total_cmp(&db)
        })
    }

    /// Total number of (order, window) entries.
    pub fn entry_count(&self) -> usize {
        self.columns.iter().map(|c| c.entries.len()).sum()
    }
}

/// Evaluates every window of `k + 1` consecutive nodes at `target` for
/// `k = 1..=max_order`.
pub fn cascade(grid: &Grid, target: f64, max_order: usize) -> Result<Tableau, ExtrapError> {
    let n = grid.len();
    if max_order == 0 || max_order >= n {
        return Err(ExtrapError::OrderTooLarge {
            max_order,
            nodes: n,
        });
    }
    if !target.is_finite() {
        return Err(ExtrapError::NonFinite(target));
    }
    let nodes = grid.nodes();
    let values = grid.values();

    let columns = (1..=max_order)
        .map(|order| {
            let entries = (0..n - order)
                .map(|start| {
                    let window = start..start + order + 1;
                    let value = interpolate_window(
                        &nodes[window.clone()],
                        &values[window.clone()],
                        target,
                    )?;
                    let mean_abscissa = nodes[window].iter().sum::<f64>() / (order + 1) as f64;
                    Ok(TableauEntry {
                        window_start: start,
                        mean_abscissa,
                        value,
                    })
                })
                .collect::<Result<Vec<_>, ExtrapError>>()?;
            Ok(TableauColumn { order, entries })
        })
        .collect::<Result<Vec<_>, ExtrapError>>()?;

    Ok(Tableau {
        target,
        variable_label: grid.variable_label().to_string(),
        node_count: n,
        columns,
    })
}
