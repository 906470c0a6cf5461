use super::ExtrapError;
use crate::quantities::UncertainValue;

/// Tabulated function on strictly increasing abscissae.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    nodes: Vec<f64>,
    values: Vec<UncertainValue>,
    variable_label: String,
}

impl Grid {
    pub fn new(
        nodes: Vec<f64>,
        values: Vec<UncertainValue>,
        variable_label: impl Into<String>,
    ) -> Result<Self, ExtrapError> {
        if nodes.len() != values.len() {
            return Err(ExtrapError::LengthMismatch {
                nodes: nodes.len(),
                values: values.len(),
            });
        }
        if nodes.len() < 2 {
            return Err(ExtrapError::TooFewNodes(nodes.len()));
        }
        if let Some(bad) = nodes.iter().find(|x| !x.is_finite()) {
            return Err(ExtrapError::NonFinite(*bad));
        }
        for (i, pair) in nodes.windows(2).enumerate() {
            if pair[1] == pair[0] {
                return Err(ExtrapError::DuplicateNode {
                    index: i + 1,
                    node: pair[1],
                });
            }
            if pair[1] < pair[0] {
                return Err(ExtrapError::NotIncreasing {
                    index: i + 1,
                    node: pair[1],
                });
            }
        }
        Ok(Self {
            nodes,
            values,
            variable_label: variable_label.into(),
        })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn values(&self) -> &[UncertainValue] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn variable_label(&self) -> &str {
        &self.variable_label
    }

    /// Same nodes and central values with every sigma multiplied by `c`.
    pub fn scale_sigmas(&self, c: f64) -> Result<Self, ExtrapError> {
        let values = self
            .values
            .iter()
            .map(|v| v.with_sigma(v.sigma() * c))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            values,
            ..self.clone()
        })
    }
}

/// Value of the interpolating polynomial through every node of `grid` at `target`.
pub fn neville_at(grid: &Grid, target: f64) -> Result<UncertainValue, ExtrapError> {
    if !target.is_finite() {
        return Err(ExtrapError::NonFinite(target));
    }
    interpolate_window(grid.nodes(), grid.values(), target)
}

/// Neville recursion for the central value; Lagrange weights for the sigma.
pub(crate) fn interpolate_window(
    nodes: &[f64],
    values: &[UncertainValue],
    target: f64,
) -> Result<UncertainValue, ExtrapError> {
    let n = nodes.len();
    let mut p: Vec<f64> = values.iter().map(|v| v.value()).collect();
    for m in 1..n {
        for i in 0..n - m {
            let (xi, xj) = (nodes[i], nodes[i + m]);
            if xi == xj {
                return Err(ExtrapError::DuplicateNode {
                    index: i + m,
                    node: xj,
                });
            }
            p[i] = ((target - xj) * p[i] + (xi - target) * p[i + 1]) / (xi - xj);
        }
    }

    let variance: f64 = values
        .iter()
        .enumerate()
        .filter(|(_, v)| v.sigma() > 0.0)
        .map(|(i, v)| (lagrange_weight(nodes, i, target) * v.sigma()).powi(2))
        .sum();
    Ok(UncertainValue::new(p[0], variance.sqrt())?)
}

fn lagrange_weight(nodes: &[f64], i: usize, target: f64) -> f64 {
    nodes
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(_, &xj)| (target - xj) / (nodes[i] - xj))
        .product()
}
