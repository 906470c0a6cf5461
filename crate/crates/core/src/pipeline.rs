//! End-to-end steps shared by the command-line tool: remainder extraction
//! over a whole table, extrapolation in Z or n, reconstruction of F and the
//! energy at the target, and the limit-consistency check.

use thiserror::Error;

use crate::dataset::FSeries;
use crate::extrap::{
    cascade, estimate_limit, extrapolate_in_n, ConvergencePolicy, ExtrapError, ExtrapolationResult,
    Grid, Tableau,
};
use crate::quantities::{ConstantsSet, NuclearCharge, StateLabel, UncertainValue};
use crate::reduction::{self, CoefficientSet, ReductionError, RemainderKind};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Extrap(#[from] ExtrapError),
    #[error("{0}")]
    Invalid(String),
}

impl PipelineError {
    /// Tableau of a non-convergent extrapolation, if that is what failed.
    pub fn non_convergent_trace(&self) -> Option<&Tableau> {
        match self {
            PipelineError::Extrap(ExtrapError::NonConvergent { trace }) => Some(trace),
            _ => None,
        }
    }
}

/// Quantity carried through the extrapolation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, clap::ValueEnum)]
pub enum Variable {
    /// The reduced self energy F itself
    F,
    /// G_SE
    Gse,
    /// G_SE,7
    Gse7,
    /// A60 + Zα G_SE,7
    Magnifier,
}

impl Variable {
    pub fn remainder_kind(self) -> Option<RemainderKind> {
        match self {
            Variable::F => None,
            Variable::Gse => Some(RemainderKind::Gse),
            Variable::Gse7 => Some(RemainderKind::Gse7),
            Variable::Magnifier => Some(RemainderKind::Magnifier),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Variable::F => "f",
            Variable::Gse => "gse",
            Variable::Gse7 => "gse7",
            Variable::Magnifier => "magnifier",
        }
    }
}

/// Where an extrapolation in Z is aimed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZTarget {
    Charge(NuclearCharge),
    ZAlphaZero,
}

impl ZTarget {
    fn abscissa(self) -> f64 {
        match self {
            ZTarget::Charge(z) => f64::from(z.get()),
            ZTarget::ZAlphaZero => 0.0,
        }
    }

    pub fn describe(self) -> String {
        match self {
            ZTarget::Charge(z) => format!("Z={z}"),
            ZTarget::ZAlphaZero => "Zalpha=0".to_string(),
        }
    }
}

fn need_coefficients(
    variable: Variable,
    coeffs: Option<&CoefficientSet>,
    state: StateLabel,
) -> Result<Option<&CoefficientSet>, PipelineError> {
    match (variable.remainder_kind(), coeffs) {
        (None, _) => Ok(None),
        (Some(_), Some(c)) if c.state == state => Ok(Some(c)),
        (Some(_), Some(c)) => Err(PipelineError::Invalid(format!(
            "coefficients are for {}, table is for {state}",
            c.state
        ))),
        (Some(_), None) => Err(PipelineError::Invalid(format!(
            "variable {} needs coefficients for {state}",
            variable.name()
        ))),
    }
}

/// Per-sample values of `variable`, as (Z, value).
pub fn remainder_values(
    series: &FSeries,
    variable: Variable,
    coeffs: Option<&CoefficientSet>,
) -> Result<Vec<(NuclearCharge, UncertainValue)>, PipelineError> {
    let coeffs = need_coefficients(variable, coeffs, series.state())?;
    series
        .samples()
        .iter()
        .map(|s| {
            let v = match (variable.remainder_kind(), coeffs) {
                (Some(kind), Some(c)) => reduction::extract(kind, s.f, s.z, c, series.constants())?,
                _ => s.f,
            };
            Ok((s.z, v))
        })
        .collect()
}

/// Grid of `variable` against Z.
pub fn remainder_grid(
    series: &FSeries,
    variable: Variable,
    coeffs: Option<&CoefficientSet>,
) -> Result<Grid, PipelineError> {
    let values = remainder_values(series, variable, coeffs)?;
    let nodes = values.iter().map(|(z, _)| f64::from(z.get())).collect();
    let values = values.into_iter().map(|(_, v)| v).collect();
    Ok(Grid::new(nodes, values, "Z")?)
}

/// Outcome of extrapolating one table in Z.
#[derive(Debug, Clone, PartialEq)]
pub struct ZExtrapolation {
    pub state: StateLabel,
    pub variable: Variable,
    pub target: ZTarget,
    pub result: ExtrapolationResult,
    /// F rebuilt at a charge target.
    pub f: Option<UncertainValue>,
    /// Energy shift in Hz at a charge target.
    pub energy_hz: Option<UncertainValue>,
}

/// Extracts `variable` from every sample, extrapolates it to `target` and,
/// for a charge target, rebuilds F and the energy shift there.
pub fn extrapolate_series(
    series: &FSeries,
    variable: Variable,
    coeffs: Option<&CoefficientSet>,
    target: ZTarget,
    max_order: usize,
    policy: ConvergencePolicy,
) -> Result<ZExtrapolation, PipelineError> {
    let grid = remainder_grid(series, variable, coeffs)?;
    let order = max_order.min(grid.len() - 1);
    let tableau = cascade(&grid, target.abscissa(), order)?;
    let result = estimate_limit(&tableau, policy)?;

    let (f, energy_hz) = match target {
        ZTarget::Charge(z) => {
            let f = rebuild_f(result.estimate, variable, z, coeffs, series.constants())?;
            let e = reduction::f_to_energy(f, series.state(), z, series.constants())?;
            (Some(f), Some(e))
        }
        ZTarget::ZAlphaZero => (None, None),
    };
    Ok(ZExtrapolation {
        state: series.state(),
        variable,
        target,
        result,
        f,
        energy_hz,
    })
}

fn rebuild_f(
    value: UncertainValue,
    variable: Variable,
    z: NuclearCharge,
    coeffs: Option<&CoefficientSet>,
    constants: &ConstantsSet,
) -> Result<UncertainValue, PipelineError> {
    match (variable.remainder_kind(), coeffs) {
        (None, _) => Ok(value),
        (Some(kind), Some(c)) => Ok(reduction::reconstruct_f(value, kind, z, c, constants)?),
        (Some(_), None) => Err(PipelineError::Invalid(format!(
            "variable {} needs coefficients",
            variable.name()
        ))),
    }
}

/// Comparison of two energy estimates against their combined sigma.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Agreement {
    pub difference_hz: f64,
    pub combined_sigma_hz: f64,
}

impl Agreement {
    pub fn between(a: UncertainValue, b: UncertainValue) -> Self {
        Self {
            difference_hz: a.value() - b.value(),
            combined_sigma_hz: a.sigma().hypot(b.sigma()),
        }
    }

    pub fn agrees(&self) -> bool {
        self.difference_hz.abs() <= self.combined_sigma_hz
    }
}

/// Outcome of extrapolating several n to another n.
#[derive(Debug, Clone, PartialEq)]
pub struct NExtrapolation {
    pub state: StateLabel,
    pub variable: Variable,
    pub z: NuclearCharge,
    /// Per-table estimates at `z`, keyed by n.
    pub inputs: Vec<(u32, ZExtrapolation)>,
    pub result: ExtrapolationResult,
    pub f: UncertainValue,
    pub energy_hz: UncertainValue,
}

/// Extrapolates each table to charge `z`, then extrapolates the results in
/// 1/n to `target_n`. Every table must share l and j.
pub fn extrapolate_to_n(
    tables: &[(FSeries, Option<CoefficientSet>)],
    variable: Variable,
    target: StateLabel,
    z: NuclearCharge,
    target_coeffs: Option<&CoefficientSet>,
    max_order: usize,
    policy: ConvergencePolicy,
) -> Result<NExtrapolation, PipelineError> {
    if tables.len() < 2 {
        return Err(PipelineError::Invalid(
            "n-extrapolation needs tables for at least two n".into(),
        ));
    }
    let mut inputs = Vec::with_capacity(tables.len());
    for (series, coeffs) in tables {
        let st = series.state();
        if st.l() != target.l() || st.j2() != target.j2() {
            return Err(PipelineError::Invalid(format!(
                "table for {st} does not share l and j with {target}"
            )));
        }
        let r = extrapolate_series(
            series,
            variable,
            coeffs.as_ref(),
            ZTarget::Charge(z),
            max_order,
            policy,
        )?;
        inputs.push((st.n(), r));
    }
    inputs.sort_by_key(|(n, _)| *n);
    let points: Vec<(u32, UncertainValue)> = inputs
        .iter()
        .map(|(n, r)| (*n, r.result.estimate))
        .collect();
    let result = extrapolate_in_n(&points, target.n(), policy)?;

    let constants = tables[0].0.constants();
    let coeffs = need_coefficients(variable, target_coeffs, target)?;
    let f = rebuild_f(result.estimate, variable, z, coeffs, constants)?;
    let energy_hz = reduction::f_to_energy(f, target, z, constants)?;
    Ok(NExtrapolation {
        state: target,
        variable,
        z,
        inputs,
        result,
        f,
        energy_hz,
    })
}

/// Result of comparing extrapolated G_SE(0) with the known limit.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitCheck {
    pub state: StateLabel,
    pub samples: Vec<(NuclearCharge, UncertainValue)>,
    pub extrapolation: ExtrapolationResult,
    pub limit: UncertainValue,
    pub k: f64,
}

impl LimitCheck {
    pub fn combined_sigma(&self) -> f64 {
        self.extrapolation
            .estimate
            .sigma()
            .hypot(self.limit.sigma())
    }

    pub fn deviation(&self) -> f64 {
        self.extrapolation.estimate.value() - self.limit.value()
    }

    /// |extrapolated − limit| ≤ k·sqrt(σ_extrap² + σ_limit²)
    pub fn consistent(&self) -> bool {
        self.deviation().abs() <= self.k * self.combined_sigma()
    }
}

pub fn verify_limit(
    series: &FSeries,
    coeffs: &CoefficientSet,
    k: f64,
    max_order: usize,
    policy: ConvergencePolicy,
) -> Result<LimitCheck, PipelineError> {
    let limit = coeffs
        .gse_limit
        .ok_or_else(|| PipelineError::Invalid(format!("no G_SE limit for {}", coeffs.state)))?;
    if !(k.is_finite() && k > 0.0) {
        return Err(PipelineError::Invalid(format!(
            "consistency factor must be > 0, got {k}"
        )));
    }
    let samples = remainder_values(series, Variable::Gse, Some(coeffs))?;
    let r = extrapolate_series(
        series,
        Variable::Gse,
        Some(coeffs),
        ZTarget::ZAlphaZero,
        max_order,
        policy,
    )?;
    Ok(LimitCheck {
        state: series.state(),
        samples,
        extrapolation: r.result,
        limit,
        k,
    })
}
