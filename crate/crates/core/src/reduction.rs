//! Conversions between self-energy shifts and the reduced self energy F,
//! and extraction of the remainder functions left after subtracting the
//! known low-order terms of the Zα expansion for non-S states:
//!
//! ```text
//! F = A40 + (Zα)² [A61 ln (Zα)⁻² + G_SE(Zα)]
//!   = A40 + (Zα)² [A61 ln (Zα)⁻² + A60] + (Zα)³ G_SE,7(Zα)
//! ```
//!
//! All maps are affine in F for a fixed Z, so first-order propagation of
//! uncorrelated sigmas is exact.

use thiserror::Error;

use crate::quantities::{ConstantsSet, NuclearCharge, QuantityError, StateLabel, UncertainValue};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReductionError {
    #[error(transparent)]
    Quantity(#[from] QuantityError),
    #[error("state {0} is an S state; the remainder expansion applies to non-S states only")]
    SState(StateLabel),
    #[error("coefficients are for {coeffs}, but the requested state is {requested}")]
    StateMismatch {
        coeffs: StateLabel,
        requested: StateLabel,
    },
    #[error("A60 is not available for {0}")]
    MissingA60(StateLabel),
    #[error("remainder bound must be finite and >= 0, got {0}")]
    BadBound(f64),
}

/// Expansion coefficients of F for one state.
///
/// `a60` and `gse_limit` are genuinely unknown for some states and are kept
/// absent rather than zero.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSet {
    pub state: StateLabel,
    pub a40: UncertainValue,
    pub a61: UncertainValue,
    pub a60: Option<UncertainValue>,
    /// Independently computed limit of G_SE as Zα → 0.
    pub gse_limit: Option<UncertainValue>,
    pub source: String,
}

impl CoefficientSet {
    fn a60_or_err(&self) -> Result<UncertainValue, ReductionError> {
        self.a60.ok_or(ReductionError::MissingA60(self.state))
    }
}

/// Which remainder function a value refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RemainderKind {
    /// G_SE(Zα)
    Gse,
    /// G_SE,7(Zα)
    Gse7,
    /// A60 + (Zα) G_SE,7(Zα)
    Magnifier,
}

impl RemainderKind {
    /// Power p of Zα dividing F in the extraction.
    pub fn zalpha_power(self) -> i32 {
        match self {
            RemainderKind::Gse | RemainderKind::Magnifier => 2,
            RemainderKind::Gse7 => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RemainderKind::Gse => "gse",
            RemainderKind::Gse7 => "gse7",
            RemainderKind::Magnifier => "magnifier",
        }
    }
}

/// Truncation of the Zα expansion used for perturbative estimates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truncation {
    /// A40 + (Zα)² A61 ln (Zα)⁻²; the rest bounded by (Zα)²·bound.
    TwoTerm,
    /// A40 + (Zα)² [A61 ln (Zα)⁻² + A60]; the rest bounded by (Zα)³·bound.
    ThreeTerm,
}

/// Hz per unit of F: (α/π)(Zα)⁴/n³ · m_e c²/h.
pub fn prefactor(
    state: StateLabel,
    z: NuclearCharge,
    constants: &ConstantsSet,
) -> Result<f64, ReductionError> {
    let za = constants.z_alpha(z)?;
    let n3 = f64::from(state.n()).powi(3);
    Ok(constants.alpha() / std::f64::consts::PI * za.powi(4) / n3
        * constants.electron_rest_frequency())
}

pub fn f_to_energy(
    f: UncertainValue,
    state: StateLabel,
    z: NuclearCharge,
    constants: &ConstantsSet,
) -> Result<UncertainValue, ReductionError> {
    Ok(f.scale(prefactor(state, z, constants)?))
}

pub fn energy_to_f(
    energy_hz: UncertainValue,
    state: StateLabel,
    z: NuclearCharge,
    constants: &ConstantsSet,
) -> Result<UncertainValue, ReductionError> {
    let p = prefactor(state, z, constants)?;
    Ok(UncertainValue::new(
        energy_hz.value() / p,
        energy_hz.sigma() / p,
    )?)
}

/// Zα and ln (Zα)⁻² after checking the state and coefficient preconditions.
fn expansion_point(
    z: NuclearCharge,
    coeffs: &CoefficientSet,
    constants: &ConstantsSet,
) -> Result<(f64, f64), ReductionError> {
    if coeffs.state.is_s_state() {
        return Err(ReductionError::SState(coeffs.state));
    }
    let za = constants.z_alpha(z)?;
    Ok((za, -2.0 * za.ln()))
}

/// G_SE = (F − A40)/(Zα)² − A61 ln (Zα)⁻².
pub fn extract_gse(
    f: UncertainValue,
    z: NuclearCharge,
    coeffs: &CoefficientSet,
    constants: &ConstantsSet,
) -> Result<UncertainValue, ReductionError> {
    let (za, log) = expansion_point(z, coeffs, constants)?;
    let za2 = za * za;
    let shifted = f.sub_quadrature(coeffs.a40).scale(1.0 / za2);
    Ok(shifted.sub_quadrature(coeffs.a61.scale(log)))
}

/// G_SE,7 = [F − A40 − (Zα)²(A61 ln (Zα)⁻² + A60)]/(Zα)³.
pub fn extract_gse7(
    f: UncertainValue,
    z: NuclearCharge,
    coeffs: &CoefficientSet,
    constants: &ConstantsSet,
) -> Result<UncertainValue, ReductionError> {
    let (za, log) = expansion_point(z, coeffs, constants)?;
    let a60 = coeffs.a60_or_err()?;
    let za2 = za * za;
    let known = coeffs.a61.scale(log).add_quadrature(a60).scale(za2);
    let rest = f.sub_quadrature(coeffs.a40).sub_quadrature(known);
    Ok(rest.scale(1.0 / (za2 * za)))
}

/// A60 + (Zα) G_SE,7, which coincides with G_SE for non-S states.
pub fn extract_magnifier(
    f: UncertainValue,
    z: NuclearCharge,
    coeffs: &CoefficientSet,
    constants: &ConstantsSet,
) -> Result<UncertainValue, ReductionError> {
    extract_gse(f, z, coeffs, constants)
}

pub fn extract(
    kind: RemainderKind,
    f: UncertainValue,
    z: NuclearCharge,
    coeffs: &CoefficientSet,
    constants: &ConstantsSet,
) -> Result<UncertainValue, ReductionError> {
    match kind {
        RemainderKind::Gse => extract_gse(f, z, coeffs, constants),
        RemainderKind::Gse7 => extract_gse7(f, z, coeffs, constants),
        RemainderKind::Magnifier => extract_magnifier(f, z, coeffs, constants),
    }
}

/// Rebuilds F from a remainder value; inverse of [`extract`].
pub fn reconstruct_f(
    remainder: UncertainValue,
    kind: RemainderKind,
    z: NuclearCharge,
    coeffs: &CoefficientSet,
    constants: &ConstantsSet,
) -> Result<UncertainValue, ReductionError> {
    let (za, log) = expansion_point(z, coeffs, constants)?;
    let za2 = za * za;
    match kind {
        RemainderKind::Gse | RemainderKind::Magnifier => {
            let bracket = coeffs.a61.scale(log).add_quadrature(remainder);
            Ok(coeffs.a40.add_quadrature(bracket.scale(za2)))
        }
        RemainderKind::Gse7 => {
            let a60 = coeffs.a60_or_err()?;
            let known = coeffs.a61.scale(log).add_quadrature(a60).scale(za2);
            Ok(coeffs
                .a40
                .add_quadrature(known)
                .add_quadrature(remainder.scale(za2 * za)))
        }
    }
}

/// Perturbative estimate of the energy shift with its uncertainty budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedEstimate {
    /// Central value with the combined uncertainty, in Hz.
    pub energy: UncertainValue,
    /// Uncertainty from the bound on the omitted remainder, in Hz.
    pub bound_sigma: f64,
    /// Uncertainty from the coefficient sigmas, in Hz.
    pub coefficient_sigma: f64,
}

/// Energy from a truncated expansion, with the omitted remainder bounded by
/// `remainder_bound` (A60 + Zα·G_SE,7 for two terms, G_SE,7 for three).
pub fn truncated_estimate(
    state: StateLabel,
    z: NuclearCharge,
    coeffs: &CoefficientSet,
    constants: &ConstantsSet,
    order: Truncation,
    remainder_bound: f64,
) -> Result<TruncatedEstimate, ReductionError> {
    if !(remainder_bound.is_finite() && remainder_bound >= 0.0) {
        return Err(ReductionError::BadBound(remainder_bound));
    }
    if coeffs.state != state {
        return Err(ReductionError::StateMismatch {
            coeffs: coeffs.state,
            requested: state,
        });
    }
    let (za, log) = expansion_point(z, coeffs, constants)?;
    let pre = prefactor(state, z, constants)?;
    let za2 = za * za;

    let (bracket, bound_power) = match order {
        Truncation::TwoTerm => (coeffs.a61.scale(log), za2),
        Truncation::ThreeTerm => (
            coeffs.a61.scale(log).add_quadrature(coeffs.a60_or_err()?),
            za2 * za,
        ),
    };
    let f = coeffs.a40.add_quadrature(bracket.scale(za2));
    let coefficient = f.scale(pre);
    let bound_sigma = pre * bound_power * remainder_bound;
    let energy = coefficient.add_quadrature(UncertainValue::new(0.0, bound_sigma)?);
    Ok(TruncatedEstimate {
        energy,
        bound_sigma,
        coefficient_sigma: coefficient.sigma(),
    })
}
