//! Synthetic F tables from a closed-form model of the remainder.
//!
//! The model keeps the known low-order structure and replaces the unknown
//! high-order remainder by a smooth function with a pole outside the
//! physical range:
//!
//! ```text
//! G_SE,7(x) = c0 + c1 x + c2 x² + w / (1 + b x),       x = Zα
//! F(x)      = A40 + x² [A61 ln x⁻² + A60] + x³ G_SE,7(x)
//! G_SE(x)   = A60 + x G_SE,7(x)
//! ```

use super::{FSample, FSeries};
use crate::quantities::{ConstantsSet, NuclearCharge, StateLabel, UncertainValue};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RemainderModel {
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
    pub pole_weight: f64,
    /// Must be positive so the pole sits at negative Zα.
    pub pole_rate: f64,
}

impl RemainderModel {
    pub fn gse7(&self, za: f64) -> f64 {
        self.c0 + za * (self.c1 + self.c2 * za) + self.pole_weight / (1.0 + self.pole_rate * za)
    }
}

/// Exact coefficient values together with a remainder model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticState {
    pub state: StateLabel,
    pub a40: f64,
    pub a61: f64,
    pub a60: f64,
    pub remainder: RemainderModel,
}

impl SyntheticState {
    pub fn f(&self, za: f64) -> f64 {
        let log = -2.0 * za.ln();
        self.a40 + za * za * (self.a61 * log + self.a60) + za.powi(3) * self.remainder.gse7(za)
    }

    pub fn gse(&self, za: f64) -> f64 {
        self.a60 + za * self.remainder.gse7(za)
    }

    /// Limit of G_SE as Zα → 0.
    pub fn gse_limit(&self) -> f64 {
        self.a60
    }

    /// Model energy shift in Hz.
    pub fn energy_hz(&self, z: NuclearCharge, constants: &ConstantsSet) -> f64 {
        let za = f64::from(z.get()) * constants.alpha();
        crate::reduction::prefactor(self.state, z, constants).expect("Z within domain") * self.f(za)
    }

    /// Exact model values at each Z with a declared uniform `sigma_f`.
    pub fn series(&self, zs: &[u32], constants: &ConstantsSet, sigma_f: f64) -> FSeries {
        let samples = zs
            .iter()
            .map(|&z| {
                let z = NuclearCharge::new(z).expect("Z >= 1");
                let za = f64::from(z.get()) * constants.alpha();
                FSample {
                    z,
                    f: UncertainValue::new(self.f(za), sigma_f).expect("finite model"),
                }
            })
            .collect();
        FSeries::new(self.state, samples, constants.clone()).expect("increasing Z within domain")
    }

    /// Coefficient set carrying the model's exact coefficients.
    pub fn coefficients(&self) -> crate::reduction::CoefficientSet {
        crate::reduction::CoefficientSet {
            state: self.state,
            a40: UncertainValue::exact(self.a40),
            a61: UncertainValue::exact(self.a61),
            a60: Some(UncertainValue::exact(self.a60)),
            gse_limit: Some(UncertainValue::exact(self.a60)),
            source: "synthetic model".to_string(),
        }
    }
}

/// A synthetic table shipped under `data/synthetic/`.
#[derive(Debug, Clone, PartialEq)]
pub struct BundledModel {
    pub file_name: &'static str,
    pub model: SyntheticState,
    pub zs: Vec<u32>,
    pub sigma_f: f64,
    pub note: &'static str,
}

fn state(label: &str) -> StateLabel {
    crate::quantities::parse_state(label).expect("valid literal")
}

/// Models behind the bundled synthetic tables. The P and 4D states use the
/// bundled literature coefficients; the others use made-up coefficients of
/// realistic size.
pub fn bundled_models() -> Vec<BundledModel> {
    let mid_z: Vec<u32> = (20..=60).step_by(5).collect();
    vec![
        BundledModel {
            file_name: "4P1_2.ftab",
            model: SyntheticState {
                state: state("4P1/2"),
                a40: -0.110726807203,
                a61: 0.693055555555556,
                a60: -1.195688142,
                remainder: RemainderModel {
                    c0: 2.0,
                    c1: -3.0,
                    c2: 1.5,
                    pole_weight: 0.5,
                    pole_rate: 1.5,
                },
            },
            zs: (10..=60).step_by(5).collect(),
            sigma_f: 1e-9,
            note: "literature A40, A61, A60 for 4P1/2",
        },
        BundledModel {
            file_name: "4D5_2.ftab",
            model: SyntheticState {
                state: state("4D5/2"),
                a40: 0.042321251973,
                a61: 0.011111111111111,
                a60: 0.031411862,
                remainder: RemainderModel {
                    c0: -0.05,
                    c1: 0.02,
                    c2: 0.0,
                    pole_weight: 0.01,
                    pole_rate: 1.0,
                },
            },
            zs: mid_z.clone(),
            sigma_f: 1e-9,
            note: "literature A40, A61, A60 for 4D5/2",
        },
        BundledModel {
            file_name: "3D5_2.ftab",
            model: SyntheticState {
                state: state("3D5/2"),
                a40: 0.0404,
                a61: 0.0111,
                a60: 0.030,
                remainder: RemainderModel {
                    c0: -0.05,
                    c1: 0.02,
                    c2: 0.0,
                    pole_weight: 0.01,
                    pole_rate: 1.0,
                },
            },
            zs: mid_z.clone(),
            sigma_f: 1e-9,
            note: "made-up coefficients",
        },
        BundledModel {
            file_name: "5F7_2.ftab",
            model: SyntheticState {
                state: state("5F7/2"),
                a40: 0.0063,
                a61: 0.0018,
                a60: 0.0040,
                remainder: RemainderModel {
                    c0: -0.008,
                    c1: 0.003,
                    c2: 0.0,
                    pole_weight: 0.001,
                    pole_rate: 1.0,
                },
            },
            zs: mid_z.clone(),
            sigma_f: 1e-10,
            note: "made-up coefficients",
        },
        BundledModel {
            file_name: "5G7_2.ftab",
            model: SyntheticState {
                state: state("5G7/2"),
                a40: -0.0032,
                a61: 0.0007,
                a60: 0.0005,
                remainder: RemainderModel {
                    c0: 0.001,
                    c1: -0.0005,
                    c2: 0.0,
                    pole_weight: 0.0005,
                    pole_rate: 1.0,
                },
            },
            zs: mid_z,
            sigma_f: 1e-10,
            note: "made-up coefficients",
        },
    ]
}

/// File contents of a bundled table under `constants`.
pub fn render_bundled(m: &BundledModel, constants: &ConstantsSet) -> String {
    let r = &m.model.remainder;
    let header = [
        format!("synthetic {} table ({})", m.model.state, m.note),
        format!(
            "A40 = {}, A61 = {}, A60 = {}",
            m.model.a40, m.model.a61, m.model.a60
        ),
        format!(
            "G_SE,7(x) = {} + {} x + {} x^2 + {} / (1 + {} x)",
            r.c0, r.c1, r.c2, r.pole_weight, r.pole_rate
        ),
    ];
    let lines: Vec<&str> = header.iter().map(String::as_str).collect();
    super::format_f_table(&m.model.series(&m.zs, constants, m.sigma_f), &lines)
}
