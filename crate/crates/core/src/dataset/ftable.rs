use std::fmt::Write as _;
use std::path::Path;

use super::{content_lines, format_real, parse_real, quantity_at, read_file, DatasetError};
use crate::quantities::{parse_state, ConstantsSet, NuclearCharge, StateLabel, UncertainValue};

/// Reduced self energy F at one nuclear charge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FSample {
    pub z: NuclearCharge,
    pub f: UncertainValue,
}

/// Z-sorted table of F for one state.
#[derive(Debug, Clone, PartialEq)]
pub struct FSeries {
    state: StateLabel,
    samples: Vec<FSample>,
    constants: ConstantsSet,
}

impl FSeries {
    /// Validates strictly increasing Z and the Zα < 1 domain.
    pub fn new(
        state: StateLabel,
        samples: Vec<FSample>,
        constants: ConstantsSet,
    ) -> Result<Self, DatasetError> {
        for (i, pair) in samples.windows(2).enumerate() {
            if pair[1].z <= pair[0].z {
                return Err(DatasetError::invalid(format!(
                    "sample {}: Z = {} does not exceed the previous Z = {}",
                    i + 1,
                    pair[1].z,
                    pair[0].z
                )));
            }
        }
        for s in &samples {
            constants
                .z_alpha(s.z)
                .map_err(|e| DatasetError::invalid(e.to_string()))?;
        }
        Ok(Self {
            state,
            samples,
            constants,
        })
    }

    pub fn state(&self) -> StateLabel {
        self.state
    }

    pub fn samples(&self) -> &[FSample] {
        &self.samples
    }

    pub fn constants(&self) -> &ConstantsSet {
        &self.constants
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// What to do when a table names different constants than the session.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LabelPolicy {
    #[default]
    Warn,
    Error,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoadedTable {
    pub series: FSeries,
    pub warnings: Vec<String>,
}

/// Parses an F table:
///
/// ```text
/// state: 4D5/2
/// constants: CODATA2018
/// # Z  F  sigma_F
/// 20  0.0431  1e-7
/// ```
pub fn parse_f_table(
    text: &str,
    constants: &ConstantsSet,
    policy: LabelPolicy,
) -> Result<LoadedTable, DatasetError> {
    let mut state = None;
    let mut label: Option<String> = None;
    let mut samples: Vec<FSample> = Vec::new();
    let mut last_line = 0;

    for (line, content) in content_lines(text) {
        if let Some(value) = content.strip_prefix("state:") {
            if state.is_some() {
                return Err(DatasetError::at_line(line, "state given twice"));
            }
            state = Some(parse_state(value).map_err(|e| quantity_at(line, e))?);
            continue;
        }
        if let Some(value) = content.strip_prefix("constants:") {
            if label.is_some() {
                return Err(DatasetError::at_line(line, "constants label given twice"));
            }
            label = Some(value.trim().to_string());
            continue;
        }

        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.len() != 3 {
            return Err(DatasetError::at_line(
                line,
                format!("expected 'Z F sigma_F', got '{content}'"),
            ));
        }
        let z: u32 = tokens[0].parse().map_err(|_| {
            DatasetError::at_line(
                line,
                format!("Z must be a positive integer, got '{}'", tokens[0]),
            )
        })?;
        let z = NuclearCharge::new(z).map_err(|e| quantity_at(line, e))?;
        constants.z_alpha(z).map_err(|e| quantity_at(line, e))?;
        let f = parse_real(tokens[1], line, "F")?;
        let sigma = parse_real(tokens[2], line, "sigma_F")?;
        let f = UncertainValue::new(f, sigma).map_err(|e| quantity_at(line, e))?;

        if let Some(prev) = samples.last() {
            if z == prev.z {
                return Err(DatasetError::at_line(
                    line,
                    format!("duplicate Z = {z} (also on line {last_line})"),
                ));
            }
            if z < prev.z {
                return Err(DatasetError::at_line(
                    line,
                    format!("Z = {z} follows Z = {}; rows must increase in Z", prev.z),
                ));
            }
        }
        samples.push(FSample { z, f });
        last_line = line;
    }

    let state = state.ok_or_else(|| DatasetError::invalid("missing 'state:' header"))?;
    let mut warnings = Vec::new();
    match label {
        Some(l) if l != constants.label() => {
            let msg = format!(
                "table uses constants '{l}' but the session uses '{}'",
                constants.label()
            );
            match policy {
                LabelPolicy::Warn => warnings.push(msg),
                LabelPolicy::Error => return Err(DatasetError::invalid(msg)),
            }
        }
        Some(_) => {}
        None => warnings.push("table does not name its constants".to_string()),
    }
    Ok(LoadedTable {
        series: FSeries::new(state, samples, constants.clone())?,
        warnings,
    })
}

pub fn load_f_table(
    path: impl AsRef<Path>,
    constants: &ConstantsSet,
    policy: LabelPolicy,
) -> Result<LoadedTable, DatasetError> {
    let path = path.as_ref();
    parse_f_table(&read_file(path)?, constants, policy).map_err(|e| e.in_file(path))
}

/// Serializes a series in the format read by [`parse_f_table`].
pub fn format_f_table(series: &FSeries, comments: &[&str]) -> String {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "# {c}");
    }
    let _ = writeln!(out, "state: {}", series.state());
    let _ = writeln!(out, "constants: {}", series.constants().label());
    let _ = writeln!(out, "# Z F sigma_F");
    for s in series.samples() {
        let _ = writeln!(
            out,
            "{} {} {}",
            s.z,
            format_real(s.f.value()),
            format_real(s.f.sigma())
        );
    }
    out
}

pub fn save_f_table(
    series: &FSeries,
    comments: &[&str],
    path: impl AsRef<Path>,
) -> Result<(), DatasetError> {
    let path = path.as_ref();
    std::fs::write(path, format_f_table(series, comments)).map_err(|source| DatasetError::Io {
        path: path.to_path_buf(),
        source,
    })
}
