use std::collections::BTreeMap;
use std::path::Path;

use super::{content_lines, parse_real, quantity_at, read_file, DatasetError};
use crate::quantities::{parse_state, StateLabel, UncertainValue};
use crate::reduction::CoefficientSet;

/// Literature coefficients for a few non-S states, shipped with the crate.
pub const BUNDLED_COEFFICIENTS: &str = include_str!("../../data/coefficients.coef");

pub type CoefficientTable = BTreeMap<StateLabel, CoefficientSet>;

/// Parses lines of the form
///
/// ```text
/// state A40 sA40 A61 sA61 A60 sA60 GSE0 sGSE0 "source"
/// ```
///
/// where the A60 and GSE0 pairs may be `- -` when unknown.
pub fn parse_coefficients(text: &str) -> Result<CoefficientTable, DatasetError> {
    let mut table = CoefficientTable::new();
    for (line, content) in content_lines(text) {
        let (fields, source) = split_source(content, line)?;
        if fields.len() != 9 {
            return Err(DatasetError::at_line(
                line,
                format!("expected 9 fields before the source, got {}", fields.len()),
            ));
        }
        let state = parse_state(fields[0]).map_err(|e| quantity_at(line, e))?;
        let a40 = required(&fields[1..3], line, "A40")?;
        let a61 = required(&fields[3..5], line, "A61")?;
        let a60 = optional(&fields[5..7], line, "A60")?;
        let gse_limit = optional(&fields[7..9], line, "GSE0")?;
        let set = CoefficientSet {
            state,
            a40,
            a61,
            a60,
            gse_limit,
            source,
        };
        if table.insert(state, set).is_some() {
            return Err(DatasetError::at_line(
                line,
                format!("state {state} listed twice"),
            ));
        }
    }
    Ok(table)
}

pub fn load_coefficients(path: impl AsRef<Path>) -> Result<CoefficientTable, DatasetError> {
    let path = path.as_ref();
    parse_coefficients(&read_file(path)?).map_err(|e| e.in_file(path))
}

fn split_source(content: &str, line: usize) -> Result<(Vec<&str>, String), DatasetError> {
    let open = content
        .find('"')
        .ok_or_else(|| DatasetError::at_line(line, "missing quoted source citation"))?;
    let rest = &content[open + 1..];
    let close = rest
        .rfind('"')
        .ok_or_else(|| DatasetError::at_line(line, "unterminated source citation"))?;
    if !rest[close + 1..].trim().is_empty() {
        return Err(DatasetError::at_line(
            line,
            "text after the source citation",
        ));
    }
    let source = rest[..close].trim().to_string();
    if source.is_empty() {
        return Err(DatasetError::at_line(line, "empty source citation"));
    }
    Ok((content[..open].split_whitespace().collect(), source))
}

fn pair(tokens: &[&str], line: usize, what: &str) -> Result<UncertainValue, DatasetError> {
    let value = parse_real(tokens[0], line, what)?;
    let sigma = parse_real(tokens[1], line, &format!("sigma of {what}"))?;
    UncertainValue::new(value, sigma)
        .map_err(|e| DatasetError::at_line(line, format!("{what}: {e}")))
}

fn required(tokens: &[&str], line: usize, what: &str) -> Result<UncertainValue, DatasetError> {
    if tokens[0] == "-" {
        return Err(DatasetError::at_line(line, format!("{what} is mandatory")));
    }
    pair(tokens, line, what)
}

fn optional(
    tokens: &[&str],
    line: usize,
    what: &str,
) -> Result<Option<UncertainValue>, DatasetError> {
    match (tokens[0], tokens[1]) {
        ("-", "-") => Ok(None),
        ("-", _) | (_, "-") => Err(DatasetError::at_line(
            line,
            format!("{what} and its sigma must both be given or both be '-'"),
        )),
        _ => pair(tokens, line, what).map(Some),
    }
}
