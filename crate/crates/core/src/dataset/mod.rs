//! Text file formats for F tables, coefficient tables and constants, plus
//! deterministic plot-data output and synthetic sample generation.
//!
//! All formats are line oriented; `#` starts a comment.

mod coefficients;
mod constants_file;
mod ftable;
mod plotdata;
pub mod synthetic;

pub use coefficients::{
    load_coefficients, parse_coefficients, CoefficientTable, BUNDLED_COEFFICIENTS,
};
pub use constants_file::{load_constants, parse_constants, BUNDLED_CONSTANTS};
pub use ftable::{
    format_f_table, load_f_table, parse_f_table, save_f_table, FSample, FSeries, LabelPolicy,
    LoadedTable,
};
pub use plotdata::{render_plotdata, save_plotdata, Cell, PlotFormat, PlotTable};

use std::path::PathBuf;

use thiserror::Error;

use crate::quantities::QuantityError;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("{}line {line}: {message}", origin(.path))]
    Parse {
        path: Option<PathBuf>,
        line: usize,
        message: String,
    },
    #[error("{}{message}", origin(.path))]
    Invalid {
        path: Option<PathBuf>,
        message: String,
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn origin(path: &Option<PathBuf>) -> String {
    path.as_ref()
        .map(|p| format!("{}: ", p.display()))
        .unwrap_or_default()
}

impl DatasetError {
    pub(crate) fn at_line(line: usize, message: impl Into<String>) -> Self {
        DatasetError::Parse {
            path: None,
            line,
            message: message.into(),
        }
    }

    pub(crate) fn invalid(message: impl Into<String>) -> Self {
        DatasetError::Invalid {
            path: None,
            message: message.into(),
        }
    }

    /// Attaches the file the error came from.
    pub(crate) fn in_file(self, file: impl Into<PathBuf>) -> Self {
        match self {
            DatasetError::Parse { line, message, .. } => DatasetError::Parse {
                path: Some(file.into()),
                line,
                message,
            },
            DatasetError::Invalid { message, .. } => DatasetError::Invalid {
                path: Some(file.into()),
                message,
            },
            io => io,
        }
    }

    /// Line number of a parse diagnostic, if any.
    pub fn line(&self) -> Option<usize> {
        match self {
            DatasetError::Parse { line, .. } => Some(*line),
            _ => None,
        }
    }
}

pub(crate) fn read_file(path: &std::path::Path) -> Result<String, DatasetError> {
    std::fs::read_to_string(path).map_err(|source| DatasetError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Non-empty, comment-stripped lines with 1-based line numbers.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

pub(crate) fn parse_real(token: &str, line: usize, what: &str) -> Result<f64, DatasetError> {
    let v: f64 = token
        .parse()
        .map_err(|_| DatasetError::at_line(line, format!("{what}: '{token}' is not a number")))?;
    if !v.is_finite() {
        return Err(DatasetError::at_line(
            line,
            format!("{what} must be finite"),
        ));
    }
    Ok(v)
}

pub(crate) fn quantity_at(line: usize, e: QuantityError) -> DatasetError {
    DatasetError::at_line(line, e.to_string())
}

/// 17 significant digits: enough to round-trip any f64.
pub fn format_real(v: f64) -> String {
    format!("{v:.16e}")
}
