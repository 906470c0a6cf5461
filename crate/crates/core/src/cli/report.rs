use std::io::Write;

use crate::dataset::{format_real, render_plotdata, Cell, PlotTable};
use crate::extrap::Tableau;
use crate::quantities::{format_parenthesis_with, ParenthesisStyle, UncertainValue};

use super::{CliError, OutputFormat, Session};

/// Picks Hz, kHz, MHz or GHz so the value has at most four integer digits.
pub(crate) fn energy_text(u: UncertainValue, style: ParenthesisStyle) -> String {
    let size = u.value().abs().max(u.sigma());
    let (scale, unit) = [(1e9, "GHz"), (1e6, "MHz"), (1e3, "kHz")]
        .into_iter()
        .find(|(s, _)| size >= 10.0 * *s)
        .unwrap_or((1.0, "Hz"));
    format_parenthesis_with(u.scale(1.0 / scale), unit, style)
}

/// Parenthesis form followed by the full-precision pair.
pub(crate) fn dual(human: String, u: UncertainValue) -> String {
    format!(
        "{human}  [value={} sigma={}]",
        format_real(u.value()),
        format_real(u.sigma())
    )
}

pub(crate) fn plain(u: UncertainValue, style: ParenthesisStyle) -> String {
    dual(format_parenthesis_with(u, "", style), u)
}

pub(crate) fn energy(u: UncertainValue, style: ParenthesisStyle) -> String {
    dual(energy_text(u, style), u)
}

/// Writes `text` in text mode, otherwise the records.
pub(crate) fn emit(
    session: &Session,
    out: &mut dyn Write,
    text: &str,
    table: &PlotTable,
) -> Result<(), CliError> {
    match session.format {
        OutputFormat::Text => out.write_all(text.as_bytes())?,
        OutputFormat::Csv | OutputFormat::Jsonl => {
            out.write_all(render_plotdata(table, session.plot_format()).as_bytes())?
        }
    }
    Ok(())
}

pub(crate) const TRACE_COLUMNS: [&str; 8] = [
    "state",
    "variable",
    "target",
    "order",
    "window_start",
    "mean_abscissa",
    "value",
    "sigma",
];

/// One row per (order, window) pair.
pub(crate) fn trace_rows(
    table: &mut PlotTable,
    state: &str,
    variable: &str,
    target: &str,
    tableau: &Tableau,
) {
    for column in tableau.columns() {
        for e in &column.entries {
            table.push(vec![
                Cell::from(state),
                Cell::from(variable),
                Cell::from(target),
                Cell::from(column.order),
                Cell::from(e.window_start),
                Cell::from(e.mean_abscissa),
                Cell::from(e.value.value()),
                Cell::from(e.value.sigma()),
            ]);
        }
    }
}

/// Innermost entry of every order, one per line.
pub(crate) fn trace_text(tableau: &Tableau, style: ParenthesisStyle) -> String {
    let mut s = String::new();
    for column in tableau.columns() {
        if let Some(e) = tableau.innermost(column.order) {
            s.push_str(&format!(
                "    order {:>2}  mean {} = {:<8}  {}\n",
                column.order,
                tableau.variable_label(),
                format_real_short(e.mean_abscissa),
                format_parenthesis_with(e.value, "", style)
            ));
        }
    }
    s
}

fn format_real_short(v: f64) -> String {
    let s = format!("{v:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    s.to_string()
}
