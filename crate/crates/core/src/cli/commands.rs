use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use crate::dataset::{self, save_plotdata, Cell, FSeries, PlotTable};
use crate::extrap::Tableau;
use crate::pipeline::{self, Agreement, PipelineError, Variable, ZExtrapolation, ZTarget};
use crate::quantities::{format_parenthesis_with, NuclearCharge, StateLabel, UncertainValue};
use crate::reduction::{self, CoefficientSet, RemainderKind, Truncation};

use super::report::{self, emit, TRACE_COLUMNS};
use super::{
    CliError, ConvertArgs, ConvertMode, EstimateArgs, ExtractArgs, ExtrapolateArgs, OrderArg,
    PlotMode, PlotdataArgs, Session, Target, VerifyLimitArgs, EXIT_INCONSISTENT, EXIT_OK,
};

fn classify(e: PipelineError) -> CliError {
    match e {
        PipelineError::Extrap(crate::extrap::ExtrapError::NonConvergent { .. }) => {
            CliError::NonConvergent(e.to_string())
        }
        other => CliError::Validation(other.to_string()),
    }
}

fn charge(z: u32) -> Result<NuclearCharge, CliError> {
    Ok(NuclearCharge::new(z)?)
}

/// Loads every table, forwarding warnings, sorted by state then first Z.
fn load_tables(
    session: &Session,
    paths: &[PathBuf],
    err: &mut dyn Write,
) -> Result<Vec<FSeries>, CliError> {
    let mut tables = Vec::with_capacity(paths.len());
    for p in paths {
        let loaded = dataset::load_f_table(p, &session.constants, session.label_policy)?;
        for w in &loaded.warnings {
            writeln!(err, "warning: {}: {w}", p.display())?;
        }
        if loaded.series.is_empty() {
            return Err(CliError::Validation(format!(
                "{}: table has no rows",
                p.display()
            )));
        }
        tables.push(loaded.series);
    }
    tables.sort_by_key(|s| (s.state(), s.samples()[0].z));
    Ok(tables)
}

fn coefficients_if_needed(
    session: &mut Session,
    variable: Variable,
    state: StateLabel,
) -> Result<Option<CoefficientSet>, CliError> {
    if variable == Variable::F {
        return Ok(None);
    }
    if state.is_s_state() {
        return Err(reduction::ReductionError::SState(state).into());
    }
    session.coefficients_for(state).map(Some)
}

fn target_name(t: ZTarget) -> String {
    match t {
        ZTarget::Charge(z) => format!("z={z}"),
        ZTarget::ZAlphaZero => "zalpha=0".to_string(),
    }
}

pub(crate) fn convert(
    session: &mut Session,
    a: &ConvertArgs,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let z = charge(a.z)?;
    let mode = a.mode.unwrap_or(if a.energy_hz.is_some() {
        ConvertMode::F
    } else {
        ConvertMode::Energy
    });
    let kind = match mode {
        ConvertMode::Gse => Some(RemainderKind::Gse),
        ConvertMode::Gse7 => Some(RemainderKind::Gse7),
        ConvertMode::Magnifier => Some(RemainderKind::Magnifier),
        ConvertMode::Energy | ConvertMode::F => None,
    };
    if kind.is_some() && a.state.is_s_state() {
        return Err(CliError::Validation(format!(
            "{}: remainder extraction is defined for non-S states only",
            a.state
        )));
    }
    let f = match (a.f, a.energy_hz) {
        (Some(f), None) => UncertainValue::new(f, a.sigma)?,
        (None, Some(e)) => reduction::energy_to_f(
            UncertainValue::new(e, a.sigma)?,
            a.state,
            z,
            &session.constants,
        )?,
        _ => {
            return Err(CliError::Validation(
                "give one of --f or --energy-hz".into(),
            ))
        }
    };

    let style = session.style;
    let (quantity, value, human) = match (mode, kind) {
        (ConvertMode::Energy, _) => {
            let e = reduction::f_to_energy(f, a.state, z, &session.constants)?;
            ("energy_hz", e, report::energy(e, style))
        }
        (_, Some(kind)) => {
            let coeffs = session.coefficients_for(a.state)?;
            let r = reduction::extract(kind, f, z, &coeffs, &session.constants)?;
            (kind.name(), r, report::plain(r, style))
        }
        _ => ("f", f, report::plain(f, style)),
    };

    let text = format!("{} Z={} {quantity}: {human}\n", a.state, z);
    let mut table = PlotTable::new(&["state", "z", "quantity", "value", "sigma"]);
    table.push(vec![
        a.state.to_string().into(),
        a.z.into(),
        quantity.into(),
        value.value().into(),
        value.sigma().into(),
    ]);
    emit(session, out, &text, &table)?;
    Ok(EXIT_OK)
}

pub(crate) fn extract(
    session: &mut Session,
    a: &ExtractArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, CliError> {
    let tables = load_tables(session, std::slice::from_ref(&a.table), err)?;
    let series = &tables[0];
    let coeffs = coefficients_if_needed(session, a.variable, series.state())?;
    let values =
        pipeline::remainder_values(series, a.variable, coeffs.as_ref()).map_err(classify)?;

    let mut text = format!("# {} {}\n", series.state(), a.variable.name());
    let mut table = PlotTable::new(&["state", "z", "z_alpha", "variable", "value", "sigma"]);
    for (z, v) in &values {
        let za = session.constants.z_alpha(*z)?;
        let _ = writeln!(text, "{z:>4}  {}", report::plain(*v, session.style));
        table.push(vec![
            series.state().to_string().into(),
            z.get().into(),
            za.into(),
            a.variable.name().into(),
            v.value().into(),
            v.sigma().into(),
        ]);
    }
    emit(session, out, &text, &table)?;
    Ok(EXIT_OK)
}

const RESULT_COLUMNS: [&str; 12] = [
    "state",
    "variable",
    "target",
    "order_used",
    "value",
    "sigma",
    "data_sigma",
    "order_sigma",
    "f",
    "f_sigma",
    "energy_hz",
    "energy_sigma_hz",
];

fn result_row(state: StateLabel, variable: &str, target: &str, r: &ZExtrapolation) -> Vec<Cell> {
    vec![
        state.to_string().into(),
        variable.into(),
        target.into(),
        r.result.order_used.into(),
        r.result.estimate.value().into(),
        r.result.estimate.sigma().into(),
        r.result.data_sigma.into(),
        r.result.order_sigma.into(),
        r.f.map(|f| f.value()).into(),
        r.f.map(|f| f.sigma()).into(),
        r.energy_hz.map(|e| e.value()).into(),
        r.energy_hz.map(|e| e.sigma()).into(),
    ]
}

fn result_text(session: &Session, r: &ZExtrapolation) -> String {
    let style = session.style;
    let mut s = format!(
        "{} {} -> {}: {} (order {}, data sigma {}, order sigma {})\n",
        r.state,
        r.variable.name(),
        r.target.describe(),
        report::plain(r.result.estimate, style),
        r.result.order_used,
        dataset::format_real(r.result.data_sigma),
        dataset::format_real(r.result.order_sigma),
    );
    if let (Some(f), Some(e)) = (r.f, r.energy_hz) {
        let _ = writeln!(s, "  F = {}", report::plain(f, style));
        let _ = writeln!(s, "  E = {}", report::energy(e, style));
    }
    s.push_str(&report::trace_text(&r.result.trace, style));
    s
}

struct TraceSink {
    table: PlotTable,
}

impl TraceSink {
    fn new() -> Self {
        Self {
            table: PlotTable::new(&TRACE_COLUMNS),
        }
    }

    fn add(&mut self, state: StateLabel, variable: Variable, target: &str, tableau: &Tableau) {
        report::trace_rows(
            &mut self.table,
            &state.to_string(),
            variable.name(),
            target,
            tableau,
        );
    }

    fn write(&self, session: &Session, path: Option<&PathBuf>) -> Result<(), CliError> {
        if let Some(p) = path {
            save_plotdata(&self.table, p, session.plot_format())?;
        }
        Ok(())
    }
}

/// On non-convergence, emits the failing trace before reporting the error.
fn report_failure(
    session: &Session,
    e: PipelineError,
    sink: &mut TraceSink,
    label: (StateLabel, Variable, &str),
    trace_path: Option<&PathBuf>,
    err: &mut dyn Write,
) -> CliError {
    if let Some(t) = e.non_convergent_trace() {
        sink.add(label.0, label.1, label.2, t);
        let _ = writeln!(
            err,
            "{} {} -> {}: tableau",
            label.0,
            label.1.name(),
            label.2
        );
        let _ = write!(err, "{}", report::trace_text(t, session.style));
        if let Err(w) = sink.write(session, trace_path) {
            return w;
        }
    }
    classify(e)
}

pub(crate) fn extrapolate(
    session: &mut Session,
    a: &ExtrapolateArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, CliError> {
    let tables = load_tables(session, &a.tables, err)?;
    let mut variables = a.variables.clone();
    if variables.is_empty() {
        variables.push(if a.target == Target::ZAlphaZero {
            Variable::Gse
        } else {
            Variable::Gse7
        });
    }
    variables.sort();
    variables.dedup();

    let mut sink = TraceSink::new();
    let mut table = PlotTable::new(&RESULT_COLUMNS);
    let mut text = String::new();
    let trace_path = a.trace.as_ref();

    match a.target {
        Target::Z(_) | Target::ZAlphaZero => {
            let target = match a.target {
                Target::Z(z) => ZTarget::Charge(charge(z)?),
                _ => ZTarget::ZAlphaZero,
            };
            let tname = target_name(target);
            for series in &tables {
                let mut energies = Vec::new();
                for &v in &variables {
                    let coeffs = coefficients_if_needed(session, v, series.state())?;
                    let r = match pipeline::extrapolate_series(
                        series,
                        v,
                        coeffs.as_ref(),
                        target,
                        session.max_order,
                        session.policy,
                    ) {
                        Ok(r) => r,
                        Err(e) => {
                            return Err(report_failure(
                                session,
                                e,
                                &mut sink,
                                (series.state(), v, &tname),
                                trace_path,
                                err,
                            ))
                        }
                    };
                    sink.add(series.state(), v, &tname, &r.result.trace);
                    table.push(result_row(series.state(), v.name(), &tname, &r));
                    text.push_str(&result_text(session, &r));
                    if let Some(e) = r.energy_hz {
                        energies.push((v, e));
                    }
                }
                let g7 = energies.iter().find(|(v, _)| *v == Variable::Gse7);
                let mag = energies.iter().find(|(v, _)| *v == Variable::Magnifier);
                if let (Some((_, e7)), Some((_, em))) = (g7, mag) {
                    let ag = Agreement::between(*e7, *em);
                    let _ = writeln!(
                        text,
                        "{} gse7 - magnifier: {} Hz vs combined sigma {} Hz: {}",
                        series.state(),
                        dataset::format_real(ag.difference_hz),
                        dataset::format_real(ag.combined_sigma_hz),
                        if ag.agrees() { "agree" } else { "disagree" }
                    );
                    table.push(vec![
                        series.state().to_string().into(),
                        "gse7-magnifier".into(),
                        tname.as_str().into(),
                        Cell::Missing,
                        Cell::Missing,
                        Cell::Missing,
                        Cell::Missing,
                        Cell::Missing,
                        Cell::Missing,
                        Cell::Missing,
                        ag.difference_hz.into(),
                        ag.combined_sigma_hz.into(),
                    ]);
                }
            }
        }
        Target::N(n) => {
            let z = charge(a.at_z)?;
            let first = tables[0].state();
            let target_state = first.with_n(n)?;
            for &v in &variables {
                let mut inputs = Vec::with_capacity(tables.len());
                for series in &tables {
                    inputs.push((
                        series.clone(),
                        coefficients_if_needed(session, v, series.state())?,
                    ));
                }
                let target_coeffs = coefficients_if_needed(session, v, target_state)?;
                let r = pipeline::extrapolate_to_n(
                    &inputs,
                    v,
                    target_state,
                    z,
                    target_coeffs.as_ref(),
                    session.max_order,
                    session.policy,
                );
                let tname = format!("n={n}");
                let r = match r {
                    Ok(r) => r,
                    Err(e) => {
                        return Err(report_failure(
                            session,
                            e,
                            &mut sink,
                            (target_state, v, &tname),
                            trace_path,
                            err,
                        ))
                    }
                };
                let zname = format!("z={z}");
                for (_, zr) in &r.inputs {
                    sink.add(zr.state, v, &zname, &zr.result.trace);
                    table.push(result_row(zr.state, v.name(), &zname, zr));
                    text.push_str(&result_text(session, zr));
                }
                sink.add(target_state, v, &tname, &r.result.trace);
                table.push(vec![
                    target_state.to_string().into(),
                    v.name().into(),
                    format!("{tname},{zname}").into(),
                    r.result.order_used.into(),
                    r.result.estimate.value().into(),
                    r.result.estimate.sigma().into(),
                    r.result.data_sigma.into(),
                    r.result.order_sigma.into(),
                    r.f.value().into(),
                    r.f.sigma().into(),
                    r.energy_hz.value().into(),
                    r.energy_hz.sigma().into(),
                ]);
                let style = session.style;
                let _ = writeln!(
                    text,
                    "{target_state} {} -> n={n} at Z={z}: {} (order {})",
                    v.name(),
                    report::plain(r.result.estimate, style),
                    r.result.order_used
                );
                let _ = writeln!(text, "  F = {}", report::plain(r.f, style));
                let _ = writeln!(text, "  E = {}", report::energy(r.energy_hz, style));
                text.push_str(&report::trace_text(&r.result.trace, style));
            }
        }
    }

    sink.write(session, trace_path)?;
    emit(session, out, &text, &table)?;
    Ok(EXIT_OK)
}

pub(crate) fn estimate(
    session: &mut Session,
    a: &EstimateArgs,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let z = charge(a.z)?;
    if a.state.is_s_state() {
        return Err(reduction::ReductionError::SState(a.state).into());
    }
    let coeffs = session.coefficients_for(a.state)?;
    let (order, name) = match a.order {
        OrderArg::TwoTerm => (Truncation::TwoTerm, "two_term"),
        OrderArg::ThreeTerm => (Truncation::ThreeTerm, "three_term"),
    };
    let est =
        reduction::truncated_estimate(a.state, z, &coeffs, &session.constants, order, a.bound)?;
    let style = session.style;
    let central = UncertainValue::exact(est.energy.value());

    let mut text = format!(
        "{} Z={z} {name}: {}\n",
        a.state,
        report::energy(est.energy, style)
    );
    let _ = writeln!(
        text,
        "  central term         {}",
        report::energy(central, style)
    );
    let _ = writeln!(
        text,
        "  bound term sigma     {:.4e} Hz (bound {})",
        est.bound_sigma, a.bound
    );
    let _ = writeln!(
        text,
        "  coefficient sigma    {:.4e} Hz",
        est.coefficient_sigma
    );
    let _ = writeln!(text, "  coefficients: {}", coeffs.source);

    let mut table = PlotTable::new(&[
        "state",
        "z",
        "order",
        "energy_hz",
        "sigma_hz",
        "bound_sigma_hz",
        "coefficient_sigma_hz",
    ]);
    table.push(vec![
        a.state.to_string().into(),
        a.z.into(),
        name.into(),
        est.energy.value().into(),
        est.energy.sigma().into(),
        est.bound_sigma.into(),
        est.coefficient_sigma.into(),
    ]);
    emit(session, out, &text, &table)?;
    Ok(EXIT_OK)
}

pub(crate) fn verify_limit(
    session: &mut Session,
    a: &VerifyLimitArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, CliError> {
    let tables = load_tables(session, &a.tables, err)?;
    let mut records =
        PlotTable::new(&["state", "kind", "z", "gse", "sigma", "limit", "limit_sigma"]);
    let mut verdicts = String::new();
    let mut consistent = true;
    let style = session.style;

    for series in &tables {
        let state = series.state();
        if state.is_s_state() {
            return Err(reduction::ReductionError::SState(state).into());
        }
        let coeffs = session.coefficients_for(state)?;
        let check = pipeline::verify_limit(
            series,
            &coeffs,
            session.consistency_k,
            session.max_order,
            session.policy,
        )
        .map_err(|e| {
            if let Some(t) = e.non_convergent_trace() {
                let _ = write!(
                    err,
                    "{state} gse -> zalpha=0: tableau\n{}",
                    report::trace_text(t, style)
                );
            }
            classify(e)
        })?;
        let lim = check.limit;
        for (z, g) in &check.samples {
            records.push(vec![
                state.to_string().into(),
                "sample".into(),
                z.get().into(),
                g.value().into(),
                g.sigma().into(),
                lim.value().into(),
                lim.sigma().into(),
            ]);
        }
        let est = check.extrapolation.estimate;
        records.push(vec![
            state.to_string().into(),
            "extrapolated".into(),
            0u32.into(),
            est.value().into(),
            est.sigma().into(),
            lim.value().into(),
            lim.sigma().into(),
        ]);

        let ok = check.consistent();
        consistent &= ok;
        let _ = writeln!(
            verdicts,
            "{state}: G_SE(0) = {} vs limit {}; |difference| {} {} k*sigma = {} (k = {}): {}",
            format_parenthesis_with(est, "", style),
            format_parenthesis_with(lim, "", style),
            dataset::format_real(check.deviation().abs()),
            if ok { "<=" } else { ">" },
            dataset::format_real(check.k * check.combined_sigma()),
            check.k,
            if ok { "consistent" } else { "INCONSISTENT" }
        );
    }

    match &a.output {
        Some(p) => {
            save_plotdata(&records, p, session.plot_format())?;
            out.write_all(verdicts.as_bytes())?;
        }
        None => match session.format {
            super::OutputFormat::Text => {
                let mut text = String::new();
                for row in &records.rows {
                    if let [Cell::Text(st), Cell::Text(kind), Cell::Int(z), Cell::Real(g), Cell::Real(s), ..] =
                        row.as_slice()
                    {
                        let _ = writeln!(
                            text,
                            "{st} {kind:<12} Z={z:<4} {}",
                            report::plain(UncertainValue::new(*g, *s)?, style)
                        );
                    }
                }
                text.push_str(&verdicts);
                out.write_all(text.as_bytes())?;
            }
            _ => {
                emit(session, out, "", &records)?;
                err.write_all(verdicts.as_bytes())?;
            }
        },
    }
    Ok(if consistent {
        EXIT_OK
    } else {
        EXIT_INCONSISTENT
    })
}

/// (max F − min F) / max |F| over the table.
pub fn relative_variation(series: &FSeries) -> f64 {
    let fs = series.samples().iter().map(|s| s.f.value());
    let (lo, hi, big) = fs.fold(
        (f64::INFINITY, f64::NEG_INFINITY, 0.0f64),
        |(lo, hi, big), f| (lo.min(f), hi.max(f), big.max(f.abs())),
    );
    if big == 0.0 {
        0.0
    } else {
        (hi - lo) / big
    }
}

pub(crate) fn plotdata(
    session: &mut Session,
    a: &PlotdataArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, CliError> {
    let tables = load_tables(session, &a.tables, err)?;
    let table = match a.mode {
        PlotMode::FVsZ => {
            let mut t = PlotTable::new(&["state", "z", "z_alpha", "f", "sigma"]);
            for series in &tables {
                for s in series.samples() {
                    t.push(vec![
                        series.state().to_string().into(),
                        s.z.get().into(),
                        session.constants.z_alpha(s.z)?.into(),
                        s.f.value().into(),
                        s.f.sigma().into(),
                    ]);
                }
                writeln!(
                    err,
                    "{}: max relative F variation over Z = {}..{}: {:.1}%",
                    series.state(),
                    series.samples()[0].z,
                    series.samples()[series.len() - 1].z,
                    100.0 * relative_variation(series)
                )?;
            }
            t
        }
        PlotMode::GseVsZ => {
            let mut t = PlotTable::new(&["state", "z", "z_alpha", "gse", "sigma"]);
            for series in &tables {
                let coeffs = coefficients_if_needed(session, Variable::Gse, series.state())?;
                let values = pipeline::remainder_values(series, Variable::Gse, coeffs.as_ref())
                    .map_err(classify)?;
                for (z, g) in values {
                    t.push(vec![
                        series.state().to_string().into(),
                        z.get().into(),
                        session.constants.z_alpha(z)?.into(),
                        g.value().into(),
                        g.sigma().into(),
                    ]);
                }
            }
            t
        }
        PlotMode::TableauTrace => {
            let target = match a.target {
                Target::Z(z) => ZTarget::Charge(charge(z)?),
                Target::ZAlphaZero => ZTarget::ZAlphaZero,
                Target::N(_) => {
                    return Err(CliError::Validation(
                        "tableau_trace takes z=<Z> or zalpha=0".into(),
                    ))
                }
            };
            let tname = target_name(target);
            let mut sink = TraceSink::new();
            for series in &tables {
                let coeffs = coefficients_if_needed(session, a.variable, series.state())?;
                let grid = pipeline::remainder_grid(series, a.variable, coeffs.as_ref())
                    .map_err(classify)?;
                let order = session.max_order.min(grid.len() - 1);
                let abscissa = match target {
                    ZTarget::Charge(z) => f64::from(z.get()),
                    ZTarget::ZAlphaZero => 0.0,
                };
                let tableau = crate::extrap::cascade(&grid, abscissa, order)?;
                sink.add(series.state(), a.variable, &tname, &tableau);
            }
            sink.table
        }
    };

    match &a.output {
        Some(p) => save_plotdata(&table, p, session.plot_format())?,
        None => {
            out.write_all(dataset::render_plotdata(&table, session.plot_format()).as_bytes())?
        }
    }
    Ok(EXIT_OK)
}
