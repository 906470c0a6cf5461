//! Command-line front end.
//!
//! Exit codes: 0 success, 2 validation or I/O failure, 3 extrapolation did
//! not converge, 4 a physics consistency check failed.

mod commands;
mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::dataset::{self, CoefficientTable, LabelPolicy, PlotFormat};
use crate::extrap::ConvergencePolicy;
pub use crate::pipeline::Variable;
use crate::quantities::{ConstantsSet, ParenthesisStyle, StateLabel};
use crate::reduction::CoefficientSet;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NON_CONVERGENT: i32 = 3;
pub const EXIT_INCONSISTENT: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "hydrogenic-se",
    version,
    about = "Reduce, extrapolate and estimate one-loop self energies of hydrogen-like ions"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Constants file (alpha, me_c2_hz, label); defaults to the bundled CODATA 2018 set
    #[arg(long, global = true, value_name = "PATH")]
    pub constants: Option<PathBuf>,
    /// Coefficient table; defaults to the bundled literature table
    #[arg(long, global = true, value_name = "PATH")]
    pub coefficients: Option<PathBuf>,
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// Highest interpolation order tried (clamped to the number of nodes minus one)
    #[arg(long, global = true, default_value_t = 8, value_name = "K")]
    pub max_order: usize,
    /// Consistency factor k for verify-limit
    #[arg(long, global = true, default_value_t = 2.0, value_name = "X")]
    pub consistency_k: f64,
    /// Order selection: minimal-change, first-increase or fixed:K
    #[arg(long, global = true, default_value = "minimal-change", value_parser = parse_policy)]
    pub policy: ConvergencePolicy,
    /// Always round sigma to one significant digit
    #[arg(long, global = true)]
    pub one_digit_sigma: bool,
    /// Reject tables whose constants label differs from the loaded constants
    #[arg(long, global = true)]
    pub strict_constants: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Csv,
    Jsonl,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Convert between F and the energy shift, or from F to a remainder
    #[command(allow_negative_numbers = true)]
    Convert(ConvertArgs),
    /// Remainder values for every row of an F table
    Extract(ExtractArgs),
    /// Extrapolate remainders to a target Z, to Zα = 0, or to another n
    Extrapolate(ExtrapolateArgs),
    /// Perturbative estimate from a truncated Zα expansion
    #[command(allow_negative_numbers = true)]
    Estimate(EstimateArgs),
    /// Check that G_SE extrapolates to its independently known Zα → 0 limit
    VerifyLimit(VerifyLimitArgs),
    /// Emit plot data for F(Z), G_SE(Z) or the extrapolation tableau
    Plotdata(PlotdataArgs),
}

#[derive(Debug, Args)]
pub struct ConvertArgs {
    #[arg(long, default_value = "1S1/2", value_parser = parse_state_arg)]
    pub state: StateLabel,
    #[arg(long, default_value_t = 1)]
    pub z: u32,
    /// Reduced self energy F
    #[arg(long, conflicts_with = "energy_hz")]
    pub f: Option<f64>,
    /// Energy shift in Hz
    #[arg(long)]
    pub energy_hz: Option<f64>,
    /// One-sigma uncertainty of the input
    #[arg(long, default_value_t = 0.0)]
    pub sigma: f64,
    /// Output quantity; defaults to energy for --f and f for --energy-hz
    #[arg(long, value_enum)]
    pub mode: Option<ConvertMode>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConvertMode {
    Energy,
    F,
    Gse,
    Gse7,
    Magnifier,
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    #[arg(long, value_name = "PATH")]
    pub table: PathBuf,
    #[arg(long, value_enum, default_value_t = Variable::Gse)]
    pub variable: Variable,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Target {
    Z(u32),
    ZAlphaZero,
    N(u32),
}

#[derive(Debug, Args)]
pub struct ExtrapolateArgs {
    /// F table; repeat for several states or, with --target n=N, several n
    #[arg(long = "table", value_name = "PATH", required = true)]
    pub tables: Vec<PathBuf>,
    /// z=<Z>, zalpha=0 or n=<N>
    #[arg(long, default_value = "z=1", value_parser = parse_target)]
    pub target: Target,
    /// Quantity to extrapolate; repeat to compare gse7 with magnifier
    #[arg(long = "variable", value_enum)]
    pub variables: Vec<Variable>,
    /// Nuclear charge at which n-extrapolation is done
    #[arg(long, default_value_t = 1)]
    pub at_z: u32,
    /// Write the tableau trace here
    #[arg(long, value_name = "PATH")]
    pub trace: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OrderArg {
    #[value(name = "two_term", alias = "two-term")]
    TwoTerm,
    #[value(name = "three_term", alias = "three-term")]
    ThreeTerm,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[arg(long, value_parser = parse_state_arg)]
    pub state: StateLabel,
    #[arg(long, default_value_t = 1)]
    pub z: u32,
    #[arg(long, value_enum)]
    pub order: OrderArg,
    /// Bound on the omitted remainder
    #[arg(long, default_value_t = 1.0)]
    pub bound: f64,
}

#[derive(Debug, Args)]
pub struct VerifyLimitArgs {
    #[arg(long = "table", value_name = "PATH", required = true)]
    pub tables: Vec<PathBuf>,
    /// Write G_SE(Z) records here
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlotMode {
    #[value(name = "f_vs_z", alias = "f-vs-z")]
    FVsZ,
    #[value(name = "gse_vs_z", alias = "gse-vs-z")]
    GseVsZ,
    #[value(name = "tableau_trace", alias = "tableau-trace")]
    TableauTrace,
}

#[derive(Debug, Args)]
pub struct PlotdataArgs {
    #[arg(long = "table", value_name = "PATH", required = true)]
    pub tables: Vec<PathBuf>,
    #[arg(long, value_enum)]
    pub mode: PlotMode,
    /// Variable for tableau_trace
    #[arg(long, value_enum, default_value_t = Variable::Gse7)]
    pub variable: Variable,
    /// Target for tableau_trace: z=<Z> or zalpha=0
    #[arg(long, default_value = "z=1", value_parser = parse_target)]
    pub target: Target,
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

fn parse_state_arg(s: &str) -> Result<StateLabel, String> {
    s.parse()
        .map_err(|e: crate::quantities::QuantityError| e.to_string())
}

fn parse_target(s: &str) -> Result<Target, String> {
    let (key, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected z=<Z>, zalpha=0 or n=<N>, got '{s}'"))?;
    let int = |v: &str| -> Result<u32, String> {
        match v.trim().parse::<u32>() {
            Ok(x) if x >= 1 => Ok(x),
            _ => Err(format!("'{v}' is not a positive integer")),
        }
    };
    match key.trim().to_ascii_lowercase().as_str() {
        "z" => int(value).map(Target::Z),
        "n" => int(value).map(Target::N),
        "zalpha" if value.trim().parse::<f64>() == Ok(0.0) => Ok(Target::ZAlphaZero),
        "zalpha" => Err("only zalpha=0 is supported".to_string()),
        other => Err(format!("unknown target '{other}'")),
    }
}

fn parse_policy(s: &str) -> Result<ConvergencePolicy, String> {
    match s {
        "minimal-change" => Ok(ConvergencePolicy::MinimalChange),
        "first-increase" => Ok(ConvergencePolicy::StopAtFirstIncrease),
        _ => match s.strip_prefix("fixed:").map(str::parse::<usize>) {
            Some(Ok(k)) if k >= 1 => Ok(ConvergencePolicy::FixedOrder(k)),
            _ => Err(format!(
                "expected minimal-change, first-increase or fixed:K, got '{s}'"
            )),
        },
    }
}

/// Failure of a subcommand, mapped onto an exit code.
#[derive(Debug)]
pub(crate) enum CliError {
    Validation(String),
    NonConvergent(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => EXIT_VALIDATION,
            CliError::NonConvergent(_) => EXIT_NON_CONVERGENT,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Validation(m) | CliError::NonConvergent(m) => m,
        }
    }
}

impl<E: std::error::Error> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::Validation(e.to_string())
    }
}

/// Loaded inputs and knobs shared by every subcommand.
pub(crate) struct Session {
    pub constants: ConstantsSet,
    coefficients_path: Option<PathBuf>,
    coefficients: Option<CoefficientTable>,
    pub format: OutputFormat,
    pub max_order: usize,
    pub consistency_k: f64,
    pub policy: ConvergencePolicy,
    pub style: ParenthesisStyle,
    pub label_policy: LabelPolicy,
}

impl Session {
    fn new(opts: &GlobalOpts) -> Result<Self, CliError> {
        if opts.max_order < 1 {
            return Err(CliError::Validation("--max-order must be >= 1".into()));
        }
        if !(opts.consistency_k.is_finite() && opts.consistency_k > 0.0) {
            return Err(CliError::Validation("--consistency-k must be > 0".into()));
        }
        let constants = match &opts.constants {
            Some(p) => dataset::load_constants(p)?,
            None => dataset::parse_constants(dataset::BUNDLED_CONSTANTS)?,
        };
        if let Some(p) = &opts.coefficients {
            if !p.exists() {
                return Err(CliError::Validation(format!(
                    "{}: no such file",
                    p.display()
                )));
            }
        }
        Ok(Self {
            constants,
            coefficients_path: opts.coefficients.clone(),
            coefficients: None,
            format: opts.format,
            max_order: opts.max_order,
            consistency_k: opts.consistency_k,
            policy: opts.policy,
            style: ParenthesisStyle {
                two_digits_on_leading_one: !opts.one_digit_sigma,
            },
            label_policy: if opts.strict_constants {
                LabelPolicy::Error
            } else {
                LabelPolicy::Warn
            },
        })
    }

    /// Coefficient table, read on first use.
    pub fn coefficients(&mut self) -> Result<&CoefficientTable, CliError> {
        if self.coefficients.is_none() {
            let table = match &self.coefficients_path {
                Some(p) => dataset::load_coefficients(p)?,
                None => dataset::parse_coefficients(dataset::BUNDLED_COEFFICIENTS)?,
            };
            self.coefficients = Some(table);
        }
        Ok(self.coefficients.as_ref().expect("just loaded"))
    }

    pub fn coefficients_for(&mut self, state: StateLabel) -> Result<CoefficientSet, CliError> {
        self.coefficients()?.get(&state).cloned().ok_or_else(|| {
            CliError::Validation(format!(
                "no coefficients for {state} in the coefficient table"
            ))
        })
    }

    pub fn plot_format(&self) -> PlotFormat {
        match self.format {
            OutputFormat::Jsonl => PlotFormat::JsonLines,
            OutputFormat::Text | OutputFormat::Csv => PlotFormat::Csv,
        }
    }
}

/// Parses `args` (including the program name) and runs the subcommand,
/// writing results to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_VALIDATION
            } else {
                EXIT_OK
            };
            let rendered = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
            }
            return code;
        }
    };
    let result = Session::new(&cli.global).and_then(|mut session| match &cli.command {
        Command::Convert(a) => commands::convert(&mut session, a, out),
        Command::Extract(a) => commands::extract(&mut session, a, out, err),
        Command::Extrapolate(a) => commands::extrapolate(&mut session, a, out, err),
        Command::Estimate(a) => commands::estimate(&mut session, a, out),
        Command::VerifyLimit(a) => commands::verify_limit(&mut session, a, out, err),
        Command::Plotdata(a) => commands::plotdata(&mut session, a, out, err),
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message());
            e.exit_code()
        }
    }
}
