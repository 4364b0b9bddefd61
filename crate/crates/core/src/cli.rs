//! The `vega` command line.
//!
//! Exit codes: 0 success, 1 data or validation error, 2 usage error. Results
//! go to the output stream only when the whole run succeeded; diagnostics go
//! to the error stream.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::decompose::decompose;
use crate::engine::{evaluate, ComputePlan, Mode};
use crate::harness::{angular_mean_witness, diminishing_transfer_check, regression_anchors, Anchor, DiminishingTransferReport, WitnessReport};
use crate::io::{load, ColumnRef, DatasetSpec, Delimiter, MissingPolicy};
use crate::report::{DatasetInfo, PlanEcho, RunReport, ToolInfo};
use crate::sample::{validate, Measure};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DATA: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "vega",
    version,
    about = "Gini, V index and mean angular difference for a column of data",
    args_conflicts_with_subcommands = true,
    subcommand_negates_reqs = true
)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the transfer witnesses and seeded regression anchors as JSON.
    Witness,
}

#[derive(Debug, clap::Args)]
struct RunArgs {
    /// Delimited text file with a header row.
    #[arg(long, value_name = "PATH", required = true)]
    input: Option<PathBuf>,
    /// Value column, by header name or zero-based position.
    #[arg(long, value_name = "NAME", required = true)]
    column: Option<String>,
    /// Frequency-weight column.
    #[arg(long, value_name = "NAME")]
    weight_column: Option<String>,
    /// Group column; adds a within/between decomposition of V.
    #[arg(long, value_name = "NAME")]
    group_column: Option<String>,
    /// Measure to compute; repeatable. Defaults to gini and vega.
    #[arg(long = "measure", value_enum, value_name = "MEASURE")]
    measures: Vec<MeasureArg>,
    /// Evaluate on N equal-weight quantile bins instead of exactly.
    #[arg(long, value_name = "N", value_parser = clap::value_parser!(u64).range(1..))]
    quantiles: Option<u64>,
    /// Worker threads for the pair sums. Results do not depend on it.
    #[arg(long, value_name = "N", default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    threads: u64,
    /// Rows per work unit.
    #[arg(long, value_name = "N", default_value_t = 256, value_parser = clap::value_parser!(u64).range(1..))]
    chunk: u64,
    /// Treat a nonpositive majority as an error.
    #[arg(long)]
    strict: bool,
    /// What to do with blank or unparseable cells.
    #[arg(long, value_enum, default_value_t = MissingArg::Error)]
    missing: MissingArg,
    #[arg(long, value_enum, default_value_t = OutputArg::Json)]
    output: OutputArg,
    /// Field delimiter; detected from the header line when omitted.
    #[arg(long, value_enum)]
    delimiter: Option<DelimiterArg>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MeasureArg {
    Gini,
    Vega,
    AngularMean,
}

impl From<MeasureArg> for Measure {
    fn from(m: MeasureArg) -> Self {
        match m {
            MeasureArg::Gini => Measure::Gini,
            MeasureArg::Vega => Measure::Vega,
            MeasureArg::AngularMean => Measure::AngularMean,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MissingArg {
    Error,
    Drop,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutputArg {
    Json,
    Table,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DelimiterArg {
    Comma,
    Tab,
}

/// Run with the process's standard streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// Run with explicit output and diagnostic streams.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    match cli.command {
        Some(Command::Witness) => witness(out),
        None => compute(cli.run, out, err),
    }
}

fn compute(args: RunArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let (Some(input), Some(column)) = (args.input, args.column) else {
        let _ = writeln!(err, "error: --input and --column are required");
        return EXIT_USAGE;
    };
    let spec = DatasetSpec {
        path: input.clone(),
        value_column: ColumnRef::Name(column.clone()),
        weight_column: args.weight_column.clone().map(ColumnRef::Name),
        group_column: args.group_column.clone().map(ColumnRef::Name),
        missing: match args.missing {
            MissingArg::Error => MissingPolicy::Error,
            MissingArg::Drop => MissingPolicy::Drop,
        },
        delimiter: args.delimiter.map(|d| match d {
            DelimiterArg::Comma => Delimiter::Comma,
            DelimiterArg::Tab => Delimiter::Tab,
        }),
    };
    let dataset = match load(&spec) {
        Ok(d) => d,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_DATA;
        }
    };
    for w in &dataset.warnings {
        let _ = writeln!(err, "warning: {w}");
    }

    let mut measures: Vec<Measure> = Vec::new();
    for m in args.measures.iter().map(|&m| Measure::from(m)) {
        if !measures.contains(&m) {
            measures.push(m);
        }
    }
    if measures.is_empty() {
        measures = vec![Measure::Gini, Measure::Vega];
    }

    let plan = ComputePlan {
        mode: args.quantiles.map_or(Mode::Exact, |q| Mode::Quantile(q as usize)),
        threads: args.threads as usize,
        chunk: args.chunk as usize,
    };

    let mut failed = false;
    for &m in &measures {
        let verdict = validate(&dataset.sample, m, args.strict);
        for e in &verdict.errors {
            let _ = writeln!(err, "error: {m}: {} ({})", e, e.code());
            failed = true;
        }
    }
    if failed {
        return EXIT_DATA;
    }

    let mut reports = Vec::with_capacity(measures.len());
    for &m in &measures {
        match evaluate(&dataset.sample, m, &plan) {
            Ok(r) => {
                for w in &r.warnings {
                    let _ = writeln!(err, "warning: {m}: {w}");
                }
                reports.push(r);
            }
            Err(e) => {
                let _ = writeln!(err, "error: {m}: {e}");
                return EXIT_DATA;
            }
        }
    }

    let decomposition = match dataset.grouped() {
        None => None,
        Some(grouped) => match decompose(&grouped) {
            Ok(d) => Some(d),
            Err(e) => {
                let _ = writeln!(err, "error: decomposition: {e}");
                return EXIT_DATA;
            }
        },
    };

    let report = RunReport {
        tool: ToolInfo::default(),
        dataset: DatasetInfo {
            path: input.display().to_string(),
            value_column: column,
            weight_column: args.weight_column,
            group_column: args.group_column,
            rows_read: dataset.rows_read,
            rows_dropped: dataset.rows_dropped,
            warnings: dataset.warnings,
        },
        plan: PlanEcho::new(&plan, args.strict),
        measures: reports,
        decomposition,
    };
    let text = match args.output {
        OutputArg::Json => report.to_json(),
        OutputArg::Table => report.to_table(),
    };
    if let Err(e) = out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        let _ = writeln!(err, "error: cannot write report: {e}");
        return EXIT_DATA;
    }
    EXIT_OK
}

#[derive(Serialize)]
struct WitnessDump {
    tool: ToolInfo,
    angular_mean_witness: WitnessReport,
    diminishing_transfer: DiminishingTransferReport,
    regression_anchors: Vec<Anchor>,
}

fn witness(out: &mut dyn Write) -> i32 {
    let dump = WitnessDump {
        tool: ToolInfo::default(),
        angular_mean_witness: angular_mean_witness(),
        diminishing_transfer: diminishing_transfer_check(1.0, 10.0, 2.0, 0.1).expect("fixed example is admissible"),
        regression_anchors: regression_anchors(),
    };
    let mut text = serde_json::to_string_pretty(&dump).expect("serializable");
    text.push('\n');
    match out.write_all(text.as_bytes()) {
        Ok(()) => EXIT_OK,
        Err(_) => EXIT_DATA,
    }
}
