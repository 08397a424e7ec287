use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use psa_cli::{run, CliError, Command, Document, Format, Scenario};

#[derive(Debug, Parser)]
#[command(name = "psa", version, about = "Phase-sensitive fiber parametric amplifier toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Closed-form coefficients, Bloch-Messiah factors, gains and noise figures.
    Coeffs(Args),
    /// Parameter sweep as CSV, one row per grid point.
    Scan(Args),
    /// Bloch-Messiah phasor stages of the configured input.
    Phasor(Args),
    /// Compare the closed form against the ODE integration.
    OracleCheck(Args),
}

#[derive(Debug, clap::Args)]
struct Args {
    scenario: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Defaults to csv for scans and kv otherwise.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Kv,
}

fn execute(command: Command, args: &Args) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&args.scenario)
        .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", args.scenario.display())))?;
    let scenario = Scenario::parse(&text)?;
    let output = run(command, &scenario)?;
    let format = match (args.format, &output.document) {
        (Some(FormatArg::Csv), _) => Format::Csv,
        (Some(FormatArg::Kv), _) => Format::Kv,
        (None, Document::Table(_)) => Format::Csv,
        (None, Document::Report(_)) => Format::Kv,
    };
    let body = output.document.render(format);
    match &args.out {
        Some(path) => std::fs::write(path, body)?,
        None => print!("{body}"),
    }
    output.check.map_err(CliError::NumericCheck)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match &cli.command {
        Cmd::Coeffs(a) => (Command::Coeffs, a),
        Cmd::Scan(a) => (Command::Scan, a),
        Cmd::Phasor(a) => (Command::Phasor, a),
        Cmd::OracleCheck(a) => (Command::OracleCheck, a),
    };
    match execute(command, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("psa: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
