use clap::{Parser, Subcommand, ValueEnum};
use irred_core::config::parse_config;
use irred_core::pipeline::{run_pipeline, PipelineOptions};
use irred_core::report::{emit_report, Format};
use irred_core::Error;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_PARTIAL: u8 = 5;

#[derive(Parser)]
#[command(name = "irred", version, about = "Explicit irreducibility bounds for mod-p Galois representations of elliptic curves over totally real Galois fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline on a JSON configuration.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: OutputFormat,
        /// Worker threads for parallel stages.
        #[arg(long)]
        jobs: Option<usize>,
        /// Include per-pair values of family sweeps.
        #[arg(long)]
        emit_pairs: bool,
        /// Exit with status 5 if any sweep skipped pairs for bad reduction.
        #[arg(long)]
        strict: bool,
        /// Stop after A_s, B and the torsion bound.
        #[arg(long)]
        bound_only: bool,
    },
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("irred: {e}");
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Command::Run {
        config,
        out,
        format,
        jobs,
        emit_pairs,
        strict,
        bound_only,
    } = cli.command;

    let text = match std::fs::read_to_string(&config) {
        Ok(t) => t,
        Err(e) => {
            return fail(&Error::Config {
                path: config.display().to_string(),
                message: format!("cannot read: {e}"),
            })
        }
    };
    let cfg = match parse_config(&text) {
        Ok(c) => c,
        Err(e) => return fail(&e),
    };
    let options = PipelineOptions {
        jobs,
        bound_only,
        emit_pairs,
    };
    let report = match run_pipeline(&cfg, options) {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    let format = match format {
        OutputFormat::Json => Format::Json,
        OutputFormat::Text => Format::Text,
    };
    let bytes = emit_report(&report, format);
    let written = match &out {
        Some(path) => std::fs::write(path, &bytes),
        None => std::io::stdout().write_all(&bytes),
    };
    if let Err(e) = written {
        eprintln!("irred: cannot write report: {e}");
        return ExitCode::from(1);
    }
    if strict && report.partial() {
        eprintln!("irred: sweep is partial (pairs skipped for bad reduction) and --strict is set");
        return ExitCode::from(EXIT_PARTIAL);
    }
    ExitCode::SUCCESS
}
