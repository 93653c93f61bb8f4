use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use leonard_core::FieldSpec;
use leonard_lab::{
    load_input, run_search, run_verify, FieldJson, ReportFormat, SubjectJson, SubjectVariant,
    VerifyConfig, VerifyInput,
};

/// Exit codes: 0 all selected checks pass, 1 a check failed, 2 input or
/// usage errors.
#[derive(Parser)]
#[command(name = "leonard-lab", version, about = "Exact verification of the commutator identities of Leonard pairs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the identity suite on a subject
    Verify {
        /// JSON subject file: one subject object or an array of them
        #[arg(long, conflicts_with_all = ["family", "d", "field"])]
        input: Option<PathBuf>,

        /// Built-in family name (currently "krawtchouk")
        #[arg(long, requires = "d", requires = "field")]
        family: Option<String>,

        /// Diameter of the built-in family
        #[arg(long)]
        d: Option<usize>,

        /// Base field: Q or p=<prime>
        #[arg(long)]
        field: Option<String>,

        /// Report format
        #[arg(long, value_enum, default_value = "text")]
        report: ReportFormat,

        /// Comma-separated list of check names to run
        #[arg(long)]
        checks: Option<String>,

        /// Write the report to a file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate parameter arrays over a prime field
    Search {
        /// Diameter (1 to 4)
        #[arg(long)]
        d: usize,

        /// Base field: p=<prime>
        #[arg(long)]
        field: String,

        /// Stop after this many arrays
        #[arg(long, default_value_t = 1)]
        limit: usize,

        /// Write the JSON array to a file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_field_flag(text: &str) -> Result<FieldSpec> {
    if text == "Q" {
        return Ok(FieldSpec::rationals());
    }
    if let Some(p) = text.strip_prefix("p=") {
        let p: u64 = p
            .parse()
            .with_context(|| format!("--field: {p:?} is not an integer"))?;
        return FieldSpec::prime_field(p).map_err(|e| anyhow::anyhow!("--field: {e}"));
    }
    bail!("--field must be Q or p=<prime>, got {text:?}")
}

fn seed_from_env() -> Result<u64> {
    match std::env::var("LEONARD_LAB_SEED") {
        Err(_) => Ok(0),
        Ok(text) => text
            .parse()
            .with_context(|| format!("LEONARD_LAB_SEED: {text:?} is not a u64")),
    }
}

fn emit(output: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, output)
            .with_context(|| format!("cannot write {}", path.display())),
        None => {
            println!("{output}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Verify {
            input,
            family,
            d,
            field,
            report,
            checks,
            out,
        } => {
            let verify_input = match (input, family) {
                (Some(path), None) => load_input(&path)?,
                (None, Some(name)) => {
                    let d = d.context("--family needs --d")?;
                    let field = field.context("--family needs --field")?;
                    let spec = parse_field_flag(&field)?;
                    VerifyInput::single(SubjectJson {
                        field: FieldJson::from_spec(spec),
                        subject: SubjectVariant::Family { name, d },
                    })
                }
                (None, None) => bail!("verify needs either --input or --family"),
                _ => unreachable!("clap conflicts"),
            };
            let cfg = VerifyConfig {
                format: report,
                checks: checks
                    .map(|list| list.split(',').map(|s| s.trim().to_string()).collect()),
                seed: seed_from_env()?,
            };
            let run = run_verify(&verify_input, &cfg)?;
            emit(&run.output, out.as_ref())?;
            Ok(run.all_passed)
        }
        Command::Search { d, field, limit, out } => {
            let spec = parse_field_flag(&field)?;
            let output = run_search(spec, d, limit)?;
            emit(&output, out.as_ref())?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
