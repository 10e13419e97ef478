//! `dtriple`: verification of the `{2, b, c}` family and its helpers.

use std::io::{self, Write};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use dtriple_core::pipeline::{
    cmd_corollary, cmd_pell, cmd_search, cmd_verify, write_reports, CorollaryReport, OutputFormat, RunConfig,
};
use dtriple_core::Error as CoreError;
use num_bigint::BigInt;

/// Exit status when a branch is unresolved or irregular.
const EXIT_FAILURE: u8 = 1;
/// Exit status for invalid input.
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "dtriple", version, about = "Extensions of the Diophantine triples {2, b, c}")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Json => OutputFormat::Jsonl,
            Format::Csv => OutputFormat::Csv,
            Format::Text => OutputFormat::Text,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Verify every (k, nu, sign, lambda) branch in a range of k.
    Verify {
        #[arg(long, default_value_t = 1)]
        k_min: u64,
        #[arg(long, default_value_t = 12)]
        k_max: u64,
        /// Values of nu, comma separated.
        #[arg(long, value_delimiter = ',', default_values_t = [1u32, 2, 3])]
        nu: Vec<u32>,
        /// Limit on d for exhaustive searches.
        #[arg(long, default_value = "1000000000")]
        d_max: BigInt,
        /// Working precision in decimal digits.
        #[arg(long, env = "DTRIPLE_PRECISION")]
        precision: Option<u32>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Worker threads; 0 uses every core.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Check the prime b/2 - 1 corollary for each qualifying k.
    Corollary {
        #[arg(long, default_value_t = 1)]
        k_min: u64,
        #[arg(long, default_value_t = 12)]
        k_max: u64,
        #[arg(long, default_value = "1000000000")]
        d_max: BigInt,
        #[arg(long, env = "DTRIPLE_PRECISION")]
        precision: Option<u32>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Solve t^2 - D s^2 = N: unit, classes and solutions with s ≤ s_max.
    Pell {
        #[arg(long, allow_hyphen_values = true)]
        d: BigInt,
        #[arg(long, allow_hyphen_values = true)]
        n: BigInt,
        #[arg(long, default_value = "1000")]
        s_max: BigInt,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// List every d ≤ d_max extending a Diophantine triple.
    Search {
        /// The triple as a,b,c.
        #[arg(long, value_delimiter = ',', required = true)]
        triple: Vec<BigInt>,
        #[arg(long, default_value = "1000000")]
        d_max: BigInt,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAILURE),
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

/// A closed stdout (as in `dtriple verify | head`) ends the run quietly.
fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain().any(|cause| {
        let io = match cause.downcast_ref::<CoreError>() {
            Some(CoreError::Io(io)) => Some(io),
            _ => cause.downcast_ref::<io::Error>(),
        };
        io.is_some_and(|io| io.kind() == io::ErrorKind::BrokenPipe)
    })
}

/// Runs a command; `Ok(false)` means some branch failed to close.
fn run(cli: Cli) -> Result<bool> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Verify { k_min, k_max, nu, d_max, precision, format, jobs } => {
            let config = RunConfig { k_min, k_max, nus: nu, d_max, digits: precision, format: format.into(), jobs };
            let reports = cmd_verify(&config)?;
            write_reports(&reports, config.format, &mut out)?;
            Ok(reports.iter().all(|r| !r.verdict.is_failure()))
        }
        Command::Corollary { k_min, k_max, d_max, precision, format, jobs } => {
            let config = RunConfig {
                k_min,
                k_max,
                d_max,
                digits: precision,
                format: format.into(),
                jobs,
                ..RunConfig::default()
            };
            let reports = cmd_corollary(&config)?;
            write_corollary(&reports, format, &mut out)?;
            Ok(reports.iter().all(|r| r.holds))
        }
        Command::Pell { d, n, s_max, format } => {
            let report = cmd_pell(&d, &n, &s_max)?;
            match format {
                Format::Text => {
                    writeln!(out, "t^2 - {} s^2 = {}", report.d, report.n)?;
                    writeln!(out, "unit: ({}, {})", report.unit[0], report.unit[1])?;
                    for c in &report.classes {
                        writeln!(out, "class {}: ({}, {})", c.class, c.t, c.s)?;
                    }
                    for s in &report.solutions {
                        writeln!(out, "  ({}, {}) in class {}", s.t, s.s, s.class)?;
                    }
                }
                Format::Json => writeln!(out, "{}", serde_json::to_string(&report)?)?,
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(&mut out);
                    w.write_record(["class", "t", "s"])?;
                    for s in &report.solutions {
                        w.write_record([s.class.to_string(), s.t.to_string(), s.s.to_string()])?;
                    }
                    w.flush()?;
                }
            }
            Ok(true)
        }
        Command::Search { triple, d_max } => {
            let [a, b, c]: [BigInt; 3] = match triple.try_into() {
                Ok(t) => t,
                Err(_) => bail!("--triple takes exactly three integers"),
            };
            let report = cmd_search(&[a, b, c], &d_max).context("search failed")?;
            writeln!(out, "{}", serde_json::to_string(&report)?)?;
            Ok(true)
        }
    }
}

fn write_corollary<W: Write>(reports: &[CorollaryReport], format: Format, out: &mut W) -> Result<()> {
    match format {
        Format::Json => {
            for r in reports {
                writeln!(out, "{}", serde_json::to_string(r)?)?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["k", "b", "prime", "single_class", "family_only", "oracle", "holds"])?;
            for r in reports {
                let oracle = r.oracle.as_ref().map_or(String::new(), |o| o.all_regular.to_string());
                w.write_record([
                    r.k.to_string(),
                    r.b.to_string(),
                    r.prime.to_string(),
                    r.single_class.to_string(),
                    r.family_only.to_string(),
                    oracle,
                    r.holds.to_string(),
                ])?;
            }
            w.flush()?;
        }
        Format::Text => {
            for r in reports {
                let status = if r.holds { "holds" } else { "FAILS" };
                writeln!(
                    out,
                    "k={} b={} p={}: {status} (single class {}, family only {}, {} branches)",
                    r.k,
                    r.b,
                    r.prime,
                    r.single_class,
                    r.family_only,
                    r.verdicts.len()
                )?;
            }
        }
    }
    Ok(())
}
