use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use crosscap_core::census::{
    defect_report, emit_csv, fit_exponential_decay, ingest_csv, process_batch, read_results,
    summarize, BatchOptions,
};
use crosscap_core::engine::minimal_genus_states;
use crosscap_core::oracle::{brute_force_invariants, brute_force_max_circles, OracleConfig};
use crosscap_core::{compute_invariants, dt_to_gauss, parse_gauss, DtCode};

/// Unoriented genus and crosscap number of prime alternating knots and links.
#[derive(Parser, Debug)]
#[command(name = "crosscap", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute the invariants of one Gauss code.
    Compute {
        #[arg(long)]
        gauss: String,
    },
    /// Run a census CSV through the pipeline and write the result CSV.
    Batch {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        /// Worker threads (default: all cores).
        #[arg(long)]
        jobs: Option<usize>,
        /// Keep only the best leaf per search.
        #[arg(long)]
        best_only: bool,
    },
    /// Distribution table of a result CSV.
    Summarize {
        #[arg(long)]
        input: PathBuf,
        /// Emit CSV instead of aligned text.
        #[arg(long)]
        csv: bool,
    },
    /// Counts of crosscap number exceeding the unoriented genus.
    Defect {
        #[arg(long)]
        input: PathBuf,
        /// Also fit p(c) ~ A exp(-r c) to the nonzero proportions.
        #[arg(long)]
        fit: bool,
        /// Smallest crossing number used by the fit.
        #[arg(long, default_value_t = 0)]
        fit_from: usize,
        #[arg(long)]
        csv: bool,
    },
    /// Cross-check the engine against exhaustive state enumeration.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        max_crossings: usize,
    },
    /// Convert a knot DT code to a Gauss code.
    Convert {
        #[arg(long)]
        dt: String,
    },
}

const DATA_ERROR: u8 = 2;
const MISMATCH: u8 = 3;

fn open(path: &PathBuf) -> Result<BufReader<File>> {
    Ok(BufReader::new(File::open(path).with_context(|| {
        format!("cannot open {}", path.display())
    })?))
}

fn run(cli: Cli, out: &mut impl Write) -> Result<ExitCode> {
    match cli.command {
        Command::Compute { gauss } => {
            let g = parse_gauss(&gauss)?;
            let r = compute_invariants(&g)?;
            writeln!(out, "c = {}", r.crossing_count)?;
            writeln!(out, "s = {}", r.circle_count)?;
            writeln!(out, "Gamma = {}", r.unoriented_genus)?;
            writeln!(out, "gamma = {}", r.crosscap)?;
            writeln!(out, "state code = {}", r.witness)?;
            writeln!(out, "simple = {}", r.simple)?;
            writeln!(out, "bipartite = {}", r.bipartite)?;
        }
        Command::Batch {
            input,
            output,
            jobs,
            best_only,
        } => {
            let ingested = ingest_csv(open(&input)?)?;
            for e in &ingested.errors {
                eprintln!("row {}: {}", e.row, e.message);
            }
            let rows = process_batch(&ingested.records, &BatchOptions { jobs, best_only })?;
            let failed: Vec<_> = rows.iter().filter(|r| r.outcome.is_err()).collect();
            for r in &failed {
                eprintln!("{}: {}", r.name, r.outcome.as_ref().unwrap_err());
            }
            let file = File::create(&output)
                .with_context(|| format!("cannot create {}", output.display()))?;
            emit_csv(&rows, BufWriter::new(file))?;
            writeln!(out, "{} rows written to {}", rows.len(), output.display())?;
            if !ingested.errors.is_empty() || !failed.is_empty() {
                eprintln!(
                    "{} ingest error(s), {} failed row(s)",
                    ingested.errors.len(),
                    failed.len()
                );
                return Ok(ExitCode::from(DATA_ERROR));
            }
        }
        Command::Summarize { input, csv } => {
            let table = summarize(&read_results(open(&input)?)?);
            if csv {
                write!(out, "{}", table.to_csv())?;
            } else {
                write!(out, "{table}")?;
            }
        }
        Command::Defect {
            input,
            fit,
            fit_from,
            csv,
        } => {
            let table = defect_report(&read_results(open(&input)?)?);
            if csv {
                write!(out, "{}", table.to_csv())?;
            } else {
                write!(out, "{table}")?;
            }
            if fit {
                let points: Vec<_> = table
                    .points()
                    .into_iter()
                    .filter(|(c, _)| *c >= fit_from as f64)
                    .collect();
                let f = fit_exponential_decay(&points)?;
                writeln!(out, "amplitude = {:.4}", f.amplitude)?;
                writeln!(out, "rate = {:.5}", f.rate)?;
            }
        }
        Command::Verify {
            input,
            max_crossings,
        } => {
            let ingested = ingest_csv(open(&input)?)?;
            let cfg = OracleConfig {
                bound: max_crossings.max(1),
                ..OracleConfig::default()
            };
            let mut checked = 0;
            let mut mismatches = 0;
            for r in ingested
                .records
                .iter()
                .filter(|r| r.gauss.crossing_count() <= max_crossings)
            {
                checked += 1;
                let engine = minimal_genus_states(&r.gauss)?;
                let (max, _) = brute_force_max_circles(&r.gauss, &cfg)?;
                let ours = compute_invariants(&r.gauss)?;
                let theirs = brute_force_invariants(&r.gauss, &cfg)?;
                if engine.best.len() != max
                    || (ours.unoriented_genus, ours.crosscap)
                        != (theirs.unoriented_genus, theirs.crosscap)
                {
                    mismatches += 1;
                    writeln!(
                        out,
                        "MISMATCH {}: engine s={} Gamma={} gamma={}, oracle s={} Gamma={} gamma={}",
                        r.name,
                        engine.best.len(),
                        ours.unoriented_genus,
                        ours.crosscap,
                        max,
                        theirs.unoriented_genus,
                        theirs.crosscap
                    )?;
                }
            }
            writeln!(out, "{checked} checked, {mismatches} mismatch(es)")?;
            if mismatches > 0 {
                return Ok(ExitCode::from(MISMATCH));
            }
        }
        Command::Convert { dt } => {
            let dt: DtCode = dt.parse()?;
            writeln!(out, "{}", dt_to_gauss(&dt))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let stdout = io::stdout();
    match run(cli, &mut stdout.lock()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(DATA_ERROR)
        }
    }
}
