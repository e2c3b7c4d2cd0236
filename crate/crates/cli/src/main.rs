//! Command-line front end: parses an instance file, runs one algorithm, and
//! prints a JSON report (or CSV rows for `bench`).
//!
//! Exit status: 0 success, 1 NO answer in a decision mode, 2 usage or input
//! error, 3 oracle mismatch, 4 step budget exhausted.

mod commands;
mod report;
mod selftest;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use homhash::bench::{medians, run_bench, BenchRow, BenchSpec, Suite};
use homhash::budget::StepBudget;
use homhash::formats::{parse_instance, Format, Instance};

use commands::{CnfMode, DecideOrCount, Outcome, Settings, SpaceMode, Usage};

#[derive(Parser, Debug)]
#[command(name = "homhash", version, about = "Sparse coefficient extraction by homomorphic hashing")]
struct Cli {
    /// Global seed; every random draw derives from it.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Override the default algorithm of the subcommand.
    #[arg(long, global = true)]
    algo: Option<String>,
    /// Cross-check against a brute-force oracle when the instance is small.
    #[arg(long, global = true)]
    oracle: bool,
    /// Independent runs for amplified randomized counts.
    #[arg(long, global = true, default_value_t = homhash::z2_hash::DEFAULT_REPEATS)]
    repeats: usize,
    /// Step budget for budgeted algorithms.
    #[arg(long, global = true, default_value_t = StepBudget::DEFAULT_LIMIT)]
    budget: u64,
    /// Worker threads (0 lets the runtime choose).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Include wall-clock time in the report (makes output nondeterministic).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Subset Sum from a `subsetsum` file.
    Subsetsum { mode: DecideOrCount, file: PathBuf },
    /// Linear Sat from a `linsat` file.
    Linsat { mode: DecideOrCount, file: PathBuf },
    /// Set Partition (at most t parts) from a `setfam` file.
    Setpart { mode: SpaceMode, file: PathBuf },
    /// Set Cover (exactly k sets) from a `setfam` file.
    Setcover { file: PathBuf },
    /// Model counting from a DIMACS CNF file.
    Cnf { mode: CnfMode, file: PathBuf },
    /// Run the built-in checks.
    Selftest,
    /// Time the scaling families and print CSV.
    Bench {
        #[arg(long, default_value = "all")]
        suite: String,
        /// Comma-separated sparsity exponents.
        #[arg(long, value_delimiter = ',', default_value = "8,10,12")]
        exponents: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        reps: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<homhash::Error>() {
        Some(homhash::Error::BudgetExceeded { .. }) => 4,
        _ => 2,
    }
}

fn read(path: &Path, format: Format) -> Result<Instance> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Usage(format!("cannot read {}: {e}", path.display())))?;
    parse_instance(&text, format)
        .map_err(|e| Usage(format!("{}: {e}", path.display())).into())
}

fn run(cli: &Cli) -> Result<u8> {
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .context("configuring the worker pool")?;
    }
    let settings = Settings {
        seed: cli.seed,
        algo: cli.algo.clone(),
        oracle: cli.oracle,
        repeats: cli.repeats,
        budget: cli.budget,
    };
    let start = Instant::now();
    let outcome = match &cli.command {
        Command::Subsetsum { mode, file } => match read(file, Format::SubsetSum)? {
            Instance::SubsetSum(inst) => commands::subset_sum(*mode, &inst, &settings)?,
            _ => unreachable!("format fixes the variant"),
        },
        Command::Linsat { mode, file } => match read(file, Format::LinSat)? {
            Instance::LinearSat(inst) => commands::linear_sat(*mode, &inst, &settings)?,
            _ => unreachable!("format fixes the variant"),
        },
        Command::Setpart { mode, file } => match read(file, Format::SetFam)? {
            Instance::SetFamily(p) => commands::set_partition(*mode, &p, &settings)?,
            _ => unreachable!("format fixes the variant"),
        },
        Command::Setcover { file } => match read(file, Format::SetFam)? {
            Instance::SetFamily(p) => commands::set_cover(&p, &settings)?,
            _ => unreachable!("format fixes the variant"),
        },
        Command::Cnf { mode, file } => match read(file, Format::Dimacs)? {
            Instance::Cnf(p) => commands::cnf(*mode, &p, &settings)?,
            _ => unreachable!("format fixes the variant"),
        },
        Command::Selftest => {
            let (report, ok) = selftest::run(&settings);
            Outcome {
                report,
                mismatch: (!ok).then(|| ("some checks failed".into(), "all pass".into())),
            }
        }
        Command::Bench {
            suite,
            exponents,
            reps,
        } => return bench(suite, exponents, *reps, cli.seed),
    };
    let mut report = outcome.report;
    if cli.timing {
        report.elapsed_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    println!("{}", serde_json::to_string(&report)?);
    if let Some((ours, oracle)) = outcome.mismatch {
        eprintln!("oracle mismatch: algorithm answered {ours}, oracle answered {oracle}");
        return Ok(3);
    }
    Ok(if report.is_no() { 1 } else { 0 })
}

fn bench(suite: &str, exponents: &[usize], reps: usize, seed: u64) -> Result<u8> {
    let suite: Suite = suite.parse().map_err(|e: homhash::Error| Usage(e.to_string()))?;
    let spec = BenchSpec {
        suite,
        exponents: exponents.to_vec(),
        reps,
        seed,
    };
    let rows = run_bench(&spec)?;
    println!("{}", BenchRow::CSV_HEADER);
    for r in &rows {
        println!("{r}");
    }
    for name in ["S", "2^rank", "P"] {
        let subset: Vec<BenchRow> = rows.iter().filter(|r| r.sparsity_name == name).cloned().collect();
        if !subset.is_empty() {
            let m: Vec<String> = medians(&subset)
                .iter()
                .map(|(k, t)| format!("{k}:{t:.6}"))
                .collect();
            eprintln!("median seconds by {name}: {}", m.join(" "));
        }
    }
    Ok(0)
}
