//! Command-line front end shared by the `colorsat` binary.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 on runtime errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::analysis::fit_threshold;
use crate::code::ColorCode;
use crate::decoder::{decode_oracle, estimate_distance, DecodeStatus, Decoder};
use crate::error::{Error, Result};
use crate::gf2::BitVec;
use crate::lightsout::LightsOutInstance;
use crate::maxsat::{MaxSatInstance, SolveOutcome, WcnfDialect};
use crate::sim::{read_csv, run_batch, write_csv, BatchConfig, NoiseModel};

#[derive(Parser, Debug)]
#[command(name = "colorsat", version, about = "Exact MaxSAT decoding of triangular color codes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Seed for randomized commands; a time-based seed is used and printed
    /// when omitted.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Solver timeout per decode in milliseconds.
    #[arg(long = "timeout-ms", global = true)]
    pub timeout_ms: Option<u64>,

    /// Worker threads for simulations.
    #[arg(long, global = true, default_value_t = 1)]
    pub workers: usize,

    /// Output path; stdout when omitted (where the command allows it).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Emit the JSON description of a triangular color code.
    GenerateCode {
        #[arg(long = "d")]
        distance: usize,
    },
    /// Decode one syndrome.
    Decode(DecodeArgs),
    /// Compute the code distance as the lightest nontrivial logical operator.
    Distance {
        #[arg(long)]
        code: PathBuf,
    },
    /// Write the MaxSAT instance for one syndrome as WCNF.
    ExportWcnf {
        #[arg(long)]
        code: PathBuf,
        /// Syndrome bits, face 0 leftmost.
        #[arg(long)]
        syndrome: String,
        /// Use the pre-2022 `p wcnf` dialect.
        #[arg(long)]
        legacy: bool,
    },
    /// Monte-Carlo logical error rates over a grid of distances and error rates.
    Simulate(SimulateArgs),
    /// Fit the threshold to a simulation CSV.
    ThresholdFit {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Args, Debug)]
pub struct DecodeArgs {
    /// Code JSON as written by `generate-code`.
    #[arg(long, conflicts_with = "puzzle", required_unless_present = "puzzle")]
    pub code: Option<PathBuf>,
    /// Generic LightsOut fixture instead of a code.
    #[arg(long)]
    pub puzzle: Option<PathBuf>,
    /// Syndrome bits, face 0 leftmost. Required with `--code`; overrides the
    /// fixture's initial lights with `--puzzle`.
    #[arg(long, required_unless_present = "puzzle")]
    pub syndrome: Option<String>,
    /// Use exhaustive coset enumeration instead of the MaxSAT solver.
    #[arg(long, conflicts_with = "puzzle")]
    pub oracle: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum NoiseKind {
    Bitflip,
    Pheno,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    /// Comma-separated odd distances.
    #[arg(long = "d", value_delimiter = ',', required = true)]
    pub distances: Vec<usize>,
    /// Error rates as `start:stop:step` (inclusive) or a comma-separated list.
    #[arg(long)]
    pub p: String,
    #[arg(long, default_value_t = 10_000)]
    pub samples: u64,
    #[arg(long, value_enum, default_value_t = NoiseKind::Bitflip)]
    pub noise: NoiseKind,
    /// Measurement rounds for phenomenological noise; defaults to the distance.
    #[arg(long)]
    pub rounds: Option<usize>,
    #[arg(long = "max-logical")]
    pub max_logical: Option<u64>,
}

/// Parses `start:stop:step` or `a,b,c` into a list of error rates.
pub fn parse_p_grid(text: &str) -> Result<Vec<f64>> {
    let num =
        |s: &str| s.trim().parse::<f64>().map_err(|_| Error::InvalidArgument(format!("bad number {s:?}")));
    let parts: Vec<&str> = text.split(':').collect();
    match parts[..] {
        [start, stop, step] => {
            let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
            if step <= 0.0 || stop < start {
                return Err(Error::InvalidArgument(format!("bad range {text:?}")));
            }
            let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
            Ok((0..n).map(|i| ((start + step * i as f64) * 1e9).round() / 1e9).collect())
        }
        [_] => text.split(',').map(num).collect(),
        _ => Err(Error::InvalidArgument(format!("bad error-rate grid {text:?}"))),
    }
}

fn read_code(path: &Path) -> Result<ColorCode> {
    ColorCode::from_json(&fs::read_to_string(path)?)
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                stdout.write_all(b"\n")?;
            }
        }
    }
    Ok(())
}

fn effective_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_nanos() as u64).unwrap_or(0)
    })
}

/// Runs a parsed command line.
pub fn run(cli: Cli) -> Result<()> {
    let timeout = cli.timeout_ms.map(Duration::from_millis);
    let out = cli.out.as_deref();
    match cli.command {
        Command::GenerateCode { distance } => emit(out, &ColorCode::triangular(distance)?.to_json()?),
        Command::Decode(args) => {
            let value = if let Some(path) = &args.puzzle {
                let mut puzzle: LightsOutInstance = fs::read_to_string(path)?.parse()?;
                if let Some(s) = &args.syndrome {
                    puzzle.set_init(s.parse()?)?;
                }
                let start = std::time::Instant::now();
                let outcome = MaxSatInstance::encode(&puzzle).solve(timeout);
                let time_us = start.elapsed().as_micros() as u64;
                match outcome {
                    SolveOutcome::Optimal(a) => json!({
                        "estimate": a.switches(puzzle.n_switches()).to_string(),
                        "weight": a.objective,
                        "status": DecodeStatus::Optimal,
                        "time_us": time_us,
                    }),
                    SolveOutcome::NonConverged => json!({
                        "estimate": BitVec::zeros(puzzle.n_switches()).to_string(),
                        "weight": 0,
                        "status": DecodeStatus::NonConverged,
                        "time_us": time_us,
                    }),
                    SolveOutcome::Unsatisfiable => return Err(Error::Unsatisfiable),
                }
            } else {
                let code = read_code(args.code.as_deref().expect("clap requires --code"))?;
                let syndrome: BitVec = args.syndrome.as_deref().expect("clap requires --syndrome").parse()?;
                if args.oracle {
                    let start = std::time::Instant::now();
                    let estimate = decode_oracle(&code, &syndrome)?;
                    json!({
                        "estimate": estimate.to_string(),
                        "weight": estimate.weight(),
                        "status": DecodeStatus::Optimal,
                        "time_us": start.elapsed().as_micros() as u64,
                    })
                } else {
                    let r = Decoder::new(&code).decode(&syndrome, timeout)?;
                    json!({
                        "estimate": r.estimate.to_string(),
                        "weight": r.weight,
                        "status": r.status,
                        "time_us": r.solve_time.as_micros() as u64,
                    })
                }
            };
            emit(out, &serde_json::to_string(&value)?)
        }
        Command::Distance { code } => {
            let code = read_code(&code)?;
            let value = match estimate_distance(&code, timeout)? {
                Some(d) => json!({ "distance": d, "status": DecodeStatus::Optimal }),
                None => json!({ "distance": null, "status": DecodeStatus::NonConverged }),
            };
            emit(out, &serde_json::to_string(&value)?)
        }
        Command::ExportWcnf { code, syndrome, legacy } => {
            let code = read_code(&code)?;
            let syndrome: BitVec = syndrome.parse()?;
            let decoder = Decoder::new(&code);
            let dialect = if legacy { WcnfDialect::Legacy } else { WcnfDialect::Modern };
            match out {
                Some(path) => decoder.instance().export_wcnf(&syndrome, path, dialect),
                None => {
                    let mut inst = decoder.instance().clone();
                    inst.set_syndrome(&syndrome)?;
                    emit(None, &inst.to_wcnf(dialect))
                }
            }
        }
        Command::Simulate(args) => {
            let seed = effective_seed(cli.seed);
            eprintln!("seed: {seed}");
            let grid = parse_p_grid(&args.p)?;
            let mut records = Vec::new();
            for &d in &args.distances {
                let code = ColorCode::triangular(d)?;
                for &p in &grid {
                    let noise = match args.noise {
                        NoiseKind::Bitflip => NoiseModel::BitFlip { p },
                        NoiseKind::Pheno => {
                            NoiseModel::Phenomenological { p, q: p, rounds: args.rounds.unwrap_or(d) }
                        }
                    };
                    let config = BatchConfig {
                        samples: args.samples,
                        max_logical: args.max_logical,
                        seed,
                        workers: cli.workers,
                        timeout,
                    };
                    let record = run_batch(&code, noise, &config)?;
                    eprintln!(
                        "d={d} p={p} samples={} logical={} ler={:.3e}",
                        record.samples, record.logical_errors, record.ler
                    );
                    records.push(record);
                }
            }
            match out {
                Some(path) => write_csv(&records, path),
                None => {
                    let mut w = csv::Writer::from_writer(std::io::stdout().lock());
                    for r in &records {
                        w.serialize(r)?;
                    }
                    w.flush()?;
                    Ok(())
                }
            }
        }
        Command::ThresholdFit { input } => {
            let fit = fit_threshold(&read_csv(&input)?)?;
            emit(out, &serde_json::to_string_pretty(&fit)?)
        }
    }
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
