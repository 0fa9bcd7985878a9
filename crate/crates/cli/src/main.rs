mod bench;
mod io;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tverberg::exact::ExactParams;
use tverberg::generate::Family;
use tverberg::lowdim::ExtractParams;
use tverberg::report::{write_table, Cell, Certificate};
use tverberg::verify::{brute_tverberg_depth, tukey_depth, BRUTE_TVERBERG_MAX_N};
use tverberg::{rank_bound, solve, verify_site, Algorithm, BaseSolver, SolveOptions, TverbergError};

use crate::io::{parse_point, read_points};

/// Exit codes.
const INVALID: u8 = 1;
const PARSE: u8 = 2;
const PRECONDITION: u8 = 3;
const INTERNAL: u8 = 4;

#[derive(Debug)]
pub enum Failure {
    Parse(String),
    Invalid(Vec<String>),
    Solver(TverbergError),
    Io(String),
}

impl From<TverbergError> for Failure {
    fn from(e: TverbergError) -> Self {
        Failure::Solver(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Parse(_) => PARSE,
            Failure::Invalid(_) => INVALID,
            Failure::Solver(e) if e.is_precondition() => PRECONDITION,
            Failure::Solver(_) | Failure::Io(_) => INTERNAL,
        }
    }
}

#[derive(Parser)]
#[command(name = "tvk", version, about = "Tverberg points and certified Tverberg partitions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone)]
struct SolveArgs {
    #[arg(long, default_value_t = 0.5)]
    delta: f64,
    #[arg(long, env = "TVK_SEED", default_value_t = 0)]
    seed: u64,
    /// Solver run on each buffer by the buffered engine.
    #[arg(long, default_value = "project")]
    base: BaseSolver,
    /// Radius at which the exact solver tries the final LP.
    #[arg(long, default_value_t = ExactParams::default().tau)]
    tau: f64,
    #[arg(long, default_value_t = ExtractParams::default().sample_constant)]
    sample_constant: f64,
    #[arg(long, default_value_t = ExtractParams::default().net_constant)]
    net_constant: f64,
    #[arg(long, default_value_t = ExtractParams::default().resample_cap)]
    resample_cap: usize,
}

impl SolveArgs {
    fn options(&self) -> SolveOptions {
        SolveOptions {
            seed: self.seed,
            delta: self.delta,
            base: self.base,
            extract: ExtractParams {
                sample_constant: self.sample_constant,
                net_constant: self.net_constant,
                resample_cap: self.resample_cap,
            },
            exact: ExactParams { tau: self.tau },
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the Tukey depth of a point, and its Tverberg depth for small
    /// planar inputs.
    Depth {
        input: PathBuf,
        /// Comma separated coordinates.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Compute a Tverberg partition and write its certificate.
    Partition {
        input: PathBuf,
        #[arg(long)]
        algo: Algorithm,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        solve: SolveArgs,
    },
    /// Check a certificate against a point file.
    Verify { points: PathBuf, certificate: PathBuf },
    /// Run algorithms on generated point sets and tabulate ranks.
    Bench {
        #[arg(long, default_value = "uniform")]
        family: Family,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        n_list: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        algos: Vec<Algorithm>,
        #[arg(long, value_delimiter = ',', default_value = "0")]
        seeds: Vec<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Add wall-clock milliseconds (makes the table nondeterministic).
        #[arg(long)]
        timing: bool,
        #[command(flatten)]
        solve: SolveArgs,
    },
}

fn write_out(path: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Depth { input, point } => {
            let set = read_points(&input)?;
            let q = parse_point(&point)?;
            println!("tukey={}", tukey_depth(&set, &q)?);
            if set.dim() <= 2 && set.len() <= BRUTE_TVERBERG_MAX_N {
                println!("tverberg={}", brute_tverberg_depth(&set, &q)?);
            }
            Ok(())
        }
        Command::Partition { input, algo, out, solve: args } => {
            let set = read_points(&input)?;
            let opts = args.options();
            let site = solve(algo, &set, &opts)?;
            let bound = rank_bound(algo, set.len(), set.dim(), opts.delta);
            let cert = Certificate::from_site(&site, algo.name(), opts.seed, bound);
            if out.is_some() {
                write_out(&out, &cert.to_json())?;
            }
            let report = verify_site(&set, &site);
            if !report.valid {
                for v in &report.violations {
                    eprintln!("violation: {v}");
                }
                return Err(Failure::Solver(TverbergError::ContractViolation(format!(
                    "{algo} produced an invalid certificate"
                ))));
            }
            println!("rank={} bound={bound}", site.rank());
            if out.is_none() {
                print!("{}", cert.to_json());
            }
            Ok(())
        }
        Command::Verify { points, certificate } => {
            let set = read_points(&points)?;
            let text = fs::read_to_string(&certificate)
                .map_err(|e| Failure::Parse(format!("{}: {e}", certificate.display())))?;
            let site = Certificate::from_json(&text)
                .and_then(|c| c.to_site())
                .map_err(|e| Failure::Parse(e.to_string()))?;
            let report = verify_site(&set, &site);
            if report.valid {
                println!("valid rank={}", report.rank);
                Ok(())
            } else {
                Err(Failure::Invalid(report.violations))
            }
        }
        Command::Bench { family, d, n_list, algos, seeds, out, timing, solve: args } => {
            let mut cells = Vec::new();
            for &n in &n_list {
                for &algo in &algos {
                    for &seed in &seeds {
                        cells.push(Cell { family, d, n, algo, seed });
                    }
                }
            }
            let rows = bench::bench(cells, &args.options())?;
            let mut buf = Vec::new();
            write_table(&rows, timing, &mut buf).map_err(|e| Failure::Io(e.to_string()))?;
            write_out(&out, &String::from_utf8(buf).expect("csv output is utf-8"))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Parse(m) => eprintln!("parse error: {m}"),
                Failure::Invalid(vs) => {
                    eprintln!("invalid certificate");
                    for v in vs {
                        eprintln!("violation: {v}");
                    }
                }
                Failure::Solver(e) => eprintln!("error: {e}"),
                Failure::Io(m) => eprintln!("error: {m}"),
            }
            ExitCode::from(f.code())
        }
    }
}
