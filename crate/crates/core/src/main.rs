//! Command-line front end: check circuits, expand them, generate test
//! instances, compute permanents, and time the engines.
//!
//! Exit status: 0 on success, 1 when `--expect` is given and the verdict
//! disagrees, 2 on any error.

use std::io::Read;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use sps_pit::bench::{bench_hadamard_once, bench_ncabp_once, BenchRow};
use sps_pit::gen::{generate, GenParams};
use sps_pit::oracle::SzVerdict;
use sps_pit::pit::Verdict;
use sps_pit::{
    expand, is_zero_oracle, parse_circuit, parse_matrix, pit_complex, pit_prime_field,
    pit_rational, ryser_permanent, schwartz_zippel_test, serialize_circuit, Circuit, Error,
    FieldDescriptor,
};

#[derive(Parser)]
#[command(
    name = "sps-pit",
    version,
    about = "Deterministic identity testing for depth-3 circuits with bounded product fan-in"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a circuit computes the zero polynomial
    Check(CheckArgs),
    /// Expand a circuit into its monomial listing (oracle path)
    Expand(InputArg),
    /// Generate a deterministic random circuit on standard output
    Gen(GenArgs),
    /// Compute the permanent of a scalar matrix file
    Perm(PermArgs),
    /// Time the engines across a fan-in range
    Bench(BenchArgs),
}

#[derive(Args)]
struct InputArg {
    /// Input file, or `-` for standard input
    input: String,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Auto,
    Hadamard,
    Ncabp,
    Oracle,
    Sz,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Expectation {
    Zero,
    Nonzero,
}

#[derive(Args)]
struct CheckArgs {
    /// Input file, or `-` for standard input
    input: String,
    /// Pipeline selection; `auto` dispatches on the circuit's field
    #[arg(long, value_enum, default_value_t = Mode::Auto)]
    mode: Mode,
    /// Fail (exit 1) unless the verdict matches
    #[arg(long, value_enum)]
    expect: Option<Expectation>,
    /// Evaluation points for --mode sz
    #[arg(long, default_value_t = 16)]
    trials: u32,
    /// Seed for --mode sz
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args)]
struct GenArgs {
    /// Number of variables
    #[arg(long = "n")]
    nvars: usize,
    /// Maximum product fan-in
    #[arg(long = "d")]
    fan_in: usize,
    /// Number of product terms
    #[arg(long = "s")]
    terms: usize,
    /// Field: `Q`, `Qi`, or `F <p>`
    #[arg(long, num_args = 1..=2, default_values_t = [String::from("Q")])]
    field: Vec<String>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Emit a provably zero circuit
    #[arg(long)]
    force_zero: bool,
}

#[derive(Args)]
struct PermArgs {
    /// Matrix file, or `-` for standard input
    input: String,
    /// Cross-check against the brute-force permanent (dimension <= 8)
    #[arg(long)]
    verify: bool,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    d_min: usize,
    #[arg(long)]
    d_max: usize,
    #[arg(long = "n", default_value_t = 50)]
    nvars: usize,
    #[arg(long = "s", default_value_t = 10)]
    terms: usize,
    /// `hadamard` (field Q/Qi) or `ncabp` (prime field)
    #[arg(long, value_enum, default_value_t = BenchMode::Hadamard)]
    mode: BenchMode,
    /// Field: `Q`, `Qi`, or `F <p>`
    #[arg(long, num_args = 1..=2, default_values_t = [String::from("Q")])]
    field: Vec<String>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BenchMode {
    Hadamard,
    Ncabp,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Check(args) => cmd_check(args),
        Command::Expand(args) => {
            let circuit = parse_circuit(&read_input(&args.input)?)?;
            print!("{}", expand(&circuit)?.render());
            Ok(ExitCode::SUCCESS)
        }
        Command::Gen(args) => cmd_gen(args),
        Command::Perm(args) => cmd_perm(args),
        Command::Bench(args) => cmd_bench(args),
    }
}

fn read_input(path: &str) -> Result<String, Error> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Error::InvalidParameter(format!("reading standard input: {e}")))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidParameter(format!("reading {path}: {e}")))
    }
}

fn parse_field_tokens(tokens: &[String]) -> Result<FieldDescriptor, Error> {
    match tokens {
        [q] if q == "Q" => Ok(FieldDescriptor::Q),
        [qi] if qi == "Qi" => Ok(FieldDescriptor::Qi),
        [f, p] if f == "F" => {
            let p: u64 = p
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("invalid prime `{p}`")))?;
            FieldDescriptor::prime_field(p)
        }
        _ => Err(Error::InvalidParameter(
            "field must be `Q`, `Qi` or `F <p>`".into(),
        )),
    }
}

/// Verdict line for the advisory paths, shaped like the deterministic one.
fn advisory_line(verdict: &str, pipeline: &str, c: &Circuit, started: Instant) -> String {
    format!(
        "verdict={verdict} pipeline={pipeline} witness=- d={} s={} n={} time_ms={}",
        c.max_fan_in(),
        c.num_terms(),
        c.nvars(),
        started.elapsed().as_millis()
    )
}

fn cmd_check(args: CheckArgs) -> Result<ExitCode, Error> {
    let circuit = parse_circuit(&read_input(&args.input)?)?;
    let field = circuit.field();
    let (line, zeroish) = match args.mode {
        Mode::Auto | Mode::Hadamard | Mode::Ncabp => {
            let verdict = match (args.mode, field) {
                (Mode::Auto | Mode::Hadamard, FieldDescriptor::Q) => pit_rational(&circuit)?,
                (Mode::Auto | Mode::Hadamard, FieldDescriptor::Qi) => pit_complex(&circuit)?,
                (Mode::Auto | Mode::Ncabp, FieldDescriptor::Fp(_)) => pit_prime_field(&circuit)?,
                (Mode::Hadamard, FieldDescriptor::Fp(_)) => {
                    return Err(Error::InvalidParameter(
                        "--mode hadamard requires a circuit over Q or Qi".into(),
                    ))
                }
                (Mode::Ncabp, _) => {
                    return Err(Error::InvalidParameter(
                        "--mode ncabp requires a circuit over a prime field".into(),
                    ))
                }
                _ => unreachable!(),
            };
            (verdict.line(), verdict.verdict == Verdict::Zero)
        }
        Mode::Oracle => {
            let started = Instant::now();
            let zero = is_zero_oracle(&circuit)?;
            let name = if zero { "ZERO" } else { "NONZERO" };
            (advisory_line(name, "ORACLE", &circuit, started), zero)
        }
        Mode::Sz => {
            let started = Instant::now();
            let verdict = schwartz_zippel_test(&circuit, args.trials, args.seed)?;
            // The randomized check never claims ZERO outright.
            let name = match verdict {
                SzVerdict::ProbablyZero => "PROBABLY_ZERO",
                SzVerdict::Nonzero => "NONZERO",
            };
            (
                advisory_line(name, "SZ", &circuit, started),
                verdict == SzVerdict::ProbablyZero,
            )
        }
    };
    println!("{line}");
    let status = match args.expect {
        Some(Expectation::Zero) if !zeroish => ExitCode::from(1),
        Some(Expectation::Nonzero) if zeroish => ExitCode::from(1),
        _ => ExitCode::SUCCESS,
    };
    Ok(status)
}

fn cmd_gen(args: GenArgs) -> Result<ExitCode, Error> {
    let field = parse_field_tokens(&args.field)?;
    let circuit = generate(&GenParams {
        nvars: args.nvars,
        max_fan_in: args.fan_in,
        terms: args.terms,
        field,
        force_zero: args.force_zero,
        seed: args.seed,
    })?;
    print!("{}", serialize_circuit(&circuit));
    Ok(ExitCode::SUCCESS)
}

fn cmd_perm(args: PermArgs) -> Result<ExitCode, Error> {
    let (matrix, _field) = parse_matrix(&read_input(&args.input)?)?;
    let value = ryser_permanent(&matrix)?;
    if args.verify {
        let brute = sps_pit::brute_permanent(&matrix)?;
        if brute != value {
            return Err(Error::InvalidParameter(format!(
                "permanent mismatch: ryser {value} vs brute-force {brute}"
            )));
        }
    }
    println!("{value}");
    Ok(ExitCode::SUCCESS)
}

fn cmd_bench(args: BenchArgs) -> Result<ExitCode, Error> {
    if args.d_min == 0 || args.d_min > args.d_max {
        return Err(Error::InvalidParameter("need 1 <= d-min <= d-max".into()));
    }
    let field = parse_field_tokens(&args.field)?;
    let mut previous: Option<BenchRow> = None;
    for d in args.d_min..=args.d_max {
        let row = match args.mode {
            BenchMode::Hadamard => {
                if matches!(field, FieldDescriptor::Fp(_)) {
                    return Err(Error::InvalidParameter(
                        "--mode hadamard benches fields Q or Qi".into(),
                    ));
                }
                bench_hadamard_once(args.nvars, args.terms, d, field, args.seed)?
            }
            BenchMode::Ncabp => {
                let FieldDescriptor::Fp(p) = field else {
                    return Err(Error::InvalidParameter(
                        "--mode ncabp benches a prime field; pass --field F <p>".into(),
                    ));
                };
                bench_ncabp_once(args.nvars, args.terms, d, p, args.seed)?
            }
        };
        let ratio = match &previous {
            Some(prev) if prev.elapsed.as_secs_f64() > 0.0 => format!(
                "{:.2}",
                row.elapsed.as_secs_f64() / prev.elapsed.as_secs_f64()
            ),
            _ => "-".to_string(),
        };
        println!(
            "d={} time_ms={:.3} ratio={}",
            row.fan_in,
            row.elapsed.as_secs_f64() * 1e3,
            ratio
        );
        previous = Some(row);
    }
    Ok(ExitCode::SUCCESS)
}
