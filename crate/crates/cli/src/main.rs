//! `cskew`: regenerate the compensation-error table, compensate single
//! readings, and fuzz the implementation against its oracles.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use cskew_core::bench::fuzz::{fuzz_oracle, FuzzConfig};
use cskew_core::bench::{self, Algorithm, BenchConfig, OutputFormat};
use cskew_core::bresenham::{bresenham_compensate, BoundsRule};
use cskew_core::float_env::fp_nearest_tick;
use cskew_core::{compensate, EvalOrder, FloatEnv, Precision, RatioDA, Tick};

#[derive(Parser)]
#[command(name = "cskew", version, about = "Integer-only clock skew compensation benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Regenerate the error/iteration statistics table.
    Bench(BenchArgs),
    /// Compensate one hardware clock reading.
    Compensate(CompensateArgs),
    /// Differential fuzzing against the exact oracle.
    Fuzz(FuzzArgs),
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 1_000_000)]
    d: u32,
    #[arg(long, default_value_t = 100.0)]
    ppm: f64,
    #[arg(long, default_value_t = 1_000_000)]
    samples: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Comma-separated hardware clock values; `1e9` style is accepted.
    #[arg(long = "i", value_delimiter = ',', value_parser = parse_tick, default_values = ["1e6", "1e7", "1e8", "1e9"])]
    i_values: Vec<u64>,
    /// Comma-separated subset of fp32, bres-theory, bres-eps, ds.
    #[arg(long = "alg", value_delimiter = ',', default_values = ["fp32", "bres-theory", "bres-eps", "ds"])]
    algorithms: Vec<Algorithm>,
    #[arg(long, default_value = "32")]
    init_precision: PrecisionArg,
    #[arg(long, default_value = "muldiv")]
    eval_order: OrderArg,
    #[arg(long, default_value = "md")]
    format: FormatArg,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; output does not depend on this.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct CompensateArgs {
    #[arg(long = "i", value_parser = parse_tick)]
    i: u64,
    #[arg(long)]
    d: u64,
    #[arg(long)]
    a: u64,
    #[arg(long, default_value = "ds")]
    alg: SingleAlg,
    #[arg(long, default_value = "32")]
    init_precision: PrecisionArg,
    #[arg(long, default_value = "muldiv")]
    eval_order: OrderArg,
}

#[derive(Args)]
struct FuzzArgs {
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long, value_parser = parse_tick, default_value = "1099511627776")]
    i_max: u64,
    #[arg(long, default_value_t = 1 << 21)]
    ratio_max: u32,
}

#[derive(Clone, Copy, ValueEnum)]
enum PrecisionArg {
    #[value(name = "32")]
    P32,
    #[value(name = "64")]
    P64,
}

impl From<PrecisionArg> for Precision {
    fn from(p: PrecisionArg) -> Self {
        match p {
            PrecisionArg::P32 => Precision::Binary32,
            PrecisionArg::P64 => Precision::Binary64,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderArg {
    Muldiv,
    Divmul,
}

impl From<OrderArg> for EvalOrder {
    fn from(o: OrderArg) -> Self {
        match o {
            OrderArg::Muldiv => EvalOrder::MulThenDiv,
            OrderArg::Divmul => EvalOrder::DivThenMul,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Md,
    Csv,
    Jsonl,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Md => OutputFormat::Markdown,
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Jsonl => OutputFormat::JsonLines,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SingleAlg {
    Ds,
    Bres,
    Fp32,
    Fp64,
}

fn parse_tick(s: &str) -> Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    match s.parse::<f64>() {
        Ok(v) if v >= 0.0 && v.fract() == 0.0 && v < 1.8e19 => Ok(v as u64),
        _ => Err(format!("'{s}' is not a non-negative integer")),
    }
}

/// Failures the user can fix by changing arguments.
struct BadArgs(anyhow::Error);

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Bench(args) => run_bench(args),
        Command::Compensate(args) => run_compensate(args),
        Command::Fuzz(args) => run_fuzz(args),
    };
    match result {
        Ok(code) => code,
        Err(BadArgs(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run_bench(args: BenchArgs) -> Result<ExitCode, BadArgs> {
    let cfg = BenchConfig {
        d: args.d,
        ppm: args.ppm,
        n_samples: args.samples,
        seed: args.seed,
        i_values: args.i_values.into_iter().map(Tick::new).collect(),
        algorithms: args.algorithms,
        init_env: FloatEnv::new(args.init_precision.into(), args.eval_order.into()),
        output_format: args.format.into(),
    };
    let rows = match args.threads {
        Some(0) => return Err(BadArgs(anyhow::anyhow!("--threads must be positive"))),
        Some(n) => bench::run_bench_with_threads(&cfg, n),
        None => bench::run_bench(&cfg),
    }
    .map_err(|e| BadArgs(e.into()))?;
    let table = bench::emit_table(&rows, cfg.output_format);
    match args.out {
        Some(path) => fs::write(&path, table)
            .with_context(|| format!("writing {}", path.display()))
            .map_err(BadArgs)?,
        None => print!("{table}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn run_compensate(args: CompensateArgs) -> Result<ExitCode, BadArgs> {
    let r = RatioDA::new(args.d, args.a).map_err(|e| BadArgs(e.into()))?;
    let i = Tick::new(args.i);
    let env = FloatEnv::new(args.init_precision.into(), args.eval_order.into());
    let line = |j: Tick, iterations: Option<u64>, case: &str| {
        let iterations = iterations.map_or("--".to_owned(), |n| n.to_string());
        println!("j={j} iterations={iterations} case={case}");
    };
    match args.alg {
        SingleAlg::Ds => {
            let out = compensate(i, r, &env);
            line(out.j, Some(out.iterations), out.terminal_case.tag());
        }
        SingleAlg::Bres => {
            let out = bresenham_compensate(i, r, &env, &BoundsRule::Theoretical).map_err(|e| BadArgs(e.into()))?;
            line(out.j, Some(out.iterations), "--");
        }
        SingleAlg::Fp32 | SingleAlg::Fp64 => {
            let precision = if matches!(args.alg, SingleAlg::Fp32) { Precision::Binary32 } else { Precision::Binary64 };
            let j = fp_nearest_tick(i, r, &FloatEnv::new(precision, env.order));
            line(j, None, "--");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run_fuzz(args: FuzzArgs) -> Result<ExitCode, BadArgs> {
    let cfg = FuzzConfig { trials: args.trials, seed: args.seed, i_max: args.i_max, ratio_max: args.ratio_max };
    let report = fuzz_oracle(&cfg).map_err(|e| BadArgs(e.into()))?;
    println!("{}", serde_json::to_string(&report).expect("report serializes"));
    if report.passed() {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}
