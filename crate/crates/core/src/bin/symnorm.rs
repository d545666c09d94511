use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use symnorm::bench::{run_subdirect, selftest, BenchSummary, SubdirectSpec};
use symnorm::driver::{normalise, ChainConfig, Method};
use symnorm::error::Error;
use symnorm::families::Family;
use symnorm::group::Group;
use symnorm::par::{with_jobs, Exec};

#[derive(Parser)]
#[command(name = "symnorm", version, about = "Normalisers of permutation groups in the symmetric group")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Normaliser of the group in a group file.
    Normalizer(NormalizerArgs),
    /// Normalisers of random subgroups of G^n, one JSON line per case.
    BenchSubdirect(BenchArgs),
    /// Oracle corpus and invariant suites.
    Selftest(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    #[arg(long, env = "SYMNORM_SEED", default_value_t = 0)]
    seed: u64,
    /// Worker threads.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct ConfigArgs {
    #[arg(long, default_value = "chain")]
    method: Method,
    #[arg(long)]
    cutoff_transitive: Option<usize>,
    #[arg(long)]
    cutoff_intransitive: Option<usize>,
    #[arg(long)]
    large_index: Option<u64>,
}

impl ConfigArgs {
    fn config(&self, seed: u64) -> ChainConfig {
        let d = ChainConfig::default();
        ChainConfig {
            cutoff_transitive: self.cutoff_transitive.unwrap_or(d.cutoff_transitive),
            cutoff_intransitive: self.cutoff_intransitive.unwrap_or(d.cutoff_intransitive),
            large_index: self.large_index.unwrap_or(d.large_index),
            seed,
            ..d
        }
    }
}

#[derive(Args)]
struct NormalizerArgs {
    file: PathBuf,
    #[arg(long)]
    trace: bool,
    #[command(flatten)]
    config: ConfigArgs,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value = "dihedral")]
    family: Family,
    #[arg(long)]
    deg: usize,
    #[arg(long)]
    copies: usize,
    #[arg(long, default_value_t = 2)]
    gens: usize,
    #[arg(long, default_value_t = 10)]
    count: usize,
    #[command(flatten)]
    config: ConfigArgs,
    #[command(flatten)]
    common: CommonArgs,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) => 1,
        Error::BudgetExceeded(_) => 2,
        Error::DegreeCap { .. } => 3,
        _ => 4,
    }
}

fn normalizer(args: &NormalizerArgs) -> Result<(), Error> {
    let text = std::fs::read_to_string(&args.file).map_err(|e| Error::Parse(format!("{}: {e}", args.file.display())))?;
    let g = Group::parse(&text)?;
    let cfg = args.config.config(args.common.seed);
    let start = Instant::now();
    let (n, trace) = with_jobs(args.common.jobs, || normalise(&g, args.config.method, &cfg))?;
    let time_ms = start.elapsed().as_secs_f64() * 1e3;
    let mut out = json!({
        "degree": g.degree(),
        "input_order": g.order().to_string(),
        "normalizer_order": n.order().to_string(),
        "generators": n.to_cycle_strings(),
        "method": args.config.method.to_string(),
    });
    if args.trace {
        if let Some(t) = trace {
            out["trace"] = t.to_json();
        }
    }
    out["time_ms"] = json!(time_ms);
    println!("{out}");
    Ok(())
}

fn bench(args: &BenchArgs) -> Result<(), Error> {
    let spec = SubdirectSpec {
        family: args.family,
        deg: args.deg,
        copies: args.copies,
        gens: args.gens,
        count: args.count,
        seed: args.common.seed,
        method: args.config.method,
    };
    let cfg = args.config.config(args.common.seed);
    let cases = with_jobs(args.common.jobs, || run_subdirect(&spec, &cfg, Exec::default()))?;
    let mut stdout = std::io::stdout().lock();
    for c in &cases {
        writeln!(stdout, "{}", serde_json::to_string(c).expect("serialisable")).ok();
    }
    let summary = BenchSummary::of(&cases);
    writeln!(stdout, "{}", json!({ "summary": summary })).ok();
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Normalizer(a) => normalizer(a),
        Command::BenchSubdirect(a) => bench(a),
        Command::Selftest(a) => {
            let report = with_jobs(a.jobs, || selftest(a.seed, Exec::default()));
            println!(
                "corpus: {}/{} passed\ncode family: {}/{} passed",
                report.corpus_passed, report.corpus, report.code_passed, report.code_cases
            );
            for f in &report.failures {
                println!("FAIL {f}");
            }
            return if report.ok() { ExitCode::SUCCESS } else { ExitCode::FAILURE };
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
