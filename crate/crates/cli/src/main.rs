use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use podchain::protocol::Adversary;
use podchain::runner::{
    bench_sign, keygen_demo, run_scenario, run_suite, verify_vectors, DemoVectors, RunOptions,
    ScenarioConfig,
};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "podchain",
    version,
    about = "Proof-of-delivery update protocol simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ScenarioArgs {
    /// TOML scenario file; omitted fields take their defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// honest, node-skips-delta2, device-withholds-gamma, unregistered-node or late-claim.
    #[arg(long)]
    adversary: Option<Adversary>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run one end-to-end scenario.
    Run {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Include wall-clock timings in the report.
        #[arg(long)]
        timings: bool,
    },
    /// Run every adversary over a range of seeds.
    Suite {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Number of seeds per adversary, starting at --seed.
        #[arg(long, default_value_t = 20)]
        seeds: u64,
    },
    /// Time device-side signing and the supporting primitives.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "10,20,50")]
        counts: Vec<usize>,
        #[arg(long, default_value_t = 30)]
        iterations: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Write the table as JSON to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print key material and a signature for a policy as test vectors.
    KeygenDemo {
        #[arg(long, default_value = "A AND B", conflicts_with = "verify")]
        policy: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Write the vectors to this file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Re-verify a previously written vector file.
        #[arg(long)]
        verify: Option<PathBuf>,
    },
}

/// Printed to stderr as one JSON object; the exit code is 2.
struct Failure(serde_json::Value);

fn usage(field: &str, reason: impl std::fmt::Display) -> Failure {
    Failure(json!({"error": "usage", "field": field, "reason": reason.to_string()}))
}

fn load_config(args: &ScenarioArgs) -> Result<ScenarioConfig, Failure> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| usage("config", format!("{}: {e}", path.display())))?;
            ScenarioConfig::from_toml(&text).map_err(|e| usage(e.field, e.reason))?
        }
        None => ScenarioConfig::default(),
    };
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(adv) = args.adversary {
        cfg.adversary = adv;
    }
    cfg.validate().map_err(|e| usage(e.field, e.reason))?;
    Ok(cfg)
}

fn write(path: &Path, contents: &str) -> Result<(), Failure> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(|e| usage("out", e))?;
        }
    }
    fs::write(path, contents).map_err(|e| usage("out", format!("{}: {e}", path.display())))
}

fn run(cmd: Command) -> Result<bool, Failure> {
    match cmd {
        Command::Run { scenario, timings } => {
            let cfg = load_config(&scenario)?;
            let result = run_scenario(&cfg, &RunOptions { timings })
                .map_err(|e| Failure(json!({"error": "run", "reason": e.to_string()})))?;
            let report = result.report.to_json();
            match &scenario.out {
                Some(dir) => {
                    write(&dir.join("report.json"), &(report + "\n"))?;
                    write(&dir.join("events.jsonl"), &result.event_log)?;
                    write(&dir.join("trace.jsonl"), &result.trace)?;
                    println!(
                        "{} seed={} adversary={} outcome={} expected={}",
                        if result.report.matches_expectation {
                            "ok"
                        } else {
                            "FAIL"
                        },
                        cfg.seed,
                        cfg.adversary,
                        result.report.outcome,
                        result.report.expected
                    );
                }
                None => println!("{report}"),
            }
            if let Some(reason) = result.report.failure_reason() {
                eprintln!(
                    "{}",
                    json!({"error": "unexpected-outcome", "reason": reason})
                );
                return Ok(false);
            }
            Ok(true)
        }
        Command::Suite { scenario, seeds } => {
            let cfg = load_config(&scenario)?;
            let list: Vec<u64> = (0..seeds).map(|i| cfg.seed + i).collect();
            let rows = run_suite(&cfg, &list)
                .map_err(|e| Failure(json!({"error": "run", "reason": e.to_string()})))?;
            let all_ok = rows.iter().all(|r| r.ok);
            let mut text = format!(
                "{:<24} {:>6} {:<22} {:<22} {:>7}\n",
                "adversary", "seed", "outcome", "expected", "refund"
            );
            for r in &rows {
                text += &format!(
                    "{:<24} {:>6} {:<22} {:<22} {:>7}\n",
                    r.adversary.name(),
                    r.seed,
                    r.outcome.to_string(),
                    r.expected.to_string(),
                    r.refund
                );
            }
            let failed = rows.iter().filter(|r| !r.ok).count();
            text += &format!("{} runs, {} unexpected\n", rows.len(), failed);
            print!("{text}");
            if let Some(dir) = &scenario.out {
                let json = serde_json::to_string_pretty(&rows).expect("rows serialize");
                write(&dir.join("suite.json"), &(json + "\n"))?;
            }
            if !all_ok {
                eprintln!(
                    "{}",
                    json!({"error": "unexpected-outcome", "failed": failed})
                );
            }
            Ok(all_ok)
        }
        Command::Bench {
            counts,
            iterations,
            seed,
            out,
        } => {
            let table = bench_sign(&counts, iterations, seed).map_err(|e| usage("counts", e))?;
            print!("{}", table.to_text());
            println!(
                "device-side sign time strictly increasing in |W|: {}",
                if table.sign_time_strictly_increasing() {
                    "yes"
                } else {
                    "no"
                }
            );
            if let Some(path) = out {
                let json = serde_json::to_string_pretty(&table).expect("table serializes");
                write(&path, &(json + "\n"))?;
            }
            Ok(true)
        }
        Command::KeygenDemo {
            policy,
            seed,
            out,
            verify,
        } => {
            if let Some(path) = verify {
                let text = fs::read_to_string(&path)
                    .map_err(|e| usage("verify", format!("{}: {e}", path.display())))?;
                let vectors: DemoVectors =
                    serde_json::from_str(&text).map_err(|e| usage("verify", e))?;
                return match verify_vectors(&vectors) {
                    Ok(()) => {
                        println!("ok {}", path.display());
                        Ok(true)
                    }
                    Err(reason) => {
                        eprintln!("{}", json!({"error": "vectors", "reason": reason}));
                        Ok(false)
                    }
                };
            }
            let vectors = keygen_demo(&policy, seed).map_err(|e| usage("policy", e))?;
            let json = serde_json::to_string_pretty(&vectors).expect("vectors serialize") + "\n";
            match out {
                Some(path) => {
                    write(&path, &json)?;
                    println!(
                        "policy {} -> {}x{} matrix, rho [{}]; vectors written to {}",
                        vectors.policy,
                        vectors.rows,
                        vectors.cols,
                        vectors.rho.join(", "),
                        path.display()
                    );
                }
                None => print!("{json}"),
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let reason = e.to_string();
            let first = reason
                .lines()
                .next()
                .unwrap_or_default()
                .trim_start_matches("error: ");
            eprintln!("{}", json!({"error": "usage", "reason": first}));
            return ExitCode::from(2);
        }
    };
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure(v)) => {
            eprintln!("{v}");
            ExitCode::from(2)
        }
    }
}
