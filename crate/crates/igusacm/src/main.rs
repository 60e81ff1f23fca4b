//! `igusacm`: computes the genus-2 Igusa class polynomials of a primitive
//! quartic CM field `K = Q(√(−a+b√Δ₀))`.
//!
//! Exit codes: 0 success, 2 invalid field, 3 resource budget exceeded,
//! 4 precision ambiguity after the automatic retry, 1 anything else.

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use igusacm::formats::{audit_json, poly_file};
use igusacm::runner::run_pipeline;
use igusacm::selftest;
use igusacm::threads::ThreadExecutor;
use igusacm_core::classpoly::PipelineConfig;
use igusacm_core::cmfield::CMFieldSpec;
use igusacm_core::Error;

#[derive(Parser)]
#[command(
    name = "igusacm",
    about = "Igusa class polynomials of primitive quartic CM fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,

    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args, Default)]
struct RunArgs {
    /// Positive real quadratic fundamental discriminant Δ₀.
    #[arg(long)]
    delta0: Option<u64>,
    /// Positive integer a with −a+b√Δ₀ totally negative.
    #[arg(long)]
    a: Option<u64>,
    /// Positive integer b.
    #[arg(long)]
    b: Option<u64>,
    /// Denominator-bound exponent constant c₁.
    #[arg(long, default_value_t = 16)]
    c1: u32,
    /// Denominator-bound exponent constant c₂.
    #[arg(long, default_value_t = 16)]
    c2: u32,
    /// Also emit the interpolation polynomials Ĥ₂, Ĥ₃.
    #[arg(long)]
    hhat: bool,
    /// Polynomial output path (stdout if omitted).
    #[arg(long)]
    out: Option<std::path::PathBuf>,
    /// Audit JSON output path.
    #[arg(long)]
    json: Option<std::path::PathBuf>,
    /// Hard cap on internally requested precisions, in bits.
    #[arg(long)]
    precision_cap: Option<u32>,
    /// Seed for randomized subsystems (reserved; the pipeline itself is
    /// deterministic).
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Runs the oracle suites and prints one pass/fail line per suite.
    Selftest {
        /// Run only the named suite (theta, theta-bounds, product-tree,
        /// kronecker, symplectic, gauss-minima, gauss-reduce,
        /// siegel-roundtrip).
        #[arg(long)]
        suite: Option<String>,
        /// Theta target precision for the theta suite.
        #[arg(long, default_value_t = 60)]
        s: u32,
        /// Deterministic seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn error_exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidField(_) => 2,
        Error::ResourceBudget(_) => 3,
        Error::RoundingAmbiguous(_) | Error::PrecisionExhausted(_) | Error::PrecisionCap { .. } => {
            4
        }
        _ => 1,
    }
}

fn run(args: &RunArgs) -> ExitCode {
    let (Some(delta0), Some(a), Some(b)) = (args.delta0, args.a, args.b) else {
        eprintln!("error: --delta0, --a and --b are required (see --help)");
        return ExitCode::from(2);
    };
    let spec = match CMFieldSpec::new(delta0, a, b) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e} [category: invalid-field]");
            return ExitCode::from(error_exit_code(&e));
        }
    };
    let mut config = PipelineConfig {
        c1: args.c1,
        c2: args.c2,
        emit_hhat: args.hhat,
        ..PipelineConfig::default()
    };
    if let Some(cap) = args.precision_cap {
        config.precision_cap = cap;
    }
    let exec = ThreadExecutor::from_env();
    let result = run_pipeline(&spec, &config, &exec);
    let (set, timings) = match result {
        Ok(v) => v,
        Err(e) => {
            let category = match error_exit_code(&e) {
                2 => "invalid-field",
                3 => "resource-budget",
                4 => "precision-ambiguity",
                _ => "internal",
            };
            eprintln!("error: {e} [category: {category}]");
            return ExitCode::from(error_exit_code(&e));
        }
    };
    if set.audit.ramified_23 {
        eprintln!(
            "warning: 2 or 3 ramifies in K (Δ = {}); the denominator bound is heuristic there",
            set.audit.delta
        );
    }

    let text = poly_file(&set);
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => {
            print!("{text}");
        }
    }
    if let Some(path) = &args.json {
        let payload = audit_json(&set.audit, &timings);
        match serde_json::to_string_pretty(&payload) {
            Ok(s) => {
                if let Err(e) = std::fs::write(path, s) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(1);
                }
            }
            Err(e) => {
                eprintln!("error: audit serialization: {e}");
                return ExitCode::from(1);
            }
        }
    }
    ExitCode::SUCCESS
}

fn run_selftest(suite: Option<&str>, s: u32, seed: u64) -> ExitCode {
    let reports = match suite {
        None => selftest::run_all(seed),
        Some("theta") => vec![selftest::suite_theta(seed, 3, &[s])],
        Some("theta-bounds") => vec![selftest::suite_theta_bounds(seed, 25)],
        Some("product-tree") => vec![selftest::suite_product_tree(seed, 10, 20, 64)],
        Some("kronecker") => vec![selftest::suite_kronecker(seed, 100)],
        Some("symplectic") => vec![selftest::suite_symplectic(seed, 50)],
        Some("gauss-minima") => vec![selftest::suite_gauss_minima(seed, 50)],
        Some("gauss-reduce") => vec![selftest::suite_gauss_reduce(seed, 50)],
        Some("siegel-roundtrip") => vec![selftest::suite_siegel_roundtrip(seed, 20, 8)],
        Some(other) => {
            eprintln!("error: unknown suite '{other}'");
            return ExitCode::from(2);
        }
    };
    let mut stdout = std::io::stdout().lock();
    let mut any_fail = false;
    for r in &reports {
        let _ = writeln!(stdout, "{}", r.line());
        for f in r.failures.iter().take(5) {
            let _ = writeln!(stdout, "  {f}");
        }
        any_fail |= !r.ok();
    }
    if any_fail {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Some(Command::Selftest { suite, s, seed }) => run_selftest(suite.as_deref(), *s, *seed),
        None => run(&cli.run),
    }
}
