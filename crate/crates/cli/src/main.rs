//! `qloop`: command-line access to the engine and its acceptance suite.
//!
//! Exit status: 0 when everything checked holds, 1 on a mathematical failure,
//! 2 on usage or IO errors. `QLOOP_THREADS` sets the worker count.

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qloop_cli::commands::{self, CliError, Output, PairKind};
use qloop_cli::suite::{self, SuiteConfig};
use qloop_core::freealg::DEFAULT_BUDGET;
use qloop_core::shuffle::Sign;

#[derive(Parser)]
#[command(
    name = "qloop",
    version,
    about = "Shuffle algebras, zig-zag relations and pairings for quantum loop groups"
)]
struct Cli {
    /// Cartan matrix as JSON `{"vertices": [...], "d": [[...]]}`; defaults to A2.
    #[arg(long, global = true)]
    cartan: Option<String>,
    /// Pretty-print JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a Cartan matrix file.
    Cartan {
        #[command(subcommand)]
        action: CartanAction,
    },
    /// Operations on words.
    Word {
        #[command(subcommand)]
        action: WordAction,
    },
    /// Operations in the shuffle algebra.
    Shuffle {
        #[command(subcommand)]
        action: ShuffleAction,
    },
    /// Zig-zag relations.
    Rho {
        #[command(subcommand)]
        action: RhoAction,
    },
    /// Loop Serre relations.
    Serre {
        #[command(subcommand)]
        action: SerreAction,
    },
    /// Pairings: `uv` (e-words with V-), `vu` (V+ with f-words), `uu` (e-words with f-words).
    Pair {
        kind: PairArg,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Leading word of an element of V- (JSON or words mapped to V-).
    Lead {
        #[arg(long)]
        elem: String,
    },
    /// The element of V- associated with a non-increasing word.
    Assoc {
        #[arg(long)]
        word: String,
    },
    /// Run the acceptance suite.
    Verify {
        #[command(subcommand)]
        action: VerifyAction,
    },
}

#[derive(Subcommand)]
enum CartanAction {
    Validate { file: String },
}

#[derive(Subcommand)]
enum WordAction {
    /// Rewrite into non-increasing words.
    Straighten {
        /// A word `i:k,...` or a FreeElem JSON (`@file` reads a file).
        #[arg(long)]
        word: String,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
}

#[derive(Subcommand)]
enum ShuffleAction {
    /// Shuffle product of two elements (JSON, or words mapped by Υ̃).
    Mul {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        /// Work in V- instead of V+.
        #[arg(long)]
        minus: bool,
    },
    /// Check the wheel conditions of an element of V+.
    WheelCheck {
        #[arg(long)]
        elem: String,
        /// Check the image under Ω against the geometric wheel conditions.
        #[arg(long)]
        geom: bool,
    },
    /// The image of an element of V+ in the geometric shuffle algebra.
    Omega {
        #[arg(long)]
        elem: String,
    },
}

#[derive(Subcommand)]
enum RhoAction {
    /// A coefficient of a distinguished zig-zag relation.
    Gen {
        /// `i,j,k,l,m[,s]` with vertex labels i, j.
        #[arg(long)]
        zigzag: String,
        /// Multidegree, one entry per vertex (top row, then bottom row).
        #[arg(long, allow_hyphen_values = true)]
        deg: String,
    },
    /// Check that the relation maps to zero over a window of multidegrees.
    Verify {
        #[arg(long)]
        zigzag: String,
        #[arg(long, default_value_t = 2)]
        window: i32,
    },
}

#[derive(Subcommand)]
enum SerreAction {
    Verify {
        #[arg(long)]
        i: String,
        #[arg(long)]
        j: String,
        #[arg(long, default_value_t = 1)]
        window: i32,
    },
}

#[derive(Subcommand)]
enum VerifyAction {
    /// Run checks A1-A11 and write a JSON report.
    All {
        #[arg(long)]
        report: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        /// Comma-separated check identifiers to run.
        #[arg(long, value_delimiter = ',')]
        only: Option<Vec<String>>,
        #[arg(long)]
        window: Option<i32>,
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long)]
        max_neg_d: Option<u32>,
        #[arg(long)]
        max_m: Option<u32>,
        #[arg(long)]
        max_n: Option<usize>,
        /// Mutation mode: run with a deliberately wrong kernel sign.
        #[arg(long)]
        broken_zeta: bool,
        /// Include timings in the report.
        #[arg(long)]
        timings: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PairArg {
    Uv,
    Vu,
    Uu,
}

fn emit(value: &serde_json::Value, pretty: bool) {
    let text = if pretty {
        serde_json::to_string_pretty(value)
    } else {
        serde_json::to_string(value)
    };
    println!("{}", text.expect("JSON serializes"));
}

fn run(cli: Cli) -> Result<Output, CliError> {
    let cartan = || commands::load_cartan(cli.cartan.as_deref());
    match cli.command {
        Command::Cartan {
            action: CartanAction::Validate { file },
        } => commands::cartan_validate(&file),
        Command::Word {
            action: WordAction::Straighten { word, budget },
        } => commands::word_straighten(&cartan()?, &word, budget),
        Command::Shuffle { action } => {
            let c = cartan()?;
            match action {
                ShuffleAction::Mul { left, right, minus } => {
                    commands::shuffle_mul_cmd(&c, &left, &right, if minus { Sign::Minus } else { Sign::Plus })
                }
                ShuffleAction::WheelCheck { elem, geom } => commands::wheel_check(&c, &elem, geom),
                ShuffleAction::Omega { elem } => commands::omega_cmd(&c, &elem),
            }
        }
        Command::Rho { action } => {
            let c = cartan()?;
            match action {
                RhoAction::Gen { zigzag, deg } => commands::rho_gen(&c, &zigzag, &deg),
                RhoAction::Verify { zigzag, window } => commands::rho_verify(&c, &zigzag, window),
            }
        }
        Command::Serre {
            action: SerreAction::Verify { i, j, window },
        } => commands::serre_verify(&cartan()?, &i, &j, window),
        Command::Pair { kind, left, right } => {
            let kind = match kind {
                PairArg::Uv => PairKind::Uv,
                PairArg::Vu => PairKind::Vu,
                PairArg::Uu => PairKind::Uu,
            };
            commands::pair_cmd(&cartan()?, kind, &left, &right)
        }
        Command::Lead { elem } => commands::lead_cmd(&cartan()?, &elem),
        Command::Assoc { word } => commands::assoc_cmd(&cartan()?, &word),
        Command::Verify {
            action:
                VerifyAction::All {
                    report,
                    seed,
                    only,
                    window,
                    budget,
                    max_neg_d,
                    max_m,
                    max_n,
                    broken_zeta,
                    timings,
                },
        } => {
            let c = cartan()?;
            let defaults = SuiteConfig::default();
            let config = SuiteConfig {
                seed: seed.unwrap_or(defaults.seed),
                window: window.unwrap_or(defaults.window),
                budget: budget.unwrap_or(defaults.budget),
                max_neg_d: max_neg_d.unwrap_or(defaults.max_neg_d),
                max_m: max_m.unwrap_or(defaults.max_m),
                max_n: max_n.unwrap_or(defaults.max_n),
                broken_zeta,
                only,
                ..defaults
            };
            config.validate().map_err(CliError::Usage)?;
            let result = suite::run_suite(&c, &config);
            for check in &result.checks {
                eprintln!(
                    "{:<4} {:<4} {:>8} ms  {}: {}",
                    check.id,
                    if check.passed { "PASS" } else { "FAIL" },
                    check.elapsed_ms,
                    check.name,
                    check.detail
                );
            }
            let body = result.to_json(timings);
            if let Some(path) = report {
                let text = serde_json::to_string_pretty(&body).expect("JSON serializes");
                std::fs::write(&path, text + "\n").map_err(|e| CliError::Io(format!("{path}: {e}")))?;
            }
            Ok(Output {
                value: serde_json::json!({ "passed": result.passed, "checks": suite::tally(&result) }),
                ok: result.passed,
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("QLOOP_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // A second initialization only fails if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let pretty = cli.pretty;
    match run(cli) {
        Ok(out) => {
            emit(&out.value, pretty);
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(2)
        }
    }
}
