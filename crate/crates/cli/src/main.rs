//! `bcinv`: prime splitting, ray class chains and arithmetic equivalence of
//! number fields from the command line.

mod commands;
mod fieldfile;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use bcinv_core::equivalence::CompareMode;
use bcinv_core::rayclass::ChainMode;
use clap::{Args, Parser, Subcommand};

use commands::{EquivOptions, ReportOptions};
use output::{render_json, CliError, Outcome, RunManifest};

#[derive(Parser, Debug)]
#[command(
    name = "bcinv",
    version,
    about = "Number field splitting, ray class chains and zeta comparisons"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Prime or norm bound (default depends on the subcommand).
    #[arg(long, global = true)]
    bound: Option<u64>,
    /// Highest ray class level m.
    #[arg(long, global = true)]
    levels: Option<u32>,
    /// Significant decimal digits for real-valued output.
    #[arg(long, global = true, env = "BCINV_PRECISION", default_value_t = 30)]
    precision: usize,
    /// Worker threads (0 = one per core). Never changes the output.
    #[arg(long, short = 'j', global = true, default_value_t = 0)]
    jobs: usize,
    /// Seed for randomized factoring. Never changes the output.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Emit JSON (the default).
    #[arg(long, global = true, conflicts_with = "human")]
    json: bool,
    /// Emit a plain-text summary instead of JSON.
    #[arg(long, global = true)]
    human: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decomposition of a rational prime.
    Split {
        #[arg(long)]
        field: PathBuf,
        #[arg(long)]
        p: u64,
    },
    /// Truncated Euler product of the Dedekind zeta function (default bound 1000).
    Zeta {
        #[arg(long)]
        field: PathBuf,
        #[arg(long, default_value = "2")]
        s: String,
    },
    /// Ideal counts a_n for n <= bound (default 100).
    Coeffs {
        #[arg(long)]
        field: PathBuf,
    },
    /// Compare two fields prime by prime (default bound 1000).
    Equiv {
        #[arg(long)]
        field_a: PathBuf,
        #[arg(long)]
        field_b: PathBuf,
        /// `g` (splitting numbers) or `full` (splitting types).
        #[arg(long, default_value = "g")]
        mode: String,
        /// Also compare the ideal counts a_n for n <= N.
        #[arg(long, value_name = "N")]
        coefficients: Option<u64>,
        /// Search for a root of each defining polynomial in the other field.
        #[arg(long)]
        certify: bool,
        /// Include the per-prime table of splitting data and component counts.
        #[arg(long)]
        dump_table: bool,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Ray class index chain and trace-range label at a prime (default levels 2).
    Invariant {
        #[arg(long)]
        field: PathBuf,
        #[arg(long)]
        over_prime: u64,
        /// Which prime above `over_prime`, in canonical order.
        #[arg(long, default_value_t = 0)]
        prime_index: usize,
        /// `oracle` or `formula`.
        #[arg(long, default_value = "oracle")]
        mode: String,
    },
    /// Strata, components and labels over primes of norm <= bound (default 30).
    Spectrum {
        #[arg(long)]
        field: PathBuf,
        /// List the components of I_2 (always included).
        #[arg(long)]
        list_components: bool,
        /// Classify a subset: `all`, `none`, `0,2` or `c:1` (complement).
        #[arg(long, value_name = "S")]
        classify: Option<String>,
    },
    /// Fingerprint, components, chains and zeta value in one document
    /// (default bound 30, levels 2).
    Report {
        #[arg(long)]
        field: PathBuf,
        #[arg(long, default_value = "2")]
        s: String,
    },
}

fn run(cli: &Cli, manifest: &mut RunManifest) -> Result<Outcome, CliError> {
    let g = &cli.global;
    let load = |p: &PathBuf| fieldfile::load(p, g.seed);
    match &cli.command {
        Command::Split { field, p } => commands::split(&load(field)?, *p),
        Command::Zeta { field, s } => {
            let bound = g.bound.unwrap_or(1000);
            manifest.bounds.insert("bound", bound);
            commands::zeta(&load(field)?, s, bound, g.precision)
        }
        Command::Coeffs { field } => {
            let bound = g.bound.unwrap_or(100);
            manifest.bounds.insert("bound", bound);
            commands::coeffs(&load(field)?, bound)
        }
        Command::Equiv {
            field_a,
            field_b,
            mode,
            coefficients,
            certify,
            dump_table,
            inject_fault,
        } => {
            let opts = EquivOptions {
                bound: g.bound.unwrap_or(1000),
                mode: mode.parse::<CompareMode>()?,
                coefficients: *coefficients,
                certify: *certify,
                dump_table: *dump_table,
                inject_fault: *inject_fault,
            };
            manifest.bounds.insert("bound", opts.bound);
            if let Some(n) = coefficients {
                manifest.bounds.insert("coefficients", *n);
            }
            commands::equiv(&load(field_a)?, &load(field_b)?, &opts)
        }
        Command::Invariant {
            field,
            over_prime,
            prime_index,
            mode,
        } => {
            let levels = g.levels.unwrap_or(2);
            manifest.bounds.insert("levels", levels.into());
            let mode: ChainMode = mode.parse()?;
            commands::invariant(&load(field)?, *over_prime, *prime_index, levels, mode)
        }
        Command::Spectrum {
            field, classify, ..
        } => {
            let bound = g.bound.unwrap_or(30);
            manifest.bounds.insert("bound", bound);
            commands::spectrum(&load(field)?, bound, classify.as_deref())
        }
        Command::Report { field, s } => {
            let opts = ReportOptions {
                bound: g.bound.unwrap_or(30),
                levels: g.levels.unwrap_or(2),
                s: s.clone(),
                digits: g.precision,
            };
            manifest.bounds.insert("bound", opts.bound);
            manifest.bounds.insert("levels", opts.levels.into());
            commands::report(&load(field)?, &opts)
        }
    }
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if cli.global.jobs > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.global.jobs)
            .build_global()
        {
            eprintln!("cannot start thread pool: {e}");
            return ExitCode::from(3);
        }
    }

    let mut manifest = RunManifest::new(&args[1..], cli.global.seed, cli.global.precision);
    let start = Instant::now();
    let result = run(&cli, &mut manifest);
    manifest.timing_ms = start.elapsed().as_millis() as u64;

    match result {
        Ok(out) => {
            if cli.global.human {
                print!("{}", out.human);
            } else {
                println!("{}", render_json(out.json, &manifest));
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("bcinv: {e}");
            if !cli.global.human {
                println!(
                    "{}",
                    render_json(serde_json::json!({ "error": e.to_json() }), &manifest)
                );
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
