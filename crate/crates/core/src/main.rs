use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ris_secrecy::error::{Error, Result};
use ris_secrecy::monte_carlo::McConfig;
use ris_secrecy::secrecy::NumericsConfig;
use ris_secrecy::selftest;
use ris_secrecy::sweep::{self, Format, Study};

/// Secrecy outage and average secrecy capacity of RIS-aided links with
/// hardware impairments.
#[derive(Parser)]
#[command(name = "ris-secrecy", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the sweeps of a TOML config.
    Run {
        config: PathBuf,
        #[command(flatten)]
        opts: RunOpts,
    },
    /// Run a bundled figure preset (fig2 … fig6).
    Preset {
        name: String,
        #[command(flatten)]
        opts: RunOpts,
        /// Print the preset's TOML instead of running it.
        #[arg(long)]
        show: bool,
    },
    /// Compare closed forms with quadrature and simulation on the reference grid.
    Selftest {
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        quad_order: Option<usize>,
    },
}

#[derive(Args)]
struct RunOpts {
    /// Output file; stdout if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Override the Monte Carlo trial count of every sweep.
    #[arg(long)]
    trials: Option<u64>,
    /// Override the Monte Carlo seed of every sweep.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the Chebyshev quadrature order of every sweep.
    #[arg(long)]
    quad_order: Option<usize>,
}

fn run_study(mut study: Study, opts: &RunOpts) -> Result<()> {
    study.map_sweeps(|s| {
        if let Some(t) = opts.trials {
            s.mc.trials = t;
        }
        if let Some(seed) = opts.seed {
            s.mc.seed = seed;
        }
        if let Some(q) = opts.quad_order {
            s.numerics.quad_order = q;
        }
    });
    let rows = sweep::run_study(&study)?;
    for r in &rows {
        if let Some(e) = &r.error {
            eprintln!("warning: {}={} {}: {e}", r.axis, r.axis_value, r.metric);
        }
    }
    sweep::emit(&rows, opts.format, opts.out.as_deref())
}

fn selftest(trials: u64, seed: u64, quad_order: Option<usize>) -> Result<bool> {
    let mut numerics = NumericsConfig::default();
    if let Some(q) = quad_order {
        numerics.quad_order = q;
    }
    let checks = selftest::run(&numerics, &McConfig::new(trials, seed))?;
    for c in &checks {
        println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    println!("{} of {} checks passed", checks.len() - failed, checks.len());
    Ok(failed == 0)
}

fn dispatch(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Run { config, opts } => run_study(sweep::load_config(&config)?, &opts)?,
        Command::Preset { name, opts, show } => {
            if show {
                let src = sweep::preset_source(&name).ok_or_else(|| Error::Config(format!("unknown preset `{name}`")))?;
                print!("{src}");
            } else {
                run_study(sweep::preset(&name)?, &opts)?;
            }
        }
        Command::Selftest {
            trials,
            seed,
            quad_order,
        } => {
            if !selftest(trials, seed, quad_order)? {
                return Ok(ExitCode::from(2));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
