use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use noma_relay::experiments::{self, report, Mode, Scenario, ValidateOptions};
use noma_relay::{Error, McEngine};

#[derive(Parser)]
#[command(name = "noma-relay", version, about = "Cooperative NOMA with an AF relay: outage simulation and closed forms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Monte Carlo outage only.
    Simulate(RunArgs),
    /// Closed-form approximation and asymptote only.
    Analytic(RunArgs),
    /// Monte Carlo and closed forms side by side.
    Sweep(RunArgs),
    /// NOMA against cooperative OMA with a brute-force power split.
    CompareOma {
        #[command(flatten)]
        run: RunArgs,
        /// Step of the OMA power-split grid.
        #[arg(long, default_value_t = noma_relay::oma::DEFAULT_GRID_STEP)]
        grid_step: f64,
    },
    /// Check the closed forms against their numerical oracles.
    Validate {
        /// Relative error injected into K1 (self-test of the suite).
        #[arg(long, default_value_t = 0.0, hide = true)]
        perturb_k1: f64,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Built-in scenario (case-a, case-b1, case-b2, case-c) or a scenario file.
    #[arg(long, default_value = "case-b1")]
    scenario: String,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output CSV path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    snr_from: Option<f64>,
    #[arg(long)]
    snr_to: Option<f64>,
    #[arg(long)]
    snr_step: Option<f64>,
    /// Worker threads for the Monte Carlo engine; all cores when absent.
    #[arg(long)]
    workers: Option<usize>,
}

impl RunArgs {
    fn scenario(&self) -> noma_relay::Result<Scenario> {
        let mut s = Scenario::resolve(&self.scenario)?;
        if let Some(n) = self.trials {
            s = s.with_trials(n)?;
        }
        if let Some(seed) = self.seed {
            s = s.with_seed(seed);
        }
        if self.snr_from.is_some() || self.snr_to.is_some() || self.snr_step.is_some() {
            let first = s.snr_grid_db[0];
            let last = s.snr_grid_db[s.snr_grid_db.len() - 1];
            let grid = experiments::snr_grid(
                self.snr_from.unwrap_or(first),
                self.snr_to.unwrap_or(last),
                self.snr_step.unwrap_or(5.0),
            )?;
            s = s.with_grid(grid)?;
        }
        Ok(s)
    }

    fn engine(&self) -> noma_relay::Result<McEngine> {
        match self.workers {
            Some(w) => McEngine::with_workers(w),
            None => Ok(McEngine::new()),
        }
    }

    fn output(&self) -> io::Result<Box<dyn Write>> {
        Ok(match &self.out {
            Some(p) => Box::new(BufWriter::new(File::create(p)?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }
}

fn run_csv(args: &RunArgs, mode: Mode) -> noma_relay::Result<()> {
    let s = args.scenario()?;
    let rows = experiments::run_scenario(&args.engine()?, &s, mode)?;
    let mut out = args.output()?;
    experiments::write_csv(&mut out, &rows)?;
    out.flush()?;
    Ok(())
}

fn run_compare(args: &RunArgs, grid_step: f64) -> noma_relay::Result<()> {
    let s = args.scenario()?;
    let rows = experiments::compare_oma(&args.engine()?, &s, grid_step)?;
    let mut out = args.output()?;
    report::write_oma_csv(&mut out, &rows)?;
    out.flush()?;
    Ok(())
}

fn exit_for(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    if e.is_config_error() {
        ExitCode::from(2)
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Simulate(a) => run_csv(a, Mode::Simulate),
        Command::Analytic(a) => run_csv(a, Mode::Analytic),
        Command::Sweep(a) => run_csv(a, Mode::Sweep),
        Command::CompareOma { run, grid_step } => run_compare(run, *grid_step),
        Command::Validate { perturb_k1 } => {
            let results = experiments::validate(&ValidateOptions {
                k1_perturbation: *perturb_k1,
            });
            let mut failed = 0;
            for r in &results {
                println!("{r}");
                failed += usize::from(!r.passed);
            }
            println!("{} of {} properties passed", results.len() - failed, results.len());
            return if failed == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => exit_for(&e),
    }
}
