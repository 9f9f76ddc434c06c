use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use tricoupled::selfcheck::{run_selfcheck, SelfcheckOptions};
use tricoupled::sweep::{
    plot_script_path, run_figure, run_sweep, Figure, GridSpec, Model, Settings, SweepConfig, SweepSummary,
};

#[derive(Parser)]
#[command(name = "tricoupled", version, about = "Steady-state resources of two qubits coupled through an ancilla")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep J_C and omega_C and write one CSV row per grid point and model
    Sweep(SweepArgs),
    /// Reproduce the data behind a figure (1, 2, 3, 4a, 4b, 4c)
    Fig {
        #[arg(value_parser = parse_figure)]
        figure: Figure,
        #[command(flatten)]
        args: SweepArgs,
    },
    /// Run the oracle agreement suites
    Selfcheck {
        /// Seed for the random parameter samples
        #[arg(long, default_value_t = SelfcheckOptions::default().seed)]
        seed: u64,
        /// Scale every decay rate in the global-model suites
        #[arg(long, default_value_t = 1.0)]
        gamma_scale: f64,
    },
}

#[derive(Args, Default)]
struct SweepArgs {
    /// pme, mme or both
    #[arg(long, value_parser = parse_model)]
    model: Option<Model>,
    #[arg(long)]
    omega0: Option<f64>,
    /// Single ancilla frequency
    #[arg(long, conflicts_with = "omegac_range")]
    omegac: Option<f64>,
    #[arg(long)]
    j: Option<f64>,
    /// Single ancilla coupling
    #[arg(long, conflicts_with = "jc_range")]
    jc: Option<f64>,
    /// Decay rate on every site
    #[arg(long)]
    gamma: Option<f64>,
    /// MIN:MAX:STEPS
    #[arg(long, value_parser = parse_grid)]
    jc_range: Option<GridSpec>,
    /// MIN:MAX:STEPS
    #[arg(long, value_parser = parse_grid)]
    omegac_range: Option<GridSpec>,
    /// Output CSV path
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (0 = one per core)
    #[arg(long)]
    workers: Option<usize>,
    /// key=value file with the same keys as the flags; flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
}

fn parse_model(s: &str) -> Result<Model, String> {
    s.parse().map_err(|e: tricoupled::Error| e.to_string())
}

fn parse_grid(s: &str) -> Result<GridSpec, String> {
    s.parse().map_err(|e: tricoupled::Error| e.to_string())
}

fn parse_figure(s: &str) -> Result<Figure, String> {
    s.parse().map_err(|e: tricoupled::Error| e.to_string())
}

impl SweepArgs {
    fn resolve(&self, base: &SweepConfig) -> tricoupled::Result<SweepConfig> {
        let file = match &self.config {
            Some(path) => Settings::load(path)?,
            None => Settings::default(),
        };
        let flags = Settings {
            model: self.model,
            omega0: self.omega0,
            omegac: self.omegac,
            j: self.j,
            jc: self.jc,
            gamma: self.gamma,
            jc_range: self.jc_range,
            omegac_range: self.omegac_range,
            out: self.out.clone(),
            workers: self.workers,
        };
        file.overridden_by(&flags).apply(base)
    }
}

fn report(cfg: &SweepConfig, summary: &SweepSummary) -> ExitCode {
    eprintln!(
        "wrote {} rows to {} ({} failed)",
        summary.rows.len(),
        cfg.out.display(),
        summary.failures
    );
    if summary.failed() {
        eprintln!(
            "error: {:.1}% of grid points failed",
            100.0 * summary.failure_fraction()
        );
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Sweep(args) => args
            .resolve(&SweepConfig::default())
            .and_then(|cfg| run_sweep(&cfg).map(|s| report(&cfg, &s))),
        Command::Fig { figure, args } => args.resolve(&figure.config()).and_then(|cfg| {
            let summary = run_figure(figure, &cfg)?;
            eprintln!("plot script: {}", plot_script_path(&cfg.out).display());
            Ok(report(&cfg, &summary))
        }),
        Command::Selfcheck { seed, gamma_scale } => {
            let opts = SelfcheckOptions {
                seed,
                gamma_scale,
                ..SelfcheckOptions::default()
            };
            let r = run_selfcheck(&opts);
            println!("{r}");
            Ok(if r.passed() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
