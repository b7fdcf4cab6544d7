use std::path::PathBuf;
use std::process::ExitCode;

use biphoton_cli::config::{
    Format, ModelKind, ModulatorKind, RawGrid, RawModel, RawModulator, RawSweep, WindowKind,
};
use biphoton_cli::{parse_raw, resolve, run, CliError, Preset, RawConfig, Scenario};
use clap::Parser;

/// Simulate entangled photon pairs through synchronized modulators.
#[derive(Debug, Parser)]
#[command(name = "biphoton", version)]
struct Cli {
    scenario: Option<Scenario>,
    /// Figure preset, for the figure-preset scenario.
    preset: Option<Preset>,
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output path prefix; files are written as <PREFIX>_<series>.csv.
    #[arg(long)]
    out: Option<String>,
    #[arg(long)]
    format: Option<Format>,
    /// Worker threads for the numerical kernels.
    #[arg(long)]
    threads: Option<usize>,

    #[arg(long)]
    gatewidth: Option<f64>,
    /// Captured-power tolerance for phase-modulator truncation.
    #[arg(long)]
    tol: Option<f64>,

    #[arg(long)]
    model: Option<ModelKind>,
    #[arg(long)]
    center: Option<f64>,
    #[arg(long)]
    duration: Option<f64>,
    #[arg(long)]
    delay: Option<f64>,

    #[arg(long)]
    half_width: Option<f64>,
    #[arg(long)]
    n_points: Option<usize>,

    #[arg(long)]
    signal: Option<ModulatorKind>,
    #[arg(long)]
    signal_depth: Option<f64>,
    #[arg(long)]
    idler: Option<ModulatorKind>,
    #[arg(long)]
    idler_depth: Option<f64>,
    /// Modulation frequency shared by both channels.
    #[arg(long)]
    omega_m: Option<f64>,

    #[arg(long)]
    omega_m_max: Option<f64>,
    #[arg(long)]
    n_samples: Option<usize>,
    #[arg(long)]
    tau_max: Option<f64>,
    #[arg(long)]
    n_tau: Option<usize>,
    #[arg(long)]
    window: Option<WindowKind>,
}

fn some_if<T>(any: bool, value: T) -> Option<T> {
    any.then_some(value)
}

impl Cli {
    fn overrides(&self) -> RawConfig {
        let model = RawModel {
            kind: self.model,
            center: self.center,
            duration: self.duration,
            delay: self.delay,
        };
        let grid = RawGrid {
            half_width: self.half_width,
            n_points: self.n_points,
        };
        let modulator = |kind, depth| RawModulator {
            kind,
            depth,
            omega_m: self.omega_m,
        };
        let signal = modulator(self.signal, self.signal_depth);
        let idler = modulator(self.idler, self.idler_depth);
        let sweep = RawSweep {
            omega_m_max: self.omega_m_max,
            n_samples: self.n_samples,
            tau_max: self.tau_max,
            n_tau: self.n_tau,
            window: self.window,
        };
        RawConfig {
            scenario: self.scenario,
            preset: self.preset,
            gatewidth: self.gatewidth,
            tol: self.tol,
            output: self.out.clone(),
            format: self.format,
            model: some_if(model != RawModel::default(), model),
            grid: some_if(grid != RawGrid::default(), grid),
            signal: some_if(signal != RawModulator::default(), signal),
            idler: some_if(idler != RawModulator::default(), idler),
            delta_grid: None,
            sweep: some_if(sweep != RawSweep::default(), sweep),
        }
    }
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    let base = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
                path: path.display().to_string(),
                message: e.to_string(),
            })?;
            parse_raw(&text)?
        }
        None => RawConfig::default(),
    };
    let cfg = resolve(base.merge(cli.overrides()))?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    let report = pool.install(|| run(&cfg))?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    for line in &report.summary {
        println!("{line}");
    }
    for f in &report.files {
        println!("wrote {}", f.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
