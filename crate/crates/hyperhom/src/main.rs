//! Command-line front end: each subcommand selects an experiment, a TOML
//! file supplies the full configuration, and a handful of flags override
//! the common knobs. Curves land as CSV next to a `summary.json`, and the
//! summary is echoed to stdout.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hyperhom::config::{parse_config, ExperimentConfig, ExperimentKind};
use hyperhom::error::Error;
use hyperhom::experiments::{ScanGrid, StateKind};
use hyperhom::run::{output_dir, run, OUTPUT_DIR_ENV};

#[derive(Parser)]
#[command(
    name = "hyperhom",
    about = "Two-photon interferometry simulator: dip/peak scans, phase fringes, and self-checks",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct Common {
    /// TOML configuration file; flags below override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory for CSV and JSON artifacts.
    #[arg(long, env = OUTPUT_DIR_ENV)]
    output: Option<PathBuf>,

    /// Prepared state family: pol_phi, pol_psi, momentum, hyper.
    #[arg(long)]
    state: Option<String>,

    /// Polarization phase θ, radians.
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<f64>,

    /// Momentum phase φ, radians.
    #[arg(long, allow_hyphen_values = true)]
    phi: Option<f64>,

    /// Polarization interference visibility knob, 0..=1.
    #[arg(long)]
    v_pol: Option<f64>,

    /// Momentum interference visibility knob, 0..=1.
    #[arg(long)]
    v_mom: Option<f64>,

    /// Remove the quartz compensation plate.
    #[arg(long)]
    no_compensate: bool,

    /// Scan start (meters or radians, depending on the experiment).
    #[arg(long, allow_hyphen_values = true)]
    start: Option<f64>,

    /// Scan stop.
    #[arg(long, allow_hyphen_values = true)]
    stop: Option<f64>,

    /// Scan step (> 0).
    #[arg(long)]
    step: Option<f64>,

    /// RNG seed; enables the Poisson counts column.
    #[arg(long)]
    seed: Option<u64>,

    /// Mean detected pairs per scan point for counting.
    #[arg(long)]
    mean_pairs: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Coincidence rate vs trombone displacement Δx.
    ScanDelay(Common),
    /// Coincidence rate vs translating-mirror displacement Δd.
    ScanMirror(Common),
    /// Coincidence rate vs glass-plate phase φ.
    ScanPlate(Common),
    /// The two anti-phase φ fringes at θ = 0 and θ = π.
    ScanHyper(Common),
    /// Blocking checks: covered hole pairs must kill interference the
    /// right way.
    Falsify(Common),
    /// Compare the projection rule against dense matrix evolution on
    /// random states.
    OracleCheck {
        #[command(flatten)]
        common: Common,
        /// Number of random states to draw.
        #[arg(long)]
        states: Option<u32>,
    },
    /// Analyzer coincidence probability at a fixed pair of angles.
    PolCorrelation {
        #[command(flatten)]
        common: Common,
        /// Analyzer angles in radians.
        #[arg(long, num_args = 2, value_names = ["A1", "A2"])]
        angles: Option<Vec<f64>>,
    },
}

fn load_config(common: &Common, kind: ExperimentKind) -> Result<ExperimentConfig, Error> {
    let mut cfg = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
                path: path.display().to_string(),
                source,
            })?;
            parse_config(&text)?
        }
        None => ExperimentConfig::default(),
    };
    cfg.experiment = kind;
    if let Some(s) = &common.state {
        cfg.state.kind = match s.as_str() {
            "pol_phi" => StateKind::PolPhi,
            "pol_psi" => StateKind::PolPsi,
            "momentum" => StateKind::Momentum,
            "hyper" => StateKind::Hyper,
            other => {
                return Err(Error::Config(format!(
                    "unknown state `{other}` (expected pol_phi, pol_psi, momentum, hyper)"
                )))
            }
        };
    }
    if let Some(v) = common.theta {
        cfg.state.theta = v;
    }
    if let Some(v) = common.phi {
        cfg.state.phi = v;
    }
    if let Some(v) = common.v_pol {
        cfg.source.v_pol = v;
    }
    if let Some(v) = common.v_mom {
        cfg.source.v_mom = v;
    }
    if common.no_compensate {
        cfg.compensate = false;
    }
    if common.start.is_some() || common.stop.is_some() || common.step.is_some() {
        let base = cfg.scan.unwrap_or_else(|| {
            let mut probe = cfg.clone();
            probe.scan = None;
            probe.grid()
        });
        cfg.scan = Some(ScanGrid {
            start: common.start.unwrap_or(base.start),
            stop: common.stop.unwrap_or(base.stop),
            step: common.step.unwrap_or(base.step),
        });
    }
    if let Some(seed) = common.seed {
        cfg.seed = Some(seed);
    }
    if let Some(m) = common.mean_pairs {
        cfg.mean_pairs = m;
    }
    if let Some(out) = &common.output {
        cfg.output = Some(out.clone());
    }
    cfg.validate()?;
    Ok(cfg)
}

fn execute(cli: Cli) -> Result<bool, Error> {
    let (common, kind) = match &cli.command {
        Command::ScanDelay(c) => (c.clone(), ExperimentKind::ScanDelay),
        Command::ScanMirror(c) => (c.clone(), ExperimentKind::ScanMirror),
        Command::ScanPlate(c) => (c.clone(), ExperimentKind::ScanPlate),
        Command::ScanHyper(c) => (c.clone(), ExperimentKind::ScanHyper),
        Command::Falsify(c) => (c.clone(), ExperimentKind::Falsify),
        Command::OracleCheck { common, .. } => (common.clone(), ExperimentKind::OracleCheck),
        Command::PolCorrelation { common, .. } => (common.clone(), ExperimentKind::PolCorrelation),
    };
    let mut cfg = load_config(&common, kind)?;
    match &cli.command {
        Command::OracleCheck {
            states: Some(n), ..
        } => cfg.oracle_states = *n,
        Command::PolCorrelation {
            angles: Some(a), ..
        } => cfg.angles = [a[0], a[1]],
        _ => {}
    }
    cfg.validate()?;
    let dir = output_dir(&cfg);
    let outcome = run(&cfg, &dir)?;
    println!(
        "{}",
        serde_json::to_string_pretty(&outcome.summary).expect("serializable summary")
    );
    Ok(outcome.success)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
