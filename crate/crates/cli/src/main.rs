use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use polaron_dicke::commands::{run_task, SweepAxis, Task};
use polaron_dicke::config::{parse_pi_expr, RunConfig, KEYS_HELP};
use polaron_dicke::output::read_sidecar;
use polaron_dicke::CliError;

/// Radiative decay of two phonon-dressed quantum emitters: writes the data
/// behind each figure as CSV with JSON provenance sidecars.
#[derive(Debug, Parser)]
#[command(name = "polaron-dicke", version, after_long_help = KEYS_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// TOML configuration file; omitted keys take their defaults.
    #[arg(long, short, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory, overriding output.directory.
    #[arg(long, short, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Override a configuration key, e.g. --set bath.temperature_k=77.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// J(ω), Φ(t) and the profile constants κ, ω_R, Γ_S, Γ_A.
    Bath(Common),
    /// Single emitter prepared in a superposition.
    Fig2(Common),
    /// Free decoherence of the symmetric state at 4 K and 77 K.
    Fig3(Common),
    /// Normalized n(t) after short and long pulses.
    Fig4(Common),
    /// Lifetimes of S/A mixtures in both frames.
    Fig5(Common),
    /// Normalized n(t) for pulse areas π/8, π/4, π/2 and π.
    Fig6(Common),
    /// Normalized intensity at 4 K, 20 K and 77 K.
    Fig7(Common),
    /// The bath tables and all figures.
    All(Common),
    /// One run per value along an axis, executed concurrently.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        axis: SweepAxis,
        /// Comma-separated values; π expressions such as pi/8 are allowed.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        values: Vec<String>,
    },
    /// Regenerate the files described by a JSON sidecar.
    Reproduce {
        /// Sidecar written next to a CSV file.
        sidecar: PathBuf,
        /// Output directory.
        #[arg(long, short, value_name = "DIR")]
        out: PathBuf,
    },
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("POLARON_DICKE_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("POLARON_DICKE_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn load(common: &Common) -> Result<RunConfig, CliError> {
    let mut cfg = match &common.config {
        Some(path) => RunConfig::load(path, &common.set)?,
        None => RunConfig::from_toml("", &common.set)?,
    };
    if let Some(out) = &common.out {
        cfg.output.directory = out.clone();
    }
    eprintln!("# resolved configuration (sha256 {})", cfg.hash());
    eprintln!("# output directory: {}", cfg.output.directory.display());
    eprint!("{}", cfg.canonical_toml());
    Ok(cfg)
}

fn execute(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    let (task, cfg) = match cli.command {
        Command::Bath(c) => (Task::Bath, load(&c)?),
        Command::Fig2(c) => (Task::Fig2, load(&c)?),
        Command::Fig3(c) => (Task::Fig3, load(&c)?),
        Command::Fig4(c) => (Task::Fig4, load(&c)?),
        Command::Fig5(c) => (Task::Fig5, load(&c)?),
        Command::Fig6(c) => (Task::Fig6, load(&c)?),
        Command::Fig7(c) => (Task::Fig7, load(&c)?),
        Command::All(c) => (Task::All, load(&c)?),
        Command::Sweep { common, axis, values } => {
            if values.is_empty() {
                return Err(CliError::Usage("--values must not be empty".into()));
            }
            let values = values
                .iter()
                .map(|v| parse_pi_expr(v).map_err(CliError::Usage))
                .collect::<Result<Vec<_>, _>>()?;
            (Task::Sweep { axis, values }, load(&common)?)
        }
        Command::Reproduce { sidecar, out } => {
            let side = read_sidecar(&sidecar)?;
            let mut cfg = RunConfig::from_toml(&side.config, &[])?;
            cfg.output.directory = out;
            if cfg.hash() != side.config_sha256 {
                return Err(CliError::Config(format!(
                    "{}: embedded configuration does not match its hash",
                    sidecar.display()
                )));
            }
            (side.task, cfg)
        }
    };
    let written = run_task(&task, &cfg, &cfg.output.directory)?;
    for path in written {
        println!("{}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
