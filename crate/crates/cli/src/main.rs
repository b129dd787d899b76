use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use irs_sim::manifest::{self, RunInfo};
use irs_sim::validate::{self, Intensity};
use irs_sim::{exit, plot, report, sweep, CliError, RunConfig};

#[derive(Parser)]
#[command(name = "irs-sim", version, about = "IRS-assisted MISO link simulator")]
struct Cli {
    /// Worker threads for Monte Carlo loops (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Suppress warnings on stderr.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the [sweep] section of a config and emit CSV.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// CSV path; a manifest and gnuplot script are written next to it.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Energy-efficiency optimal transmit power.
    OptimalPower {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Use the ideal-hardware rate constant and static power.
        #[arg(long)]
        ideal: bool,
        /// Also write the report as CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the built-in validation suites.
    Validate {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// quick, standard or thorough.
        #[arg(long, default_value = "standard")]
        intensity: String,
        #[arg(long, hide = true)]
        mutate_sinc: bool,
    },
}

const DEFAULT_TRIALS: usize = 10_000;
const DEFAULT_SEED: u64 = 1;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(()) => exit::OK,
        Err(e) => {
            if !matches!(e, CliError::ValidationFailed) {
                eprintln!("error: {e}");
            }
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be >= 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    match cli.command {
        Command::Sweep {
            config,
            out,
            seed,
            trials,
        } => run_sweep(&config, out.as_deref(), seed, trials, cli.quiet),
        Command::OptimalPower { config, ideal, out } => {
            let cfg = match config {
                Some(p) => load(&p, cli.quiet)?,
                None => RunConfig::default(),
            };
            let r = report::compute(&cfg, ideal)?;
            print!("{}", report::render_text(&r, ideal));
            if let Some(path) = out {
                report::write_csv(create(&path)?, &r, ideal).map_err(|e| csv_err(&path, e))?;
            }
            Ok(())
        }
        Command::Validate {
            seed,
            intensity,
            mutate_sinc,
        } => {
            let intensity = Intensity::from_name(&intensity).ok_or_else(|| {
                CliError::Usage(format!(
                    "unknown intensity `{intensity}` (quick, standard, thorough)"
                ))
            })?;
            let opts = validate::Options {
                seed,
                intensity,
                mutate_sinc,
            };
            let r = validate::run(&opts);
            print!("{}", r.render(&opts));
            if r.passed() {
                Ok(())
            } else {
                Err(CliError::ValidationFailed)
            }
        }
    }
}

fn load(path: &Path, quiet: bool) -> Result<RunConfig, CliError> {
    let cfg = RunConfig::load(path)?;
    if !quiet {
        for w in &cfg.warnings {
            eprintln!("warning: {w}");
        }
    }
    Ok(cfg)
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })
}

fn csv_err(path: &Path, e: csv::Error) -> CliError {
    CliError::Io {
        path: path.display().to_string(),
        source: io::Error::other(e),
    }
}

fn run_sweep(
    config: &Path,
    out: Option<&Path>,
    seed: Option<u64>,
    trials: Option<usize>,
    quiet: bool,
) -> Result<(), CliError> {
    let cfg = load(config, quiet)?;
    let spec = cfg.sweep.clone().ok_or_else(|| {
        CliError::Config(irs_sim::ConfigError::Key {
            line: None,
            key: "sweep".into(),
            message: "the config has no [sweep] section".into(),
        })
    })?;
    let recorded = cfg.manifest.unwrap_or(irs_sim::config::ManifestSettings {
        seed: None,
        trials: None,
    });
    let seed = seed.or(recorded.seed).unwrap_or(DEFAULT_SEED);
    let trials = trials.or(recorded.trials).unwrap_or(DEFAULT_TRIALS);
    if trials == 0 {
        return Err(CliError::Usage("--trials must be >= 1".into()));
    }
    let rows = sweep::run_sweep(&cfg, &spec, trials, seed)?;
    match out {
        None => {
            let stdout = io::stdout();
            sweep::write_csv(stdout.lock(), spec.variable, &rows)
                .map_err(|e| csv_err(Path::new("<stdout>"), e))?;
        }
        Some(path) => {
            sweep::write_csv(create(path)?, spec.variable, &rows).map_err(|e| csv_err(path, e))?;
            let info = RunInfo {
                seed,
                trials,
                command: std::env::args().collect::<Vec<_>>().join(" "),
            };
            let manifest_path = path.with_extension("manifest.toml");
            write_text(&manifest_path, &manifest::render(&cfg, &info))?;
            let csv_name = path
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_default();
            write_text(
                &path.with_extension("gp"),
                &plot::gnuplot_script(&spec, &csv_name),
            )?;
        }
    }
    Ok(())
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    let mut f = create(path)?;
    f.write_all(text.as_bytes())
        .and_then(|_| f.flush())
        .map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })
}
