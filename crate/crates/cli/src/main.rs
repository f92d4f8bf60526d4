use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fueterlab_cli::{execute, CliError, Command, Format, RunConfig};

#[derive(Parser)]
#[command(name = "fueterlab", version, about = "Quaternionic kernels, instantons and argument principles")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
    /// TOML configuration; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (overrides FUETERLAB_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Suite criteria whose name contains this string.
    #[arg(long, global = true)]
    filter: Option<String>,
    #[arg(long, global = true)]
    epsilon: Option<f64>,
    /// Sphere resolution, one value for all three angles.
    #[arg(long, global = true)]
    resolution: Option<usize>,
    #[arg(long = "truncation-k", global = true)]
    truncation_k: Option<usize>,
    /// Simpson nodes per axis for the volume route.
    #[arg(long, global = true)]
    grid: Option<usize>,
    /// Half-width of the integration box.
    #[arg(long = "box", global = true)]
    box_half: Option<f64>,
    /// Record wall time (makes output non-reproducible).
    #[arg(long, global = true)]
    timings: bool,
    /// Reduced suite sizes.
    #[arg(long, global = true)]
    quick: bool,
}

#[derive(Subcommand, Clone, Copy)]
enum Sub {
    /// Evaluate a field on points or a line scan.
    Kernel,
    /// Self-duality statistics of the induced potential.
    Selfdual,
    /// Second Chern number of a pole configuration.
    Chern,
    /// Order of a zero by the argument principle.
    Ord,
    /// Run the acceptance suite.
    Suite,
}

#[derive(ValueEnum, Clone, Copy)]
enum FormatArg {
    Json,
    Csv,
}

fn effective_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut c = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    c.command = match cli.command {
        Sub::Kernel => Command::Kernel,
        Sub::Selfdual => Command::Selfdual,
        Sub::Chern => Command::Chern,
        Sub::Ord => Command::Ord,
        Sub::Suite => Command::Suite,
    };
    if let Some(o) = &cli.out {
        c.out = Some(o.clone());
    }
    if let Some(f) = cli.format {
        c.format = match f {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        };
    }
    if let Some(s) = cli.seed {
        c.seed = s;
    }
    if cli.threads.is_some() {
        c.threads = cli.threads;
    }
    if cli.filter.is_some() {
        c.filter = cli.filter.clone();
    }
    if let Some(e) = cli.epsilon {
        c.contour.epsilon = e;
    }
    if let Some(r) = cli.resolution {
        c.contour.resolution = [r; 3];
    }
    if let Some(k) = cli.truncation_k {
        c.ord.truncation_k = k;
    }
    if let Some(g) = cli.grid {
        c.grid.nodes = g;
    }
    if let Some(b) = cli.box_half {
        c.grid.box_half = b;
    }
    c.timings |= cli.timings;
    c.quick |= cli.quick;
    Ok(c)
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let config = effective_config(cli)?;
    let record = execute(&config)?;
    let text = record.render(config.format);
    match &config.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    for w in &record.warnings {
        eprintln!("warning: {w}");
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
