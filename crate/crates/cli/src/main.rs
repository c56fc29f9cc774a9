use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qdet_cli::{run, CliError, Format, Result, RunOptions, SweepConfig, Target};

#[derive(Parser)]
#[command(name = "qdet", version, about = "Qubit-array single-photon detector model: sweeps and oracle checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Renormalized contrast over (theta, f_T)
    ContrastMap(ContrastMapArgs),
    /// Readout gain R versus qubit number M and entangled fraction k
    GainVsM(GainArgs),
    /// SNR for uncorrelated and correlated qubit registers
    SnrTable(SnrArgs),
    /// Compare the Fock-space oracle against the closed form
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Args)]
struct Common {
    /// JSON sweep config; built-in defaults fill anything it omits
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file (default: config output.path, else stdout)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Override any scalar, e.g. `--set eta=0.8` (repeatable)
    #[arg(long = "set", value_name = "KEY=VALUE", value_parser = parse_assignment)]
    set: Vec<(String, f64)>,
    /// Largest nearest-neighbour ring diagonalized exactly
    #[arg(long, env = "QDET_MAX_M", default_value_t = 14)]
    max_m: usize,
}

fn parse_assignment(s: &str) -> std::result::Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or("expected KEY=VALUE")?;
    let v = v.trim().parse::<f64>().map_err(|e| format!("{v}: {e}"))?;
    Ok((k.trim().to_string(), v))
}

#[derive(Args)]
struct ContrastMapArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long = "f-t")]
    f_t: Option<f64>,
    /// Reference efficiency for the contrast column
    #[arg(long)]
    eta: Option<f64>,
    /// Reference waveguide count N for the contrast column
    #[arg(long = "n-guides")]
    n_guides: Option<usize>,
}

#[derive(Args)]
struct GainArgs {
    #[command(flatten)]
    common: Common,
    /// Qubits per waveguide M
    #[arg(long)]
    qubits: Option<usize>,
    /// Entangled fraction k = M_E/M
    #[arg(long)]
    k: Option<f64>,
    /// Transverse field for the numeric endpoint
    #[arg(long)]
    lambda: Option<f64>,
}

#[derive(Args)]
struct SnrArgs {
    #[command(flatten)]
    common: Common,
    /// Single correlation mode (uncorrelated | giant_spin | partial | nn_ising)
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    qubits: Option<usize>,
    #[arg(long)]
    k: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long = "n-guides")]
    n_guides: Option<usize>,
    #[arg(long = "f-t")]
    f_t: Option<f64>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    /// Signal photon number n (0 or 1)
    #[arg(long)]
    photons: Option<u32>,
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long = "n-guides")]
    n_guides: Option<usize>,
    #[arg(long = "f-bar")]
    f_bar: Option<f64>,
    /// Fail when any |oracle − closed form| exceeds this
    #[arg(long)]
    tolerance: Option<f64>,
    /// Fock cutoff; 0 selects it per point
    #[arg(long)]
    cutoff: Option<usize>,
}

fn scalars(pairs: &[(&str, Option<f64>)]) -> Vec<(String, f64)> {
    pairs
        .iter()
        .filter_map(|(k, v)| v.map(|v| (k.to_string(), v)))
        .collect()
}

fn build(target: Target, common: &Common, flags: Vec<(String, f64)>) -> Result<SweepConfig> {
    let cfg = match &common.config {
        Some(path) => SweepConfig::load(path)?,
        None => SweepConfig::defaults(target),
    };
    if cfg.target != target {
        return Err(CliError::Config(format!(
            "config target is {}, this command runs {}",
            cfg.target.as_str(),
            target.as_str()
        )));
    }
    let mut cfg = cfg.with_defaults();
    for (k, v) in common.set.iter().cloned().chain(flags) {
        cfg.set_fixed(&k, v);
    }
    cfg.validate()?;
    Ok(cfg)
}

fn execute(cli: Cli) -> Result<()> {
    let (common, cfg) = match &cli.command {
        Command::ContrastMap(a) => {
            let flags = scalars(&[
                ("theta", a.theta),
                ("f_T", a.f_t),
                ("eta", a.eta),
                ("N", a.n_guides.map(|n| n as f64)),
            ]);
            (&a.common, build(Target::ContrastMap, &a.common, flags)?)
        }
        Command::GainVsM(a) => {
            let flags = scalars(&[
                ("M", a.qubits.map(|m| m as f64)),
                ("k", a.k),
                ("lambda", a.lambda),
            ]);
            (&a.common, build(Target::GainVsM, &a.common, flags)?)
        }
        Command::SnrTable(a) => {
            let flags = scalars(&[
                ("M", a.qubits.map(|m| m as f64)),
                ("k", a.k),
                ("lambda", a.lambda),
                ("delta", a.delta),
                ("theta", a.theta),
                ("eta", a.eta),
                ("N", a.n_guides.map(|n| n as f64)),
                ("f_T", a.f_t),
            ]);
            let mut cfg = build(Target::Snr, &a.common, flags)?;
            if let Some(mode) = &a.mode {
                cfg.grids
                    .insert("mode".into(), vec![qdet_cli::GridValue::Text(mode.clone())]);
            }
            (&a.common, cfg)
        }
        Command::Verify(a) => {
            let flags = scalars(&[
                ("n", a.photons.map(f64::from)),
                ("theta", a.theta),
                ("eta", a.eta),
                ("N", a.n_guides.map(|n| n as f64)),
                ("f_bar", a.f_bar),
                ("tolerance", a.tolerance),
                ("cutoff", a.cutoff.map(|d| d as f64)),
            ]);
            (&a.common, build(Target::Verify, &a.common, flags)?)
        }
    };

    let opts = RunOptions {
        max_chain_qubits: common.max_m,
    };
    let outcome = run(&cfg, &opts)?;
    let format = common.format.map(Format::from).unwrap_or(cfg.output.format);
    let bytes = outcome.dataset.to_bytes(format)?;
    match common.out.as_ref().or(cfg.output.path.as_ref()) {
        Some(path) => fs::write(path, &bytes)?,
        None => io::stdout().lock().write_all(&bytes)?,
    }

    let ds = &outcome.dataset;
    eprintln!(
        "{}: {} rows, {} warnings",
        cfg.target.as_str(),
        ds.rows.len(),
        ds.warnings.len()
    );
    for w in ds.warnings.iter().take(5) {
        eprintln!("  warning: {w}");
    }
    if let Some(report) = &outcome.verify {
        eprintln!("{}", report.summary());
        report.status()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
