use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod inputs;

use inputs::CliError;

#[derive(Parser, Debug)]
#[command(name = "multicurve-pricer", version, about = "Multi-curve bootstrapping, basis, quanto, pricing and risk reports")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the discounting and forwarding curves from quote files.
    Bootstrap(BootstrapArgs),
    /// Daily forward basis term structure between a forwarding curve and the discounting curve.
    Basis(BasisArgs),
    /// Quanto adjustment scenario grid over correlation.
    Quanto(QuantoArgs),
    /// Price a portfolio.
    Price(PriceArgs),
    /// Delta ladder, hedge ratios and residual of a portfolio.
    Risk(RiskArgs),
    /// Write the synthetic EUR-like quote set and the demo hedging files.
    Synth(SynthArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Interp {
    Cubic,
    Linzero,
    Loglinear,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Mapping {
    Linear,
    Nearest,
}

/// Where the curves come from.
#[derive(Args, Debug, Clone)]
pub struct CurveSource {
    /// Quote files as `label=path` (label: discount, 1M, 3M, 6M, 12M), or
    /// a directory holding `discount.csv`, `fwd_3M.csv`, ...
    #[arg(long = "quotes", value_name = "LABEL=PATH|DIR")]
    pub quotes: Vec<String>,
    /// Curve JSON files or a directory of them.
    #[arg(long = "curves", value_name = "PATH", conflicts_with = "quotes")]
    pub curves: Vec<PathBuf>,
    /// Interpolation scheme; overrides the one stored in curve files.
    #[arg(long, value_enum)]
    pub interp: Option<Interp>,
    /// Curve reference date (YYYY-MM-DD) when bootstrapping.
    #[arg(long = "ref-date")]
    pub ref_date: Option<String>,
}

#[derive(Args, Debug)]
pub struct BootstrapArgs {
    #[arg(long = "quotes", value_name = "LABEL=PATH|DIR", required = true)]
    pub quotes: Vec<String>,
    #[arg(long, value_enum)]
    pub interp: Option<Interp>,
    #[arg(long = "ref-date")]
    pub ref_date: Option<String>,
    /// Output directory for the curve files and the residual log.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct BasisArgs {
    #[command(flatten)]
    pub source: CurveSource,
    /// Forwarding curve label.
    #[arg(long, default_value = "fwd_3M")]
    pub curve: String,
    /// Rolling tenor in months; defaults to the curve's own tenor.
    #[arg(long)]
    pub tenor: Option<i32>,
    #[arg(long = "step-days", default_value_t = 1)]
    pub step_days: i32,
    /// Rebuild the curves under a second scheme and add its columns
    /// (needs --quotes).
    #[arg(long, value_enum)]
    pub compare: Option<Interp>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct QuantoArgs {
    /// Volatility pairs `sigma_f:sigma_X`, comma separated.
    #[arg(long, default_value = "0.1:0.1,0.2:0.2,0.3:0.2")]
    pub vols: String,
    /// Number of correlation steps across [-1, 1].
    #[arg(long = "rho-steps", default_value_t = 20)]
    pub rho_steps: u32,
    #[arg(long, default_value_t = 0.04)]
    pub forward: f64,
    /// Accrual horizon in years.
    #[arg(long, default_value_t = 0.5)]
    pub dt: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PriceArgs {
    #[command(flatten)]
    pub source: CurveSource,
    /// Portfolio JSON.
    #[arg(long)]
    pub portfolio: PathBuf,
    /// Price everything off the discounting curve.
    #[arg(long = "single-curve")]
    pub single_curve: bool,
    /// Put the drift integral into the Black moneyness terms as well.
    #[arg(long = "paper-literal-black")]
    pub paper_literal_black: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct RiskArgs {
    #[arg(long = "quotes", value_name = "LABEL=PATH|DIR", required = true)]
    pub quotes: Vec<String>,
    #[arg(long, value_enum)]
    pub interp: Option<Interp>,
    #[arg(long = "ref-date")]
    pub ref_date: Option<String>,
    #[arg(long)]
    pub portfolio: PathBuf,
    /// Hedge instruments JSON; defaults to the bootstrapping instruments.
    #[arg(long)]
    pub hedges: Option<PathBuf>,
    #[arg(long = "bump-bp", default_value_t = 1.0)]
    pub bump_bp: f64,
    #[arg(long, value_enum, default_value = "linear")]
    pub mapping: Mapping,
    /// Accept ladder mass on curves without hedges (reported, not hedged).
    #[arg(long = "allow-unmapped")]
    pub allow_unmapped: bool,
    #[arg(long = "single-curve")]
    pub single_curve: bool,
    #[arg(long = "paper-literal-black")]
    pub paper_literal_black: bool,
    /// Output directory for ladder.csv and hedges.csv.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct SynthArgs {
    #[arg(long = "ref-date")]
    pub ref_date: Option<String>,
    /// Quote the discounting curve with OIS instead of deposits, futures and 6M swaps.
    #[arg(long)]
    pub ois: bool,
    #[arg(long)]
    pub out: PathBuf,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let first = e.to_string().lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ").to_string();
            eprintln!("{}", CliError::input("usage", first).line());
            eprintln!("{}", e.render());
            return ExitCode::from(2);
        }
    };
    let result = match cli.command {
        Command::Bootstrap(a) => commands::bootstrap(&a),
        Command::Basis(a) => commands::basis(&a),
        Command::Quanto(a) => commands::quanto(&a),
        Command::Price(a) => commands::price(&a),
        Command::Risk(a) => commands::risk(&a),
        Command::Synth(a) => commands::synth(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.line());
            ExitCode::from(e.code)
        }
    }
}
