use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "obliq", version, about = "Private database queries under limited coherence time")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Walk through the single-bit exchange.
    Demo(DemoArgs),
    /// Run one protocol session and write its transcript.
    Session(SessionArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Search for the most informative measurement over a (k, m) grid.
    Scan(ScanArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Honest,
    Invert,
    Parity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Entropic,
    Povm,
    Concentration,
    Hk,
    Honest,
}

#[derive(Debug, Args)]
pub struct DemoArgs {
    /// Database as hex, item 0 first.
    #[arg(long, default_value = "01")]
    pub db: String,
    #[arg(long, default_value_t = 0)]
    pub choice: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SessionArgs {
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    /// walsh, mub, cyclic, random, tensorized or explicit.
    #[arg(long, default_value = "explicit")]
    pub family: String,
    /// Base dimension for the tensorized family.
    #[arg(long, default_value_t = 2)]
    pub r: usize,
    #[arg(long)]
    pub db: String,
    #[arg(long, default_value_t = 0)]
    pub choice: usize,
    #[arg(long, value_enum, default_value_t = StrategyArg::Honest)]
    pub strategy: StrategyArg,
    /// Encoding guessed by the invert strategy.
    #[arg(long, default_value_t = 0)]
    pub guess: usize,
    /// XOR share rounds (k = 2).
    #[arg(long, default_value_t = 1)]
    pub rounds: usize,
    /// Mask items with a random GF(2^m) affine map (k = 2).
    #[arg(long)]
    pub mask: bool,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Encoding count for the povm and hk suites (default 2).
    #[arg(long)]
    pub k: Option<usize>,
    /// Item width for the povm and hk suites (default 1); largest width
    /// for the honest suite (default 3).
    #[arg(long)]
    pub m: Option<usize>,
    /// Dimension for the entropic suite (default: 2, 4 and 8).
    #[arg(long)]
    pub dim: Option<usize>,
    /// Dimension for the concentration suite (default: 16, 64 and 256).
    #[arg(long)]
    pub ell: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    /// Inclusive range `a..b`, list `a,b`, or single value.
    #[arg(long, default_value = "2..4")]
    pub k: String,
    #[arg(long, default_value = "1..2")]
    pub m: String,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub restarts: Option<usize>,
    #[arg(long)]
    pub iters: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
