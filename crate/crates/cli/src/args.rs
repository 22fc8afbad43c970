use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use netsteg::Algorithm;

#[derive(Debug, Parser)]
#[command(name = "netsteg", version, about = "Hide messages in graph edge lists")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Edge-type histogram and payload capacity of a cover.
    Capacity(CapacityArgs),
    /// Hide a message in the row order of a cover edge list.
    Encode(EncodeArgs),
    /// Recover a message from a reordered edge list.
    Decode(DecodeArgs),
    /// Synthesize a stego edge list from a message (BYNIS).
    Synthesize(SynthesizeArgs),
    /// Recover a message from a synthesized edge list.
    Extract(ExtractArgs),
    /// Monte Carlo encoding success rates over a grid of message sizes.
    Simulate(SimulateArgs),
    /// Two-sample Kolmogorov-Smirnov test on the degree sequences of two edge lists.
    CompareDegrees(CompareArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlgoArg {
    Bind,
    Bymond,
}

impl From<AlgoArg> for Algorithm {
    fn from(a: AlgoArg) -> Self {
        match a {
            AlgoArg::Bind => Algorithm::Bind,
            AlgoArg::Bymond => Algorithm::Bymond,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Args)]
pub struct CsvArgs {
    /// Field delimiter of edge-list files: a single character, or `tab`.
    #[arg(long, default_value = ",")]
    pub delimiter: String,
    /// Edge-list files start with a header line.
    #[arg(long)]
    pub header: bool,
}

#[derive(Debug, Args)]
pub struct PasswordArgs {
    /// Password for the edge permutation.
    #[arg(long, env = "NETSTEG_PASSWORD", hide_env_values = true)]
    pub password: Option<String>,
}

#[derive(Debug, Args)]
pub struct CapacityArgs {
    #[arg(long, value_enum)]
    pub algo: AlgoArg,
    #[arg(long)]
    pub cover: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub csv: CsvArgs,
}

#[derive(Debug, Args)]
pub struct EncodeArgs {
    #[arg(long, value_enum)]
    pub algo: AlgoArg,
    #[arg(long)]
    pub cover: PathBuf,
    /// File holding the message bytes.
    #[arg(long = "msg", visible_alias = "message")]
    pub message: PathBuf,
    /// Stego edge list; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Skip the 32-bit length header; the receiver must pass `--length`.
    #[arg(long)]
    pub unframed: bool,
    #[command(flatten)]
    pub password: PasswordArgs,
    #[command(flatten)]
    pub csv: CsvArgs,
}

#[derive(Debug, Args)]
pub struct DecodeArgs {
    #[arg(long, value_enum)]
    pub algo: AlgoArg,
    #[arg(long)]
    pub stego: PathBuf,
    /// Recovered message; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Message length in bytes, for stego lists written with `--unframed`.
    #[arg(long)]
    pub length: Option<usize>,
    #[command(flatten)]
    pub password: PasswordArgs,
    #[command(flatten)]
    pub csv: CsvArgs,
}

#[derive(Debug, Args)]
pub struct SynthesizeArgs {
    /// File holding the message bytes.
    #[arg(long = "msg", visible_alias = "message")]
    pub message: PathBuf,
    /// Reference degrees: a file with one integer per line, or
    /// `ba:n=<nodes>,m=<edges per node>,seed=<seed>`.
    #[arg(long = "ref")]
    pub reference: String,
    #[arg(long, default_value_t = netsteg::bynis::DEFAULT_BIAS)]
    pub bias: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value = ",")]
    pub delimiter: String,
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    #[arg(long)]
    pub stego: PathBuf,
    #[arg(long, default_value_t = netsteg::bynis::DEFAULT_BIAS)]
    pub bias: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub csv: CsvArgs,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    pub algo: AlgoArg,
    #[arg(long)]
    pub cover: PathBuf,
    /// Ratios of message size to estimated capacity: `start:end:step` or a
    /// comma-separated list.
    #[arg(long, default_value = "0.7:1.0:0.05")]
    pub r: String,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Include the codec's 32-bit length header in every message.
    #[arg(long)]
    pub framed: bool,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub csv: CsvArgs,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long)]
    pub a: PathBuf,
    #[arg(long)]
    pub b: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub csv: CsvArgs,
}
