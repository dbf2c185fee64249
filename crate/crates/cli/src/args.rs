use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "juoan2", version, about = "JUOAN2 knapsack cryptosystem and cryptanalysis workbench")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a key pair and write <base>.pub and <base>.prv.
    Keygen(KeygenArgs),
    /// Encrypt a file, or a single raw block with --block.
    Encrypt(EncryptArgs),
    /// Decrypt a ciphertext file, or a single block value with --block.
    Decrypt(DecryptArgs),
    /// Report knapsack density and its attack classification.
    Density(DensityArgs),
    /// Run the lattice attack on a ciphertext or a synthetic experiment.
    Attack(AttackArgs),
    /// Enumerate every anomalous-sum pattern hitting a value.
    Oracle(OracleArgs),
    /// Replay a published test vector.
    Vectors(VectorsArgs),
}

#[derive(Debug, Args)]
pub struct KeygenArgs {
    /// Payload bits per block (even, at least 4).
    #[arg(short = 'n', value_name = "BITS")]
    pub n: usize,
    /// Hex RNG seed, up to 32 bytes.
    #[arg(long)]
    pub seed: Option<String>,
    /// Output path prefix.
    #[arg(short = 'o', value_name = "BASE")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EncryptArgs {
    #[arg(long = "pub", value_name = "FILE")]
    pub public: PathBuf,
    #[arg(long = "in", value_name = "FILE", required_unless_present = "block", conflicts_with = "block")]
    pub input: Option<PathBuf>,
    #[arg(long, value_name = "FILE", requires = "input")]
    pub out: Option<PathBuf>,
    /// Full ñ-bit block as a 0/1 string; prints the ciphertext value.
    #[arg(long, value_name = "BITS")]
    pub block: Option<String>,
    /// Noise vector for --block; random when absent.
    #[arg(long, value_name = "BITS", requires = "block")]
    pub noise: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
}

#[derive(Debug, Args)]
pub struct DecryptArgs {
    #[arg(long = "prv", value_name = "FILE")]
    pub private: PathBuf,
    #[arg(long = "in", value_name = "FILE", required_unless_present = "block", conflicts_with = "block")]
    pub input: Option<PathBuf>,
    #[arg(long, value_name = "FILE", requires = "input")]
    pub out: Option<PathBuf>,
    /// Decimal ciphertext value of one block.
    #[arg(long, value_name = "S")]
    pub block: Option<String>,
    /// Scan the full k range and list every candidate.
    #[arg(long)]
    pub audit: bool,
    /// Worker threads for the k-scan.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    pub jobs: u16,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("kind").required(true).args(["assp", "ssp"]))]
pub struct DensityArgs {
    #[arg(long)]
    pub assp: bool,
    #[arg(long)]
    pub ssp: bool,
    #[arg(short = 'n', value_name = "N")]
    pub n: usize,
    /// lg M for --assp, lg max weight for --ssp.
    #[arg(long = "lgM", value_name = "BITS")]
    pub lg_m: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExperimentKind {
    /// Planted modular subset sums.
    Ssp,
    /// Genuine ciphertexts under fresh keys.
    Assp,
}

#[derive(Debug, Args)]
pub struct AttackArgs {
    #[arg(long = "pub", value_name = "FILE", required_unless_present = "experiment", conflicts_with = "experiment")]
    pub public: Option<PathBuf>,
    #[arg(long, value_name = "FILE", requires = "public")]
    pub ct: Option<PathBuf>,
    /// Lattice reductions per instance, each on a fresh random ordering.
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
    #[arg(long, value_enum)]
    pub experiment: Option<ExperimentKind>,
    /// Variables for ssp, payload bits for assp.
    #[arg(short = 'n', default_value_t = 20)]
    pub n: usize,
    #[arg(long, default_value_t = 0.5)]
    pub density: f64,
    #[arg(long, default_value_t = 50)]
    pub instances: usize,
    #[arg(long, value_name = "FILE")]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<String>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long = "pub", value_name = "FILE")]
    pub public: PathBuf,
    /// Decimal target value.
    #[arg(long = "S", value_name = "DECIMAL")]
    pub target: String,
}

#[derive(Debug, Args)]
pub struct VectorsArgs {
    #[arg(value_enum)]
    pub set: VectorSet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VectorSet {
    AppendixA,
}
