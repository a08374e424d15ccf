use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::format::parse_list;

/// Default seed for every randomized check.
pub const DEFAULT_RNG_SEED: u64 = 2024;

#[derive(Debug, Parser)]
#[command(name = "tetradigit", version, about = "Tetradigit codes: models, preparation circuits and verification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Stabilizer counts, commutation, GSD, redundancies and seeds of a model.
    Model(ModelCmd),
    /// Write the preparation circuit in the text format.
    Synth(SynthCmd),
    /// Run a preparation circuit and check the prepared state.
    Verify(VerifyCmd),
    /// Seed finding for a CSS code given as G_X / G_Z files.
    Css(CssCmd),
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// TD parameters `d_n,d_s,d_l,D`.
    #[arg(long, value_parser = parse_td)]
    pub td: [usize; 4],
    /// Lattice sizes `L_1,...,L_D`.
    #[arg(long, value_delimiter = ',', required = true)]
    pub dims: Vec<u32>,
    /// Open directions, 1-based. An open direction of size L keeps L-1 cells.
    #[arg(long, value_delimiter = ',', value_parser = clap::value_parser!(u16).range(1..))]
    pub open: Vec<u16>,
}

#[derive(Debug, Args)]
pub struct ModelCmd {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Write gx.txt, gz.txt, plan.json and model.json here.
    #[arg(long)]
    pub export_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SynthCmd {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Prefix an entangler and U_g: `ghz`, `ghz-tree`, `basis:<bits>` or `custom:<file>`.
    #[arg(long, value_parser = parse_seeds)]
    pub seeds: Option<SeedArg>,
    /// Circuit output path; stdout when absent, with the report on stderr.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyCmd {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Seed state: `ghz`, `ghz-tree`, `basis:<bits>`, `custom:<file>` or `random`.
    #[arg(long, value_parser = parse_seeds)]
    pub seeds: Option<SeedArg>,
    /// Verify this circuit file instead of the synthesized one.
    #[arg(long)]
    pub circuit: Option<PathBuf>,
    /// Also run the dense state-vector oracle.
    #[arg(long)]
    pub oracle: bool,
    /// Largest qubit count the oracle accepts.
    #[arg(long, default_value_t = tetradigit_core::oracle::DEFAULT_QUBIT_CAP)]
    pub oracle_cap: usize,
    /// Number of patterns drawn by `--seeds random`.
    #[arg(long, default_value_t = 8)]
    pub patterns: usize,
    #[arg(long, default_value_t = DEFAULT_RNG_SEED)]
    pub rng_seed: u64,
}

#[derive(Debug, Args)]
pub struct CssCmd {
    #[arg(long)]
    pub gx: PathBuf,
    #[arg(long)]
    pub gz: PathBuf,
    /// JSON `{"representatives": [...], "order": [...]}`; greedy when absent.
    #[arg(long)]
    pub plan: Option<PathBuf>,
    /// Also check basis patterns against the dense oracle.
    #[arg(long)]
    pub oracle: bool,
    #[arg(long, default_value_t = tetradigit_core::oracle::DEFAULT_QUBIT_CAP)]
    pub oracle_cap: usize,
    #[arg(long, default_value_t = DEFAULT_RNG_SEED)]
    pub rng_seed: u64,
    /// Write the report here as well as to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeedArg {
    Ghz,
    GhzTree,
    Basis(Vec<bool>),
    Custom(PathBuf),
    Random,
}

fn parse_td(s: &str) -> Result<[usize; 4], String> {
    let v: Vec<usize> = parse_list(s).ok_or("expected four comma-separated integers")?;
    v.try_into().map_err(|_| "expected four comma-separated integers".to_string())
}

pub fn parse_seeds(s: &str) -> Result<SeedArg, String> {
    match s {
        "ghz" => return Ok(SeedArg::Ghz),
        "ghz-tree" => return Ok(SeedArg::GhzTree),
        "random" => return Ok(SeedArg::Random),
        _ => {}
    }
    if let Some(bits) = s.strip_prefix("basis:") {
        return bits
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(format!("basis pattern must be 0/1, got `{c}`")),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(SeedArg::Basis);
    }
    if let Some(path) = s.strip_prefix("custom:") {
        return Ok(SeedArg::Custom(PathBuf::from(path)));
    }
    Err(format!("unknown seed state `{s}`"))
}
