//! fpmine: frequent-pattern mining from the command line.
//!
//! Subcommands: `mine` (exact or classifier-guided mining), `bench`
//! (five-model metric comparison), `curve` (per-iteration confidence
//! trajectories), `noise` (robustness sweep), `convert` (categorical CSV
//! to FIMI). Every subcommand is deterministic given its flags including
//! `--seed`; output files are byte-identical across repeated runs.
//!
//! Exit codes: 0 success, 2 input/data error, 3 configuration error.

mod commands;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use fpmine::error::Error;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "fpmine", version, about = "Frequent-pattern mining toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Mine frequent itemsets with an exact or classifier-guided algorithm.
    Mine(MineArgs),
    /// Compare apriori, fpgrowth, dt, rf and svm on one database.
    Bench(BenchArgs),
    /// Emit confidence-vs-iteration curves for every model group.
    Curve(CurveArgs),
    /// Noise-robustness sweep over label and transaction perturbations.
    Noise(NoiseArgs),
    /// Convert a categorical CSV into FIMI transactions plus an id map.
    Convert(ConvertArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputFormat {
    Fimi,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Apriori,
    Fpgrowth,
    Svm,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KernelKind {
    Rbf,
    Linear,
    Poly,
}

#[derive(Args)]
pub struct InputArgs {
    /// Input file path.
    #[arg(long)]
    pub input: String,
    /// Input format.
    #[arg(long, value_enum, default_value = "fimi")]
    pub format: InputFormat,
    /// CSV delimiter (single character).
    #[arg(long, default_value = ",")]
    pub delimiter: char,
    /// CSV columns to drop, comma-separated indices (e.g. "0,22").
    #[arg(long, value_delimiter = ',')]
    pub drop_columns: Vec<usize>,
}

#[derive(Args)]
pub struct SvmArgs {
    /// Kernel for the SVM pipeline.
    #[arg(long, value_enum, default_value = "rbf")]
    pub kernel: KernelKind,
    /// rbf bandwidth; defaults to 1/dimension.
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Soft-margin penalty C.
    #[arg(long, default_value_t = 1.0)]
    pub cost: f64,
    /// Polynomial degree.
    #[arg(long, default_value_t = 3)]
    pub degree: u32,
    /// Polynomial scale.
    #[arg(long, default_value_t = 1.0)]
    pub poly_scale: f64,
    /// Polynomial additive constant.
    #[arg(long, default_value_t = 1.0)]
    pub coef0: f64,
    /// KKT tolerance.
    #[arg(long, default_value_t = 1e-3)]
    pub svm_tol: f64,
    /// Max optimization passes without progress.
    #[arg(long, default_value_t = 200)]
    pub svm_max_passes: usize,
}

#[derive(Args)]
pub struct TreeArgs {
    #[arg(long, default_value_t = 12)]
    pub max_depth: usize,
    #[arg(long, default_value_t = 2)]
    pub min_samples_split: usize,
}

#[derive(Args)]
pub struct ForestArgs {
    #[arg(long, default_value_t = 50)]
    pub n_trees: usize,
    /// Disable bootstrap resampling.
    #[arg(long)]
    pub no_bootstrap: bool,
    /// Candidate features per split: "sqrt" or a positive integer.
    #[arg(long, default_value = "sqrt")]
    pub features_per_split: String,
}

#[derive(Args)]
pub struct EncoderArgs {
    /// Indicator slots for the top-M frequent items.
    #[arg(long, default_value_t = 16)]
    pub m_indicators: usize,
    /// Drop the statistical feature block.
    #[arg(long)]
    pub no_stats: bool,
    /// Transaction fraction behind the sampled-support feature.
    #[arg(long, default_value_t = 0.25)]
    pub sample_fraction: f64,
}

#[derive(Args)]
pub struct PipelineArgs {
    /// Transaction fraction used to build exact training labels.
    #[arg(long, default_value_t = 0.5)]
    pub train_fraction: f64,
    /// Training candidates are enumerated at minsup * relax-factor.
    #[arg(long, default_value_t = 0.5)]
    pub relax_factor: f64,
    /// Skip exact verification of accepted candidates (output may then
    /// contain false positives).
    #[arg(long)]
    pub no_verify: bool,
}

#[derive(Args)]
pub struct MineArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Mining algorithm.
    #[arg(long, value_enum, default_value = "apriori")]
    pub algo: Algo,
    /// Minimum relative support in (0, 1].
    #[arg(long)]
    pub minsup: f64,
    /// Cap on itemset cardinality.
    #[arg(long)]
    pub max_len: Option<usize>,
    /// Itemset output file (FIMI convention: items, then "#SUP:" count).
    #[arg(long)]
    pub output: String,
    /// Also extract association rules to this CSV.
    #[arg(long)]
    pub rules_output: Option<String>,
    /// Minimum confidence for extracted rules.
    #[arg(long, default_value_t = 0.5)]
    pub minconf: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Print the report as JSON.
    #[arg(long)]
    pub json: bool,
    #[command(flatten)]
    pub pipeline: PipelineArgs,
    #[command(flatten)]
    pub svm: SvmArgs,
    #[command(flatten)]
    pub encoder: EncoderArgs,
}

#[derive(Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub minsup: f64,
    #[arg(long, default_value_t = 0.5)]
    pub minconf: f64,
    #[arg(long, default_value_t = 20)]
    pub top_k: usize,
    #[arg(long)]
    pub max_len: Option<usize>,
    /// Output CSV (model,support,confidence,lift).
    #[arg(long)]
    pub output: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub json: bool,
    #[command(flatten)]
    pub pipeline: PipelineArgs,
    #[command(flatten)]
    pub svm: SvmArgs,
    #[command(flatten)]
    pub tree: TreeArgs,
    #[command(flatten)]
    pub forest: ForestArgs,
    #[command(flatten)]
    pub encoder: EncoderArgs,
}

#[derive(Args)]
pub struct CurveArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub minsup: f64,
    #[arg(long, default_value_t = 0.0)]
    pub minconf: f64,
    #[arg(long, default_value_t = 20)]
    pub top_k: usize,
    #[arg(long)]
    pub max_len: Option<usize>,
    /// Output CSV (model,iteration,confidence).
    #[arg(long)]
    pub output: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub json: bool,
    #[command(flatten)]
    pub pipeline: PipelineArgs,
    #[command(flatten)]
    pub svm: SvmArgs,
    #[command(flatten)]
    pub tree: TreeArgs,
    #[command(flatten)]
    pub forest: ForestArgs,
    #[command(flatten)]
    pub encoder: EncoderArgs,
}

#[derive(Args)]
pub struct NoiseArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub minsup: f64,
    #[arg(long, default_value_t = 0.5)]
    pub minconf: f64,
    #[arg(long, default_value_t = 20)]
    pub top_k: usize,
    #[arg(long)]
    pub max_len: Option<usize>,
    /// Noise levels, ascending and starting at 0.
    #[arg(long, value_delimiter = ',', default_values_t = [0.0, 0.05, 0.10, 0.20])]
    pub levels: Vec<f64>,
    #[arg(long, default_value_t = 10)]
    pub n_seeds: usize,
    /// Per-cell CSV output (level,seed,support,confidence,lift,f1).
    #[arg(long)]
    pub out_cells: String,
    /// Per-level aggregated CSV output.
    #[arg(long)]
    pub out_summary: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub json: bool,
    #[command(flatten)]
    pub pipeline: PipelineArgs,
    #[command(flatten)]
    pub svm: SvmArgs,
    #[command(flatten)]
    pub encoder: EncoderArgs,
}

#[derive(Args)]
pub struct ConvertArgs {
    /// Input categorical CSV.
    #[arg(long)]
    pub input: String,
    #[arg(long, default_value = ",")]
    pub delimiter: char,
    #[arg(long, value_delimiter = ',')]
    pub drop_columns: Vec<usize>,
    /// Output FIMI file.
    #[arg(long)]
    pub output: String,
    /// Id-map sidecar path; defaults to the output path plus ".items".
    #[arg(long)]
    pub map: Option<String>,
    #[arg(long)]
    pub json: bool,
}

/// 0 success, 2 input/data error, 3 configuration error.
fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::InvalidConfig(_)
        | Error::UniverseTooLarge { .. }
        | Error::SingleClassTrainingSet
        | Error::DimensionMismatch { .. } => 3,
        Error::FimiParse { .. }
        | Error::RaggedRow { .. }
        | Error::EmptyDatabase
        | Error::ItemOutOfUniverse { .. }
        | Error::NonFinite(_)
        | Error::UndefinedRule(_)
        | Error::EmptyRuleList
        | Error::EmptyHeldOut
        | Error::ModelFormat(_)
        | Error::Io(_) => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 3,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };

    let result = match cli.command {
        Command::Mine(args) => commands::mine(&args),
        Command::Bench(args) => commands::bench(&args),
        Command::Curve(args) => commands::curve(&args),
        Command::Noise(args) => commands::noise(&args),
        Command::Convert(args) => commands::convert(&args),
    };

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
