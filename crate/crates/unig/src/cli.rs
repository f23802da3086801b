//! Argument surface and dispatch. Every training knob can also come from a
//! `--config` JSON file with the same key names; explicit flags win.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use crate::commands;
use crate::commands::sweep::SweepOverlay;
use crate::commands::synth::SynthRequest;
use crate::config::{read_overlay, RunOverlay};
use crate::error::CliError;
use crate::report::emit;
use crate::schema::LoadOptions;

#[derive(Debug, Parser)]
#[command(
    name = "unig",
    version,
    about = "Projection-encoder toolkit for node classification on graphs and hypergraphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Train across seeded splits and report per-split accuracies
    Train(TrainArgs),
    /// Search a hyperparameter grid, ranked by mean validation accuracy
    Sweep(SweepArgs),
    /// Clique-expansion edge homophily of a dataset file
    Homophily(HomophilyArgs),
    /// Grow 2-edges into rank-r hyperedges with label-guided sampling
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// JSON file with the same keys as the flags below
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Dataset JSON path
    #[arg(long)]
    pub dataset: Option<String>,
    /// Collapse duplicate edges instead of rejecting them
    #[arg(long)]
    pub dedupe: bool,
    /// Treat node indices in the file as starting at 1
    #[arg(long)]
    pub one_based: bool,
    /// uniform:TRAIN,VAL,TEST or per-class:TRAIN,VAL,TEST
    #[arg(long)]
    pub protocol: Option<String>,
    /// Number of independent splits
    #[arg(long)]
    pub splits: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub lr: Option<f64>,
    #[arg(long)]
    pub weight_decay: Option<f64>,
    #[arg(long)]
    pub dropout: Option<f64>,
    #[arg(long)]
    pub epochs: Option<usize>,
    /// Width of every hidden layer
    #[arg(long)]
    pub hidden: Option<usize>,
    /// Number of network layers
    #[arg(long)]
    pub layers: Option<usize>,
    /// none, full, or F,R projection stages
    #[arg(long)]
    pub placement: Option<String>,
    /// none, row-row, col-col, row-col, or col-row
    #[arg(long)]
    pub norm: Option<String>,
    /// Node-block weight c
    #[arg(long)]
    pub pv_weight: Option<f64>,
    /// constant or degree
    #[arg(long)]
    pub pv_weight_mode: Option<String>,
    /// Compound-operator applications (placement F,F only when above 1)
    #[arg(long)]
    pub hops: Option<usize>,
    /// Report path; stdout when omitted
    #[arg(long)]
    pub out: Option<String>,
}

impl TrainArgs {
    fn overlay(self) -> (Option<PathBuf>, RunOverlay) {
        let config = self.config;
        let overlay = RunOverlay {
            dataset: self.dataset,
            dedupe: self.dedupe.then_some(true),
            one_based: self.one_based.then_some(true),
            protocol: self.protocol,
            splits: self.splits,
            seed: self.seed,
            lr: self.lr,
            weight_decay: self.weight_decay,
            dropout: self.dropout,
            epochs: self.epochs,
            hidden: self.hidden,
            layers: self.layers,
            placement: self.placement,
            norm: self.norm,
            pv_weight: self.pv_weight,
            pv_weight_mode: self.pv_weight_mode,
            hops: self.hops,
            out: self.out,
        };
        (config, overlay)
    }
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// JSON file with the same keys as the flags below
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub dataset: Option<String>,
    #[arg(long)]
    pub dedupe: bool,
    #[arg(long)]
    pub one_based: bool,
    #[arg(long)]
    pub protocol: Option<String>,
    #[arg(long)]
    pub splits: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub epochs: Option<usize>,
    /// Seeded random subsample cap on the grid
    #[arg(long)]
    pub max_trials: Option<usize>,
    /// Candidate learning rates
    #[arg(long, value_delimiter = ',')]
    pub lrs: Option<Vec<f64>>,
    /// Candidate weight decays
    #[arg(long, value_delimiter = ',')]
    pub weight_decays: Option<Vec<f64>>,
    /// Candidate dropout rates
    #[arg(long, value_delimiter = ',')]
    pub dropouts: Option<Vec<f64>>,
    /// Candidate hidden widths
    #[arg(long, value_delimiter = ',')]
    pub hiddens: Option<Vec<usize>>,
    /// Candidate layer counts
    #[arg(long, value_delimiter = ',')]
    pub layer_counts: Option<Vec<usize>>,
    /// Candidate node-block weights
    #[arg(long, value_delimiter = ',')]
    pub pv_weights: Option<Vec<f64>>,
    /// Candidate weight modes (constant, degree)
    #[arg(long, value_delimiter = ',')]
    pub pv_weight_modes: Option<Vec<String>>,
    /// Candidate normalization variants
    #[arg(long, value_delimiter = ',')]
    pub norms: Option<Vec<String>>,
    /// Candidate placements (none, full, or F,R with F,R quoted)
    #[arg(long, value_delimiter = ';')]
    pub placements: Option<Vec<String>>,
    /// Report path; stdout when omitted
    #[arg(long)]
    pub out: Option<String>,
}

impl SweepArgs {
    fn overlay(self) -> (Option<PathBuf>, SweepOverlay) {
        let config = self.config;
        let overlay = SweepOverlay {
            dataset: self.dataset,
            dedupe: self.dedupe.then_some(true),
            one_based: self.one_based.then_some(true),
            protocol: self.protocol,
            splits: self.splits,
            seed: self.seed,
            epochs: self.epochs,
            max_trials: self.max_trials,
            out: self.out,
            lrs: self.lrs,
            weight_decays: self.weight_decays,
            dropouts: self.dropouts,
            hiddens: self.hiddens,
            layer_counts: self.layer_counts,
            pv_weights: self.pv_weights,
            pv_weight_modes: self.pv_weight_modes,
            norms: self.norms,
            placements: self.placements,
        };
        (config, overlay)
    }
}

#[derive(Debug, Args)]
pub struct HomophilyArgs {
    /// Dataset JSON path
    #[arg(long)]
    pub dataset: PathBuf,
    #[arg(long)]
    pub dedupe: bool,
    #[arg(long)]
    pub one_based: bool,
    /// Report path; stdout when omitted
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Graph dataset JSON path
    #[arg(long)]
    pub dataset: PathBuf,
    #[arg(long)]
    pub dedupe: bool,
    #[arg(long)]
    pub one_based: bool,
    /// Target hyperedge rank
    #[arg(long)]
    pub rank: usize,
    /// Chance of drawing each added node from the label-sharing pool
    #[arg(long)]
    pub probability: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output path for the grown hypergraph
    #[arg(long)]
    pub out: PathBuf,
    /// Also write the clique expansion of the grown hypergraph here
    #[arg(long)]
    pub expanded_out: Option<PathBuf>,
    /// Sidecar path; defaults to the output path with a .sidecar.json suffix
    #[arg(long)]
    pub sidecar: Option<PathBuf>,
}

/// Parses `args` and runs the selected command, returning the process exit
/// code: 0 on success, 1 for configuration and data errors, 2 when training
/// diverges.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Train(args) => {
            let (config, flags) = args.overlay();
            let overlay = match config {
                Some(path) => flags.over(read_overlay(&path)?),
                None => flags,
            };
            let (value, run) = commands::train::run(overlay)?;
            emit(&value, run.out.as_deref())
        }
        Command::Sweep(args) => {
            let (config, flags) = args.overlay();
            let overlay = match config {
                Some(path) => {
                    let text =
                        std::fs::read_to_string(&path).map_err(|source| CliError::ReadFile {
                            path: path.display().to_string(),
                            source,
                        })?;
                    let file: SweepOverlay =
                        serde_json::from_str(&text).map_err(|source| CliError::BadConfig {
                            path: path.display().to_string(),
                            source,
                        })?;
                    flags.over(file)
                }
                None => flags,
            };
            let (value, out) = commands::sweep::run(overlay)?;
            emit(&value, out.as_deref())
        }
        Command::Homophily(args) => {
            let load = LoadOptions {
                dedupe: args.dedupe,
                one_based: args.one_based,
            };
            let value = commands::homophily::run(&args.dataset, &load)?;
            emit(&value, args.out.as_deref())
        }
        Command::Synth(args) => {
            let request = SynthRequest {
                dataset: args.dataset,
                load: LoadOptions {
                    dedupe: args.dedupe,
                    one_based: args.one_based,
                },
                rank: args.rank,
                probability: args.probability,
                seed: args.seed,
                out: args.out,
                expanded_out: args.expanded_out,
                sidecar: args.sidecar,
            };
            let value = commands::synth::run(&request)?;
            emit(&value, None)
        }
    }
}

/// One `Value` helper shared by tests: parse canonical report text.
pub fn parse_report(text: &str) -> Value {
    serde_json::from_str(text).expect("report parses")
}
