//! `sweep`: evaluate a hyperparameter grid (or a seeded subsample of it),
//! rank trials by mean validation accuracy, and rerun the winner for the
//! final report. Trials run in parallel up to UNIG_THREADS, but the
//! leaderboard is assembled in grid order, so the output is identical
//! regardless of scheduling.

use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use unig_core::{derive_seed, Dataset, NnError, Placement, ProjectionConfig, SplitSpec, TrainConfig};

use crate::config::{
    parse_normalization, parse_placement, parse_protocol, parse_weight_mode, ResolvedRun,
};
use crate::error::CliError;
use crate::report::canonical_json;
use crate::schema::{load_dataset, LoadOptions};

use super::train::{execute, results_value};
use super::{dataset_summary, placement_name};

/// Partial sweep configuration; `None` means "not specified at this layer".
/// List fields are candidate grids, scalar fields apply to every trial.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepOverlay {
    pub dataset: Option<String>,
    pub dedupe: Option<bool>,
    pub one_based: Option<bool>,
    pub protocol: Option<String>,
    pub splits: Option<usize>,
    pub seed: Option<u64>,
    pub epochs: Option<usize>,
    pub max_trials: Option<usize>,
    pub out: Option<String>,
    pub lrs: Option<Vec<f64>>,
    pub weight_decays: Option<Vec<f64>>,
    pub dropouts: Option<Vec<f64>>,
    pub hiddens: Option<Vec<usize>>,
    pub layer_counts: Option<Vec<usize>>,
    pub pv_weights: Option<Vec<f64>>,
    pub pv_weight_modes: Option<Vec<String>>,
    pub norms: Option<Vec<String>>,
    pub placements: Option<Vec<String>>,
}

macro_rules! take_first {
    ($high:expr, $low:expr, $($field:ident),+ $(,)?) => {{
        SweepOverlay {
            $($field: $high.$field.or($low.$field),)+
        }
    }};
}

impl SweepOverlay {
    pub fn over(self, file: SweepOverlay) -> SweepOverlay {
        take_first!(
            self, file, dataset, dedupe, one_based, protocol, splits, seed, epochs, max_trials,
            out, lrs, weight_decays, dropouts, hiddens, layer_counts, pv_weights, pv_weight_modes,
            norms, placements,
        )
    }
}

struct ResolvedSweep {
    dataset: PathBuf,
    load: LoadOptions,
    protocol_text: String,
    split_spec: SplitSpec,
    epochs: usize,
    seed: u64,
    max_trials: Option<usize>,
    out: Option<PathBuf>,
}

/// One grid point; placement is already parsed against its layer count.
#[derive(Debug, Clone)]
struct Trial {
    lr: f64,
    weight_decay: f64,
    dropout: f64,
    hidden: usize,
    layers: usize,
    placement: Placement,
    projection: Option<ProjectionConfig>,
}

struct TrialResult {
    mean_val_accuracy: Option<f64>,
    mean_test_accuracy: Option<f64>,
    std_test_accuracy: Option<f64>,
    diverged: bool,
}

fn nonempty<T>(list: Vec<T>, flag: &'static str) -> Result<Vec<T>, CliError> {
    if list.is_empty() {
        return Err(CliError::BadFlag {
            flag,
            value: String::new(),
            expected: "a non-empty list of candidates",
        });
    }
    Ok(list)
}

pub fn run(overlay: SweepOverlay) -> Result<(Value, Option<PathBuf>), CliError> {
    let protocol_text = overlay
        .protocol
        .unwrap_or_else(|| "per-class:0.48,0.32,0.2".to_string());
    let seed = overlay.seed.unwrap_or(0);
    let (protocol, fractions) = parse_protocol(&protocol_text)?;
    let split_spec = SplitSpec::new(protocol, fractions, overlay.splits.unwrap_or(10), seed);
    split_spec.validate()?;
    let sweep = ResolvedSweep {
        dataset: PathBuf::from(
            overlay
                .dataset
                .ok_or(CliError::Missing("dataset path (--dataset)"))?,
        ),
        load: LoadOptions {
            dedupe: overlay.dedupe.unwrap_or(false),
            one_based: overlay.one_based.unwrap_or(false),
        },
        protocol_text,
        split_spec,
        epochs: overlay.epochs.unwrap_or(500),
        seed,
        max_trials: overlay.max_trials,
        out: overlay.out.map(PathBuf::from),
    };

    // Candidate grids; the defaults cover the learning-rate, weight-decay,
    // dropout, width, and depth ranges the benchmark selection used.
    let lrs = nonempty(
        overlay.lrs.unwrap_or_else(|| vec![0.1, 0.02, 0.01, 0.001, 0.0001]),
        "lrs",
    )?;
    let weight_decays = nonempty(
        overlay
            .weight_decays
            .unwrap_or_else(|| vec![0.0, 0.005, 0.0005, 0.00005]),
        "weight-decays",
    )?;
    let dropouts = nonempty(
        overlay.dropouts.unwrap_or_else(|| vec![0.0, 0.5, 0.7, 0.9]),
        "dropouts",
    )?;
    let hiddens = nonempty(
        overlay.hiddens.unwrap_or_else(|| vec![64, 128, 256, 512]),
        "hiddens",
    )?;
    let layer_counts = nonempty(overlay.layer_counts.unwrap_or_else(|| vec![1, 2]), "layer-counts")?;
    let pv_weights = nonempty(overlay.pv_weights.unwrap_or_else(|| vec![1.0]), "pv-weights")?;
    let pv_weight_modes = nonempty(
        overlay
            .pv_weight_modes
            .unwrap_or_else(|| vec!["constant".to_string()]),
        "pv-weight-modes",
    )?;
    let norms = nonempty(
        overlay.norms.unwrap_or_else(|| vec!["row-row".to_string()]),
        "norms",
    )?;
    let placements = nonempty(
        overlay.placements.unwrap_or_else(|| vec!["full".to_string()]),
        "placements",
    )?;

    // Expand in a fixed nesting order so trial indices are reproducible.
    // Placements that do not fit a layer count are skipped.
    let mut trials = Vec::new();
    let mut skipped_invalid = 0usize;
    for &lr in &lrs {
        for &weight_decay in &weight_decays {
            for &dropout in &dropouts {
                for &hidden in &hiddens {
                    for &layers in &layer_counts {
                        for &pv_weight in &pv_weights {
                            for mode_text in &pv_weight_modes {
                                for norm_text in &norms {
                                    for placement_text in &placements {
                                        let placement =
                                            match parse_placement(placement_text, layers) {
                                                Ok(p) => p,
                                                Err(_) => {
                                                    skipped_invalid += 1;
                                                    continue;
                                                }
                                            };
                                        let projection = match placement {
                                            Placement::None => None,
                                            Placement::Pair { .. } => Some(ProjectionConfig {
                                                pv_weight,
                                                pv_weight_mode: parse_weight_mode(mode_text)?,
                                                normalization: parse_normalization(norm_text)?,
                                                permutation: None,
                                                hops: 1,
                                            }),
                                        };
                                        trials.push(Trial {
                                            lr,
                                            weight_decay,
                                            dropout,
                                            hidden,
                                            layers,
                                            placement,
                                            projection,
                                        });
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    let grid_size = trials.len();
    if grid_size == 0 {
        return Err(CliError::Missing(
            "at least one valid grid point (every placement was invalid for every layer count)",
        ));
    }

    // Seeded subsample when the grid exceeds the trial budget; indices stay
    // in grid order after selection.
    if let Some(max) = sweep.max_trials {
        if max == 0 {
            return Err(CliError::BadFlag {
                flag: "max-trials",
                value: "0".to_string(),
                expected: "a positive trial budget",
            });
        }
        if max < trials.len() {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(sweep.seed, u64::MAX));
            let mut indices: Vec<usize> = (0..trials.len()).collect();
            for i in 0..max {
                let j = rng.random_range(i..indices.len());
                indices.swap(i, j);
            }
            let mut chosen = indices[..max].to_vec();
            chosen.sort_unstable();
            trials = chosen.into_iter().map(|i| trials[i].clone()).collect();
        }
    }

    let dataset = load_dataset(&sweep.dataset, &sweep.load)?;
    let results = evaluate_all(&sweep, &dataset, &trials)?;

    // Rank by mean validation accuracy, best first; diverged trials sink to
    // the bottom; exact ties break on the canonical config text.
    let mut order: Vec<usize> = (0..trials.len()).collect();
    let keys: Vec<String> = trials
        .iter()
        .map(|t| canonical_json(&trial_value(t)))
        .collect();
    order.sort_by(|&a, &b| {
        let va = results[a].mean_val_accuracy.unwrap_or(f64::NEG_INFINITY);
        let vb = results[b].mean_val_accuracy.unwrap_or(f64::NEG_INFINITY);
        vb.partial_cmp(&va)
            .expect("finite accuracies")
            .then_with(|| keys[a].cmp(&keys[b]))
    });

    let leaderboard: Vec<Value> = order
        .iter()
        .map(|&i| {
            json!({
                "config": trial_value(&trials[i]),
                "mean_val_accuracy": results[i].mean_val_accuracy,
                "mean_test_accuracy": results[i].mean_test_accuracy,
                "std_test_accuracy": results[i].std_test_accuracy,
                "diverged": results[i].diverged,
            })
        })
        .collect();

    let best_index = order[0];
    if results[best_index].diverged {
        return Err(CliError::AllTrialsDiverged);
    }

    // Rerun the winner for the final report.
    let best_run = trial_run(&sweep, &trials[best_index]);
    let best_report = execute(&best_run, &dataset)?;

    let value = json!({
        "command": "sweep",
        "config": {
            "dataset": sweep.dataset.display().to_string(),
            "dedupe": sweep.load.dedupe,
            "one_based": sweep.load.one_based,
            "protocol": sweep.protocol_text,
            "splits": sweep.split_spec.num_splits,
            "seed": sweep.seed,
            "epochs": sweep.epochs,
            "max_trials": sweep.max_trials,
        },
        "dataset": dataset_summary(&dataset),
        "grid_size": grid_size,
        "skipped_invalid": skipped_invalid,
        "evaluated": trials.len(),
        "leaderboard": leaderboard,
        "best": trial_value(&trials[best_index]),
        "best_report": results_value(&best_report),
    });
    Ok((value, sweep.out.clone()))
}

fn trial_value(trial: &Trial) -> Value {
    let projection = trial.projection.as_ref().map(|cfg| {
        json!({
            "pv_weight": cfg.pv_weight,
            "pv_weight_mode": super::mode_name(cfg.pv_weight_mode),
            "norm": super::norm_name(cfg.normalization),
            "hops": cfg.hops,
        })
    });
    json!({
        "lr": trial.lr,
        "weight_decay": trial.weight_decay,
        "dropout": trial.dropout,
        "hidden": trial.hidden,
        "layers": trial.layers,
        "placement": placement_name(trial.placement),
        "projection": projection,
    })
}

fn trial_run(sweep: &ResolvedSweep, trial: &Trial) -> ResolvedRun {
    ResolvedRun {
        dataset: sweep.dataset.clone(),
        load: sweep.load,
        protocol_text: sweep.protocol_text.clone(),
        split_spec: sweep.split_spec.clone(),
        placement_text: placement_name(trial.placement),
        placement: trial.placement,
        projection: trial.projection.clone(),
        hidden: trial.hidden,
        layers: trial.layers,
        dropout: trial.dropout,
        train: TrainConfig {
            learning_rate: trial.lr,
            weight_decay: trial.weight_decay,
            epochs: sweep.epochs,
            seed: sweep.seed,
        },
        out: None,
    }
}

fn evaluate_one(
    sweep: &ResolvedSweep,
    dataset: &Dataset,
    trial: &Trial,
) -> Result<TrialResult, CliError> {
    let run = trial_run(sweep, trial);
    match execute(&run, dataset) {
        Ok(report) => {
            let n = report.outcomes.len() as f64;
            let mean_val = report.outcomes.iter().map(|o| o.val_accuracy).sum::<f64>() / n;
            Ok(TrialResult {
                mean_val_accuracy: Some(mean_val),
                mean_test_accuracy: Some(report.mean_test_accuracy),
                std_test_accuracy: Some(report.std_test_accuracy),
                diverged: false,
            })
        }
        Err(CliError::Train(NnError::Diverged { .. })) => Ok(TrialResult {
            mean_val_accuracy: None,
            mean_test_accuracy: None,
            std_test_accuracy: None,
            diverged: true,
        }),
        Err(other) => Err(other),
    }
}

fn thread_count(trials: usize) -> Result<usize, CliError> {
    let cap = match std::env::var("UNIG_THREADS") {
        Ok(text) => match text.trim().parse::<usize>() {
            Ok(n) if n >= 1 => n,
            _ => {
                return Err(CliError::BadEnv {
                    name: "UNIG_THREADS",
                    value: text,
                    expected: "a positive thread count",
                })
            }
        },
        Err(_) => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    Ok(cap.min(trials).max(1))
}

/// Evaluates every trial, round-robin across workers; slot `i` of the
/// result always belongs to trial `i`, so scheduling cannot reorder output.
fn evaluate_all(
    sweep: &ResolvedSweep,
    dataset: &Dataset,
    trials: &[Trial],
) -> Result<Vec<TrialResult>, CliError> {
    let workers = thread_count(trials.len())?;
    let mut slots: Vec<Option<Result<TrialResult, CliError>>> = Vec::new();
    slots.resize_with(trials.len(), || None);

    if workers == 1 {
        for (i, trial) in trials.iter().enumerate() {
            slots[i] = Some(evaluate_one(sweep, dataset, trial));
        }
    } else {
        std::thread::scope(|scope| {
            let mut handles = Vec::with_capacity(workers);
            for worker in 0..workers {
                handles.push(scope.spawn(move || {
                    let mut mine = Vec::new();
                    let mut index = worker;
                    while index < trials.len() {
                        mine.push((index, evaluate_one(sweep, dataset, &trials[index])));
                        index += workers;
                    }
                    mine
                }));
            }
            for handle in handles {
                for (index, result) in handle.join().expect("sweep worker panicked") {
                    slots[index] = Some(result);
                }
            }
        });
    }

    let mut results = Vec::with_capacity(trials.len());
    for slot in slots {
        results.push(slot.expect("every trial evaluated")?);
    }
    Ok(results)
}
