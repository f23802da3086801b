//! `train`: run the encoder once per split and report per-split accuracies
//! with their mean and standard deviation.

use serde_json::{json, Value};
use unig_core::{build_projection, make_splits, train_splits, Dataset, TrainReport};

use crate::config::{resolve_run, ResolvedRun, RunOverlay};
use crate::error::CliError;
use crate::schema::load_dataset;

use super::{dataset_summary, mode_name, norm_name, outcome_value, placement_name};

pub fn run(overlay: RunOverlay) -> Result<(Value, ResolvedRun), CliError> {
    let run = resolve_run(overlay)?;
    let dataset = load_dataset(&run.dataset, &run.load)?;
    let report = execute(&run, &dataset)?;
    let value = json!({
        "command": "train",
        "config": config_echo(&run),
        "dataset": dataset_summary(&dataset),
        "results": results_value(&report),
    });
    Ok((value, run))
}

/// Trains per the resolved configuration; shared with the sweep rerun.
pub(crate) fn execute(run: &ResolvedRun, dataset: &Dataset) -> Result<TrainReport, CliError> {
    let splits = make_splits(dataset, &run.split_spec)?;
    let projection = run
        .projection
        .as_ref()
        .map(|cfg| build_projection(dataset.structure(), cfg))
        .transpose()?;
    let report = train_splits(
        dataset.features(),
        dataset.labels(),
        &splits,
        projection.as_ref(),
        run.placement,
        &run.hidden_dims(),
        run.dropout,
        &run.train,
    )?;
    Ok(report)
}

pub(crate) fn config_echo(run: &ResolvedRun) -> Value {
    let projection = run.projection.as_ref().map(|cfg| {
        json!({
            "pv_weight": cfg.pv_weight,
            "pv_weight_mode": mode_name(cfg.pv_weight_mode),
            "norm": norm_name(cfg.normalization),
            "hops": cfg.hops,
        })
    });
    json!({
        "dataset": run.dataset.display().to_string(),
        "dedupe": run.load.dedupe,
        "one_based": run.load.one_based,
        "protocol": run.protocol_text,
        "splits": run.split_spec.num_splits,
        "seed": run.train.seed,
        "lr": run.train.learning_rate,
        "weight_decay": run.train.weight_decay,
        "dropout": run.dropout,
        "epochs": run.train.epochs,
        "hidden": run.hidden,
        "layers": run.layers,
        "placement": placement_name(run.placement),
        "projection": projection,
    })
}

pub(crate) fn results_value(report: &TrainReport) -> Value {
    json!({
        "splits": report.outcomes.iter().map(outcome_value).collect::<Vec<_>>(),
        "mean_test_accuracy": report.mean_test_accuracy,
        "std_test_accuracy": report.std_test_accuracy,
    })
}
