//! Command implementations. Each returns the report as a JSON value; the
//! caller decides between stdout and a file.

pub mod homophily;
pub mod sweep;
pub mod synth;
pub mod train;

use serde_json::{json, Value};
use unig_core::{Dataset, DatasetKind, Normalization, Placement, PvWeightMode, SplitOutcome};

pub(crate) fn dataset_summary(dataset: &Dataset) -> Value {
    json!({
        "name": dataset.name(),
        "kind": kind_name(dataset.kind()),
        "num_nodes": dataset.num_nodes(),
        "num_edges": dataset.structure().num_edges(),
        "num_classes": dataset.num_classes(),
    })
}

pub(crate) fn kind_name(kind: DatasetKind) -> &'static str {
    match kind {
        DatasetKind::Graph => "graph",
        DatasetKind::Hypergraph => "hypergraph",
    }
}

pub(crate) fn norm_name(norm: Normalization) -> &'static str {
    match norm {
        Normalization::None => "none",
        Normalization::RowRow => "row-row",
        Normalization::ColCol => "col-col",
        Normalization::RowCol => "row-col",
        Normalization::ColRow => "col-row",
    }
}

pub(crate) fn mode_name(mode: PvWeightMode) -> &'static str {
    match mode {
        PvWeightMode::Constant => "constant",
        PvWeightMode::DegreeScaled => "degree",
    }
}

pub(crate) fn placement_name(placement: Placement) -> String {
    match placement {
        Placement::None => "none".to_string(),
        Placement::Pair { forward, reverse } => format!("{forward},{reverse}"),
    }
}

pub(crate) fn outcome_value(outcome: &SplitOutcome) -> Value {
    json!({
        "best_val_epoch": outcome.best_val_epoch,
        "train_accuracy": outcome.train_accuracy,
        "val_accuracy": outcome.val_accuracy,
        "test_accuracy": outcome.test_accuracy,
    })
}
