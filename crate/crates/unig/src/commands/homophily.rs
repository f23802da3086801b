//! `homophily`: clique-expansion edge homophily of a dataset file.

use std::path::Path;

use serde_json::{json, Value};
use unig_core::homophily_score;

use crate::error::CliError;
use crate::schema::{load_dataset, LoadOptions};

use super::dataset_summary;

pub fn run(dataset_path: &Path, load: &LoadOptions) -> Result<Value, CliError> {
    let dataset = load_dataset(dataset_path, load)?;
    let score = homophily_score(dataset.structure(), dataset.labels())?;
    Ok(json!({
        "command": "homophily",
        "dataset": dataset_summary(&dataset),
        "homophily": score.value,
        "no_pairs": score.no_pairs,
    }))
}
