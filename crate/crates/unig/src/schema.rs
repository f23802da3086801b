//! Dataset file format: a single JSON document with keys `name`, `kind`,
//! `num_nodes`, `num_classes`, `edges`, `features`, and `labels`. The
//! canonical form sorts object keys, sorts each edge internally and the
//! edge list lexicographically, and serializes floats with round-trip
//! precision, so equal datasets produce byte-identical files.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;
use unig_core::{DataError, Dataset, DatasetKind, DenseMatrix, Hypergraph, HypergraphError, LabelVector};

#[derive(Debug, Error)]
pub enum SchemaError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed dataset JSON: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("declared num_nodes {declared} but {field} has {got} rows")]
    NodeCountMismatch {
        declared: usize,
        field: &'static str,
        got: usize,
    },
    #[error("feature row {row} has {got} values, expected {expected}")]
    RaggedFeatures {
        row: usize,
        got: usize,
        expected: usize,
    },
    #[error("edge {edge} contains index 0 in a one-based file")]
    OneBasedZero { edge: usize },
    #[error(transparent)]
    Structure(#[from] HypergraphError),
    #[error(transparent)]
    Data(#[from] DataError),
}

#[derive(Debug, Clone, Copy, Default)]
pub struct LoadOptions {
    /// Collapse duplicate edges instead of rejecting them.
    pub dedupe: bool,
    /// Treat node indices in the file as starting at 1.
    pub one_based: bool,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DatasetFile {
    name: String,
    kind: KindTag,
    num_nodes: usize,
    num_classes: usize,
    edges: Vec<Vec<usize>>,
    features: Vec<Vec<f64>>,
    labels: Vec<usize>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
enum KindTag {
    #[serde(rename = "graph")]
    Graph,
    #[serde(rename = "hypergraph")]
    Hypergraph,
}

impl From<KindTag> for DatasetKind {
    fn from(tag: KindTag) -> Self {
        match tag {
            KindTag::Graph => DatasetKind::Graph,
            KindTag::Hypergraph => DatasetKind::Hypergraph,
        }
    }
}

impl From<DatasetKind> for KindTag {
    fn from(kind: DatasetKind) -> Self {
        match kind {
            DatasetKind::Graph => KindTag::Graph,
            DatasetKind::Hypergraph => KindTag::Hypergraph,
        }
    }
}

pub fn dataset_from_json(text: &str, options: &LoadOptions) -> Result<Dataset, SchemaError> {
    let file: DatasetFile = serde_json::from_str(text)?;
    if file.features.len() != file.num_nodes {
        return Err(SchemaError::NodeCountMismatch {
            declared: file.num_nodes,
            field: "features",
            got: file.features.len(),
        });
    }
    if file.labels.len() != file.num_nodes {
        return Err(SchemaError::NodeCountMismatch {
            declared: file.num_nodes,
            field: "labels",
            got: file.labels.len(),
        });
    }
    let width = file.features.first().map_or(0, Vec::len);
    for (row, values) in file.features.iter().enumerate() {
        if values.len() != width {
            return Err(SchemaError::RaggedFeatures {
                row,
                got: values.len(),
                expected: width,
            });
        }
    }

    let mut edges = file.edges;
    if options.one_based {
        for (index, edge) in edges.iter_mut().enumerate() {
            for member in edge.iter_mut() {
                if *member == 0 {
                    return Err(SchemaError::OneBasedZero { edge: index });
                }
                *member -= 1;
            }
        }
    }
    let structure = if options.dedupe {
        Hypergraph::new_dedup(file.num_nodes, edges)?
    } else {
        Hypergraph::new(file.num_nodes, edges)?
    };

    let dataset = Dataset::new(
        file.name,
        file.kind.into(),
        structure,
        DenseMatrix::from_rows(&file.features),
        LabelVector::new(file.labels, file.num_classes)?,
    )?;
    Ok(dataset)
}

pub fn load_dataset(path: &Path, options: &LoadOptions) -> Result<Dataset, SchemaError> {
    let text = fs::read_to_string(path).map_err(|source| SchemaError::Read {
        path: path.display().to_string(),
        source,
    })?;
    dataset_from_json(&text, options)
}

/// Canonical JSON text: sorted keys, lexicographically sorted edges,
/// round-trip floats, trailing newline.
pub fn dataset_to_canonical_json(dataset: &Dataset) -> String {
    let mut edges: Vec<Vec<usize>> = dataset.structure().edges().to_vec();
    edges.sort();
    let features: Vec<Vec<f64>> = (0..dataset.num_nodes())
        .map(|i| dataset.features().row(i).to_vec())
        .collect();
    let file = DatasetFile {
        name: dataset.name().to_string(),
        kind: dataset.kind().into(),
        num_nodes: dataset.num_nodes(),
        num_classes: dataset.num_classes(),
        edges,
        features,
        labels: dataset.labels().labels().to_vec(),
    };
    let value = serde_json::to_value(&file).expect("dataset serializes");
    let mut text = serde_json::to_string_pretty(&value).expect("canonical JSON");
    text.push('\n');
    text
}

pub fn save_dataset(dataset: &Dataset, path: &Path) -> Result<(), SchemaError> {
    fs::write(path, dataset_to_canonical_json(dataset)).map_err(|source| SchemaError::Write {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use unig_core::DatasetKind;

    fn minimal_json() -> &'static str {
        r#"{
            "name": "tiny",
            "kind": "hypergraph",
            "num_nodes": 3,
            "num_classes": 2,
            "edges": [[0, 1, 2], [2, 0]],
            "features": [[1.0, 0.5], [0.25, 0.125], [0.0, -1.5]],
            "labels": [0, 1, 0]
        }"#
    }

    #[test]
    fn loads_a_minimal_file() {
        let dataset = dataset_from_json(minimal_json(), &LoadOptions::default()).unwrap();
        assert_eq!(dataset.name(), "tiny");
        assert_eq!(dataset.kind(), DatasetKind::Hypergraph);
        assert_eq!(dataset.num_nodes(), 3);
        assert_eq!(dataset.num_classes(), 2);
        assert_eq!(dataset.structure().edges(), &[vec![0, 1, 2], vec![0, 2]]);
        assert_eq!(dataset.features().get(1, 1), 0.125);
    }

    #[test]
    fn rejects_an_out_of_range_edge_index() {
        let text = minimal_json().replace("[2, 0]", "[2, 3]");
        let err = dataset_from_json(&text, &LoadOptions::default()).unwrap_err();
        assert!(matches!(
            err,
            SchemaError::Structure(HypergraphError::NodeIndexOutOfRange { edge: 1, .. })
        ));
    }

    #[test]
    fn one_based_files_shift_down_and_reject_zero() {
        let text = minimal_json()
            .replace("[0, 1, 2]", "[1, 2, 3]")
            .replace("[2, 0]", "[3, 1]");
        let options = LoadOptions {
            one_based: true,
            ..LoadOptions::default()
        };
        let dataset = dataset_from_json(&text, &options).unwrap();
        assert_eq!(dataset.structure().edges(), &[vec![0, 1, 2], vec![0, 2]]);

        let bad = minimal_json().replace("[0, 1, 2]", "[1, 2, 3]");
        let err = dataset_from_json(&bad, &options).unwrap_err();
        assert!(matches!(err, SchemaError::OneBasedZero { edge: 1 }));
    }

    #[test]
    fn duplicate_edges_need_the_dedupe_flag() {
        let text = minimal_json().replace("[2, 0]", "[2, 1, 0]");
        let err = dataset_from_json(&text, &LoadOptions::default()).unwrap_err();
        assert!(matches!(
            err,
            SchemaError::Structure(HypergraphError::DuplicateEdge { .. })
        ));

        let options = LoadOptions {
            dedupe: true,
            ..LoadOptions::default()
        };
        let dataset = dataset_from_json(&text, &options).unwrap();
        assert_eq!(dataset.structure().num_edges(), 1);
    }

    #[test]
    fn ragged_feature_rows_name_the_row() {
        let text = minimal_json().replace("[0.25, 0.125]", "[0.25]");
        let err = dataset_from_json(&text, &LoadOptions::default()).unwrap_err();
        assert!(matches!(
            err,
            SchemaError::RaggedFeatures {
                row: 1,
                got: 1,
                expected: 2
            }
        ));
    }

    #[test]
    fn canonical_save_round_trips_byte_for_byte() {
        let dataset = dataset_from_json(minimal_json(), &LoadOptions::default()).unwrap();
        let first = dataset_to_canonical_json(&dataset);
        let reloaded = dataset_from_json(&first, &LoadOptions::default()).unwrap();
        let second = dataset_to_canonical_json(&reloaded);
        assert_eq!(first, second);
        assert_eq!(reloaded.features().get(2, 1), -1.5);
    }
}
