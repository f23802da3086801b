//! Flat run configuration shared between command-line flags and the
//! `--config` JSON file. Every knob appears in both places with the same
//! spelling; explicit flags override file values and hard defaults fill
//! whatever remains.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use unig_core::{
    Normalization, Placement, ProjectionConfig, PvWeightMode, SplitProtocol, SplitSpec,
    TrainConfig,
};

use crate::error::CliError;
use crate::schema::LoadOptions;

/// Partial configuration; `None` means "not specified at this layer".
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunOverlay {
    pub dataset: Option<String>,
    pub dedupe: Option<bool>,
    pub one_based: Option<bool>,
    pub protocol: Option<String>,
    pub splits: Option<usize>,
    pub seed: Option<u64>,
    pub lr: Option<f64>,
    pub weight_decay: Option<f64>,
    pub dropout: Option<f64>,
    pub epochs: Option<usize>,
    pub hidden: Option<usize>,
    pub layers: Option<usize>,
    pub placement: Option<String>,
    pub norm: Option<String>,
    pub pv_weight: Option<f64>,
    pub pv_weight_mode: Option<String>,
    pub hops: Option<usize>,
    pub out: Option<String>,
}

macro_rules! take_first {
    ($high:expr, $low:expr, $($field:ident),+ $(,)?) => {{
        RunOverlay {
            $($field: $high.$field.or($low.$field),)+
        }
    }};
}

impl RunOverlay {
    /// Fields set on `self` win; holes fall through to `file`.
    pub fn over(self, file: RunOverlay) -> RunOverlay {
        take_first!(
            self, file, dataset, dedupe, one_based, protocol, splits, seed, lr, weight_decay,
            dropout, epochs, hidden, layers, placement, norm, pv_weight, pv_weight_mode, hops, out,
        )
    }
}

pub fn read_overlay(path: &Path) -> Result<RunOverlay, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::ReadFile {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::BadConfig {
        path: path.display().to_string(),
        source,
    })
}

/// Fully resolved training run, ready to execute.
#[derive(Debug, Clone)]
pub struct ResolvedRun {
    pub dataset: PathBuf,
    pub load: LoadOptions,
    pub protocol_text: String,
    pub split_spec: SplitSpec,
    pub placement_text: String,
    pub placement: Placement,
    pub projection: Option<ProjectionConfig>,
    pub hidden: usize,
    pub layers: usize,
    pub dropout: f64,
    pub train: TrainConfig,
    pub out: Option<PathBuf>,
}

pub fn resolve_run(overlay: RunOverlay) -> Result<ResolvedRun, CliError> {
    let dataset = overlay
        .dataset
        .ok_or(CliError::Missing("dataset path (--dataset)"))?;
    let protocol_text = overlay
        .protocol
        .unwrap_or_else(|| "per-class:0.48,0.32,0.2".to_string());
    let splits = overlay.splits.unwrap_or(10);
    let seed = overlay.seed.unwrap_or(0);
    let layers = overlay.layers.unwrap_or(2);
    let placement_text = overlay.placement.unwrap_or_else(|| "full".to_string());
    let norm_text = overlay.norm.unwrap_or_else(|| "row-row".to_string());
    let mode_text = overlay
        .pv_weight_mode
        .unwrap_or_else(|| "constant".to_string());

    let (protocol, fractions) = parse_protocol(&protocol_text)?;
    let split_spec = SplitSpec::new(protocol, fractions, splits, seed);
    split_spec.validate().map_err(CliError::from)?;

    let placement = parse_placement(&placement_text, layers)?;
    let projection = match placement {
        Placement::None => None,
        Placement::Pair { .. } => Some(ProjectionConfig {
            pv_weight: overlay.pv_weight.unwrap_or(1.0),
            pv_weight_mode: parse_weight_mode(&mode_text)?,
            normalization: parse_normalization(&norm_text)?,
            permutation: None,
            hops: overlay.hops.unwrap_or(1),
        }),
    };

    Ok(ResolvedRun {
        dataset: PathBuf::from(dataset),
        load: LoadOptions {
            dedupe: overlay.dedupe.unwrap_or(false),
            one_based: overlay.one_based.unwrap_or(false),
        },
        protocol_text,
        split_spec,
        placement_text,
        placement,
        projection,
        hidden: overlay.hidden.unwrap_or(64),
        layers,
        dropout: overlay.dropout.unwrap_or(0.5),
        train: TrainConfig {
            learning_rate: overlay.lr.unwrap_or(0.01),
            weight_decay: overlay.weight_decay.unwrap_or(0.0),
            epochs: overlay.epochs.unwrap_or(500),
            seed,
        },
        out: overlay.out.map(PathBuf::from),
    })
}

impl ResolvedRun {
    /// One hidden width per layer below the output layer.
    pub fn hidden_dims(&self) -> Vec<usize> {
        vec![self.hidden; self.layers.saturating_sub(1)]
    }
}

/// `uniform:0.5,0.25,0.25` or `per-class:0.48,0.32,0.2`.
pub fn parse_protocol(text: &str) -> Result<(SplitProtocol, (f64, f64, f64)), CliError> {
    let bad = || CliError::BadFlag {
        flag: "protocol",
        value: text.to_string(),
        expected: "uniform:TRAIN,VAL,TEST or per-class:TRAIN,VAL,TEST",
    };
    let (name, rest) = text.split_once(':').ok_or_else(bad)?;
    let protocol = match name {
        "uniform" => SplitProtocol::Uniform,
        "per-class" => SplitProtocol::PerClass,
        _ => return Err(bad()),
    };
    let parts: Vec<f64> = rest
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| bad())?;
    if parts.len() != 3 {
        return Err(bad());
    }
    Ok((protocol, (parts[0], parts[1], parts[2])))
}

/// `none`, `full` (forward at the input, reverse at the last layer), or
/// `F,R` stage indices.
pub fn parse_placement(text: &str, layers: usize) -> Result<Placement, CliError> {
    let bad = || CliError::BadFlag {
        flag: "placement",
        value: text.to_string(),
        expected: "none, full, or F,R with F <= R <= layers",
    };
    match text {
        "none" => Ok(Placement::None),
        "full" => Ok(Placement::Pair {
            forward: 0,
            reverse: layers,
        }),
        _ => {
            let (f, r) = text.split_once(',').ok_or_else(bad)?;
            let forward = f.trim().parse::<usize>().map_err(|_| bad())?;
            let reverse = r.trim().parse::<usize>().map_err(|_| bad())?;
            if forward > reverse || reverse > layers {
                return Err(bad());
            }
            Ok(Placement::Pair { forward, reverse })
        }
    }
}

pub fn parse_normalization(text: &str) -> Result<Normalization, CliError> {
    match text {
        "none" => Ok(Normalization::None),
        "row-row" => Ok(Normalization::RowRow),
        "col-col" => Ok(Normalization::ColCol),
        "row-col" => Ok(Normalization::RowCol),
        "col-row" => Ok(Normalization::ColRow),
        _ => Err(CliError::BadFlag {
            flag: "norm",
            value: text.to_string(),
            expected: "none, row-row, col-col, row-col, or col-row",
        }),
    }
}

pub fn parse_weight_mode(text: &str) -> Result<PvWeightMode, CliError> {
    match text {
        "constant" => Ok(PvWeightMode::Constant),
        "degree" => Ok(PvWeightMode::DegreeScaled),
        _ => Err(CliError::BadFlag {
            flag: "pv-weight-mode",
            value: text.to_string(),
            expected: "constant or degree",
        }),
    }
}
