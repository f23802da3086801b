//! Full-batch training with per-epoch evaluation and best-validation model
//! selection.

use alloc::vec::Vec;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::data::Split;
use crate::dense::DenseMatrix;
use crate::hypergraph::LabelVector;
use crate::nn::{
    cross_entropy_masked, AdamState, EncoderPipeline, MlpConfig, NnError, Placement,
};
use crate::projection::ProjectionMatrix;
use crate::rng::derive_seed;

/// Optimizer hyperparameters for one run. The seed drives initialization,
/// dropout, and (through [`train_splits`]) the per-split sub-seeds.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub weight_decay: f64,
    pub epochs: usize,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.01,
            weight_decay: 0.0,
            epochs: 500,
            seed: 0,
        }
    }
}

/// Result of training on one split. Accuracies are taken at the epoch with
/// the best validation accuracy (earliest epoch on ties); the loss curve
/// covers every epoch in order.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitOutcome {
    pub best_val_epoch: usize,
    pub val_accuracy: f64,
    pub test_accuracy: f64,
    pub train_accuracy: f64,
    /// Highest train accuracy seen at any epoch.
    pub best_train_accuracy: f64,
    pub train_losses: Vec<f64>,
}

/// Aggregate over splits: mean and population standard deviation of the
/// per-split test accuracies.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainReport {
    pub outcomes: Vec<SplitOutcome>,
    pub mean_test_accuracy: f64,
    pub std_test_accuracy: f64,
}

/// Fraction of `nodes` whose argmax prediction matches the label; 0 for an
/// empty node set.
pub fn accuracy(logits: &DenseMatrix, labels: &LabelVector, nodes: &[usize]) -> f64 {
    if nodes.is_empty() {
        return 0.0;
    }
    let predictions = logits.argmax_rows();
    let correct = nodes
        .iter()
        .filter(|&&i| predictions[i] == labels.labels()[i])
        .count();
    correct as f64 / nodes.len() as f64
}

/// Trains one model on one split: every epoch runs a full-batch forward,
/// masked loss on the train nodes, backward, and an Adam step, then
/// evaluates all three node sets. Deterministic given the seed.
#[allow(clippy::too_many_arguments)]
pub fn train_single(
    features: &DenseMatrix,
    labels: &LabelVector,
    split: &Split,
    projection: Option<&ProjectionMatrix>,
    placement: Placement,
    hidden_dims: &[usize],
    dropout: f64,
    cfg: &TrainConfig,
) -> Result<SplitOutcome, NnError> {
    let mut layer_dims = Vec::with_capacity(hidden_dims.len() + 2);
    layer_dims.push(features.cols());
    layer_dims.extend_from_slice(hidden_dims);
    layer_dims.push(labels.num_classes());
    let mlp_config = MlpConfig::new(layer_dims, dropout, derive_seed(cfg.seed, 0));
    let mut pipeline = EncoderPipeline::new(projection.cloned(), placement, &mlp_config)?;
    let mut adam = AdamState::new(cfg.learning_rate, cfg.weight_decay, pipeline.mlp());
    let mut dropout_rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, 1));

    let mut train_losses = Vec::with_capacity(cfg.epochs);
    let mut best = SplitOutcome {
        best_val_epoch: 0,
        val_accuracy: f64::NEG_INFINITY,
        test_accuracy: 0.0,
        train_accuracy: 0.0,
        best_train_accuracy: 0.0,
        train_losses: Vec::new(),
    };
    for epoch in 0..cfg.epochs {
        let trace = pipeline.forward_train(features, &mut dropout_rng)?;
        let (loss, dlogits) = cross_entropy_masked(trace.logits(), labels, &split.train)?;
        if !loss.is_finite() {
            return Err(NnError::Diverged { epoch, loss });
        }
        train_losses.push(loss);
        let grads = pipeline.backward(trace, &dlogits)?;
        adam.step(pipeline.mlp_mut(), &grads);

        let logits = pipeline.forward_eval(features)?;
        if !logits.is_finite() {
            // The update blew the parameters up; report the loss of the
            // diverged model, not the finite one computed before the step.
            let (bad_loss, _) = cross_entropy_masked(&logits, labels, &split.train)?;
            return Err(NnError::Diverged {
                epoch,
                loss: bad_loss,
            });
        }
        let train_acc = accuracy(&logits, labels, &split.train);
        let val_acc = accuracy(&logits, labels, &split.val);
        if train_acc > best.best_train_accuracy {
            best.best_train_accuracy = train_acc;
        }
        if val_acc > best.val_accuracy {
            best.best_val_epoch = epoch;
            best.val_accuracy = val_acc;
            best.train_accuracy = train_acc;
            best.test_accuracy = accuracy(&logits, labels, &split.test);
        }
    }
    best.train_losses = train_losses;
    Ok(best)
}

/// Runs [`train_single`] once per split with sub-seeds derived from
/// `cfg.seed`, then aggregates the test accuracies.
#[allow(clippy::too_many_arguments)]
pub fn train_splits(
    features: &DenseMatrix,
    labels: &LabelVector,
    splits: &[Split],
    projection: Option<&ProjectionMatrix>,
    placement: Placement,
    hidden_dims: &[usize],
    dropout: f64,
    cfg: &TrainConfig,
) -> Result<TrainReport, NnError> {
    let mut outcomes = Vec::with_capacity(splits.len());
    for (index, split) in splits.iter().enumerate() {
        let split_cfg = TrainConfig {
            seed: derive_seed(cfg.seed, index as u64),
            ..cfg.clone()
        };
        outcomes.push(train_single(
            features,
            labels,
            split,
            projection,
            placement,
            hidden_dims,
            dropout,
            &split_cfg,
        )?);
    }
    let n = outcomes.len() as f64;
    let mean = outcomes.iter().map(|o| o.test_accuracy).sum::<f64>() / n;
    let variance = outcomes
        .iter()
        .map(|o| {
            let d = o.test_accuracy - mean;
            d * d
        })
        .sum::<f64>()
        / n;
    Ok(TrainReport {
        outcomes,
        mean_test_accuracy: mean,
        std_test_accuracy: libm::sqrt(variance),
    })
}
