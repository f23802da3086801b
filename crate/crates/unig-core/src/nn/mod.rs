//! Feed-forward network with manual backpropagation, masked cross-entropy
//! loss, Adam optimization, and the encoder pipeline that wraps the network
//! between a forward and a reverse projection.

mod adam;
mod mlp;
mod pipeline;
mod train;

pub use adam::AdamState;
pub use mlp::{DenseLayer, Mlp, MlpConfig};
pub use pipeline::{
    cross_entropy_masked, EncoderPipeline, ForwardTrace, Gradients, LayerGrads, Placement,
};
pub use train::{accuracy, train_single, train_splits, SplitOutcome, TrainConfig, TrainReport};

use thiserror::Error;

use crate::projection::ProjectionError;

#[derive(Debug, Error, PartialEq)]
pub enum NnError {
    #[error("network needs input and output widths, got {got} dimension entries")]
    TooFewDims { got: usize },
    #[error("layer widths must be at least 1")]
    ZeroWidthLayer,
    #[error("dropout rate must be in [0, 1), got {rate}")]
    BadDropout { rate: f64 },
    #[error("placement ({forward}, {reverse}) needs forward <= reverse <= {layers} layers")]
    PlacementOutOfRange {
        forward: usize,
        reverse: usize,
        layers: usize,
    },
    #[error("placement pair requires a projection")]
    PlacementNeedsProjection,
    #[error("projection provided but placement is none")]
    ProjectionUnused,
    #[error("{hops}-hop aggregation requires forward and reverse at the same stage")]
    MultiHopNeedsCompound { hops: usize },
    #[error("input has {got} feature columns, network expects {expected}")]
    BadInputWidth { expected: usize, got: usize },
    #[error("input has {got} rows, projection expects {expected}")]
    BadInputHeight { expected: usize, got: usize },
    #[error("gradient has shape {got_rows}x{got_cols}, logits were {rows}x{cols}")]
    GradientShapeMismatch {
        rows: usize,
        cols: usize,
        got_rows: usize,
        got_cols: usize,
    },
    #[error("loss mask is empty")]
    EmptyMask,
    #[error("mask index {index} out of range for {rows} logit rows")]
    MaskOutOfRange { index: usize, rows: usize },
    #[error("labels cover {got} nodes, logits have {expected} rows")]
    LabelRowMismatch { expected: usize, got: usize },
    #[error("label {label} needs a logit column, but logits have {cols}")]
    LabelExceedsWidth { label: usize, cols: usize },
    #[error("training diverged at epoch {epoch}: loss {loss}")]
    Diverged { epoch: usize, loss: f64 },
    #[error(transparent)]
    Projection(#[from] ProjectionError),
}
