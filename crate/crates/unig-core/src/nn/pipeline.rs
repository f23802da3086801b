//! The encoder pipeline: optional forward projection, the layer stack, and
//! optional reverse projection, with a recorded tape for exact gradients.
//!
//! Stages are numbered 0..=l for an l-layer network: stage 0 is the input,
//! stage k the output of layer k (activation and dropout included for hidden
//! layers). A placement pair (f, r) forward-projects the stage-f embedding
//! before it enters layer f+1 and reverse-projects the stage-r embedding,
//! so the final logits always have one row per node.

use alloc::vec::Vec;
use rand::Rng;

use crate::dense::DenseMatrix;
use crate::hypergraph::LabelVector;
use crate::nn::adam::zero_like;
use crate::nn::{Mlp, MlpConfig, NnError};
use crate::projection::ProjectionMatrix;
use crate::sparse::CsrMatrix;

/// Where the projection wraps the network.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Placement {
    /// Plain network on the raw features; no projection at all.
    None,
    /// Forward-project the stage-`forward` embedding, reverse-project the
    /// stage-`reverse` embedding; requires forward <= reverse <= layers.
    Pair { forward: usize, reverse: usize },
}

/// One recorded operation of a training forward pass.
#[derive(Debug)]
enum Step {
    Linear { layer: usize, input: DenseMatrix },
    Relu { keep: Vec<bool> },
    Dropout { mask: Vec<f64> },
    Forward,
    Reverse,
    Compound,
}

/// Everything backward needs from a forward pass. Consumed by
/// [`EncoderPipeline::backward`], so gradients can never be computed from a
/// tape that no longer matches the parameters.
#[derive(Debug)]
pub struct ForwardTrace {
    logits: DenseMatrix,
    steps: Vec<Step>,
}

impl ForwardTrace {
    pub fn logits(&self) -> &DenseMatrix {
        &self.logits
    }
}

/// Per-layer parameter gradients, shaped like the network.
#[derive(Debug)]
pub struct LayerGrads {
    pub weight: DenseMatrix,
    pub bias: Vec<f64>,
}

#[derive(Debug)]
pub struct Gradients {
    pub layers: Vec<LayerGrads>,
}

#[derive(Debug)]
pub struct EncoderPipeline {
    projection: Option<ProjectionMatrix>,
    /// Compound operator and its transpose; present only for multi-hop
    /// same-stage placement, where one multiply replaces forward + reverse.
    compound: Option<(CsrMatrix, CsrMatrix)>,
    placement: Placement,
    mlp: Mlp,
    dropout: f64,
}

impl EncoderPipeline {
    /// Initializes the network from `config` and validates placement against
    /// the projection: pairs need a projection, placement none must not get
    /// one, and hops > 1 is only meaningful when forward and reverse land on
    /// the same stage (where the powered compound operator applies).
    pub fn new(
        projection: Option<ProjectionMatrix>,
        placement: Placement,
        config: &MlpConfig,
    ) -> Result<Self, NnError> {
        let mlp = Mlp::init(config)?;
        let layers = mlp.num_layers();
        let mut compound = None;
        match (placement, &projection) {
            (Placement::Pair { .. }, None) => return Err(NnError::PlacementNeedsProjection),
            (Placement::None, Some(_)) => return Err(NnError::ProjectionUnused),
            (Placement::Pair { forward, reverse }, Some(pm)) => {
                if forward > reverse || reverse > layers {
                    return Err(NnError::PlacementOutOfRange {
                        forward,
                        reverse,
                        layers,
                    });
                }
                if pm.hops() > 1 {
                    if forward != reverse {
                        return Err(NnError::MultiHopNeedsCompound { hops: pm.hops() });
                    }
                    let op = pm.compound();
                    let op_t = op.transpose();
                    compound = Some((op, op_t));
                }
            }
            (Placement::None, None) => {}
        }
        Ok(Self {
            projection,
            compound,
            placement,
            mlp,
            dropout: config.dropout_rate,
        })
    }

    pub fn placement(&self) -> Placement {
        self.placement
    }

    pub fn mlp(&self) -> &Mlp {
        &self.mlp
    }

    pub fn mlp_mut(&mut self) -> &mut Mlp {
        &mut self.mlp
    }

    pub fn projection(&self) -> Option<&ProjectionMatrix> {
        self.projection.as_ref()
    }

    /// Training pass: dropout active, every operation recorded.
    pub fn forward_train<R: Rng>(
        &self,
        x: &DenseMatrix,
        rng: &mut R,
    ) -> Result<ForwardTrace, NnError> {
        self.run(x, Some(rng))
    }

    /// Evaluation pass: dropout is the identity, no tape kept.
    pub fn forward_eval(&self, x: &DenseMatrix) -> Result<DenseMatrix, NnError> {
        Ok(self.run::<rand_chacha::ChaCha8Rng>(x, None)?.logits)
    }

    fn run<R: Rng>(
        &self,
        x: &DenseMatrix,
        mut rng: Option<&mut R>,
    ) -> Result<ForwardTrace, NnError> {
        if x.cols() != self.mlp.dims()[0] {
            return Err(NnError::BadInputWidth {
                expected: self.mlp.dims()[0],
                got: x.cols(),
            });
        }
        if let Some(pm) = &self.projection {
            if x.rows() != pm.num_nodes() {
                return Err(NnError::BadInputHeight {
                    expected: pm.num_nodes(),
                    got: x.rows(),
                });
            }
        }
        let mut steps = Vec::new();
        let mut h = self.apply_stage(0, x.clone(), &mut steps);
        let layers = self.mlp.num_layers();
        for k in 1..=layers {
            let layer = &self.mlp.layers()[k - 1];
            let mut out = h.matmul(&layer.weight);
            out.add_row_broadcast(&layer.bias);
            steps.push(Step::Linear {
                layer: k - 1,
                input: h,
            });
            h = out;
            if k < layers {
                let mut keep = Vec::with_capacity(h.values().len());
                for v in h.values_mut() {
                    let active = *v > 0.0;
                    keep.push(active);
                    if !active {
                        *v = 0.0;
                    }
                }
                steps.push(Step::Relu { keep });
                if self.dropout > 0.0 {
                    if let Some(rng) = rng.as_deref_mut() {
                        let scale = 1.0 / (1.0 - self.dropout);
                        let mut mask = Vec::with_capacity(h.values().len());
                        for v in h.values_mut() {
                            let m = if rng.random::<f64>() >= self.dropout {
                                scale
                            } else {
                                0.0
                            };
                            mask.push(m);
                            *v *= m;
                        }
                        steps.push(Step::Dropout { mask });
                    }
                }
            }
            h = self.apply_stage(k, h, &mut steps);
        }
        Ok(ForwardTrace { logits: h, steps })
    }

    /// Projects the stage-`stage` embedding when placement asks for it.
    /// With a multi-hop compound the single operator stands in for the
    /// forward/reverse pair at the shared stage.
    fn apply_stage(&self, stage: usize, h: DenseMatrix, steps: &mut Vec<Step>) -> DenseMatrix {
        let (Placement::Pair { forward, reverse }, Some(pm)) = (self.placement, &self.projection)
        else {
            return h;
        };
        let mut h = h;
        if forward == stage {
            if let Some((op, _)) = &self.compound {
                steps.push(Step::Compound);
                return op.mul_dense(&h);
            }
            h = pm.forward().mul_dense(&h);
            steps.push(Step::Forward);
        }
        if reverse == stage && self.compound.is_none() {
            h = pm.reverse().mul_dense(&h);
            steps.push(Step::Reverse);
        }
        h
    }

    /// Walks the tape backwards from `dlogits`, yielding exact gradients for
    /// every weight and bias. The fixed projections contribute their
    /// transposes; dropout replays its mask.
    pub fn backward(
        &self,
        trace: ForwardTrace,
        dlogits: &DenseMatrix,
    ) -> Result<Gradients, NnError> {
        if (dlogits.rows(), dlogits.cols()) != (trace.logits.rows(), trace.logits.cols()) {
            return Err(NnError::GradientShapeMismatch {
                rows: trace.logits.rows(),
                cols: trace.logits.cols(),
                got_rows: dlogits.rows(),
                got_cols: dlogits.cols(),
            });
        }
        let mut grads = zero_like(&self.mlp);
        let mut d = dlogits.clone();
        for step in trace.steps.into_iter().rev() {
            match step {
                Step::Linear { layer, input } => {
                    grads.layers[layer].weight = input.tr_matmul(&d);
                    grads.layers[layer].bias = d.col_sums();
                    d = d.matmul_tr(&self.mlp.layers()[layer].weight);
                }
                Step::Relu { keep } => {
                    for (v, active) in d.values_mut().iter_mut().zip(keep) {
                        if !active {
                            *v = 0.0;
                        }
                    }
                }
                Step::Dropout { mask } => {
                    for (v, m) in d.values_mut().iter_mut().zip(mask) {
                        *v *= m;
                    }
                }
                Step::Forward => {
                    let pm = self.projection.as_ref().expect("projection step recorded");
                    d = pm.forward_t().mul_dense(&d);
                }
                Step::Reverse => {
                    let pm = self.projection.as_ref().expect("projection step recorded");
                    d = pm.reverse_t().mul_dense(&d);
                }
                Step::Compound => {
                    let (_, op_t) = self.compound.as_ref().expect("compound step recorded");
                    d = op_t.mul_dense(&d);
                }
            }
        }
        Ok(grads)
    }
}

/// Mean negative log-softmax over the masked rows, plus its gradient:
/// (softmax - onehot) / |mask| on masked rows, zero elsewhere.
pub fn cross_entropy_masked(
    logits: &DenseMatrix,
    y: &LabelVector,
    mask: &[usize],
) -> Result<(f64, DenseMatrix), NnError> {
    if mask.is_empty() {
        return Err(NnError::EmptyMask);
    }
    if y.len() != logits.rows() {
        return Err(NnError::LabelRowMismatch {
            expected: logits.rows(),
            got: y.len(),
        });
    }
    let cols = logits.cols();
    let mut dlogits = DenseMatrix::zeros(logits.rows(), cols);
    let inv = 1.0 / mask.len() as f64;
    let mut loss = 0.0;
    for &row in mask {
        if row >= logits.rows() {
            return Err(NnError::MaskOutOfRange {
                index: row,
                rows: logits.rows(),
            });
        }
        let label = y.labels()[row];
        if label >= cols {
            return Err(NnError::LabelExceedsWidth { label, cols });
        }
        let values = logits.row(row);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, libm::fmax);
        let mut sum = 0.0;
        for &v in values {
            sum += libm::exp(v - max);
        }
        let log_sum = max + libm::log(sum);
        loss += log_sum - values[label];
        let out = dlogits.row_mut(row);
        for (j, &v) in values.iter().enumerate() {
            let softmax = libm::exp(v - log_sum);
            out[j] = (softmax - if j == label { 1.0 } else { 0.0 }) * inv;
        }
    }
    Ok((loss * inv, dlogits))
}
