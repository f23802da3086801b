//! The multilayer perceptron: layer storage and seeded initialization.

use alloc::vec;
use alloc::vec::Vec;
use rand::distr::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dense::DenseMatrix;
use crate::nn::NnError;

/// Network shape and regularization settings. The activation between layers
/// is always rectified-linear; the last layer emits raw logits.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpConfig {
    /// Widths per stage: input, one entry per hidden layer, output. Length
    /// l + 1 describes an l-layer network; l >= 1.
    pub layer_dims: Vec<usize>,
    /// Inverted dropout applied after each hidden activation while training.
    pub dropout_rate: f64,
    /// Seed for weight initialization.
    pub seed: u64,
}

impl MlpConfig {
    pub fn new(layer_dims: Vec<usize>, dropout_rate: f64, seed: u64) -> Self {
        Self {
            layer_dims,
            dropout_rate,
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), NnError> {
        if self.layer_dims.len() < 2 {
            return Err(NnError::TooFewDims {
                got: self.layer_dims.len(),
            });
        }
        if self.layer_dims.contains(&0) {
            return Err(NnError::ZeroWidthLayer);
        }
        if !(0.0..1.0).contains(&self.dropout_rate) {
            return Err(NnError::BadDropout {
                rate: self.dropout_rate,
            });
        }
        Ok(())
    }

    pub fn num_layers(&self) -> usize {
        self.layer_dims.len() - 1
    }
}

/// One affine layer: `out = in * weight + bias`, weight stored input-major
/// (fan_in rows, fan_out columns).
#[derive(Debug, Clone, PartialEq)]
pub struct DenseLayer {
    pub weight: DenseMatrix,
    pub bias: Vec<f64>,
}

/// Layer stack. Parameters are public so the optimizer and tests can reach
/// them; structure (layer count and widths) is fixed after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Mlp {
    layers: Vec<DenseLayer>,
    dims: Vec<usize>,
}

impl Mlp {
    /// Seeded uniform initialization with per-layer scale
    /// sqrt(6 / (fan_in + fan_out)); biases start at zero.
    pub fn init(config: &MlpConfig) -> Result<Self, NnError> {
        config.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let mut layers = Vec::with_capacity(config.num_layers());
        for pair in config.layer_dims.windows(2) {
            let (fan_in, fan_out) = (pair[0], pair[1]);
            let scale = libm::sqrt(6.0 / (fan_in + fan_out) as f64);
            let dist = Uniform::new(-scale, scale).expect("finite positive scale");
            let values: Vec<f64> = (0..fan_in * fan_out)
                .map(|_| dist.sample(&mut rng))
                .collect();
            layers.push(DenseLayer {
                weight: DenseMatrix::from_vec(fan_in, fan_out, values),
                bias: vec![0.0; fan_out],
            });
        }
        Ok(Self {
            layers,
            dims: config.layer_dims.clone(),
        })
    }

    pub fn layers(&self) -> &[DenseLayer] {
        &self.layers
    }

    pub fn layers_mut(&mut self) -> &mut [DenseLayer] {
        &mut self.layers
    }

    pub fn num_layers(&self) -> usize {
        self.layers.len()
    }

    /// Stage widths: input, hidden layers, output.
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }
}
