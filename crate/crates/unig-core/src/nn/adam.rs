//! Adam optimizer with bias correction and coupled L2 weight decay.

use alloc::vec;
use alloc::vec::Vec;

use crate::dense::DenseMatrix;
use crate::nn::pipeline::Gradients;
use crate::nn::Mlp;

struct LayerMoments {
    weight_m: Vec<f64>,
    weight_v: Vec<f64>,
    bias_m: Vec<f64>,
    bias_v: Vec<f64>,
}

/// First/second moment accumulators shaped like the network parameters.
/// Weight decay is coupled: `decay * param` is added to the gradient before
/// the moment updates, for weights and biases alike.
pub struct AdamState {
    learning_rate: f64,
    weight_decay: f64,
    beta1: f64,
    beta2: f64,
    epsilon: f64,
    step_count: u64,
    moments: Vec<LayerMoments>,
}

impl AdamState {
    pub fn new(learning_rate: f64, weight_decay: f64, mlp: &Mlp) -> Self {
        let moments = mlp
            .layers()
            .iter()
            .map(|layer| LayerMoments {
                weight_m: vec![0.0; layer.weight.values().len()],
                weight_v: vec![0.0; layer.weight.values().len()],
                bias_m: vec![0.0; layer.bias.len()],
                bias_v: vec![0.0; layer.bias.len()],
            })
            .collect();
        Self {
            learning_rate,
            weight_decay,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            step_count: 0,
            moments,
        }
    }

    pub fn step_count(&self) -> u64 {
        self.step_count
    }

    /// One update over every parameter. Panics if `grads` was produced for a
    /// different network shape.
    pub fn step(&mut self, mlp: &mut Mlp, grads: &Gradients) {
        assert_eq!(grads.layers.len(), self.moments.len(), "layer count mismatch");
        self.step_count += 1;
        let bias_fix1 = 1.0 - libm::pow(self.beta1, self.step_count as f64);
        let bias_fix2 = 1.0 - libm::pow(self.beta2, self.step_count as f64);
        for ((layer, grad), moments) in mlp
            .layers_mut()
            .iter_mut()
            .zip(&grads.layers)
            .zip(&mut self.moments)
        {
            update_slice(
                layer.weight.values_mut(),
                grad.weight.values(),
                &mut moments.weight_m,
                &mut moments.weight_v,
                self.learning_rate,
                self.weight_decay,
                self.beta1,
                self.beta2,
                self.epsilon,
                bias_fix1,
                bias_fix2,
            );
            update_slice(
                &mut layer.bias,
                &grad.bias,
                &mut moments.bias_m,
                &mut moments.bias_v,
                self.learning_rate,
                self.weight_decay,
                self.beta1,
                self.beta2,
                self.epsilon,
                bias_fix1,
                bias_fix2,
            );
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn update_slice(
    params: &mut [f64],
    grads: &[f64],
    m: &mut [f64],
    v: &mut [f64],
    lr: f64,
    decay: f64,
    beta1: f64,
    beta2: f64,
    epsilon: f64,
    bias_fix1: f64,
    bias_fix2: f64,
) {
    assert_eq!(params.len(), grads.len(), "parameter shape mismatch");
    for i in 0..params.len() {
        let g = grads[i] + decay * params[i];
        m[i] = beta1 * m[i] + (1.0 - beta1) * g;
        v[i] = beta2 * v[i] + (1.0 - beta2) * g * g;
        let m_hat = m[i] / bias_fix1;
        let v_hat = v[i] / bias_fix2;
        params[i] -= lr * m_hat / (libm::sqrt(v_hat) + epsilon);
    }
}

/// Per-layer gradient buffers shaped like the network.
pub(crate) fn zero_like(mlp: &Mlp) -> Gradients {
    Gradients {
        layers: mlp
            .layers()
            .iter()
            .map(|layer| crate::nn::pipeline::LayerGrads {
                weight: DenseMatrix::zeros(layer.weight.rows(), layer.weight.cols()),
                bias: vec![0.0; layer.bias.len()],
            })
            .collect(),
    }
}
