//! Central finite-difference validation of the analytic gradients for every
//! projection placement of a three-layer network, plus the no-projection
//! baseline and a two-hop compound variant. Dropout is off so the training
//! forward pass is deterministic and differentiable.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use unig_core::{
    build_projection, cross_entropy_masked, DenseMatrix, EncoderPipeline, Hypergraph, LabelVector,
    MlpConfig, Normalization, Placement, ProjectionConfig,
};

const STEP: f64 = 1e-5;
const MAX_REL_ERR: f64 = 1e-4;

fn instance() -> (Hypergraph, DenseMatrix, LabelVector, Vec<usize>) {
    let h = Hypergraph::new(
        6,
        vec![vec![0, 1, 2], vec![2, 3], vec![3, 4, 5], vec![1, 4], vec![0, 5]],
    )
    .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(900);
    let mut x = DenseMatrix::zeros(6, 4);
    for i in 0..6 {
        for j in 0..4 {
            x.set(i, j, rng.random_range(-1.0..1.0));
        }
    }
    let labels = LabelVector::new(vec![0, 1, 2, 0, 1, 2], 3).unwrap();
    let mask = vec![0, 2, 3, 5];
    (h, x, labels, mask)
}

fn eval_loss(
    pipeline: &EncoderPipeline,
    x: &DenseMatrix,
    labels: &LabelVector,
    mask: &[usize],
) -> f64 {
    let logits = pipeline.forward_eval(x).unwrap();
    cross_entropy_masked(&logits, labels, mask).unwrap().0
}

fn relative_error(analytic: f64, numeric: f64) -> f64 {
    (analytic - numeric).abs() / f64::max(1e-6, f64::max(analytic.abs(), numeric.abs()))
}

/// Compares every weight and bias gradient against a central difference of
/// the masked loss.
fn check_pipeline(mut pipeline: EncoderPipeline, tag: &str) {
    let (_, x, labels, mask) = instance();
    let mut rng = ChaCha8Rng::seed_from_u64(901);
    let trace = pipeline.forward_train(&x, &mut rng).unwrap();
    let (_, dlogits) = cross_entropy_masked(trace.logits(), &labels, &mask).unwrap();
    let analytic = pipeline.backward(trace, &dlogits).unwrap();

    for layer in 0..pipeline.mlp().num_layers() {
        let (rows, cols) = {
            let w = &pipeline.mlp().layers()[layer].weight;
            (w.rows(), w.cols())
        };
        for i in 0..rows {
            for j in 0..cols {
                let orig = pipeline.mlp().layers()[layer].weight.get(i, j);
                pipeline.mlp_mut().layers_mut()[layer]
                    .weight
                    .set(i, j, orig + STEP);
                let up = eval_loss(&pipeline, &x, &labels, &mask);
                pipeline.mlp_mut().layers_mut()[layer]
                    .weight
                    .set(i, j, orig - STEP);
                let down = eval_loss(&pipeline, &x, &labels, &mask);
                pipeline.mlp_mut().layers_mut()[layer].weight.set(i, j, orig);

                let numeric = (up - down) / (2.0 * STEP);
                let a = analytic.layers[layer].weight.get(i, j);
                let err = relative_error(a, numeric);
                assert!(
                    err < MAX_REL_ERR,
                    "{tag}: weight [{layer}]({i},{j}) analytic {a} vs numeric {numeric}, rel {err}"
                );
            }
        }
        for j in 0..pipeline.mlp().layers()[layer].bias.len() {
            let orig = pipeline.mlp().layers()[layer].bias[j];
            pipeline.mlp_mut().layers_mut()[layer].bias[j] = orig + STEP;
            let up = eval_loss(&pipeline, &x, &labels, &mask);
            pipeline.mlp_mut().layers_mut()[layer].bias[j] = orig - STEP;
            let down = eval_loss(&pipeline, &x, &labels, &mask);
            pipeline.mlp_mut().layers_mut()[layer].bias[j] = orig;

            let numeric = (up - down) / (2.0 * STEP);
            let a = analytic.layers[layer].bias[j];
            let err = relative_error(a, numeric);
            assert!(
                err < MAX_REL_ERR,
                "{tag}: bias [{layer}]({j}) analytic {a} vs numeric {numeric}, rel {err}"
            );
        }
    }
}

fn pipeline_with(
    placement: Placement,
    normalization: Normalization,
    hops: usize,
    seed: u64,
) -> EncoderPipeline {
    let (h, _, _, _) = instance();
    let projection = match placement {
        Placement::None => None,
        Placement::Pair { .. } => Some(
            build_projection(
                &h,
                &ProjectionConfig {
                    normalization,
                    hops,
                    ..ProjectionConfig::default()
                },
            )
            .unwrap(),
        ),
    };
    let config = MlpConfig::new(vec![4, 5, 4, 3], 0.0, seed);
    EncoderPipeline::new(projection, placement, &config).unwrap()
}

#[test]
fn gradients_match_finite_differences_without_projection() {
    check_pipeline(
        pipeline_with(Placement::None, Normalization::RowRow, 1, 910),
        "none",
    );
}

#[test]
fn gradients_match_finite_differences_for_every_placement_pair() {
    let mut seed = 920;
    for forward in 0..=3usize {
        for reverse in forward..=3usize {
            let placement = Placement::Pair { forward, reverse };
            check_pipeline(
                pipeline_with(placement, Normalization::RowRow, 1, seed),
                &format!("placement ({forward}, {reverse})"),
            );
            seed += 1;
        }
    }
}

#[test]
fn gradients_match_finite_differences_for_other_normalizations() {
    check_pipeline(
        pipeline_with(
            Placement::Pair {
                forward: 0,
                reverse: 2,
            },
            Normalization::None,
            1,
            940,
        ),
        "unnormalized (0, 2)",
    );
    check_pipeline(
        pipeline_with(
            Placement::Pair {
                forward: 1,
                reverse: 3,
            },
            Normalization::ColRow,
            1,
            941,
        ),
        "col-row (1, 3)",
    );
}

#[test]
fn gradients_match_finite_differences_through_the_two_hop_compound() {
    check_pipeline(
        pipeline_with(
            Placement::Pair {
                forward: 1,
                reverse: 1,
            },
            Normalization::RowRow,
            2,
            950,
        ),
        "two-hop compound (1, 1)",
    );
}
