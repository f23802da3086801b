//! The acceptance gate. Ten numbered criteria cover the worked seven-node
//! example, the algebraic identities of the projection, gradient
//! correctness, CLI determinism, learnability on a constructed toy,
//! structure-dependent accuracy gains, the synthetic homophily trend, and
//! (when benchmark files are present) absolute accuracy targets.
//!
//! Each test prints one `[acceptance] C<n> ...: PASS` or `: SKIP` line; run
//! with `--nocapture` to see them. Benchmark files are looked up under
//! `$UNIG_DATA_DIR`, falling back to `data/` at the repository root.

use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use unig::schema::{load_dataset, save_dataset, LoadOptions};
use unig_core::toy::{random_hypergraph, random_label_graph, separable_blobs, BlobSpec};
use unig_core::{
    build_incidence, build_projection, cross_entropy_masked, homophily_score, make_splits,
    synth_extend, train_splits, Dataset, DenseMatrix, EncoderPipeline, Hypergraph, LabelVector,
    MlpConfig, Normalization, Placement, ProjectionConfig, SplitProtocol, SplitSpec, SynthSpec,
    TrainConfig,
};

/// The seven-node, three-edge hypergraph whose matrices are spelled out
/// entry by entry below.
fn worked_example() -> Hypergraph {
    Hypergraph::new(7, vec![vec![0, 1, 2, 4], vec![2, 3], vec![4, 5, 6]]).unwrap()
}

const INCIDENCE: [[f64; 3]; 7] = [
    [1.0, 0.0, 0.0],
    [1.0, 0.0, 0.0],
    [1.0, 1.0, 0.0],
    [0.0, 1.0, 0.0],
    [1.0, 0.0, 1.0],
    [0.0, 0.0, 1.0],
    [0.0, 0.0, 1.0],
];

const PROJECTION: [[f64; 7]; 10] = [
    [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
    [1.0, 1.0, 1.0, 0.0, 1.0, 0.0, 0.0],
    [0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0],
];

const COMPOUND: [[f64; 7]; 7] = [
    [2.0, 1.0, 1.0, 0.0, 1.0, 0.0, 0.0],
    [1.0, 2.0, 1.0, 0.0, 1.0, 0.0, 0.0],
    [1.0, 1.0, 3.0, 1.0, 1.0, 0.0, 0.0],
    [0.0, 0.0, 1.0, 2.0, 0.0, 0.0, 0.0],
    [1.0, 1.0, 1.0, 0.0, 3.0, 1.0, 1.0],
    [0.0, 0.0, 0.0, 0.0, 1.0, 2.0, 1.0],
    [0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 2.0],
];

fn unnormalized_config() -> ProjectionConfig {
    ProjectionConfig {
        normalization: Normalization::None,
        ..ProjectionConfig::default()
    }
}

/// Dense row-normalized compound for weight 1 and identity permutation:
/// entry (i, j) is (delta_ij + sum over shared edges of 1/|e|) / (1 + d(i)).
fn row_normalized_reference(h: &Hypergraph) -> DenseMatrix {
    let incidence = build_incidence(h);
    let n = h.num_nodes();
    let mut reference = DenseMatrix::zeros(n, n);
    for i in 0..n {
        let node_degree = incidence.node_edges(i).len() as f64;
        for j in 0..n {
            let mut value = if i == j { 1.0 } else { 0.0 };
            for &e in incidence.node_edges(i) {
                if incidence.edge_members(e).contains(&j) {
                    value += 1.0 / incidence.edge_members(e).len() as f64;
                }
            }
            reference.set(i, j, value / (1.0 + node_degree));
        }
    }
    reference
}

fn share_edge(h: &Hypergraph, i: usize, j: usize) -> bool {
    h.edges()
        .iter()
        .any(|edge| edge.contains(&i) && edge.contains(&j))
}

fn random_permutation<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        perm.swap(i, j);
    }
    perm
}

fn ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
    let mut out = vec![0.0; values.len()];
    for (rank, &index) in order.iter().enumerate() {
        out[index] = rank as f64;
    }
    out
}

fn spearman(xs: &[f64], ys: &[f64]) -> f64 {
    let rx = ranks(xs);
    let ry = ranks(ys);
    let n = xs.len() as f64;
    let d2: f64 = rx
        .iter()
        .zip(&ry)
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    1.0 - 6.0 * d2 / (n * (n * n - 1.0))
}

/// Benchmark file directory: $UNIG_DATA_DIR, else `data/` two levels above
/// this crate (the repository root).
fn data_dir() -> PathBuf {
    match std::env::var_os("UNIG_DATA_DIR") {
        Some(dir) => PathBuf::from(dir),
        None => PathBuf::from(env!("CARGO_MANIFEST_DIR"))
            .join("..")
            .join("..")
            .join("data"),
    }
}

fn scratch(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("unig-acceptance-{tag}"));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).expect("scratch dir");
    dir
}

/// The toy used by criteria 7 and 8: two 20-node label-pure feature blobs
/// with twelve random rank-3 hyperedges inside each blob.
fn toy_blobs() -> Dataset {
    separable_blobs(&BlobSpec {
        nodes_per_class: 20,
        noise: 0.5,
        edges_per_class: 12,
        seed: 0,
    })
}

fn toy_split_spec(num_splits: usize) -> SplitSpec {
    SplitSpec::new(SplitProtocol::Uniform, (0.5, 0.25, 0.25), num_splits, 0)
}

#[test]
fn criterion_01_worked_example_matrices_are_reproduced_exactly() {
    let start = Instant::now();
    let h = worked_example();

    let incidence = build_incidence(&h).to_csr();
    assert_eq!((incidence.rows(), incidence.cols()), (7, 3));
    for (i, row) in INCIDENCE.iter().enumerate() {
        for (j, &want) in row.iter().enumerate() {
            assert_eq!(incidence.get(i, j), want, "B[{i}][{j}]");
        }
    }

    let projection = build_projection(&h, &unnormalized_config()).unwrap();
    let raw = projection.raw();
    assert_eq!((raw.rows(), raw.cols()), (10, 7));
    for (r, row) in PROJECTION.iter().enumerate() {
        for (c, &want) in row.iter().enumerate() {
            assert_eq!(raw.get(r, c), want, "P[{r}][{c}]");
        }
    }
    // Without normalization the reverse operator is the plain transpose.
    let reverse = projection.reverse();
    assert_eq!((reverse.rows(), reverse.cols()), (7, 10));
    for (c, row) in PROJECTION.iter().enumerate() {
        for (r, &want) in row.iter().enumerate() {
            assert_eq!(reverse.get(r, c), want, "Pt[{r}][{c}]");
        }
    }

    let compound = projection.compound();
    assert_eq!((compound.rows(), compound.cols()), (7, 7));
    for (i, row) in COMPOUND.iter().enumerate() {
        for (j, &want) in row.iter().enumerate() {
            assert_eq!(compound.get(i, j), want, "(PtP)[{i}][{j}]");
        }
    }

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}, budget 1 s");
    println!(
        "[acceptance] C1 worked-example matrices: PASS ({} ms)",
        elapsed.as_millis()
    );
}

#[test]
fn criterion_02_row_normalized_compound_matches_the_closed_form() {
    let tolerance = 1e-12;
    let mut worst: f64 = 0.0;
    let mut check = |h: &Hypergraph| {
        let projection = build_projection(h, &ProjectionConfig::default()).unwrap();
        let compound = projection.compound();
        let reference = row_normalized_reference(h);
        for i in 0..h.num_nodes() {
            for j in 0..h.num_nodes() {
                let got = compound.get(i, j);
                let want = reference.get(i, j);
                let diff = (got - want).abs();
                worst = worst.max(diff);
                assert!(
                    diff <= tolerance,
                    "entry ({i}, {j}): {got} vs {want}, diff {diff}"
                );
            }
        }
    };

    check(&worked_example());
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for _ in 0..100 {
        check(&random_hypergraph(&mut rng, 20, 15));
    }
    println!(
        "[acceptance] C2 row-normalized compound vs closed form: PASS (worst diff {worst:.2e}, tol 1e-12)"
    );
}

#[test]
fn criterion_03_compound_positivity_matches_the_shared_edge_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(30);
    for case in 0..200 {
        let h = random_hypergraph(&mut rng, 20, 15);
        let projection = build_projection(&h, &unnormalized_config()).unwrap();
        let compound = projection.compound();
        for i in 0..h.num_nodes() {
            for j in 0..h.num_nodes() {
                let expected = i == j || share_edge(&h, i, j);
                assert_eq!(
                    compound.get(i, j) > 0.0,
                    expected,
                    "case {case}: entry ({i}, {j})"
                );
            }
        }
    }
    println!("[acceptance] C3 compound positivity pattern (200 random hypergraphs): PASS");
}

#[test]
fn criterion_04_projected_rows_are_bijective_and_edges_reconstruct() {
    let mut rng = ChaCha8Rng::seed_from_u64(40);
    for case in 0..100 {
        let h = random_hypergraph(&mut rng, 20, 15);
        let n = h.num_nodes();
        let config = ProjectionConfig {
            permutation: Some(random_permutation(&mut rng, n)),
            ..ProjectionConfig::default()
        };
        let projection = build_projection(&h, &config).unwrap();

        // Node rows hit every node exactly once through the permutation.
        let mut seen = projection.permutation().to_vec();
        seen.sort_unstable();
        assert_eq!(seen, (0..n).collect::<Vec<_>>(), "case {case}");

        // Edge rows follow in declaration order and their support recovers
        // each edge's member set.
        let raw = projection.raw();
        for (j, edge) in h.edges().iter().enumerate() {
            let row: Vec<usize> = raw.row(n + j).map(|(col, _)| col).collect();
            let mut expected = edge.clone();
            expected.sort_unstable();
            assert_eq!(row, expected, "case {case}: edge {j}");
            assert!(raw.row(n + j).all(|(_, value)| value == 1.0));
        }
    }
    println!("[acceptance] C4 row bijectivity and edge reconstruction (100 random): PASS");
}

const GRAD_STEP: f64 = 1e-5;
const GRAD_MAX_REL_ERR: f64 = 1e-4;

fn gradient_instance() -> (Hypergraph, DenseMatrix, LabelVector, Vec<usize>) {
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
    (h, x, labels, vec![0, 2, 3, 5])
}

fn masked_loss(
    pipeline: &EncoderPipeline,
    x: &DenseMatrix,
    labels: &LabelVector,
    mask: &[usize],
) -> f64 {
    let logits = pipeline.forward_eval(x).unwrap();
    cross_entropy_masked(&logits, labels, mask).unwrap().0
}

fn check_gradients(mut pipeline: EncoderPipeline, tag: &str) {
    let (_, x, labels, mask) = gradient_instance();
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
                    .set(i, j, orig + GRAD_STEP);
                let up = masked_loss(&pipeline, &x, &labels, &mask);
                pipeline.mlp_mut().layers_mut()[layer]
                    .weight
                    .set(i, j, orig - GRAD_STEP);
                let down = masked_loss(&pipeline, &x, &labels, &mask);
                pipeline.mlp_mut().layers_mut()[layer].weight.set(i, j, orig);

                let numeric = (up - down) / (2.0 * GRAD_STEP);
                let a = analytic.layers[layer].weight.get(i, j);
                let err = (a - numeric).abs() / f64::max(1e-6, f64::max(a.abs(), numeric.abs()));
                assert!(
                    err < GRAD_MAX_REL_ERR,
                    "{tag}: weight [{layer}]({i},{j}) analytic {a} vs numeric {numeric}, rel {err}"
                );
            }
        }
        for j in 0..pipeline.mlp().layers()[layer].bias.len() {
            let orig = pipeline.mlp().layers()[layer].bias[j];
            pipeline.mlp_mut().layers_mut()[layer].bias[j] = orig + GRAD_STEP;
            let up = masked_loss(&pipeline, &x, &labels, &mask);
            pipeline.mlp_mut().layers_mut()[layer].bias[j] = orig - GRAD_STEP;
            let down = masked_loss(&pipeline, &x, &labels, &mask);
            pipeline.mlp_mut().layers_mut()[layer].bias[j] = orig;

            let numeric = (up - down) / (2.0 * GRAD_STEP);
            let a = analytic.layers[layer].bias[j];
            let err = (a - numeric).abs() / f64::max(1e-6, f64::max(a.abs(), numeric.abs()));
            assert!(
                err < GRAD_MAX_REL_ERR,
                "{tag}: bias [{layer}]({j}) analytic {a} vs numeric {numeric}, rel {err}"
            );
        }
    }
}

#[test]
fn criterion_05_gradients_match_finite_differences_for_every_placement() {
    let start = Instant::now();
    let (h, _, _, _) = gradient_instance();
    let mlp = MlpConfig::new(vec![4, 5, 4, 3], 0.0, 500);

    check_gradients(
        EncoderPipeline::new(None, Placement::None, &mlp).unwrap(),
        "no projection",
    );
    // Every (forward, reverse) stage pair of a three-layer network, a
    // superset of the placements compared in the ablation grid.
    let mut checked = 1;
    for forward in 0..=3usize {
        for reverse in forward..=3usize {
            let projection = build_projection(&h, &ProjectionConfig::default()).unwrap();
            let placement = Placement::Pair { forward, reverse };
            check_gradients(
                EncoderPipeline::new(Some(projection), placement, &mlp).unwrap(),
                &format!("placement ({forward}, {reverse})"),
            );
            checked += 1;
        }
    }

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}, budget 30 s");
    println!(
        "[acceptance] C5 gradient checks ({checked} placements, rel err < 1e-4): PASS ({} ms)",
        elapsed.as_millis()
    );
}

#[test]
fn criterion_06_same_seed_invocations_emit_byte_identical_reports() {
    let dir = scratch("determinism");
    let data = dir.join("blobs.json");
    save_dataset(&toy_blobs(), &data).unwrap();
    let out_a = dir.join("a.json");
    let out_b = dir.join("b.json");

    for out in [&out_a, &out_b] {
        let status = Command::new(env!("CARGO_BIN_EXE_unig"))
            .args([
                "train",
                "--dataset",
                data.to_str().unwrap(),
                "--splits",
                "3",
                "--epochs",
                "40",
                "--seed",
                "4242",
                "--out",
                out.to_str().unwrap(),
            ])
            .status()
            .expect("binary spawns");
        assert!(status.success());
    }

    let bytes_a = std::fs::read(&out_a).unwrap();
    let bytes_b = std::fs::read(&out_b).unwrap();
    assert_eq!(bytes_a, bytes_b, "reports differ between invocations");
    println!(
        "[acceptance] C6 determinism (two runs, seed 4242): PASS ({} identical bytes)",
        bytes_a.len()
    );
}

#[test]
fn criterion_07_the_toy_blobs_are_learned_to_high_accuracy() {
    let start = Instant::now();
    let dataset = toy_blobs();
    let splits = make_splits(&dataset, &toy_split_spec(1)).unwrap();
    let projection = build_projection(dataset.structure(), &ProjectionConfig::default()).unwrap();
    let cfg = TrainConfig {
        learning_rate: 0.01,
        weight_decay: 0.0,
        epochs: 500,
        seed: 0,
    };
    let report = train_splits(
        dataset.features(),
        dataset.labels(),
        &splits,
        Some(&projection),
        Placement::Pair {
            forward: 0,
            reverse: 2,
        },
        &[16],
        0.0,
        &cfg,
    )
    .unwrap();

    let outcome = &report.outcomes[0];
    assert_eq!(
        outcome.best_train_accuracy, 1.0,
        "train accuracy peaked at {}",
        outcome.best_train_accuracy
    );
    assert!(
        outcome.test_accuracy >= 0.95,
        "test accuracy {} below 0.95",
        outcome.test_accuracy
    );
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}, budget 10 s");
    println!(
        "[acceptance] C7 toy learnability (train {}, test {}): PASS ({} ms)",
        outcome.best_train_accuracy,
        outcome.test_accuracy,
        elapsed.as_millis()
    );
}

#[test]
fn criterion_08_projection_beats_no_projection_on_the_homophilic_toy() {
    let dataset = toy_blobs();
    let splits = make_splits(&dataset, &toy_split_spec(10)).unwrap();
    let cfg = TrainConfig {
        learning_rate: 0.01,
        weight_decay: 0.0,
        epochs: 500,
        seed: 0,
    };

    let projection = build_projection(dataset.structure(), &ProjectionConfig::default()).unwrap();
    let with_projection = train_splits(
        dataset.features(),
        dataset.labels(),
        &splits,
        Some(&projection),
        Placement::Pair {
            forward: 0,
            reverse: 2,
        },
        &[16],
        0.0,
        &cfg,
    )
    .unwrap();
    let without = train_splits(
        dataset.features(),
        dataset.labels(),
        &splits,
        None,
        Placement::None,
        &[16],
        0.0,
        &cfg,
    )
    .unwrap();

    assert!(
        with_projection.mean_test_accuracy >= without.mean_test_accuracy,
        "projection mean {} fell below baseline mean {}",
        with_projection.mean_test_accuracy,
        without.mean_test_accuracy
    );
    println!(
        "[acceptance] C8 projection vs baseline over 10 splits ({:.3} >= {:.3}): PASS",
        with_projection.mean_test_accuracy, without.mean_test_accuracy
    );
}

/// Mean clique-expansion homophily after growing every 2-edge to the given
/// rank with the given same-label probability, averaged over 20 seeds.
fn mean_grown_homophily(base: &Dataset, rank: usize, probability: f64) -> f64 {
    let mut total = 0.0;
    for seed in 0..20u64 {
        let spec = SynthSpec {
            rank,
            probability,
            seed,
        };
        let (grown, _) = synth_extend(base, &spec).unwrap();
        total += homophily_score(grown.structure(), grown.labels())
            .unwrap()
            .value;
    }
    total / 20.0
}

#[test]
fn criterion_09_grown_hyperedges_track_the_label_probability() {
    let probabilities = [0.0, 0.2, 0.4, 0.6, 0.8, 1.0];
    let texas_path = data_dir().join("texas.json");

    let (base, label) = if texas_path.is_file() {
        let texas = load_dataset(&texas_path, &LoadOptions::default()).unwrap();
        (texas, "texas")
    } else {
        (random_label_graph(60, 4, 80, 5), "synthetic fallback")
    };

    let means: Vec<f64> = probabilities
        .iter()
        .map(|&p| mean_grown_homophily(&base, 7, p))
        .collect();
    let correlation = spearman(&probabilities, &means);
    assert!(
        correlation > 0.9,
        "Spearman correlation {correlation} not above 0.9; means {means:?}"
    );

    if label == "texas" {
        let saturated = means[probabilities.len() - 1];
        assert!(
            (saturated - 0.73).abs() <= 0.05,
            "rank-7 homophily at probability 1 was {saturated}, expected 0.73 +/- 0.05"
        );
    }
    println!(
        "[acceptance] C9 homophily trend on {label} (Spearman {correlation:.3} > 0.9): PASS"
    );
}

#[allow(clippy::too_many_arguments)]
fn benchmark_accuracy(
    dataset: &Dataset,
    spec: &SplitSpec,
    pv_weight: f64,
    hidden: usize,
    dropout: f64,
    lr: f64,
    weight_decay: f64,
    seed: u64,
) -> f64 {
    let splits = make_splits(dataset, spec).unwrap();
    let config = ProjectionConfig {
        pv_weight,
        ..ProjectionConfig::default()
    };
    let projection = build_projection(dataset.structure(), &config).unwrap();
    let cfg = TrainConfig {
        learning_rate: lr,
        weight_decay,
        epochs: 500,
        seed,
    };
    train_splits(
        dataset.features(),
        dataset.labels(),
        &splits,
        Some(&projection),
        Placement::Pair {
            forward: 0,
            reverse: 2,
        },
        &[hidden],
        dropout,
        &cfg,
    )
    .unwrap()
    .mean_test_accuracy
}

#[test]
fn criterion_10_benchmark_accuracy_targets() {
    let dir = data_dir();
    let zoo_path = dir.join("zoo.json");
    let texas_path = dir.join("texas.json");
    if !zoo_path.is_file() && !texas_path.is_file() {
        println!(
            "[acceptance] C10 benchmark accuracy: SKIP (no zoo.json or texas.json under {})",
            dir.display()
        );
        return;
    }

    if zoo_path.is_file() {
        let zoo = load_dataset(&zoo_path, &LoadOptions::default()).unwrap();
        let spec = SplitSpec::new(SplitProtocol::Uniform, (0.5, 0.25, 0.25), 10, 1);
        let accuracy = benchmark_accuracy(&zoo, &spec, 1.0, 64, 0.5, 0.01, 0.0005, 1);
        assert!(
            accuracy >= 0.93,
            "zoo mean test accuracy {accuracy} below 0.93"
        );
        println!("[acceptance] C10a zoo accuracy {accuracy:.4} >= 0.93: PASS");
    } else {
        println!("[acceptance] C10a zoo accuracy: SKIP (no zoo.json)");
    }

    if texas_path.is_file() {
        let texas = load_dataset(&texas_path, &LoadOptions::default()).unwrap();
        let spec = SplitSpec::new(SplitProtocol::PerClass, (0.48, 0.32, 0.20), 10, 1);
        let accuracy = benchmark_accuracy(&texas, &spec, 100.0, 64, 0.5, 0.01, 0.0005, 1);
        assert!(
            accuracy >= 0.80,
            "texas mean test accuracy {accuracy} below 0.80"
        );
        println!("[acceptance] C10b texas accuracy {accuracy:.4} >= 0.80: PASS");
    } else {
        println!("[acceptance] C10b texas accuracy: SKIP (no texas.json)");
    }
}
