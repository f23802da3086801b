//! Constructed datasets and random structures for tests and demos.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::data::{synthetic_features, Dataset, DatasetKind};
use crate::hypergraph::{Hypergraph, LabelVector};
use crate::rng::derive_seed;

/// Two label-pure Gaussian feature blobs with rank-3 hyperedges drawn inside
/// each blob. Linearly separable at low noise; the within-blob structure
/// carries label signal at any noise level.
#[derive(Debug, Clone, PartialEq)]
pub struct BlobSpec {
    /// Nodes per blob; the dataset has twice this many nodes.
    pub nodes_per_class: usize,
    /// Standard deviation of the Gaussian noise around the one-hot means.
    pub noise: f64,
    /// Distinct rank-3 hyperedges sampled within each blob.
    pub edges_per_class: usize,
    pub seed: u64,
}

impl Default for BlobSpec {
    fn default() -> Self {
        Self {
            nodes_per_class: 20,
            noise: 1.0,
            edges_per_class: 12,
            seed: 0,
        }
    }
}

/// Builds the two-blob dataset: nodes `0..n` carry class 0, nodes `n..2n`
/// class 1, features are noisy one-hot rows, and every hyperedge joins three
/// distinct nodes of one blob.
pub fn separable_blobs(spec: &BlobSpec) -> Dataset {
    assert!(
        spec.nodes_per_class >= 3,
        "rank-3 edges need at least 3 nodes per blob"
    );
    let n = spec.nodes_per_class;
    let mut labels = Vec::with_capacity(2 * n);
    labels.extend(core::iter::repeat_n(0, n));
    labels.extend(core::iter::repeat_n(1, n));
    let labels = LabelVector::new(labels, 2).expect("labels in range");
    let features = synthetic_features(&labels, spec.noise, derive_seed(spec.seed, 0));

    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(spec.seed, 1));
    let mut edges: Vec<Vec<usize>> = Vec::with_capacity(2 * spec.edges_per_class);
    for class in 0..2 {
        let offset = class * n;
        let mut drawn = 0;
        while drawn < spec.edges_per_class {
            let edge = distinct_triple(&mut rng, offset, n);
            if !edges.contains(&edge) {
                edges.push(edge);
                drawn += 1;
            }
        }
    }
    let structure = Hypergraph::new(2 * n, edges).expect("within-blob triples are valid");
    Dataset::new(
        String::from("two-blobs"),
        DatasetKind::Hypergraph,
        structure,
        features,
        labels,
    )
    .expect("constructed dataset is consistent")
}

fn distinct_triple<R: Rng>(rng: &mut R, offset: usize, pool: usize) -> Vec<usize> {
    loop {
        let a = offset + rng.random_range(0..pool);
        let b = offset + rng.random_range(0..pool);
        let c = offset + rng.random_range(0..pool);
        if a != b && a != c && b != c {
            let mut edge = alloc::vec![a, b, c];
            edge.sort_unstable();
            return edge;
        }
    }
}

/// A random graph dataset with balanced labels and uniformly drawn distinct
/// pairwise edges, used as growth substrate when no benchmark file exists.
pub fn random_label_graph(
    num_nodes: usize,
    num_classes: usize,
    num_edges: usize,
    seed: u64,
) -> Dataset {
    assert!(num_classes >= 1 && num_nodes >= num_classes);
    assert!(
        num_edges <= num_nodes * (num_nodes - 1) / 2,
        "more edges requested than distinct pairs exist"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Balanced round-robin labels, then shuffled.
    let mut labels: Vec<usize> = (0..num_nodes).map(|i| i % num_classes).collect();
    for i in (1..labels.len()).rev() {
        let j = rng.random_range(0..=i);
        labels.swap(i, j);
    }
    let labels = LabelVector::new(labels, num_classes).expect("labels in range");

    let mut edges: Vec<Vec<usize>> = Vec::with_capacity(num_edges);
    while edges.len() < num_edges {
        let a = rng.random_range(0..num_nodes);
        let b = rng.random_range(0..num_nodes);
        if a == b {
            continue;
        }
        let edge = alloc::vec![a.min(b), a.max(b)];
        if !edges.contains(&edge) {
            edges.push(edge);
        }
    }
    let features = synthetic_features(&labels, 0.5, derive_seed(seed, 1));
    let structure = Hypergraph::new(num_nodes, edges).expect("distinct pairs are valid");
    Dataset::new(
        format!("random-label-graph-{seed}"),
        DatasetKind::Graph,
        structure,
        features,
        labels,
    )
    .expect("constructed dataset is consistent")
}

/// A random hypergraph with 2..=max_nodes nodes and up to `max_edges`
/// distinct edges of size 2..=min(5, n); duplicate draws are skipped, so the
/// edge count may fall short of the bound.
pub fn random_hypergraph<R: Rng>(rng: &mut R, max_nodes: usize, max_edges: usize) -> Hypergraph {
    assert!(max_nodes >= 2);
    let num_nodes = rng.random_range(2..=max_nodes);
    let target_edges = rng.random_range(0..=max_edges);
    let max_size = num_nodes.min(5);
    let mut edges: Vec<Vec<usize>> = Vec::new();
    for _ in 0..target_edges {
        let size = rng.random_range(2..=max_size);
        let mut members: Vec<usize> = Vec::with_capacity(size);
        while members.len() < size {
            let v = rng.random_range(0..num_nodes);
            if !members.contains(&v) {
                members.push(v);
            }
        }
        members.sort_unstable();
        if !edges.contains(&members) {
            edges.push(members);
        }
    }
    Hypergraph::new(num_nodes, edges).expect("distinct sorted edges are valid")
}
