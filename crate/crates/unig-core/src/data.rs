//! Datasets, split generation, and synthetic hypergraph growth.
//!
//! A dataset couples a hypergraph with node features and labels. Splits
//! follow two protocols: per-class fractions (stratified) or uniform over
//! all nodes. Synthetic growth extends every pairwise edge of a graph to a
//! fixed rank by repeatedly adding nodes, preferring label-sharing nodes
//! with a configurable probability, which dials the homophily of the result.

use alloc::string::String;
use alloc::vec::Vec;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use thiserror::Error;

use crate::dense::DenseMatrix;
use crate::hypergraph::{clique_expansion, Hypergraph, HypergraphError, LabelVector};
use crate::rng::derive_seed;

#[derive(Debug, Error, PartialEq)]
pub enum DataError {
    #[error("feature matrix has {rows} rows for {nodes} nodes")]
    FeatureRowMismatch { rows: usize, nodes: usize },
    #[error("label vector covers {labels} nodes, structure has {nodes}")]
    LabelRowMismatch { labels: usize, nodes: usize },
    #[error("class {class} has no members")]
    EmptyClass { class: usize },
    #[error("kind is graph but edge {edge} has {size} members")]
    NotAGraph { edge: usize, size: usize },
    #[error("split fractions must be positive and sum to 1, got {train} + {val} + {test}")]
    BadFractions { train: f64, val: f64, test: f64 },
    #[error("zero splits requested")]
    NoSplits,
    #[error("per-class splits need at least 3 members per class; class {class} has {size}")]
    ClassTooSmall { class: usize, size: usize },
    #[error("target rank {rank} exceeds the node count {nodes}")]
    RankTooLarge { rank: usize, nodes: usize },
    #[error("target rank must be at least 2, got {rank}")]
    RankTooSmall { rank: usize },
    #[error("probability must be in [0, 1], got {probability}")]
    BadProbability { probability: f64 },
    #[error("synthetic growth starts from a graph, got a hypergraph")]
    GrowthNeedsGraph,
    #[error("expansion starts from a hypergraph, got a graph")]
    ExpansionNeedsHypergraph,
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DatasetKind {
    Graph,
    Hypergraph,
}

/// A named structure with node features and labels. Constructor-validated:
/// feature rows and label length equal the node count, every class has at
/// least one member, and the graph kind only carries size-2 edges.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    name: String,
    kind: DatasetKind,
    structure: Hypergraph,
    features: DenseMatrix,
    labels: LabelVector,
}

impl Dataset {
    pub fn new(
        name: String,
        kind: DatasetKind,
        structure: Hypergraph,
        features: DenseMatrix,
        labels: LabelVector,
    ) -> Result<Self, DataError> {
        if features.rows() != structure.num_nodes() {
            return Err(DataError::FeatureRowMismatch {
                rows: features.rows(),
                nodes: structure.num_nodes(),
            });
        }
        if labels.len() != structure.num_nodes() {
            return Err(DataError::LabelRowMismatch {
                labels: labels.len(),
                nodes: structure.num_nodes(),
            });
        }
        let mut counts = alloc::vec![0usize; labels.num_classes()];
        for &label in labels.labels() {
            counts[label] += 1;
        }
        if let Some(class) = counts.iter().position(|&c| c == 0) {
            return Err(DataError::EmptyClass { class });
        }
        if kind == DatasetKind::Graph {
            if let Some((edge, members)) = structure
                .edges()
                .iter()
                .enumerate()
                .find(|(_, e)| e.len() != 2)
            {
                return Err(DataError::NotAGraph {
                    edge,
                    size: members.len(),
                });
            }
        }
        Ok(Self {
            name,
            kind,
            structure,
            features,
            labels,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> DatasetKind {
        self.kind
    }

    pub fn structure(&self) -> &Hypergraph {
        &self.structure
    }

    pub fn features(&self) -> &DenseMatrix {
        &self.features
    }

    pub fn labels(&self) -> &LabelVector {
        &self.labels
    }

    pub fn num_nodes(&self) -> usize {
        self.structure.num_nodes()
    }

    pub fn num_classes(&self) -> usize {
        self.labels.num_classes()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitProtocol {
    /// Shuffle within each class; floor fractions go to train and val, the
    /// remainder to test. Keeps every class present in train when possible.
    PerClass,
    /// One shuffle over all nodes, floor fractions as above.
    Uniform,
}

/// How to cut a dataset into train/val/test node sets.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitSpec {
    pub protocol: SplitProtocol,
    pub train_fraction: f64,
    pub val_fraction: f64,
    pub test_fraction: f64,
    pub num_splits: usize,
    pub seed: u64,
}

impl SplitSpec {
    pub fn new(
        protocol: SplitProtocol,
        fractions: (f64, f64, f64),
        num_splits: usize,
        seed: u64,
    ) -> Self {
        Self {
            protocol,
            train_fraction: fractions.0,
            val_fraction: fractions.1,
            test_fraction: fractions.2,
            num_splits,
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), DataError> {
        let (t, v, s) = (self.train_fraction, self.val_fraction, self.test_fraction);
        let sum = t + v + s;
        if !(t > 0.0 && v > 0.0 && s > 0.0) || libm::fabs(sum - 1.0) > 1e-9 {
            return Err(DataError::BadFractions {
                train: t,
                val: v,
                test: s,
            });
        }
        if self.num_splits == 0 {
            return Err(DataError::NoSplits);
        }
        Ok(())
    }
}

/// Disjoint node-index sets covering the whole dataset; each list sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub train: Vec<usize>,
    pub val: Vec<usize>,
    pub test: Vec<usize>,
}

/// Floor of `fraction * count`, nudged so decimal fractions whose binary
/// representation falls a hair short (0.7 * 10 = 6.999...) still floor to
/// the intended integer.
fn floor_share(fraction: f64, count: usize) -> usize {
    libm::floor(fraction * count as f64 + 1e-9) as usize
}

fn shuffle<R: Rng>(indices: &mut [usize], rng: &mut R) {
    // Fisher-Yates, fixed draw order for reproducibility.
    for i in (1..indices.len()).rev() {
        let j = rng.random_range(0..=i);
        indices.swap(i, j);
    }
}

/// Generates `spec.num_splits` independent splits; shuffle seeds derive from
/// `spec.seed` and the split index, so any prefix of the list is stable.
pub fn make_splits(dataset: &Dataset, spec: &SplitSpec) -> Result<Vec<Split>, DataError> {
    spec.validate()?;
    if spec.protocol == SplitProtocol::PerClass {
        let mut counts = alloc::vec![0usize; dataset.num_classes()];
        for &label in dataset.labels().labels() {
            counts[label] += 1;
        }
        if let Some((class, &size)) = counts.iter().enumerate().find(|(_, &c)| c < 3) {
            return Err(DataError::ClassTooSmall { class, size });
        }
    }
    let mut splits = Vec::with_capacity(spec.num_splits);
    for index in 0..spec.num_splits {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(spec.seed, index as u64));
        let mut split = Split {
            train: Vec::new(),
            val: Vec::new(),
            test: Vec::new(),
        };
        let assign = |pool: &mut Vec<usize>, split: &mut Split, rng: &mut ChaCha8Rng| {
            shuffle(pool, rng);
            let n_train = floor_share(spec.train_fraction, pool.len());
            let n_val = floor_share(spec.val_fraction, pool.len());
            split.train.extend_from_slice(&pool[..n_train]);
            split.val.extend_from_slice(&pool[n_train..n_train + n_val]);
            split.test.extend_from_slice(&pool[n_train + n_val..]);
        };
        match spec.protocol {
            SplitProtocol::PerClass => {
                for mut members in dataset.labels().class_members() {
                    assign(&mut members, &mut split, &mut rng);
                }
            }
            SplitProtocol::Uniform => {
                let mut all: Vec<usize> = (0..dataset.num_nodes()).collect();
                assign(&mut all, &mut split, &mut rng);
            }
        }
        split.train.sort_unstable();
        split.val.sort_unstable();
        split.test.sort_unstable();
        splits.push(split);
    }
    Ok(splits)
}

/// Parameters for growing pairwise edges into rank-`rank` hyperedges.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthSpec {
    /// Target member count per grown edge, >= 2.
    pub rank: usize,
    /// Chance that each added node is drawn from the label-sharing pool
    /// rather than from all remaining nodes.
    pub probability: f64,
    pub seed: u64,
}

/// Bookkeeping from a growth run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SynthStats {
    /// Label-sharing draws that fell back to the uniform pool because no
    /// candidate outside the edge shared a label with any member.
    pub fallback_count: usize,
}

/// Grows every 2-edge of a graph dataset to exactly `spec.rank` members by
/// adding one node at a time: with probability `spec.probability` the node
/// is drawn uniformly from nodes sharing a label with a current member,
/// otherwise uniformly from all nodes outside the edge. Features and labels
/// are copied; duplicate grown edges are removed.
pub fn synth_extend(
    dataset: &Dataset,
    spec: &SynthSpec,
) -> Result<(Dataset, SynthStats), DataError> {
    if dataset.kind() != DatasetKind::Graph {
        return Err(DataError::GrowthNeedsGraph);
    }
    if spec.rank < 2 {
        return Err(DataError::RankTooSmall { rank: spec.rank });
    }
    if spec.rank > dataset.num_nodes() {
        return Err(DataError::RankTooLarge {
            rank: spec.rank,
            nodes: dataset.num_nodes(),
        });
    }
    if !(0.0..=1.0).contains(&spec.probability) {
        return Err(DataError::BadProbability {
            probability: spec.probability,
        });
    }
    let labels = dataset.labels().labels();
    let num_nodes = dataset.num_nodes();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut stats = SynthStats::default();
    let mut grown: Vec<Vec<usize>> = Vec::with_capacity(dataset.structure().num_edges());
    let mut in_edge = alloc::vec![false; num_nodes];
    for edge in dataset.structure().edges() {
        let mut members = edge.clone();
        for &m in &members {
            in_edge[m] = true;
        }
        while members.len() < spec.rank {
            let same_label_branch = rng.random::<f64>() < spec.probability;
            let chosen = if same_label_branch {
                // Candidates outside the edge sharing a label with any
                // current member, in ascending node order.
                let pool: Vec<usize> = (0..num_nodes)
                    .filter(|&v| {
                        !in_edge[v] && members.iter().any(|&m| labels[m] == labels[v])
                    })
                    .collect();
                if pool.is_empty() {
                    stats.fallback_count += 1;
                    uniform_candidate(&in_edge, num_nodes, &mut rng)
                } else {
                    pool[rng.random_range(0..pool.len())]
                }
            } else {
                uniform_candidate(&in_edge, num_nodes, &mut rng)
            };
            members.push(chosen);
            in_edge[chosen] = true;
        }
        for &m in &members {
            in_edge[m] = false;
        }
        members.sort_unstable();
        grown.push(members);
    }
    let structure = Hypergraph::new_dedup(num_nodes, grown)?;
    let out = Dataset::new(
        dataset.name().into(),
        DatasetKind::Hypergraph,
        structure,
        dataset.features().clone(),
        dataset.labels().clone(),
    )?;
    Ok((out, stats))
}

fn uniform_candidate<R: Rng>(in_edge: &[bool], num_nodes: usize, rng: &mut R) -> usize {
    let pool: Vec<usize> = (0..num_nodes).filter(|&v| !in_edge[v]).collect();
    pool[rng.random_range(0..pool.len())]
}

/// Replaces the hyperedges of a hypergraph dataset by their clique
/// expansion, yielding a graph dataset with the same features and labels.
pub fn synth_graph(dataset: &Dataset) -> Result<Dataset, DataError> {
    if dataset.kind() != DatasetKind::Hypergraph {
        return Err(DataError::ExpansionNeedsHypergraph);
    }
    let expanded = clique_expansion(dataset.structure());
    Dataset::new(
        dataset.name().into(),
        DatasetKind::Graph,
        expanded,
        dataset.features().clone(),
        dataset.labels().clone(),
    )
}

/// One-hot label encoding plus seeded Gaussian noise: feature column count
/// equals the class count, entry (i, c) = [label_i == c] + N(0, noise).
pub fn synthetic_features(labels: &LabelVector, noise: f64, seed: u64) -> DenseMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let classes = labels.num_classes();
    let mut features = DenseMatrix::zeros(labels.len(), classes);
    if noise > 0.0 {
        let normal = Normal::new(0.0, noise).expect("positive finite noise");
        for v in features.values_mut() {
            *v = normal.sample(&mut rng);
        }
    }
    for (i, &label) in labels.labels().iter().enumerate() {
        let v = features.get(i, label) + 1.0;
        features.set(i, label, v);
    }
    features
}
