//! Core algorithms for projection-based graph and hypergraph node
//! classification.
//!
//! A graph or hypergraph is encoded through a sparse projection matrix
//! `P = [P_V; P_E]` that maps node features onto the union of nodes and
//! edges. The projected features run through a small feed-forward network,
//! and the transpose of the projection aggregates the result back into node
//! embeddings for classification.
//!
//! The crate is `no_std` (with `alloc`); all floating-point transcendentals
//! go through [`libm`] so results are bit-identical across platforms. File
//! formats and the command-line interface live in the companion `unig`
//! crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod data;
pub mod dense;
pub mod hypergraph;
pub mod nn;
pub mod projection;
pub mod sparse;
pub mod toy;

mod rng;

pub use data::{
    make_splits, synth_extend, synth_graph, synthetic_features, DataError, Dataset, DatasetKind,
    Split, SplitProtocol, SplitSpec, SynthSpec, SynthStats,
};
pub use dense::DenseMatrix;
pub use hypergraph::{
    adjacency, build_incidence, clique_expansion, degrees, homophily_score, HomophilyScore,
    Hypergraph, HypergraphError, IncidenceMatrix, LabelVector,
};
pub use nn::{
    accuracy, cross_entropy_masked, train_single, train_splits, EncoderPipeline, MlpConfig,
    NnError, Placement, SplitOutcome, TrainConfig, TrainReport,
};
pub use projection::{
    build_projection, Normalization, ProjectionConfig, ProjectionError, ProjectionMatrix,
    PvWeightMode,
};
pub use sparse::CsrMatrix;

pub use rng::derive_seed;
