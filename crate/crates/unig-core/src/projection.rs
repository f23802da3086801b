//! The projection operator and its normalized variants.
//!
//! For a hypergraph with |V| nodes and |E| edges, the raw projection is the
//! (|V|+|E|) x |V| stack of two blocks: a weighted column permutation of the
//! identity (node block) over the 0/1 edge-membership block (one row per
//! edge). Multiplying it onto a node-feature matrix yields one embedding row
//! per node and per edge; multiplying the transpose aggregates those rows
//! back onto nodes. The compound operator reverse * forward is a one-shot
//! neighborhood aggregation: with no normalization and unit weight it equals
//! I + B * B^T.

use alloc::vec;
use alloc::vec::Vec;
use thiserror::Error;

use crate::dense::DenseMatrix;
use crate::hypergraph::{build_incidence, degrees, Hypergraph};
use crate::sparse::CsrMatrix;

#[derive(Debug, Error, PartialEq)]
pub enum ProjectionError {
    #[error("node weight must be positive and finite, got {value}")]
    NonPositiveWeight { value: f64 },
    #[error("permutation has {got} entries for {expected} nodes")]
    PermutationWrongLength { got: usize, expected: usize },
    #[error("permutation is not a bijection: index {index} repeated or out of range")]
    PermutationNotBijective { index: usize },
    #[error("hops must be at least 1")]
    ZeroHops,
    #[error("degree-scaled weights require every node in an edge; node {node} is isolated")]
    IsolatedNodeDegreeWeight { node: usize },
    #[error("input has {got} rows, operator expects {expected}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// How the node-block weight is chosen per node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PvWeightMode {
    /// Every node-block entry equals the configured weight c.
    Constant,
    /// Entry for node i equals c * d(v_i). Rejected when any node is
    /// isolated, since a zero entry would break the permutation structure.
    DegreeScaled,
}

/// Normalization applied to the forward operator (built from P) and the
/// reverse operator (built from the transpose of the raw P), named as the
/// pair (P side, transpose side).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// forward = raw, reverse = raw transposed.
    None,
    /// Forward: edge-block rows divided by their row sums (edge degrees);
    /// node rows keep the weight c. Reverse: every row of the transpose
    /// divided by its row sum (c + d(v) in constant mode).
    RowRow,
    /// Both operands divided column-wise by their column sums.
    ColCol,
    /// Row-normalized forward, column-normalized reverse.
    RowCol,
    /// Column-normalized forward, row-normalized reverse.
    ColRow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SideNorm {
    Off,
    Row,
    Col,
}

impl Normalization {
    fn sides(self) -> (SideNorm, SideNorm) {
        match self {
            Normalization::None => (SideNorm::Off, SideNorm::Off),
            Normalization::RowRow => (SideNorm::Row, SideNorm::Row),
            Normalization::ColCol => (SideNorm::Col, SideNorm::Col),
            Normalization::RowCol => (SideNorm::Row, SideNorm::Col),
            Normalization::ColRow => (SideNorm::Col, SideNorm::Row),
        }
    }
}

/// Configuration for building a [`ProjectionMatrix`].
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionConfig {
    /// Node-block weight c > 0, trading ego features against neighbors.
    pub pv_weight: f64,
    pub pv_weight_mode: PvWeightMode,
    pub normalization: Normalization,
    /// Node permutation sigma; row i of the node block reads node sigma(i).
    /// None means identity.
    pub permutation: Option<Vec<usize>>,
    /// Number of times the compound operator is applied; 1 is the plain
    /// one-hop aggregation.
    pub hops: usize,
}

impl Default for ProjectionConfig {
    fn default() -> Self {
        Self {
            pv_weight: 1.0,
            pv_weight_mode: PvWeightMode::Constant,
            normalization: Normalization::RowRow,
            permutation: None,
            hops: 1,
        }
    }
}

/// Which structural object a projected row stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RowEntity {
    Node(usize),
    Edge(usize),
}

/// A built projection: the raw stacked matrix plus its normalized forward
/// and reverse operators and their transposes (kept for gradient passes).
#[derive(Debug, Clone)]
pub struct ProjectionMatrix {
    raw: CsrMatrix,
    forward: CsrMatrix,
    reverse: CsrMatrix,
    forward_t: CsrMatrix,
    reverse_t: CsrMatrix,
    permutation: Vec<usize>,
    num_nodes: usize,
    num_edges: usize,
    hops: usize,
}

/// Builds the projection for `h` under `cfg`.
///
/// The raw matrix has one row per node holding weight c (or c * degree) at
/// column sigma(i), followed by one row per edge holding 1 at each member
/// column. Forward and reverse are normalized copies of the raw matrix and
/// of its transpose, per `cfg.normalization`; the reverse side always
/// normalizes the raw transpose, never the already-normalized forward.
pub fn build_projection(
    h: &Hypergraph,
    cfg: &ProjectionConfig,
) -> Result<ProjectionMatrix, ProjectionError> {
    if !(cfg.pv_weight > 0.0 && cfg.pv_weight.is_finite()) {
        return Err(ProjectionError::NonPositiveWeight {
            value: cfg.pv_weight,
        });
    }
    if cfg.hops == 0 {
        return Err(ProjectionError::ZeroHops);
    }
    let num_nodes = h.num_nodes();
    let num_edges = h.num_edges();
    let permutation = match &cfg.permutation {
        Some(sigma) => {
            if sigma.len() != num_nodes {
                return Err(ProjectionError::PermutationWrongLength {
                    got: sigma.len(),
                    expected: num_nodes,
                });
            }
            let mut seen = vec![false; num_nodes];
            for &target in sigma {
                if target >= num_nodes || seen[target] {
                    return Err(ProjectionError::PermutationNotBijective { index: target });
                }
                seen[target] = true;
            }
            sigma.clone()
        }
        None => (0..num_nodes).collect(),
    };
    let deg = degrees(&build_incidence(h));
    if cfg.pv_weight_mode == PvWeightMode::DegreeScaled {
        if let Some(node) = deg.node_degrees.iter().position(|&d| d == 0) {
            return Err(ProjectionError::IsolatedNodeDegreeWeight { node });
        }
    }

    let node_weight = |node: usize| match cfg.pv_weight_mode {
        PvWeightMode::Constant => cfg.pv_weight,
        PvWeightMode::DegreeScaled => cfg.pv_weight * deg.node_degrees[node] as f64,
    };
    let mut rows: Vec<Vec<(usize, f64)>> = Vec::with_capacity(num_nodes + num_edges);
    for &target in &permutation {
        rows.push(vec![(target, node_weight(target))]);
    }
    for edge in h.edges() {
        rows.push(edge.iter().map(|&i| (i, 1.0)).collect());
    }
    let raw = CsrMatrix::from_rows(num_nodes + num_edges, num_nodes, &rows);
    let raw_t = raw.transpose();

    let (p_side, pt_side) = cfg.normalization.sides();
    let forward = normalize_forward(&raw, num_nodes, p_side);
    let reverse = normalize_side(&raw_t, pt_side);
    let forward_t = forward.transpose();
    let reverse_t = reverse.transpose();
    Ok(ProjectionMatrix {
        raw,
        forward,
        reverse,
        forward_t,
        reverse_t,
        permutation,
        num_nodes,
        num_edges,
        hops: cfg.hops,
    })
}

/// Row normalization of the P side touches only edge-block rows; the node
/// block keeps its weights. Column normalization treats the matrix whole.
fn normalize_forward(raw: &CsrMatrix, num_nodes: usize, side: SideNorm) -> CsrMatrix {
    match side {
        SideNorm::Off => raw.clone(),
        SideNorm::Row => {
            let sums = raw.row_sums();
            let factors: Vec<f64> = sums
                .iter()
                .enumerate()
                .map(|(i, &s)| if i < num_nodes { 1.0 } else { 1.0 / s })
                .collect();
            let mut out = raw.clone();
            out.scale_rows(&factors);
            out
        }
        SideNorm::Col => normalize_side(raw, SideNorm::Col),
    }
}

/// Plain row or column normalization by the operand's own sums. Zero sums
/// cannot occur for valid configurations: every row and column of both
/// operands holds either a positive weight or at least two unit entries.
fn normalize_side(m: &CsrMatrix, side: SideNorm) -> CsrMatrix {
    match side {
        SideNorm::Off => m.clone(),
        SideNorm::Row => {
            let factors: Vec<f64> = m.row_sums().iter().map(|&s| 1.0 / s).collect();
            let mut out = m.clone();
            out.scale_rows(&factors);
            out
        }
        SideNorm::Col => {
            let factors: Vec<f64> = m.col_sums().iter().map(|&s| 1.0 / s).collect();
            let mut out = m.clone();
            out.scale_cols(&factors);
            out
        }
    }
}

impl ProjectionMatrix {
    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    pub fn hops(&self) -> usize {
        self.hops
    }

    /// Unnormalized stacked matrix, (|V|+|E|) x |V|.
    pub fn raw(&self) -> &CsrMatrix {
        &self.raw
    }

    /// Normalized projection applied on the way in, (|V|+|E|) x |V|.
    pub fn forward(&self) -> &CsrMatrix {
        &self.forward
    }

    /// Normalized aggregation applied on the way out, |V| x (|V|+|E|).
    pub fn reverse(&self) -> &CsrMatrix {
        &self.reverse
    }

    /// Transpose of `forward`, used by gradient passes.
    pub fn forward_t(&self) -> &CsrMatrix {
        &self.forward_t
    }

    /// Transpose of `reverse`, used by gradient passes.
    pub fn reverse_t(&self) -> &CsrMatrix {
        &self.reverse_t
    }

    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    /// Rows `0..|V|` of the stacked matrix.
    pub fn node_block_rows(&self) -> core::ops::Range<usize> {
        0..self.num_nodes
    }

    /// Rows `|V|..|V|+|E|` of the stacked matrix.
    pub fn edge_block_rows(&self) -> core::ops::Range<usize> {
        self.num_nodes..self.num_nodes + self.num_edges
    }

    /// The structural object row `row` stands for: node-block row i carries
    /// node sigma(i); edge-block row |V|+j carries edge j.
    pub fn row_entity(&self, row: usize) -> RowEntity {
        if row < self.num_nodes {
            RowEntity::Node(self.permutation[row])
        } else {
            RowEntity::Edge(row - self.num_nodes)
        }
    }

    /// H = forward * X, one embedding row per node then per edge.
    pub fn project_forward(&self, x: &DenseMatrix) -> Result<DenseMatrix, ProjectionError> {
        if x.rows() != self.num_nodes {
            return Err(ProjectionError::DimensionMismatch {
                expected: self.num_nodes,
                got: x.rows(),
            });
        }
        Ok(self.forward.mul_dense(x))
    }

    /// Y = reverse * H, aggregating node and edge rows back onto nodes.
    pub fn project_reverse(&self, h: &DenseMatrix) -> Result<DenseMatrix, ProjectionError> {
        let expected = self.num_nodes + self.num_edges;
        if h.rows() != expected {
            return Err(ProjectionError::DimensionMismatch {
                expected,
                got: h.rows(),
            });
        }
        Ok(self.reverse.mul_dense(h))
    }

    /// reverse * forward, applied `hops` times: the |V| x |V| aggregation a
    /// placement pair (f, f) performs in one multiply.
    pub fn compound(&self) -> CsrMatrix {
        let once = self.reverse.mul_sparse(&self.forward);
        let mut result = once.clone();
        for _ in 1..self.hops {
            result = result.mul_sparse(&once);
        }
        result
    }
}
