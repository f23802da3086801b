//! Hypergraph structure, incidence/degree/adjacency computation, clique
//! expansion, and homophily scoring.
//!
//! Edges are subsets of nodes with at least two members. A plain graph is
//! the special case where every edge has exactly two. Constructors validate
//! eagerly so downstream operators never re-check.

use alloc::vec;
use alloc::vec::Vec;
use thiserror::Error;

use crate::sparse::CsrMatrix;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HypergraphError {
    #[error("edge {edge} contains node {index}, but the graph has {num_nodes} nodes")]
    NodeIndexOutOfRange {
        edge: usize,
        index: usize,
        num_nodes: usize,
    },
    #[error("edge {edge} has {size} members; every edge needs at least 2")]
    EdgeTooSmall { edge: usize, size: usize },
    #[error("edge {edge} repeats node {index}")]
    RepeatedMember { edge: usize, index: usize },
    #[error("edges {first} and {second} are equal as sets")]
    DuplicateEdge { first: usize, second: usize },
    #[error("label vector is empty")]
    EmptyLabels,
    #[error("node {node} has label {label}, but there are {num_classes} classes")]
    LabelOutOfRange {
        node: usize,
        label: usize,
        num_classes: usize,
    },
    #[error("label vector covers {got} nodes, expected {expected}")]
    LabelLengthMismatch { got: usize, expected: usize },
}

/// A node set together with an ordered list of hyperedges.
///
/// Invariants, enforced at construction: every member index is in range,
/// every edge has >= 2 distinct members stored sorted, and no two edges are
/// equal as sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    num_nodes: usize,
    edges: Vec<Vec<usize>>,
}

impl Hypergraph {
    /// Validates and normalizes edges (members sorted ascending). Rejects
    /// out-of-range members, edges smaller than two, repeated members, and
    /// duplicate edges.
    pub fn new(num_nodes: usize, edges: Vec<Vec<usize>>) -> Result<Self, HypergraphError> {
        Self::build(num_nodes, edges, false)
    }

    /// Like [`Hypergraph::new`] but silently drops repeated edges, keeping
    /// the first occurrence. Loaders use this behind a dedupe flag.
    pub fn new_dedup(num_nodes: usize, edges: Vec<Vec<usize>>) -> Result<Self, HypergraphError> {
        Self::build(num_nodes, edges, true)
    }

    fn build(
        num_nodes: usize,
        mut edges: Vec<Vec<usize>>,
        dedupe: bool,
    ) -> Result<Self, HypergraphError> {
        for (id, edge) in edges.iter_mut().enumerate() {
            if edge.len() < 2 {
                return Err(HypergraphError::EdgeTooSmall {
                    edge: id,
                    size: edge.len(),
                });
            }
            edge.sort_unstable();
            for window in edge.windows(2) {
                if window[0] == window[1] {
                    return Err(HypergraphError::RepeatedMember {
                        edge: id,
                        index: window[0],
                    });
                }
            }
            if let Some(&max) = edge.last() {
                if max >= num_nodes {
                    return Err(HypergraphError::NodeIndexOutOfRange {
                        edge: id,
                        index: max,
                        num_nodes,
                    });
                }
            }
        }
        // Sort-based duplicate scan; edge ids are tracked so errors name the
        // offending pair in input order.
        let mut order: Vec<usize> = (0..edges.len()).collect();
        order.sort_by(|&a, &b| edges[a].cmp(&edges[b]).then(a.cmp(&b)));
        let mut drop = vec![false; edges.len()];
        for pair in order.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            if edges[a] == edges[b] {
                if dedupe {
                    drop[b] = true;
                } else {
                    return Err(HypergraphError::DuplicateEdge { first: a, second: b });
                }
            }
        }
        if dedupe && drop.iter().any(|&d| d) {
            let mut kept = Vec::with_capacity(edges.len());
            for (id, edge) in edges.into_iter().enumerate() {
                if !drop[id] {
                    kept.push(edge);
                }
            }
            edges = kept;
        }
        Ok(Self { num_nodes, edges })
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Edges in construction order, each a sorted list of distinct members.
    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn is_graph(&self) -> bool {
        self.edges.iter().all(|e| e.len() == 2)
    }
}

/// The 0/1 node-by-edge membership matrix, stored both by column (edge ->
/// members) and by row (node -> incident edges) so either traversal is cheap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceMatrix {
    num_nodes: usize,
    edge_members: Vec<Vec<usize>>,
    node_edges: Vec<Vec<usize>>,
}

impl IncidenceMatrix {
    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn num_edges(&self) -> usize {
        self.edge_members.len()
    }

    /// Members of edge `j`, sorted ascending (column `j` nonzero rows).
    pub fn edge_members(&self, j: usize) -> &[usize] {
        &self.edge_members[j]
    }

    /// Edges incident to node `i`, sorted ascending (row `i` nonzero columns).
    pub fn node_edges(&self, i: usize) -> &[usize] {
        &self.node_edges[i]
    }

    /// Sparse view with nodes as rows and edges as columns, entries 1.0.
    pub fn to_csr(&self) -> CsrMatrix {
        let entries: Vec<Vec<(usize, f64)>> = self
            .node_edges
            .iter()
            .map(|edges| edges.iter().map(|&j| (j, 1.0)).collect())
            .collect();
        CsrMatrix::from_rows(self.num_nodes, self.num_edges(), &entries)
    }
}

/// Node degrees (edges containing each node) and edge degrees (members of
/// each edge). Both vectors sum to the incidence nonzero count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeVectors {
    pub node_degrees: Vec<usize>,
    pub edge_degrees: Vec<usize>,
}

/// Node class labels, one per node, each in `[0, num_classes)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelVector {
    labels: Vec<usize>,
    num_classes: usize,
}

impl LabelVector {
    pub fn new(labels: Vec<usize>, num_classes: usize) -> Result<Self, HypergraphError> {
        for (node, &label) in labels.iter().enumerate() {
            if label >= num_classes {
                return Err(HypergraphError::LabelOutOfRange {
                    node,
                    label,
                    num_classes,
                });
            }
        }
        Ok(Self { labels, num_classes })
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// True when every class index has at least one node. Full datasets
    /// require this; splits derived from them may leave classes empty.
    pub fn covers_all_classes(&self) -> bool {
        let mut seen = vec![false; self.num_classes];
        for &label in &self.labels {
            seen[label] = true;
        }
        seen.into_iter().all(|s| s)
    }

    /// Per-class member lists, in node order.
    pub fn class_members(&self) -> Vec<Vec<usize>> {
        let mut members = vec![Vec::new(); self.num_classes];
        for (node, &label) in self.labels.iter().enumerate() {
            members[label].push(node);
        }
        members
    }
}

/// Membership matrix of `h`; columns follow edge order, rows node order.
pub fn build_incidence(h: &Hypergraph) -> IncidenceMatrix {
    let mut node_edges = vec![Vec::new(); h.num_nodes()];
    for (j, edge) in h.edges().iter().enumerate() {
        for &i in edge {
            node_edges[i].push(j);
        }
    }
    IncidenceMatrix {
        num_nodes: h.num_nodes(),
        edge_members: h.edges().to_vec(),
        node_edges,
    }
}

/// Row sums and column sums of the incidence matrix.
pub fn degrees(b: &IncidenceMatrix) -> DegreeVectors {
    DegreeVectors {
        node_degrees: (0..b.num_nodes()).map(|i| b.node_edges(i).len()).collect(),
        edge_degrees: (0..b.num_edges()).map(|j| b.edge_members(j).len()).collect(),
    }
}

/// Shared-membership counts A = B * B^T. Entry (i, j) is the number of edges
/// containing both nodes; the diagonal holds node degrees.
pub fn adjacency(b: &IncidenceMatrix) -> CsrMatrix {
    let csr = b.to_csr();
    csr.mul_sparse(&csr.transpose())
}

/// Replaces every hyperedge by all pairwise edges among its members and
/// deduplicates. The result lists edges in lexicographic order, so the
/// operation is idempotent including edge order.
pub fn clique_expansion(h: &Hypergraph) -> Hypergraph {
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for edge in h.edges() {
        for (a, &u) in edge.iter().enumerate() {
            for &v in &edge[a + 1..] {
                pairs.push((u, v));
            }
        }
    }
    pairs.sort_unstable();
    pairs.dedup();
    let edges = pairs.into_iter().map(|(u, v)| vec![u, v]).collect();
    Hypergraph {
        num_nodes: h.num_nodes(),
        edges,
    }
}

/// Homophily score with a flag marking the degenerate no-edges case.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomophilyScore {
    /// Fraction of clique-expanded edges whose endpoints share a label.
    pub value: f64,
    /// True when the expansion has no edges; `value` is 0 by convention then.
    pub no_pairs: bool,
}

/// Fraction of pairwise edges in the clique expansion of `h` whose two
/// endpoints carry the same label.
pub fn homophily_score(h: &Hypergraph, y: &LabelVector) -> Result<HomophilyScore, HypergraphError> {
    if y.is_empty() {
        return Err(HypergraphError::EmptyLabels);
    }
    if y.len() != h.num_nodes() {
        return Err(HypergraphError::LabelLengthMismatch {
            got: y.len(),
            expected: h.num_nodes(),
        });
    }
    let expanded = clique_expansion(h);
    if expanded.num_edges() == 0 {
        return Ok(HomophilyScore {
            value: 0.0,
            no_pairs: true,
        });
    }
    let labels = y.labels();
    let matching = expanded
        .edges()
        .iter()
        .filter(|e| labels[e[0]] == labels[e[1]])
        .count();
    Ok(HomophilyScore {
        value: matching as f64 / expanded.num_edges() as f64,
        no_pairs: false,
    })
}
