use std::collections::{BTreeMap, HashMap};

use super::MagError;

/// Provenance attached to an edge (flight numbers and the like).
pub type Tags = BTreeMap<String, String>;

/// Whether parallel edges are allowed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphMode {
    /// At most one edge per ordered vertex pair (the route view).
    Digraph,
    /// Parallel edges allowed (the flight view).
    MultiDigraph,
}

impl GraphMode {
    pub fn as_str(self) -> &'static str {
        match self {
            GraphMode::Digraph => "digraph",
            GraphMode::MultiDigraph => "multidigraph",
        }
    }
}

impl std::fmt::Display for GraphMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for GraphMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "digraph" => Ok(GraphMode::Digraph),
            "multidigraph" | "multi-digraph" => Ok(GraphMode::MultiDigraph),
            other => Err(format!("unknown graph mode `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub multiplicity: u32,
    pub tags: Tags,
}

impl Edge {
    pub fn new(source: usize, target: usize, multiplicity: u32) -> Self {
        Self {
            source,
            target,
            multiplicity,
            tags: Tags::new(),
        }
    }
}

/// Integer-indexed directed graph. Vertices are dense `0..n`; each vertex
/// also carries a `u64` label (an encoded composite vertex when the graph
/// comes from a MAG).
///
/// Edges are kept in canonical sorted order so structurally equal graphs
/// compare equal with `==`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiGraph {
    mode: GraphMode,
    labels: Vec<u64>,
    edges: Vec<Edge>,
}

impl DiGraph {
    /// Builds a graph from labelled vertices and edges over their positions.
    ///
    /// In [`GraphMode::Digraph`] parallel edges collapse into one edge with
    /// multiplicity 1 and no tags.
    pub fn from_parts(mode: GraphMode, labels: Vec<u64>, mut edges: Vec<Edge>) -> Result<Self, MagError> {
        let n = labels.len();
        let mut seen = HashMap::with_capacity(n);
        for (i, &l) in labels.iter().enumerate() {
            if seen.insert(l, i).is_some() {
                return Err(MagError::Graph(format!("duplicate vertex label {l}")));
            }
        }
        for e in &edges {
            if e.source >= n || e.target >= n {
                return Err(MagError::Graph(format!(
                    "edge {}->{} references a vertex outside 0..{n}",
                    e.source, e.target
                )));
            }
            if e.multiplicity == 0 {
                return Err(MagError::ZeroMultiplicity);
            }
        }
        if mode == GraphMode::Digraph {
            for e in &mut edges {
                e.multiplicity = 1;
                e.tags.clear();
            }
            edges.sort_unstable();
            edges.dedup_by(|a, b| a.source == b.source && a.target == b.target);
        } else {
            edges.sort_unstable();
        }
        Ok(Self { mode, labels, edges })
    }

    /// Graph over vertices `0..n` labelled by their own index.
    pub fn from_pairs(mode: GraphMode, n: usize, pairs: &[(usize, usize, u32)]) -> Result<Self, MagError> {
        let edges = pairs.iter().map(|&(s, t, m)| Edge::new(s, t, m)).collect();
        Self::from_parts(mode, (0..n as u64).collect(), edges)
    }

    pub fn empty(mode: GraphMode) -> Self {
        Self {
            mode,
            labels: Vec::new(),
            edges: Vec::new(),
        }
    }

    pub fn mode(&self) -> GraphMode {
        self.mode
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    /// Number of edge records (a parallel edge with multiplicity 3 counts once).
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edge count with multiplicities expanded.
    pub fn total_multiplicity(&self) -> u64 {
        self.edges.iter().map(|e| e.multiplicity as u64).sum()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    pub fn label(&self, vertex: usize) -> u64 {
        self.labels[vertex]
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Vertices touched by at least one edge.
    pub fn incident_vertex_count(&self) -> usize {
        let mut touched = vec![false; self.labels.len()];
        for e in &self.edges {
            touched[e.source] = true;
            touched[e.target] = true;
        }
        touched.into_iter().filter(|&t| t).count()
    }
}
