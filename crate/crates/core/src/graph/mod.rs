//! Undirected attributed graphs, edge labelings and dataset ingestion.
//!
//! An [`AttributedGraph`] stores each undirected edge once in `edge_index`
//! (canonical `u < v`, stable id = position) and materializes both directions
//! in a compressed sparse neighbor list. Labels and split assignments live in
//! a separate [`EdgeLabeling`] so that the same structure can be relabeled or
//! resplit cheaply.

mod io;
mod planted;
mod split;

use std::fmt;
use std::str::FromStr;

pub use io::{
    load_graph, load_graph_with, read_cache, save_graph, write_cache, LoadOptions, LoadedDataset,
    NodeMap,
};
pub(crate) use io::Reader;
pub use planted::{generate_planted_imbalance, PlantedImbalanceSpec};
pub use split::{split_edges, subsample_train_labels, SplitRatios};

use crate::error::{Error, Result};
use crate::tensor::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Split {
    Train,
    Val,
    Test,
}

impl Split {
    pub const ALL: [Split; 3] = [Split::Train, Split::Val, Split::Test];

    pub fn as_str(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Val => "val",
            Split::Test => "test",
        }
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Split {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "train" => Ok(Split::Train),
            "val" => Ok(Split::Val),
            "test" => Ok(Split::Test),
            other => Err(Error::Data(format!("unknown split `{other}`"))),
        }
    }
}

/// Immutable undirected graph with optional node and edge feature matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct AttributedGraph {
    n: usize,
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
    incident: Vec<usize>,
    edges: Vec<(usize, usize)>,
    node_features: Option<Matrix>,
    edge_features: Option<Matrix>,
}

impl AttributedGraph {
    /// Builds a graph from undirected edges. Endpoints are canonicalized to
    /// `u < v`; edge ids follow the input order. Self-loops, duplicates and
    /// out-of-range endpoints are rejected.
    pub fn from_edges(
        n: usize,
        edges: &[(usize, usize)],
        node_features: Option<Matrix>,
        edge_features: Option<Matrix>,
    ) -> Result<Self> {
        let mut canonical = Vec::with_capacity(edges.len());
        let mut seen = std::collections::HashSet::with_capacity(edges.len());
        for (id, &(a, b)) in edges.iter().enumerate() {
            if a >= n || b >= n {
                return Err(Error::Data(format!(
                    "edge {id} ({a},{b}) references a node outside 0..{n}"
                )));
            }
            if a == b {
                return Err(Error::Data(format!("edge {id} is a self-loop on node {a}")));
            }
            let e = (a.min(b), a.max(b));
            if !seen.insert(e) {
                return Err(Error::Data(format!("duplicate undirected edge ({},{})", e.0, e.1)));
            }
            canonical.push(e);
        }

        let mut degree = vec![0usize; n];
        for &(u, v) in &canonical {
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = vec![0usize; n + 1];
        for i in 0..n {
            offsets[i + 1] = offsets[i] + degree[i];
        }
        let mut cursor = offsets[..n].to_vec();
        let mut neighbors = vec![0usize; 2 * canonical.len()];
        let mut incident = vec![0usize; 2 * canonical.len()];
        for (id, &(u, v)) in canonical.iter().enumerate() {
            neighbors[cursor[u]] = v;
            incident[cursor[u]] = id;
            cursor[u] += 1;
            neighbors[cursor[v]] = u;
            incident[cursor[v]] = id;
            cursor[v] += 1;
        }

        let graph = Self {
            n,
            offsets,
            neighbors,
            incident,
            edges: canonical,
            node_features,
            edge_features,
        };
        graph.validate()?;
        Ok(graph)
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Canonical `(u, v)` with `u < v` for edge id `e`.
    #[inline]
    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    #[inline]
    pub fn degree(&self, node: usize) -> usize {
        self.offsets[node + 1] - self.offsets[node]
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|i| self.degree(i)).collect()
    }

    #[inline]
    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.neighbors[self.offsets[node]..self.offsets[node + 1]]
    }

    /// Edge ids incident to `node`, parallel to [`neighbors`](Self::neighbors).
    #[inline]
    pub fn incident_edges(&self, node: usize) -> &[usize] {
        &self.incident[self.offsets[node]..self.offsets[node + 1]]
    }

    pub fn node_features(&self) -> Option<&Matrix> {
        self.node_features.as_ref()
    }

    pub fn edge_features(&self) -> Option<&Matrix> {
        self.edge_features.as_ref()
    }

    /// Looks up the id of the undirected edge between `a` and `b`.
    pub fn find_edge(&self, a: usize, b: usize) -> Option<usize> {
        if a >= self.n || b >= self.n {
            return None;
        }
        let (probe, other) = if self.degree(a) <= self.degree(b) { (a, b) } else { (b, a) };
        self.neighbors(probe)
            .iter()
            .position(|&x| x == other)
            .map(|p| self.incident_edges(probe)[p])
    }

    /// Checks every structural invariant. Called by the constructor and usable in tests.
    pub fn validate(&self) -> Result<()> {
        if self.offsets.len() != self.n + 1 || self.offsets[self.n] != self.neighbors.len() {
            return Err(Error::Data("adjacency offsets are inconsistent".into()));
        }
        let degree_sum: usize = (0..self.n).map(|i| self.degree(i)).sum();
        if degree_sum != 2 * self.edges.len() {
            return Err(Error::Data(format!(
                "degree sum {degree_sum} != 2m = {}",
                2 * self.edges.len()
            )));
        }
        for (id, &(u, v)) in self.edges.iter().enumerate() {
            if u >= v || v >= self.n {
                return Err(Error::Data(format!("edge {id} is not canonical: ({u},{v})")));
            }
        }
        for u in 0..self.n {
            for (&v, &e) in self.neighbors(u).iter().zip(self.incident_edges(u)) {
                if v == u {
                    return Err(Error::Data(format!("self-loop at node {u}")));
                }
                let (a, b) = self.edges[e];
                if (a, b) != (u.min(v), u.max(v)) {
                    return Err(Error::Data(format!("incident edge {e} does not join {u} and {v}")));
                }
                if !self.neighbors(v).contains(&u) {
                    return Err(Error::Data(format!("adjacency not symmetric at ({u},{v})")));
                }
            }
        }
        if let Some(x) = &self.node_features {
            if x.rows() != self.n {
                return Err(Error::Dimension(format!(
                    "node feature matrix has {} rows, graph has {} nodes",
                    x.rows(),
                    self.n
                )));
            }
        }
        if let Some(s) = &self.edge_features {
            if s.rows() != self.edges.len() {
                return Err(Error::Dimension(format!(
                    "edge feature matrix has {} rows, graph has {} edges",
                    s.rows(),
                    self.edges.len()
                )));
            }
        }
        Ok(())
    }

    /// Same structure with the given feature matrices.
    pub fn with_features(
        &self,
        node_features: Option<Matrix>,
        edge_features: Option<Matrix>,
    ) -> Result<Self> {
        let g = Self {
            node_features,
            edge_features,
            ..self.clone()
        };
        g.validate()?;
        Ok(g)
    }
}

/// Per-edge class labels and split assignment for one [`AttributedGraph`].
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeLabeling {
    class_count: usize,
    labels: Vec<Option<usize>>,
    splits: Vec<Option<Split>>,
}

impl EdgeLabeling {
    /// Labels indexed by edge id; splits are left unassigned.
    pub fn new(class_count: usize, labels: Vec<Option<usize>>) -> Result<Self> {
        let splits = vec![None; labels.len()];
        Self::with_splits(class_count, labels, splits)
    }

    pub fn with_splits(
        class_count: usize,
        labels: Vec<Option<usize>>,
        splits: Vec<Option<Split>>,
    ) -> Result<Self> {
        if class_count < 2 {
            return Err(Error::Data(format!("class count must be >= 2, got {class_count}")));
        }
        if labels.len() != splits.len() {
            return Err(Error::Dimension("labels and splits differ in length".into()));
        }
        for (e, (l, s)) in labels.iter().zip(&splits).enumerate() {
            if let Some(k) = l {
                if *k >= class_count {
                    return Err(Error::Data(format!(
                        "edge {e} has label {k} >= class count {class_count}"
                    )));
                }
            } else if s.is_some() {
                return Err(Error::Data(format!("unlabeled edge {e} has a split")));
            }
        }
        Ok(Self {
            class_count,
            labels,
            splits,
        })
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    pub fn edge_count(&self) -> usize {
        self.labels.len()
    }

    #[inline]
    pub fn label(&self, e: usize) -> Option<usize> {
        self.labels[e]
    }

    #[inline]
    pub fn split(&self, e: usize) -> Option<Split> {
        self.splits[e]
    }

    pub fn labels(&self) -> &[Option<usize>] {
        &self.labels
    }

    pub fn splits(&self) -> &[Option<Split>] {
        &self.splits
    }

    /// Labeled edge ids in ascending order.
    pub fn labeled_edges(&self) -> Vec<usize> {
        (0..self.labels.len()).filter(|&e| self.labels[e].is_some()).collect()
    }

    /// Edge ids assigned to `split`, ascending.
    pub fn edges_in(&self, split: Split) -> Vec<usize> {
        (0..self.splits.len())
            .filter(|&e| self.splits[e] == Some(split))
            .collect()
    }

    /// `true` when every labeled edge carries a split.
    pub fn is_fully_split(&self) -> bool {
        self.labels
            .iter()
            .zip(&self.splits)
            .all(|(l, s)| l.is_none() || s.is_some())
    }

    /// `|E_k|` over the Train split.
    pub fn class_counts_train(&self) -> Vec<usize> {
        self.class_counts_in(Some(Split::Train))
    }

    /// Class histogram over `split`, or over every labeled edge when `None`.
    pub fn class_counts_in(&self, split: Option<Split>) -> Vec<usize> {
        let mut counts = vec![0usize; self.class_count];
        for (l, s) in self.labels.iter().zip(&self.splits) {
            if let Some(k) = l {
                if split.is_none() || *s == split {
                    counts[*k] += 1;
                }
            }
        }
        counts
    }

    /// Index of the most frequent class over all labeled edges (ties → smaller index).
    pub fn majority_class(&self) -> usize {
        let counts = self.class_counts_in(None);
        let mut best = 0;
        for (k, &c) in counts.iter().enumerate() {
            if c > counts[best] {
                best = k;
            }
        }
        best
    }

    /// Checks that the labeling annotates `graph` and that splits partition the labeled edges.
    pub fn validate_for(&self, graph: &AttributedGraph) -> Result<()> {
        if self.labels.len() != graph.edge_count() {
            return Err(Error::Data(format!(
                "labeling covers {} edges, graph has {}",
                self.labels.len(),
                graph.edge_count()
            )));
        }
        let counts = self.class_counts_train();
        let train = self.edges_in(Split::Train).len();
        if counts.iter().sum::<usize>() != train {
            return Err(Error::Data("train class counts do not sum to |train|".into()));
        }
        Ok(())
    }

    pub(crate) fn replace_splits(&self, splits: Vec<Option<Split>>) -> Result<Self> {
        Self::with_splits(self.class_count, self.labels.clone(), splits)
    }

    pub(crate) fn parts(&self) -> (&[Option<usize>], &[Option<Split>]) {
        (&self.labels, &self.splits)
    }
}
