//! Topological entropy of edges and the majority/minority/uncertain categorization.
//!
//! Pipeline: node label encodings (mean one-hot label of incident labeled
//! edges) → `L` rounds of row-normalized diffusion `H ← D⁻¹A H` → per-edge
//! class distribution (endpoint average, renormalized) → Shannon entropy in
//! nats.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{AttributedGraph, EdgeLabeling, Split};
use crate::sparse::SparseMatrix;
use crate::tensor::Matrix;

/// Which labels feed the node encodings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LabelSource {
    /// Train-split labels only, so validation/test labels never leak into weights.
    #[default]
    TrainOnly,
    AllLabeled,
}

impl FromStr for LabelSource {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "train" | "train_only" => Ok(Self::TrainOnly),
            "all" | "all_labeled" => Ok(Self::AllLabeled),
            _ => Err(Error::Config(format!("unknown label source `{s}` (train|all)"))),
        }
    }
}

impl fmt::Display for LabelSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::TrainOnly => "train",
            Self::AllLabeled => "all",
        })
    }
}

fn qualifies(labeling: &EdgeLabeling, e: usize, source: LabelSource) -> Option<usize> {
    let label = labeling.label(e)?;
    match source {
        LabelSource::AllLabeled => Some(label),
        LabelSource::TrainOnly => (labeling.split(e) == Some(Split::Train)).then_some(label),
    }
}

/// `n × C` matrix whose row `i` averages the one-hot labels of `i`'s
/// qualifying incident edges; all-zero when there are none.
pub fn node_label_encoding(graph: &AttributedGraph, labeling: &EdgeLabeling, source: LabelSource) -> Matrix {
    let c = labeling.class_count();
    let mut h = Matrix::zeros(graph.node_count(), c);
    for i in 0..graph.node_count() {
        let mut count = 0usize;
        let row = h.row_mut(i);
        for &e in graph.incident_edges(i) {
            if let Some(k) = qualifies(labeling, e, source) {
                row[k] += 1.0;
                count += 1;
            }
        }
        if count > 0 {
            let inv = 1.0 / count as f64;
            for x in row.iter_mut() {
                *x *= inv;
            }
        }
    }
    h
}

/// `(D⁻¹A)^L · encodings`. `L = 0` returns the input unchanged.
pub fn diffuse(encodings: &Matrix, graph: &AttributedGraph, depth: usize) -> Matrix {
    let mut h = encodings.clone();
    if depth == 0 {
        return h;
    }
    let a = SparseMatrix::row_normalized(graph);
    for _ in 0..depth {
        h = a.matmul(&h);
    }
    h
}

/// `½(H_i + H_j)` renormalized to sum 1. Returns zeros and `false` when the
/// average carries no mass.
pub fn edge_distribution(hl: &Matrix, i: usize, j: usize) -> (Vec<f64>, bool) {
    let mut g: Vec<f64> = hl.row(i).iter().zip(hl.row(j)).map(|(a, b)| 0.5 * (a + b)).collect();
    let mass: f64 = g.iter().sum();
    if mass > 0.0 {
        for x in &mut g {
            *x /= mass;
        }
        (g, true)
    } else {
        g.iter_mut().for_each(|x| *x = 0.0);
        (g, false)
    }
}

/// `−Σ_k g_k ln g_k` with `0 ln 0 = 0`.
pub fn topological_entropy(distribution: &[f64]) -> Result<f64> {
    let mut te = 0.0;
    for &g in distribution {
        if !(g >= 0.0) {
            return Err(Error::Parameter(format!("distribution entry {g} is negative or NaN")));
        }
        if g > 0.0 {
            te -= g * g.ln();
        }
    }
    // Rounding can leave -0.0 or tiny negatives for one-hot inputs.
    Ok(te.max(0.0))
}

/// Entropy profile of every edge in the graph at diffusion depth `L`.
#[derive(Debug, Clone, PartialEq)]
pub struct TeProfile {
    pub depth: usize,
    pub label_source: LabelSource,
    /// `H^L`, `n × C`.
    pub node_encodings: Matrix,
    /// `G^L`, `m × C`; zero rows for uncovered edges.
    pub edge_distribution: Matrix,
    /// Indexed by edge id, in nats.
    pub te: Vec<f64>,
    pub covered: Vec<bool>,
}

impl TeProfile {
    pub fn te(&self, edge: usize) -> f64 {
        self.te[edge]
    }
}

pub fn te_profile(
    graph: &AttributedGraph,
    labeling: &EdgeLabeling,
    depth: usize,
    source: LabelSource,
) -> Result<TeProfile> {
    labeling.validate_for(graph)?;
    let h0 = node_label_encoding(graph, labeling, source);
    let hl = diffuse(&h0, graph, depth);
    let m = graph.edge_count();
    let mut dist = Matrix::zeros(m, labeling.class_count());
    let mut te = Vec::with_capacity(m);
    let mut covered = Vec::with_capacity(m);
    for (e, &(u, v)) in graph.edges().iter().enumerate() {
        let (g, ok) = edge_distribution(&hl, u, v);
        te.push(if ok { topological_entropy(&g)? } else { 0.0 });
        dist.row_mut(e).copy_from_slice(&g);
        covered.push(ok);
    }
    Ok(TeProfile {
        depth,
        label_source: source,
        node_encodings: hl,
        edge_distribution: dist,
        te,
        covered,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeCategory {
    /// Mostly majority.
    Majority,
    /// Mostly minority.
    Minority,
    Uncertain,
}

impl NodeCategory {
    fn symbol(self) -> char {
        match self {
            Self::Majority => 'M',
            Self::Minority => 'm',
            Self::Uncertain => 'U',
        }
    }
}

/// Unordered pair of endpoint categories.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeCategory {
    MajMaj,
    MajMin,
    MajUnc,
    MinMin,
    MinUnc,
    UncUnc,
}

impl EdgeCategory {
    pub const ALL: [EdgeCategory; 6] = [
        EdgeCategory::MajMaj,
        EdgeCategory::MajMin,
        EdgeCategory::MajUnc,
        EdgeCategory::MinMin,
        EdgeCategory::MinUnc,
        EdgeCategory::UncUnc,
    ];

    pub fn from_endpoints(a: NodeCategory, b: NodeCategory) -> Self {
        use NodeCategory::*;
        match (a.min(b), a.max(b)) {
            (Majority, Majority) => Self::MajMaj,
            (Majority, Minority) => Self::MajMin,
            (Majority, Uncertain) => Self::MajUnc,
            (Minority, Minority) => Self::MinMin,
            (Minority, Uncertain) => Self::MinUnc,
            (Uncertain, Uncertain) => Self::UncUnc,
            _ => unreachable!("pair is ordered"),
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Self::MajMaj => "MM",
            Self::MajMin => "Mm",
            Self::MajUnc => "MU",
            Self::MinMin => "mm",
            Self::MinUnc => "mU",
            Self::UncUnc => "UU",
        }
    }
}

impl fmt::Display for EdgeCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl fmt::Display for NodeCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CategoryReport {
    pub majority_class: usize,
    /// `None` for nodes without labeled incident edges.
    pub node_category: Vec<Option<NodeCategory>>,
    /// `None` for unlabeled edges and edges touching an uncategorized node.
    pub edge_category: Vec<Option<EdgeCategory>>,
    pub thresholds: (f64, f64),
}

impl CategoryReport {
    pub fn histogram(&self) -> Vec<(EdgeCategory, usize)> {
        EdgeCategory::ALL
            .iter()
            .map(|&c| (c, self.edge_category.iter().filter(|x| **x == Some(c)).count()))
            .collect()
    }
}

/// Binary labelings only. A node is `M` when its majority-edge ratio is at
/// least `p_hi`, `m` when at most `p_lo`, `U` otherwise.
pub fn categorize(graph: &AttributedGraph, labeling: &EdgeLabeling, thresholds: (f64, f64)) -> Result<CategoryReport> {
    if labeling.class_count() != 2 {
        return Err(Error::Unsupported(format!(
            "edge categorization is defined for binary labels only, got {} classes",
            labeling.class_count()
        )));
    }
    let (p_lo, p_hi) = thresholds;
    if !(0.0 <= p_lo && p_lo < p_hi && p_hi <= 1.0) {
        return Err(Error::Parameter(format!("need 0 <= p_lo < p_hi <= 1, got ({p_lo}, {p_hi})")));
    }
    labeling.validate_for(graph)?;
    let majority = labeling.majority_class();
    let node_category: Vec<Option<NodeCategory>> = (0..graph.node_count())
        .map(|i| {
            let (mut maj, mut total) = (0usize, 0usize);
            for &e in graph.incident_edges(i) {
                if let Some(k) = labeling.label(e) {
                    total += 1;
                    maj += usize::from(k == majority);
                }
            }
            (total > 0).then(|| {
                let ratio = maj as f64 / total as f64;
                if ratio >= p_hi {
                    NodeCategory::Majority
                } else if ratio <= p_lo {
                    NodeCategory::Minority
                } else {
                    NodeCategory::Uncertain
                }
            })
        })
        .collect();
    let edge_category = graph
        .edges()
        .iter()
        .enumerate()
        .map(|(e, &(u, v))| {
            labeling.label(e)?;
            Some(EdgeCategory::from_endpoints(node_category[u]?, node_category[v]?))
        })
        .collect();
    Ok(CategoryReport {
        majority_class: majority,
        node_category,
        edge_category,
        thresholds,
    })
}
