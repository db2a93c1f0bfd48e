//! High-entropy edge selection, wedge formation and mixup losses.
//!
//! A wedge is a pair of training edges `e_ci`, `e_cj` sharing exactly the
//! centric node `c`. Mixing interpolates the two end nodes,
//! `Z_s = λ Z_i + (1 − λ) Z_j`, and the synthetic edge `c–s` is trained
//! against both endpoint labels with weights `λ` and `1 − λ`.

use std::fmt;
use std::str::FromStr;

use rand::seq::IndexedRandom;
use rand::Rng;
use rand_distr::{Beta, Distribution};

use crate::entropy::TeProfile;
use crate::error::{Error, Result};
use crate::graph::{AttributedGraph, EdgeLabeling, Split};
use crate::nn::EdgeInput;
use crate::reweight::{check_logits, log_softmax_row, LossOutput, WeightVector};
use crate::tensor::Matrix;

/// Added to every TE before proportional sampling so zero-entropy edges stay reachable.
pub const SELECTION_EPSILON: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SelectionMode {
    TopK,
    #[default]
    WeightedSample,
}

impl fmt::Display for SelectionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::TopK => "topk",
            Self::WeightedSample => "weighted",
        })
    }
}

impl FromStr for SelectionMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "topk" | "top_k" => Ok(Self::TopK),
            "weighted" | "weighted_sample" => Ok(Self::WeightedSample),
            _ => Err(Error::Config(format!("unknown selection mode {s:?} (expected topk or weighted)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Wedge {
    pub centric: usize,
    pub end_i: usize,
    pub end_j: usize,
    /// Edge `c–i`, drawn from the selected set.
    pub edge_1: usize,
    /// Edge `c–j`, its partner.
    pub edge_2: usize,
}

impl Wedge {
    /// Builds the wedge for two edges sharing exactly one endpoint.
    pub fn from_edges(graph: &AttributedGraph, edge_1: usize, edge_2: usize) -> Option<Self> {
        let (a, b) = graph.edge(edge_1);
        let (c, d) = graph.edge(edge_2);
        let (centric, end_i, end_j) = if a == c {
            (a, b, d)
        } else if a == d {
            (a, b, c)
        } else if b == c {
            (b, a, d)
        } else if b == d {
            (b, a, c)
        } else {
            return None;
        };
        if end_i == end_j || edge_1 == edge_2 {
            return None;
        }
        Some(Self {
            centric,
            end_i,
            end_j,
            edge_1,
            edge_2,
        })
    }

    pub fn input(&self, lambda: f64) -> EdgeInput {
        EdgeInput {
            left: vec![(self.centric, 1.0)],
            right: vec![(self.end_i, lambda), (self.end_j, 1.0 - lambda)],
            edge: vec![(self.edge_1, lambda), (self.edge_2, 1.0 - lambda)],
        }
    }
}

/// One synthetic training row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MixSample {
    /// Mixed end nodes inside a wedge.
    Wedge(Wedge),
    /// Interpolated full edge embeddings of two arbitrary edges.
    Pair { edge_1: usize, edge_2: usize },
}

impl MixSample {
    pub fn edges(&self) -> (usize, usize) {
        match *self {
            Self::Wedge(w) => (w.edge_1, w.edge_2),
            Self::Pair { edge_1, edge_2 } => (edge_1, edge_2),
        }
    }

    pub fn input(&self, graph: &AttributedGraph, lambda: f64) -> EdgeInput {
        match *self {
            Self::Wedge(w) => w.input(lambda),
            Self::Pair { edge_1, edge_2 } => {
                EdgeInput::real(edge_1, graph.edge(edge_1)).interpolate(&EdgeInput::real(edge_2, graph.edge(edge_2)), lambda)
            }
        }
    }
}

/// The synthetic rows of one training step.
#[derive(Debug, Clone, PartialEq)]
pub struct WedgeBatch {
    pub samples: Vec<MixSample>,
    pub lambda: f64,
    pub y1: Vec<usize>,
    pub y2: Vec<usize>,
    /// Number of edges requested before dropping.
    pub k: usize,
    pub alpha: f64,
    pub dropped: usize,
}

impl WedgeBatch {
    pub fn new(labeling: &EdgeLabeling, samples: Vec<MixSample>, lambda: f64, k: usize, alpha: f64, dropped: usize) -> Self {
        let label = |e: usize| labeling.label(e).expect("mixup edges are labeled");
        let y1 = samples.iter().map(|s| label(s.edges().0)).collect();
        let y2 = samples.iter().map(|s| label(s.edges().1)).collect();
        Self {
            samples,
            lambda,
            y1,
            y2,
            k,
            alpha,
            dropped,
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn inputs(&self, graph: &AttributedGraph) -> Vec<EdgeInput> {
        self.samples.iter().map(|s| s.input(graph, self.lambda)).collect()
    }

    /// `w_s = λ·w(edge_1) + (1 − λ)·w(edge_2)` per sample.
    pub fn sample_weights(&self, weights: &WeightVector) -> Result<Vec<f64>> {
        self.samples
            .iter()
            .map(|s| {
                let (a, b) = s.edges();
                match (weights.get(a), weights.get(b)) {
                    (Some(wa), Some(wb)) => Ok(self.lambda * wa + (1.0 - self.lambda) * wb),
                    _ => Err(Error::Data(format!("no weight for mixup edge pair ({a}, {b})"))),
                }
            })
            .collect()
    }
}

fn check_k(k: usize, train: &[usize]) -> Result<()> {
    if k > train.len() {
        return Err(Error::Parameter(format!(
            "requested {k} edges but the training set has {}",
            train.len()
        )));
    }
    Ok(())
}

/// Picks `k` training edges by entropy. `train` must be the training edge ids.
pub fn select_high_te_edges<R: Rng + ?Sized>(
    profile: &TeProfile,
    train: &[usize],
    k: usize,
    mode: SelectionMode,
    rng: &mut R,
) -> Result<Vec<usize>> {
    check_k(k, train)?;
    if k == 0 {
        return Ok(Vec::new());
    }
    let mut keyed: Vec<(f64, usize)> = match mode {
        SelectionMode::TopK => train.iter().map(|&e| (profile.te[e], e)).collect(),
        // Efraimidis–Spirakis: the k largest ln(u)/w form a weighted sample without replacement.
        SelectionMode::WeightedSample => train
            .iter()
            .map(|&e| {
                let u: f64 = rng.random::<f64>().max(f64::MIN_POSITIVE);
                (u.ln() / (profile.te[e] + SELECTION_EPSILON), e)
            })
            .collect(),
    };
    keyed.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    Ok(keyed.into_iter().take(k).map(|(_, e)| e).collect())
}

/// `k` training edges uniformly without replacement.
pub fn select_random_edges<R: Rng + ?Sized>(train: &[usize], k: usize, rng: &mut R) -> Result<Vec<usize>> {
    check_k(k, train)?;
    Ok(train.choose_multiple(rng, k).copied().collect())
}

/// Training edges sharing an endpoint with `e`, excluding `e`, ascending.
fn incident_training_edges(graph: &AttributedGraph, labeling: &EdgeLabeling, e: usize) -> Vec<usize> {
    let (u, v) = graph.edge(e);
    let mut out: Vec<usize> = graph
        .incident_edges(u)
        .iter()
        .chain(graph.incident_edges(v))
        .copied()
        .filter(|&f| f != e && labeling.split(f) == Some(Split::Train))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Wedges for the selected edges plus the number dropped for lack of a partner.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WedgeSet {
    pub wedges: Vec<Wedge>,
    pub dropped: usize,
}

/// For each selected edge, the incident training edge with the highest
/// entropy (ties to the smaller id) becomes its wedge partner.
pub fn form_wedges(graph: &AttributedGraph, labeling: &EdgeLabeling, profile: &TeProfile, selected: &[usize]) -> WedgeSet {
    let mut out = WedgeSet::default();
    for &e in selected {
        let best = incident_training_edges(graph, labeling, e)
            .into_iter()
            .fold(None::<usize>, |best, f| match best {
                Some(b) if profile.te[b] >= profile.te[f] => Some(b),
                _ => Some(f),
            });
        match best.and_then(|f| Wedge::from_edges(graph, e, f)) {
            Some(w) => out.wedges.push(w),
            None => out.dropped += 1,
        }
    }
    out
}

/// As [`form_wedges`] but with a uniformly random incident partner.
pub fn form_random_wedges<R: Rng + ?Sized>(
    graph: &AttributedGraph,
    labeling: &EdgeLabeling,
    selected: &[usize],
    rng: &mut R,
) -> WedgeSet {
    let mut out = WedgeSet::default();
    for &e in selected {
        let candidates = incident_training_edges(graph, labeling, e);
        match candidates.choose(rng).and_then(|&f| Wedge::from_edges(graph, e, f)) {
            Some(w) => out.wedges.push(w),
            None => out.dropped += 1,
        }
    }
    out
}

/// Pairs each selected edge with a uniformly random other training edge.
pub fn pair_random_partners<R: Rng + ?Sized>(train: &[usize], selected: &[usize], rng: &mut R) -> Vec<MixSample> {
    if train.len() < 2 {
        return Vec::new();
    }
    selected
        .iter()
        .map(|&e| {
            let partner = loop {
                let f = *train.choose(rng).expect("nonempty");
                if f != e {
                    break f;
                }
            };
            MixSample::Pair {
                edge_1: e,
                edge_2: partner,
            }
        })
        .collect()
}

/// One draw from `Beta(α, α)`.
pub fn sample_lambda<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> Result<f64> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::Parameter(format!("alpha must be > 0, got {alpha}")));
    }
    let beta = Beta::new(alpha, alpha).map_err(|e| Error::Parameter(e.to_string()))?;
    Ok(beta.sample(rng))
}

/// `E = Z_c ∥ (λ Z_i + (1 − λ) Z_j) (∥ λ S_ci + (1 − λ) S_cj)`.
pub fn mix_wedge(z: &Matrix, s: Option<&Matrix>, wedge: &Wedge, lambda: f64) -> Result<Vec<f64>> {
    let n = z.rows();
    if [wedge.centric, wedge.end_i, wedge.end_j].iter().any(|&i| i >= n) {
        return Err(Error::Dimension("wedge node outside the embedding matrix".into()));
    }
    if let Some(s) = s {
        if wedge.edge_1.max(wedge.edge_2) >= s.rows() {
            return Err(Error::Dimension("wedge edge outside the edge feature matrix".into()));
        }
    }
    Ok(crate::nn::assemble_rows(z, s, &[wedge.input(lambda)]).into_vec())
}

/// Two-term interpolated cross entropy, averaged over samples:
/// `(1/n) Σ w_s [λ CE(p_s, y1_s) + (1 − λ) CE(p_s, y2_s)]`.
pub fn mixup_loss(logits: &Matrix, y1: &[usize], y2: &[usize], lambda: f64, weights: Option<&[f64]>) -> Result<LossOutput> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::Parameter(format!("lambda must lie in [0, 1], got {lambda}")));
    }
    let (n, c) = logits.shape();
    if y1.len() != n || y2.len() != n || weights.is_some_and(|w| w.len() != n) {
        return Err(Error::Dimension("mixup outputs, labels and weights are misaligned".into()));
    }
    check_logits(logits)?;
    let mut grad = Matrix::zeros(n, c);
    if n == 0 {
        return Ok(LossOutput { loss: 0.0, grad });
    }
    let inv_n = 1.0 / n as f64;
    let mut logp = vec![0.0; c];
    let mut loss = 0.0;
    for r in 0..n {
        let (a, b) = (y1[r], y2[r]);
        if a >= c || b >= c {
            return Err(Error::Dimension(format!("label out of range for {c} classes")));
        }
        let w = weights.map_or(1.0, |w| w[r]);
        log_softmax_row(logits.row(r), &mut logp);
        loss += w * (lambda * -logp[a] + (1.0 - lambda) * -logp[b]);
        let scale = w * inv_n;
        for (k, g) in grad.row_mut(r).iter_mut().enumerate() {
            let mut target = 0.0;
            if k == a {
                target += lambda;
            }
            if k == b {
                target += 1.0 - lambda;
            }
            *g = scale * (logp[k].exp() - target);
        }
    }
    Ok(LossOutput {
        loss: loss * inv_n,
        grad,
    })
}

/// `base + h · mixup`.
pub fn total_loss(base: f64, mixup: f64, h: f64) -> f64 {
    if h == 0.0 {
        base
    } else {
        base + h * mixup
    }
}
