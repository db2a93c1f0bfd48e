//! Per-edge loss weights and the weighted cross-entropy objective.
//!
//! * quantity weight: `|E_train| / |E_k|` for an edge of class `k`;
//! * entropy weight: `exp(TE / t)`;
//! * combined weight: `θ · w_te + (1 − θ) · w_q`.
//!
//! Each family is usually mean-normalized over the training edges before
//! combination so `θ` trades off comparable scales.

use std::fmt;

use crate::entropy::TeProfile;
use crate::error::{Error, Result};
use crate::graph::{EdgeLabeling, Split};
use crate::tensor::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightKind {
    Uniform,
    Quantity,
    Topological,
    Combined,
}

impl fmt::Display for WeightKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Uniform => "uniform",
            Self::Quantity => "quantity",
            Self::Topological => "te",
            Self::Combined => "combined",
        })
    }
}

/// Weights over the training edges, aligned with `edges` (ascending edge ids).
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    pub kind: WeightKind,
    pub edges: Vec<usize>,
    pub weights: Vec<f64>,
    pub temperature: Option<f64>,
    pub theta: Option<f64>,
    pub normalized: bool,
}

impl WeightVector {
    pub fn uniform(edges: Vec<usize>) -> Self {
        let weights = vec![1.0; edges.len()];
        Self {
            kind: WeightKind::Uniform,
            edges,
            weights,
            temperature: None,
            theta: None,
            normalized: true,
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn mean(&self) -> f64 {
        if self.weights.is_empty() {
            return 0.0;
        }
        self.weights.iter().sum::<f64>() / self.weights.len() as f64
    }

    /// Rescaled to mean one. An all-zero vector is returned unchanged.
    pub fn mean_normalized(&self) -> Self {
        let mean = self.mean();
        let mut out = self.clone();
        if mean > 0.0 {
            out.weights.iter_mut().for_each(|w| *w /= mean);
        }
        out.normalized = true;
        out
    }

    /// Weight of `edge`, if it is one of the weighted edges.
    pub fn get(&self, edge: usize) -> Option<f64> {
        self.edges.binary_search(&edge).ok().map(|i| self.weights[i])
    }
}

fn training_edges(labeling: &EdgeLabeling) -> Result<Vec<usize>> {
    let edges = labeling.edges_in(Split::Train);
    if edges.is_empty() {
        return Err(Error::Data("training set is empty".into()));
    }
    Ok(edges)
}

/// Inverse class frequency scaled by the training-set size.
pub fn quantity_weights(labeling: &EdgeLabeling) -> Result<WeightVector> {
    let edges = training_edges(labeling)?;
    let counts = labeling.class_counts_train();
    let total = edges.len() as f64;
    let weights = edges
        .iter()
        .map(|&e| {
            let k = labeling.label(e).expect("training edges are labeled");
            total / counts[k] as f64
        })
        .collect();
    Ok(WeightVector {
        kind: WeightKind::Quantity,
        edges,
        weights,
        temperature: None,
        theta: None,
        normalized: false,
    })
}

/// `exp(TE / t)` for every training edge.
pub fn te_weights(profile: &TeProfile, labeling: &EdgeLabeling, temperature: f64) -> Result<WeightVector> {
    if !(temperature > 0.0 && temperature.is_finite()) {
        return Err(Error::Parameter(format!("temperature must be > 0, got {temperature}")));
    }
    let edges = training_edges(labeling)?;
    if profile.te.len() != labeling.edge_count() {
        return Err(Error::Dimension("entropy profile does not match labeling".into()));
    }
    let weights = edges.iter().map(|&e| (profile.te[e] / temperature).exp()).collect();
    Ok(WeightVector {
        kind: WeightKind::Topological,
        edges,
        weights,
        temperature: Some(temperature),
        theta: None,
        normalized: false,
    })
}

/// `θ · wt + (1 − θ) · wq`, elementwise over a shared edge set.
pub fn combined_weights(wq: &WeightVector, wt: &WeightVector, theta: f64) -> Result<WeightVector> {
    if !(0.0..=1.0).contains(&theta) {
        return Err(Error::Parameter(format!("theta must lie in [0, 1], got {theta}")));
    }
    if wq.edges != wt.edges {
        return Err(Error::Dimension("weight vectors cover different edge sets".into()));
    }
    let weights = wq
        .weights
        .iter()
        .zip(&wt.weights)
        .map(|(&q, &t)| theta * t + (1.0 - theta) * q)
        .collect();
    Ok(WeightVector {
        kind: WeightKind::Combined,
        edges: wq.edges.clone(),
        weights,
        temperature: wt.temperature,
        theta: Some(theta),
        normalized: wq.normalized && wt.normalized,
    })
}

/// Scalar loss plus its gradient with respect to the logits.
#[derive(Debug, Clone, PartialEq)]
pub struct LossOutput {
    pub loss: f64,
    pub grad: Matrix,
}

/// Per-row `log softmax`, computed with the max-shift.
pub(crate) fn log_softmax_row(row: &[f64], out: &mut [f64]) {
    let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lse = row.iter().map(|&x| (x - max).exp()).sum::<f64>().ln() + max;
    for (o, &x) in out.iter_mut().zip(row) {
        *o = x - lse;
    }
}

pub(crate) fn check_logits(logits: &Matrix) -> Result<()> {
    if !logits.is_finite() {
        return Err(Error::Numeric("non-finite logit".into()));
    }
    Ok(())
}

/// `(1/|B|) Σ_e w_e · CE(softmax(logits_e), y_e)` and its analytic gradient.
pub fn weighted_ce_loss(logits: &Matrix, labels: &[usize], weights: &[f64]) -> Result<LossOutput> {
    let (b, c) = logits.shape();
    if labels.len() != b || weights.len() != b {
        return Err(Error::Dimension(format!(
            "{b} logit rows, {} labels, {} weights",
            labels.len(),
            weights.len()
        )));
    }
    check_logits(logits)?;
    let mut grad = Matrix::zeros(b, c);
    if b == 0 {
        return Ok(LossOutput { loss: 0.0, grad });
    }
    let inv_b = 1.0 / b as f64;
    let mut logp = vec![0.0; c];
    let mut loss = 0.0;
    for r in 0..b {
        let y = labels[r];
        if y >= c {
            return Err(Error::Dimension(format!("label {y} >= {c} classes")));
        }
        log_softmax_row(logits.row(r), &mut logp);
        loss += weights[r] * -logp[y];
        let scale = weights[r] * inv_b;
        for (k, g) in grad.row_mut(r).iter_mut().enumerate() {
            *g = scale * (logp[k].exp() - if k == y { 1.0 } else { 0.0 });
        }
    }
    Ok(LossOutput {
        loss: loss * inv_b,
        grad,
    })
}
