//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use topoedge::entropy::LabelSource;
use topoedge::graph::{AttributedGraph, EdgeLabeling, Split};
use topoedge::mixup::Wedge;
use topoedge::tensor::Matrix;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random simple graph with about `m` edges, a fraction of them unlabeled and
/// the labeled ones spread over train/val/test.
pub fn random_labeled_graph<R: Rng>(r: &mut R, n: usize, m: usize, classes: usize) -> (AttributedGraph, EdgeLabeling) {
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let cap = n * (n - 1) / 2;
    while pairs.len() < m.min(cap) {
        let a = r.random_range(0..n);
        let b = r.random_range(0..n);
        if a != b && seen.insert((a.min(b), a.max(b))) {
            pairs.push((a, b));
        }
    }
    let graph = AttributedGraph::from_edges(n, &pairs, None, None).unwrap();
    let mut labels = Vec::with_capacity(pairs.len());
    let mut splits = Vec::with_capacity(pairs.len());
    for _ in 0..pairs.len() {
        if r.random_bool(0.1) {
            labels.push(None);
            splits.push(None);
        } else {
            labels.push(Some(r.random_range(0..classes)));
            splits.push(Some(*[Split::Train, Split::Train, Split::Val, Split::Test].choose(r).unwrap()));
        }
    }
    let labeling = EdgeLabeling::with_splits(classes, labels, splits).unwrap();
    (graph, labeling)
}

fn dense_matmul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| row.iter().zip(b).map(|(x, brow)| x * brow[j]).sum())
                .collect()
        })
        .collect()
}

/// Entropy per edge from dense matrices: `P = D⁻¹A`, `H^L = P^L H^0`, edge
/// distribution `½(H_i + H_j)` rescaled to unit mass. Uncovered edges get 0.
pub fn dense_te(graph: &AttributedGraph, labeling: &EdgeLabeling, depth: usize, source: LabelSource) -> (Vec<f64>, Vec<bool>) {
    let n = graph.node_count();
    let c = labeling.class_count();
    let mut a = vec![vec![0.0; n]; n];
    for &(u, v) in graph.edges() {
        a[u][v] = 1.0;
        a[v][u] = 1.0;
    }
    let p: Vec<Vec<f64>> = a
        .iter()
        .map(|row| {
            let d: f64 = row.iter().sum();
            row.iter().map(|x| if d > 0.0 { x / d } else { 0.0 }).collect()
        })
        .collect();
    let mut h0 = vec![vec![0.0; c]; n];
    let mut cnt = vec![0.0; n];
    for (e, &(u, v)) in graph.edges().iter().enumerate() {
        let use_it = match source {
            LabelSource::TrainOnly => labeling.split(e) == Some(Split::Train),
            LabelSource::AllLabeled => labeling.label(e).is_some(),
        };
        if let (true, Some(k)) = (use_it, labeling.label(e)) {
            for x in [u, v] {
                h0[x][k] += 1.0;
                cnt[x] += 1.0;
            }
        }
    }
    for (row, &k) in h0.iter_mut().zip(&cnt) {
        if k > 0.0 {
            row.iter_mut().for_each(|x| *x /= k);
        }
    }
    // P^L first, then one product with H^0: a different association order
    // from repeated sparse propagation.
    let mut pl: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| f64::from(u8::from(i == j))).collect()).collect();
    for _ in 0..depth {
        pl = dense_matmul(&pl, &p);
    }
    let hl = dense_matmul(&pl, &h0);
    let mut te = Vec::new();
    let mut covered = Vec::new();
    for &(u, v) in graph.edges() {
        let g: Vec<f64> = (0..c).map(|k| 0.5 * (hl[u][k] + hl[v][k])).collect();
        let mass: f64 = g.iter().sum();
        if mass <= 0.0 {
            te.push(0.0);
            covered.push(false);
            continue;
        }
        let h: f64 = g
            .iter()
            .map(|x| x / mass)
            .filter(|&x| x > 0.0)
            .map(|x| -x * x.ln())
            .sum();
        te.push(h.max(0.0));
        covered.push(true);
    }
    (te, covered)
}

/// Exhaustive partner search: every training edge other than `e` sharing
/// exactly one endpoint with it; highest entropy wins, ties to the smaller id.
pub fn brute_force_partner(graph: &AttributedGraph, labeling: &EdgeLabeling, te: &[f64], e: usize) -> Option<usize> {
    let (a, b) = graph.edge(e);
    let mut best: Option<usize> = None;
    for f in 0..graph.edge_count() {
        if f == e || labeling.split(f) != Some(Split::Train) {
            continue;
        }
        let (c, d) = graph.edge(f);
        let shared = [c, d].iter().filter(|x| **x == a || **x == b).count();
        if shared != 1 {
            continue;
        }
        best = match best {
            Some(g) if te[g] > te[f] || (te[g] == te[f] && g < f) => Some(g),
            _ => Some(f),
        };
    }
    best
}

/// Checks the structural definition of a wedge against the raw edge list.
pub fn wedge_is_valid(graph: &AttributedGraph, w: &Wedge) -> bool {
    let e1 = graph.edge(w.edge_1);
    let e2 = graph.edge(w.edge_2);
    let has = |e: (usize, usize), x: usize, y: usize| (e.0 == x && e.1 == y) || (e.0 == y && e.1 == x);
    w.edge_1 != w.edge_2
        && w.end_i != w.end_j
        && w.centric != w.end_i
        && w.centric != w.end_j
        && has(e1, w.centric, w.end_i)
        && has(e2, w.centric, w.end_j)
}

pub fn log_softmax(row: &[f64]) -> Vec<f64> {
    let m = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lse = m + row.iter().map(|x| (x - m).exp()).sum::<f64>().ln();
    row.iter().map(|x| x - lse).collect()
}

/// `1/b Σ w·CE` over the first `labels.len()` rows plus `h/n Σ w_s[λ CE(y1) + (1−λ) CE(y2)]`
/// over the rest, written out directly from the logits.
pub fn reference_loss(
    logits: &Matrix,
    labels: &[usize],
    weights: &[f64],
    mix: Option<(&[usize], &[usize], f64, &[f64])>,
    h: f64,
) -> f64 {
    let b = labels.len();
    let base: f64 = (0..b).map(|r| -weights[r] * log_softmax(logits.row(r))[labels[r]]).sum::<f64>() / b as f64;
    let Some((y1, y2, lambda, ws)) = mix else {
        return base;
    };
    let n = y1.len();
    let mixed: f64 = (0..n)
        .map(|i| {
            let lp = log_softmax(logits.row(b + i));
            ws[i] * (-lambda * lp[y1[i]] - (1.0 - lambda) * lp[y2[i]])
        })
        .sum::<f64>()
        / n as f64;
    base + h * mixed
}

/// Maximum of `|a − b| / max(|a|, |b|, floor)` over paired entries.
pub fn max_rel_error(a: &[f64], b: &[f64], floor: f64) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs() / x.abs().max(y.abs()).max(floor))
        .fold(0.0, f64::max)
}

/// Dense random matrix with entries in `[-1, 1)`.
pub fn random_matrix<R: Rng>(r: &mut R, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| r.random_range(-1.0..1.0))
}

/// Outcome of one finite-difference check of the full training objective.
pub struct FdOutcome {
    pub params: usize,
    pub mixed_rows: usize,
    pub max_rel: f64,
}

/// Central differences of the combined objective (weighted base loss plus
/// weighted wedge mixup) on a 20-node graph with node and edge features,
/// fixed dropout masks, fixed wedges and a fixed λ.
pub fn fd_full_objective(seed: u64) -> FdOutcome {
    use topoedge::entropy::te_profile;
    use topoedge::mixup::{form_wedges, MixSample, WedgeBatch};
    use topoedge::nn::{Activation, EdgeInput, EdgeModel, Masks, ModelConfig, ModelInputs};
    use topoedge::reweight::{combined_weights, quantity_weights, te_weights};
    use topoedge::train::step_loss;

    let mut r = rng(seed);
    let (graph, labeling) = loop {
        let (g, l) = random_labeled_graph(&mut r, 20, 45, 2);
        let counts = l.class_counts_train();
        if counts.iter().all(|&c| c > 0) {
            break (g, l);
        }
    };
    let x = random_matrix(&mut r, 20, 4);
    let s = random_matrix(&mut r, graph.edge_count(), 3);
    let graph = graph.with_features(Some(x), Some(s)).unwrap();
    let inputs = ModelInputs::from_graph(&graph);
    let cfg = ModelConfig {
        input_dim: 4,
        edge_dim: 3,
        encoder_dims: vec![8, 8],
        classifier_dims: vec![8],
        classes: 2,
        activation: Activation::Tanh,
        dropout: 0.3,
    };
    let model = EdgeModel::new(cfg.clone(), &mut r).unwrap();

    let profile = te_profile(&graph, &labeling, 2, LabelSource::TrainOnly).unwrap();
    let train = labeling.edges_in(Split::Train);
    let wq = quantity_weights(&labeling).unwrap().mean_normalized();
    let wt = te_weights(&profile, &labeling, 1.0).unwrap().mean_normalized();
    let w = combined_weights(&wq, &wt, 0.5).unwrap();
    let labels: Vec<usize> = train.iter().map(|&e| labeling.label(e).unwrap()).collect();

    let selected: Vec<usize> = train.iter().copied().take(6).collect();
    let set = form_wedges(&graph, &labeling, &profile, &selected);
    let lambda = 0.37;
    let batch = WedgeBatch::new(
        &labeling,
        set.wedges.iter().copied().map(MixSample::Wedge).collect(),
        lambda,
        selected.len(),
        4.0,
        set.dropped,
    );
    let sample_w = batch.sample_weights(&w).unwrap();
    let mut rows: Vec<EdgeInput> = train.iter().map(|&e| EdgeInput::real(e, graph.edge(e))).collect();
    rows.extend(batch.inputs(&graph));

    let mut masks = Masks::none();
    masks.encoder = Masks::sample_encoder(&cfg, 20, &mut r);
    masks.classifier = Masks::sample_classifier(&cfg, rows.len(), &mut r);
    let h = 0.6;

    let cache = model.forward(&inputs, &rows, &masks).unwrap();
    let step = step_loss(&cache.logits, &labels, &w.weights, Some((&batch, Some(&sample_w))), h).unwrap();
    let analytic = model.backward(&inputs, &cache, &masks, &step.dlogits).unwrap().flatten();

    let mix = Some((batch.y1.as_slice(), batch.y2.as_slice(), lambda, sample_w.as_slice()));
    let objective = |p: &[f64]| {
        let mut m = model.clone();
        m.set_params_flat(p).unwrap();
        let logits = m.forward(&inputs, &rows, &masks).unwrap().logits;
        reference_loss(&logits, &labels, &w.weights, mix, h)
    };
    let base = model.params_flat();
    let eps = 1e-5;
    let numeric: Vec<f64> = (0..base.len())
        .map(|i| {
            let mut p = base.clone();
            p[i] = base[i] + eps;
            let up = objective(&p);
            p[i] = base[i] - eps;
            let down = objective(&p);
            (up - down) / (2.0 * eps)
        })
        .collect();
    FdOutcome {
        params: base.len(),
        mixed_rows: batch.len(),
        max_rel: max_rel_error(&analytic, &numeric, 1e-6),
    }
}
