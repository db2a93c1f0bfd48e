mod common;

use common::{fd_full_objective, random_matrix, rng};
use topoedge::graph::AttributedGraph;
use topoedge::nn::{Activation, Adam, AdamConfig, EdgeInput, EdgeModel, Masks, ModelConfig, ModelInputs};
use topoedge::reweight::weighted_ce_loss;

#[test]
fn full_objective_gradient_matches_central_differences() {
    for seed in 0..5 {
        let out = fd_full_objective(seed);
        assert!(out.params <= 2000, "{} parameters", out.params);
        assert!(out.mixed_rows > 0, "seed {seed} produced no wedges");
        assert!(out.max_rel <= 1e-4, "seed {seed}: relative error {:.3e}", out.max_rel);
    }
}

/// Two cliques joined by one bridge; edge class = clique. Separable from the
/// indicator features alone.
fn separable_problem() -> (ModelInputs, Vec<EdgeInput>, Vec<usize>) {
    let mut edges = Vec::new();
    for base in [0, 5] {
        for a in 0..5 {
            for b in (a + 1)..5 {
                edges.push((base + a, base + b));
            }
        }
    }
    edges.push((4, 5));
    let x = topoedge::tensor::Matrix::from_fn(10, 2, |i, j| f64::from(u8::from((i < 5) == (j == 0))));
    let g = AttributedGraph::from_edges(10, &edges, Some(x), None).unwrap();
    let rows: Vec<EdgeInput> = (0..20).map(|e| EdgeInput::real(e, g.edge(e))).collect();
    let labels = (0..20).map(|e| usize::from(e >= 10)).collect();
    (ModelInputs::from_graph(&g), rows, labels)
}

#[test]
fn loss_decreases_on_separable_toy() {
    let (inputs, rows, labels) = separable_problem();
    let ones = vec![1.0; rows.len()];
    for seed in 0..5 {
        let cfg = ModelConfig {
            input_dim: 2,
            edge_dim: 0,
            encoder_dims: vec![8, 8],
            classifier_dims: vec![8],
            classes: 2,
            activation: Activation::Relu,
            dropout: 0.0,
        };
        let mut model = EdgeModel::new(cfg, &mut rng(seed)).unwrap();
        let mut adam = Adam::new(AdamConfig::default(), model.param_count()).unwrap();
        let masks = Masks::none();
        let mut first = None;
        let mut last = 0.0;
        for _ in 0..50 {
            let cache = model.forward(&inputs, &rows, &masks).unwrap();
            let loss = weighted_ce_loss(&cache.logits, &labels, &ones).unwrap();
            first.get_or_insert(loss.loss);
            last = loss.loss;
            let g = model.backward(&inputs, &cache, &masks, &loss.grad).unwrap();
            adam.step(&mut model, &g).unwrap();
        }
        let first = first.unwrap();
        assert!(last < 0.5 * first, "seed {seed}: {first} -> {last}");
        let preds = model.predict(&inputs, &rows).unwrap().argmax_rows();
        assert_eq!(preds, labels, "seed {seed}");
    }
}

#[test]
fn relu_gradient_matches_away_from_kinks() {
    // Fixed seed; a 1e-6 central step crosses no kink here.
    let mut r = rng(21);
    let (inputs, rows, labels) = separable_problem();
    let inputs = ModelInputs {
        x: random_matrix(&mut r, 10, 2),
        ..inputs
    };
    let cfg = ModelConfig {
        input_dim: 2,
        edge_dim: 0,
        encoder_dims: vec![4, 4],
        classifier_dims: vec![4],
        classes: 2,
        activation: Activation::Relu,
        dropout: 0.0,
    };
    let model = EdgeModel::new(cfg, &mut r).unwrap();
    let masks = Masks::none();
    let ones = vec![1.0; rows.len()];
    let cache = model.forward(&inputs, &rows, &masks).unwrap();
    let loss = weighted_ce_loss(&cache.logits, &labels, &ones).unwrap();
    let analytic = model.backward(&inputs, &cache, &masks, &loss.grad).unwrap().flatten();
    let base = model.params_flat();
    let f = |p: &[f64]| {
        let mut m = model.clone();
        m.set_params_flat(p).unwrap();
        let logits = m.forward(&inputs, &rows, &masks).unwrap().logits;
        weighted_ce_loss(&logits, &labels, &ones).unwrap().loss
    };
    let eps = 1e-6;
    for i in 0..base.len() {
        let mut p = base.clone();
        p[i] += eps;
        let up = f(&p);
        p[i] -= 2.0 * eps;
        let num = (up - f(&p)) / (2.0 * eps);
        assert!((num - analytic[i]).abs() <= 1e-6 * num.abs().max(1.0), "param {i}: {num} vs {}", analytic[i]);
    }
}
