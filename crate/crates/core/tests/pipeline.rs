use std::path::Path;

use topoedge::config::{Method, RunConfig};
use topoedge::graph::{AttributedGraph, EdgeLabeling, Split};
use topoedge::train;

fn planted_config() -> RunConfig {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/planted.conf");
    RunConfig::load(&path).unwrap()
}

#[test]
fn base_majority_accuracy_falls_with_entropy() {
    let cfg = planted_config().with_method(Method::Base);
    let data = train::load_dataset(&cfg).unwrap();
    let prep = train::prepare(data.graph, &data.labeling, &cfg).unwrap();
    let report = train::run(&prep, &cfg, 1).unwrap();
    let mean = |pick: fn(&[topoedge::metrics::TeBucketRow]) -> Option<f64>| -> f64 {
        let xs: Vec<f64> = report.seeds.iter().filter_map(|s| pick(&s.te_buckets)).collect();
        xs.iter().sum::<f64>() / xs.len() as f64
    };
    let low = mean(|b| b.first().and_then(|r| r.majority_accuracy()));
    let high = mean(|b| b.last().and_then(|r| r.majority_accuracy()));
    assert!(low > high, "low-entropy majority accuracy {low} vs high-entropy {high}");
}

#[test]
fn sweep_shrinks_train_labels_only() {
    let cfg = RunConfig {
        methods: vec![Method::Base],
        epochs: 20,
        seeds: vec![0],
        ..planted_config()
    };
    let data = train::load_dataset(&cfg).unwrap();
    let full = train::prepare(data.graph.clone(), &data.labeling, &cfg).unwrap();
    let points = train::labeled_ratio_sweep(&data, &cfg, &[0.1, 1.0], &cfg.methods, 1).unwrap();
    assert_eq!(points.len(), 2);
    let cut = train::prepare(data.graph, &data.labeling, &RunConfig { label_ratio: 0.1, ..cfg }).unwrap();
    assert_eq!(cut.train.len(), (0.1 * full.train.len() as f64).ceil() as usize);
    assert_eq!(cut.val, full.val);
    assert_eq!(cut.test, full.test);
    for p in &points {
        let s = p.reports[0].summary(Split::Test);
        assert!(s.macro_f1.0.is_finite() && s.b_acc.0.is_finite());
    }
}

/// Two class-pure components of equal size: entropy is zero everywhere and
/// the classes are balanced, so every reweighting is the identity.
fn unit_weight_problem() -> (AttributedGraph, EdgeLabeling) {
    let mut edges = Vec::new();
    let mut labels = Vec::new();
    for (k, base) in [(0usize, 0usize), (1, 12)] {
        for a in 0..12 {
            for b in (a + 1)..12 {
                if (a + b) % 3 != 0 {
                    edges.push((base + a, base + b));
                    labels.push(Some(k));
                }
            }
        }
    }
    let g = AttributedGraph::from_edges(24, &edges, None, None).unwrap();
    let l = EdgeLabeling::new(2, labels).unwrap();
    (g, l)
}

#[test]
fn rtq_with_unit_weights_is_base() {
    let (g, l) = unit_weight_problem();
    let cfg = RunConfig {
        epochs: 15,
        seeds: vec![0, 1],
        encoder_hidden: vec![8, 8],
        classifier_hidden: vec![8],
        ..RunConfig::default()
    };
    let prep = train::prepare(g, &l, &cfg).unwrap();
    let w = train::weight_set(&prep, &cfg).unwrap();
    assert!(w.combined.weights.iter().all(|&x| x == 1.0), "{:?}", w.combined.weights);
    let base = train::run(&prep, &cfg.with_method(Method::Base), 1).unwrap();
    let rtq = train::run(&prep, &cfg.with_method(Method::Rtq), 1).unwrap();
    for (a, b) in base.seeds.iter().zip(&rtq.seeds) {
        let la: Vec<f64> = a.history.iter().map(|h| h.loss).collect();
        let lb: Vec<f64> = b.history.iter().map(|h| h.loss).collect();
        assert_eq!(la, lb);
        assert_eq!(a.test, b.test);
    }
}
