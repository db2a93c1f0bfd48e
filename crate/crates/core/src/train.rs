//! Training loop, evaluation and the experiment matrices.
//!
//! Each run computes entropy and weights once, then trains one model per
//! seed. Per epoch: a training step on the real training edges (plus the
//! synthetic mixup rows when the method uses them), then an eval-mode pass
//! over every labeled edge. The epoch with the best validation Macro-F1
//! (earliest on ties) supplies the reported metrics.
//!
//! Random streams per seed: 0 initializes parameters, 1 draws dropout masks
//! for the encoder and the real rows, 2 drives mixup (selection, partners,
//! `λ`, and the dropout masks of synthetic rows). Keeping mixup on its own
//! stream means disabling it leaves every other draw unchanged.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::{DataSource, FirstSet, Method, Partner, Reweighting, RunConfig};
use crate::entropy::{categorize, te_profile, CategoryReport, TeProfile};
use crate::error::{Error, Result};
use crate::graph::{
    generate_planted_imbalance, load_graph_with, read_cache, split_edges, subsample_train_labels, AttributedGraph,
    EdgeLabeling, LoadOptions, LoadedDataset, NodeMap, Split,
};
use crate::metrics::{
    balanced_accuracy, category_f1_report, macro_f1, mean_std, per_class_f1, te_bucket_accuracy, CategoryF1Table,
    TeBucketRow, TeBuckets,
};
use crate::mixup::{
    form_random_wedges, form_wedges, mixup_loss, pair_random_partners, sample_lambda, select_high_te_edges,
    select_random_edges, total_loss, MixSample, WedgeBatch,
};
use crate::nn::{Adam, AdamConfig, EdgeInput, EdgeModel, Masks, ModelConfig, ModelInputs};
use crate::reweight::{combined_weights, quantity_weights, te_weights, weighted_ce_loss, WeightVector};
use crate::tensor::Matrix;

const STREAM_INIT: u64 = 0;
const STREAM_DROPOUT: u64 = 1;
const STREAM_MIXUP: u64 = 2;

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

/// Loads or generates the dataset named by `config.data`.
pub fn load_dataset(config: &RunConfig) -> Result<LoadedDataset> {
    match &config.data {
        DataSource::Planted(spec) => {
            let (graph, labeling) = generate_planted_imbalance(spec)?;
            let node_map = NodeMap::identity(graph.node_count());
            Ok(LoadedDataset {
                graph,
                labeling,
                node_map,
            })
        }
        DataSource::Files {
            edges,
            node_features,
            edge_features,
            class_count,
        } => load_graph_with(
            edges,
            node_features.as_deref(),
            edge_features.as_deref(),
            &LoadOptions {
                class_count: *class_count,
            },
        ),
        DataSource::Cache(path) => read_cache(path),
    }
}

/// Applies the configured split (unless the data carries one) and label ratio.
pub fn assign_splits(labeling: &EdgeLabeling, config: &RunConfig) -> Result<EdgeLabeling> {
    let has_splits = labeling.splits().iter().any(Option::is_some);
    let split = if has_splits && labeling.is_fully_split() {
        labeling.clone()
    } else {
        split_edges(labeling, config.split_ratios, config.split_seed)?
    };
    subsample_train_labels(&split, config.label_ratio, config.split_seed)
}

/// Data-level state shared by every method and seed of a run.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub graph: AttributedGraph,
    pub labeling: EdgeLabeling,
    pub inputs: ModelInputs,
    pub profile: TeProfile,
    pub categories: Option<CategoryReport>,
    pub train: Vec<usize>,
    pub val: Vec<usize>,
    pub test: Vec<usize>,
}

pub fn prepare(graph: AttributedGraph, labeling: &EdgeLabeling, config: &RunConfig) -> Result<Prepared> {
    config.validate()?;
    labeling.validate_for(&graph)?;
    let labeling = assign_splits(labeling, config)?;
    let train = labeling.edges_in(Split::Train);
    let val = labeling.edges_in(Split::Val);
    let test = labeling.edges_in(Split::Test);
    if train.is_empty() {
        return Err(Error::Data("train split is empty".into()));
    }
    let profile = te_profile(&graph, &labeling, config.te_depth, config.te_label_source)?;
    let categories = if labeling.class_count() == 2 {
        Some(categorize(&graph, &labeling, config.category_thresholds)?)
    } else {
        None
    };
    let inputs = ModelInputs::from_graph(&graph);
    Ok(Prepared {
        graph,
        labeling,
        inputs,
        profile,
        categories,
        train,
        val,
        test,
    })
}

/// Quantity, entropy and combined weights as configured.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSet {
    pub quantity: WeightVector,
    pub te: WeightVector,
    pub combined: WeightVector,
}

pub fn weight_set(prep: &Prepared, config: &RunConfig) -> Result<WeightSet> {
    let mut quantity = quantity_weights(&prep.labeling)?;
    let mut te = te_weights(&prep.profile, &prep.labeling, config.temperature)?;
    if config.normalize_weights {
        quantity = quantity.mean_normalized();
        te = te.mean_normalized();
    }
    let combined = combined_weights(&quantity, &te, config.theta)?;
    Ok(WeightSet {
        quantity,
        te,
        combined,
    })
}

/// Loss weights on the training edges for `method`.
pub fn method_weights(prep: &Prepared, config: &RunConfig, method: Method) -> Result<WeightVector> {
    Ok(match method.reweighting() {
        Reweighting::Uniform => WeightVector::uniform(prep.train.clone()),
        r => {
            let set = weight_set(prep, config)?;
            match r {
                Reweighting::Quantity => set.quantity,
                Reweighting::Topological => set.te,
                _ => set.combined,
            }
        }
    })
}

pub fn model_config(prep: &Prepared, config: &RunConfig) -> ModelConfig {
    ModelConfig {
        input_dim: prep.inputs.x.cols(),
        edge_dim: prep.inputs.edge_dim(),
        encoder_dims: config.encoder_hidden.clone(),
        classifier_dims: config.classifier_hidden.clone(),
        classes: prep.labeling.class_count(),
        activation: config.activation,
        dropout: config.dropout,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplitMetrics {
    pub b_acc: f64,
    pub macro_f1: f64,
    pub per_class_f1: Vec<f64>,
}

fn split_metrics(preds: &[usize], labels: &[usize], classes: usize) -> Result<SplitMetrics> {
    Ok(SplitMetrics {
        b_acc: balanced_accuracy(preds, labels, classes)?,
        macro_f1: macro_f1(preds, labels, classes)?,
        per_class_f1: per_class_f1(preds, labels, classes)?,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpochLog {
    pub epoch: usize,
    pub loss: f64,
    pub base_loss: f64,
    pub mixup_loss: f64,
    /// Synthetic rows used this epoch.
    pub mixed: usize,
    pub lambda: Option<f64>,
    pub val_macro_f1: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeedReport {
    pub seed: u64,
    pub best_epoch: usize,
    pub history: Vec<EpochLog>,
    pub train: SplitMetrics,
    pub val: SplitMetrics,
    pub test: SplitMetrics,
    /// Validation F1 per edge category (binary labelings only).
    pub category_f1: Option<CategoryF1Table>,
    /// Training accuracy per entropy bucket at the best epoch.
    pub te_buckets: Vec<TeBucketRow>,
    pub model: EdgeModel,
    pub optimizer: Adam,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub method: Method,
    pub config_hash: String,
    pub seeds: Vec<SeedReport>,
}

/// Mean and population std of a metric over seeds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub b_acc: (f64, f64),
    pub macro_f1: (f64, f64),
}

impl EvalReport {
    pub fn summary(&self, split: Split) -> Summary {
        let pick = |f: fn(&SplitMetrics) -> f64| {
            let xs: Vec<f64> = self
                .seeds
                .iter()
                .map(|s| {
                    f(match split {
                        Split::Train => &s.train,
                        Split::Val => &s.val,
                        Split::Test => &s.test,
                    })
                })
                .collect();
            mean_std(&xs)
        };
        Summary {
            b_acc: pick(|m| m.b_acc),
            macro_f1: pick(|m| m.macro_f1),
        }
    }
}

/// The mixup batch `config.method` draws in its first epoch under `seed`.
pub fn first_mix_batch(prep: &Prepared, config: &RunConfig, seed: u64) -> Result<Option<WedgeBatch>> {
    let k = resolve_k(prep, config, config.method)?;
    mix_batch(prep, config, config.method, k, &mut stream(seed, STREAM_MIXUP))
}

/// Builds this epoch's synthetic rows, or `None` when mixup is off.
fn mix_batch(
    prep: &Prepared,
    config: &RunConfig,
    method: Method,
    k: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Option<WedgeBatch>> {
    let Some(scheme) = method.mixup() else {
        return Ok(None);
    };
    // h = 0 or K = 0 makes the term vanish; skipping keeps the mixup stream untouched.
    if config.h == 0.0 || k == 0 {
        return Ok(None);
    }
    let selected = match scheme.first {
        FirstSet::Random => select_random_edges(&prep.train, k, rng)?,
        FirstSet::HighEntropy => select_high_te_edges(&prep.profile, &prep.train, k, config.selection, rng)?,
    };
    let (samples, dropped) = match scheme.partner {
        Partner::RandomEdge => {
            let pairs = pair_random_partners(&prep.train, &selected, rng);
            let dropped = selected.len() - pairs.len();
            (pairs, dropped)
        }
        Partner::RandomWedge => {
            let set = form_random_wedges(&prep.graph, &prep.labeling, &selected, rng);
            (set.wedges.into_iter().map(MixSample::Wedge).collect(), set.dropped)
        }
        Partner::EntropyWedge => {
            let set = form_wedges(&prep.graph, &prep.labeling, &prep.profile, &selected);
            (set.wedges.into_iter().map(MixSample::Wedge).collect(), set.dropped)
        }
    };
    let lambda = sample_lambda(config.alpha, rng)?;
    Ok(Some(WedgeBatch::new(&prep.labeling, samples, lambda, k, config.alpha, dropped)))
}

/// Loss and logit gradient for one step.
pub struct StepLoss {
    pub loss: f64,
    pub base: f64,
    pub mixup: f64,
    pub dlogits: Matrix,
}

/// Combines the base loss over the first `base.len()` logit rows with the
/// mixup loss over the remaining rows.
pub fn step_loss(
    logits: &Matrix,
    labels: &[usize],
    weights: &[f64],
    batch: Option<(&WedgeBatch, Option<&[f64]>)>,
    h: f64,
) -> Result<StepLoss> {
    let b = labels.len();
    let base_rows: Vec<usize> = (0..b).collect();
    let base = weighted_ce_loss(&logits.select_rows(&base_rows), labels, weights)?;
    let Some((batch, sample_weights)) = batch else {
        return Ok(StepLoss {
            loss: base.loss,
            base: base.loss,
            mixup: 0.0,
            dlogits: base.grad,
        });
    };
    let mix_rows: Vec<usize> = (b..logits.rows()).collect();
    let mix = mixup_loss(&logits.select_rows(&mix_rows), &batch.y1, &batch.y2, batch.lambda, sample_weights)?;
    let mut data = base.grad.into_vec();
    data.extend(mix.grad.as_slice().iter().map(|g| h * g));
    Ok(StepLoss {
        loss: total_loss(base.loss, mix.loss, h),
        base: base.loss,
        mixup: mix.loss,
        dlogits: Matrix::from_vec(logits.rows(), logits.cols(), data),
    })
}

fn resolve_k(prep: &Prepared, config: &RunConfig, method: Method) -> Result<usize> {
    if method.mixup().is_none() {
        return Ok(0);
    }
    let k = config.mixup_k.resolve(prep.train.len());
    if k > prep.train.len() {
        return Err(Error::Parameter(format!(
            "mixup.k = {k} exceeds the {} training edges",
            prep.train.len()
        )));
    }
    Ok(k)
}

/// Trains one model for `config.method` under `seed`.
pub fn train_seed(prep: &Prepared, config: &RunConfig, seed: u64) -> Result<SeedReport> {
    for (name, set) in [("validation", &prep.val), ("test", &prep.test)] {
        if set.is_empty() {
            return Err(Error::Data(format!("{name} split is empty")));
        }
    }
    let method = config.method;
    let weights = method_weights(prep, config, method)?;
    let k = resolve_k(prep, config, method)?;
    let weighted_mix = method.mixup().is_some_and(|s| s.weighted);
    let classes = prep.labeling.class_count();
    let label = |e: usize| prep.labeling.label(e).expect("split edges are labeled");

    let mut init_rng = stream(seed, STREAM_INIT);
    let mut drop_rng = stream(seed, STREAM_DROPOUT);
    let mut mix_rng = stream(seed, STREAM_MIXUP);

    let mcfg = model_config(prep, config);
    let mut model = EdgeModel::new(mcfg.clone(), &mut init_rng)?;
    let mut adam = Adam::new(
        AdamConfig {
            lr: config.lr,
            weight_decay: config.weight_decay,
            ..AdamConfig::default()
        },
        model.param_count(),
    )?;

    let edge_input = |e: usize| EdgeInput::real(e, prep.graph.edge(e));
    let train_inputs: Vec<EdgeInput> = prep.train.iter().map(|&e| edge_input(e)).collect();
    let train_labels: Vec<usize> = prep.train.iter().map(|&e| label(e)).collect();
    debug_assert_eq!(weights.edges, prep.train);

    let eval_edges: Vec<usize> = prep.train.iter().chain(&prep.val).chain(&prep.test).copied().collect();
    let eval_inputs: Vec<EdgeInput> = eval_edges.iter().map(|&e| edge_input(e)).collect();
    let (n_tr, n_va) = (prep.train.len(), prep.val.len());
    let val_labels: Vec<usize> = prep.val.iter().map(|&e| label(e)).collect();
    let test_labels: Vec<usize> = prep.test.iter().map(|&e| label(e)).collect();
    let n_nodes = prep.graph.node_count();

    let mut history = Vec::with_capacity(config.epochs);
    let mut best: Option<(f64, usize, Vec<usize>, EdgeModel, Adam)> = None;
    for epoch in 0..config.epochs {
        let mut masks = Masks::none();
        masks.encoder = Masks::sample_encoder(&mcfg, n_nodes, &mut drop_rng);
        masks.classifier = Masks::sample_classifier(&mcfg, n_tr, &mut drop_rng);
        let batch = mix_batch(prep, config, method, k, &mut mix_rng)?;
        let mut inputs = train_inputs.clone();
        let mut sample_weights = None;
        if let Some(batch) = &batch {
            inputs.extend(batch.inputs(&prep.graph));
            masks.append_classifier_rows(Masks::sample_classifier(&mcfg, batch.len(), &mut mix_rng));
            if weighted_mix {
                sample_weights = Some(batch.sample_weights(&weights)?);
            }
        }
        let cache = model.forward(&prep.inputs, &inputs, &masks)?;
        let step = step_loss(
            &cache.logits,
            &train_labels,
            &weights.weights,
            batch.as_ref().map(|b| (b, sample_weights.as_deref())),
            config.h,
        )?;
        if !step.loss.is_finite() {
            return Err(Error::Numeric(format!("loss became non-finite at epoch {epoch}")));
        }
        let grads = model.backward(&prep.inputs, &cache, &masks, &step.dlogits)?;
        adam.step(&mut model, &grads)?;

        let preds = model.predict(&prep.inputs, &eval_inputs)?.argmax_rows();
        let val_f1 = macro_f1(&preds[n_tr..n_tr + n_va], &val_labels, classes)?;
        history.push(EpochLog {
            epoch,
            loss: step.loss,
            base_loss: step.base,
            mixup_loss: step.mixup,
            mixed: batch.as_ref().map_or(0, WedgeBatch::len),
            lambda: batch.as_ref().map(|b| b.lambda),
            val_macro_f1: val_f1,
        });
        if best.as_ref().is_none_or(|b| val_f1 > b.0) {
            best = Some((val_f1, epoch, preds, model.clone(), adam.clone()));
        }
    }
    let (_, best_epoch, preds, best_model, best_adam) = best.expect("epochs > 0");
    let (p_tr, rest) = preds.split_at(n_tr);
    let (p_va, p_te) = rest.split_at(n_va);
    let category_f1 = match &prep.categories {
        Some(report) => Some(category_f1_report(p_va, &val_labels, &prep.val, report)?),
        None => None,
    };
    let majority = prep.labeling.majority_class();
    let te_buckets = te_bucket_accuracy(
        &prep.train,
        p_tr,
        &train_labels,
        &prep.profile,
        majority,
        &TeBuckets::Quantiles(config.te_buckets),
    )?;
    Ok(SeedReport {
        seed,
        best_epoch,
        history,
        train: split_metrics(p_tr, &train_labels, classes).or_else(|_| partial_metrics(p_tr, &train_labels, classes))?,
        val: split_metrics(p_va, &val_labels, classes)?,
        test: split_metrics(p_te, &test_labels, classes)?,
        category_f1,
        te_buckets,
        model: best_model,
        optimizer: best_adam,
    })
}

/// Training metrics when a class is missing from the (subsampled) training set.
fn partial_metrics(preds: &[usize], labels: &[usize], classes: usize) -> Result<SplitMetrics> {
    let acc = preds.iter().zip(labels).filter(|(p, y)| p == y).count() as f64 / labels.len().max(1) as f64;
    Ok(SplitMetrics {
        b_acc: acc,
        macro_f1: f64::NAN,
        per_class_f1: vec![f64::NAN; classes],
    })
}

/// Runs `items` on up to `jobs` scoped worker threads; results keep input order.
pub fn parallel_map<T, R, F>(items: Vec<T>, jobs: usize, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync,
{
    let jobs = jobs.max(1).min(items.len().max(1));
    if jobs == 1 {
        return items.into_iter().map(f).collect();
    }
    let n = items.len();
    let queue: Mutex<Vec<Option<T>>> = Mutex::new(items.into_iter().map(Some).collect());
    let results: Mutex<Vec<Option<R>>> = Mutex::new((0..n).map(|_| None).collect());
    let next = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= n {
                    break;
                }
                let item = queue.lock().expect("queue lock")[i].take().expect("taken once");
                let r = f(item);
                results.lock().expect("results lock")[i] = Some(r);
            });
        }
    });
    results
        .into_inner()
        .expect("results lock")
        .into_iter()
        .map(|r| r.expect("every job ran"))
        .collect()
}

/// Runs every `(method, seed)` pair of `methods` × `config.seeds`.
pub fn run_methods(prep: &Prepared, config: &RunConfig, methods: &[Method], jobs: usize) -> Result<Vec<EvalReport>> {
    let jobs_list: Vec<(Method, u64)> = methods
        .iter()
        .flat_map(|&m| config.seeds.iter().map(move |&s| (m, s)))
        .collect();
    let outcomes = parallel_map(jobs_list.clone(), jobs, |(m, s)| {
        let cfg = config.with_method(m);
        train_seed(prep, &cfg, s).map_err(|e| e.context(format!("method {m}, seed {s}")))
    });
    let mut reports: Vec<EvalReport> = methods
        .iter()
        .map(|&m| EvalReport {
            method: m,
            config_hash: config.with_method(m).hash(),
            seeds: Vec::new(),
        })
        .collect();
    for ((m, _), outcome) in jobs_list.into_iter().zip(outcomes) {
        let idx = methods.iter().position(|&x| x == m).expect("known method");
        reports[idx].seeds.push(outcome?);
    }
    Ok(reports)
}

/// All seeds of `config.method`.
pub fn run(prep: &Prepared, config: &RunConfig, jobs: usize) -> Result<EvalReport> {
    Ok(run_methods(prep, config, &[config.method], jobs)?.remove(0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub ratio: f64,
    pub reports: Vec<EvalReport>,
}

/// Repeats the method matrix with a fraction of the training labels kept.
pub fn labeled_ratio_sweep(
    dataset: &LoadedDataset,
    config: &RunConfig,
    ratios: &[f64],
    methods: &[Method],
    jobs: usize,
) -> Result<Vec<SweepPoint>> {
    let mut out = Vec::with_capacity(ratios.len());
    for &ratio in ratios {
        let cfg = RunConfig {
            label_ratio: ratio,
            ..config.clone()
        };
        let prep = prepare(dataset.graph.clone(), &dataset.labeling, &cfg)?;
        out.push(SweepPoint {
            ratio,
            reports: run_methods(&prep, &cfg, methods, jobs)?,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::PlantedImbalanceSpec;

    fn small_config() -> RunConfig {
        let mut cfg = RunConfig {
            epochs: 15,
            seeds: vec![0, 1],
            encoder_hidden: vec![16, 16],
            classifier_hidden: vec![16],
            ..RunConfig::default()
        };
        cfg.data = DataSource::Planted(PlantedImbalanceSpec {
            n_nodes: 120,
            n_communities: 4,
            p_intra: 0.25,
            p_inter: 0.01,
            mixing_profile: vec![0.9, 0.3, 0.0, 0.0],
            minority_fraction: 0.15,
            ..PlantedImbalanceSpec::default()
        });
        cfg
    }

    fn small() -> (RunConfig, Prepared) {
        let cfg = small_config();
        let data = load_dataset(&cfg).unwrap();
        let prep = prepare(data.graph, &data.labeling, &cfg).unwrap();
        (cfg, prep)
    }

    #[test]
    fn every_method_trains_and_is_deterministic() {
        let (cfg, prep) = small();
        let a = run_methods(&prep, &cfg, &Method::ALL, 1).unwrap();
        let b = run_methods(&prep, &cfg, &Method::ALL, 3).unwrap();
        assert_eq!(a, b);
        for r in &a {
            assert_eq!(r.seeds.len(), 2);
            for s in &r.seeds {
                assert_eq!(s.history.len(), 15);
                for m in [&s.val, &s.test] {
                    assert!((0.0..=1.0).contains(&m.b_acc) && (0.0..=1.0).contains(&m.macro_f1));
                }
                let mixes = r.method.mixup().is_some();
                assert_eq!(s.history.iter().any(|h| h.mixed > 0), mixes, "{}", r.method);
            }
            let sum = r.summary(Split::Test);
            assert!(sum.macro_f1.1 >= 0.0);
        }
    }

    #[test]
    fn degenerate_topoedge_matches_reweighting_only() {
        let (cfg, prep) = small();
        let losses = |c: &RunConfig| -> Vec<f64> {
            train_seed(&prep, c, 3).unwrap().history.iter().map(|h| h.loss).collect()
        };
        let k0 = |theta: f64| RunConfig {
            theta,
            mixup_k: crate::config::MixupSize::Count(0),
            ..cfg.with_method(Method::TopoEdge)
        };
        let rq = losses(&RunConfig { theta: 0.0, ..cfg.with_method(Method::Rq) });
        assert_eq!(losses(&k0(0.0)), rq);
        let rt = losses(&cfg.with_method(Method::Rt));
        assert_eq!(losses(&k0(1.0)), rt);
        let h0 = RunConfig {
            h: 0.0,
            ..cfg.with_method(Method::TopoEdge)
        };
        assert_eq!(losses(&h0), losses(&cfg.with_method(Method::Rtq)));
    }

    #[test]
    fn oversized_k_is_rejected() {
        let (cfg, prep) = small();
        let c = RunConfig {
            mixup_k: crate::config::MixupSize::Count(prep.train.len() + 1),
            ..cfg.with_method(Method::Xtw)
        };
        assert!(matches!(train_seed(&prep, &c, 0), Err(Error::Parameter(_))));
    }

    #[test]
    fn sweep_shape_and_unit_ratio() {
        let cfg = RunConfig {
            epochs: 5,
            seeds: vec![0],
            ..small_config()
        };
        let data = load_dataset(&cfg).unwrap();
        let methods = [Method::Base, Method::Rq];
        let sweep = labeled_ratio_sweep(&data, &cfg, &[0.5, 1.0], &methods, 2).unwrap();
        assert_eq!(sweep.len(), 2);
        assert!(sweep.iter().all(|p| p.reports.len() == 2));
        let prep = prepare(data.graph.clone(), &data.labeling, &cfg).unwrap();
        let direct = run_methods(&prep, &cfg, &methods, 1).unwrap();
        assert_eq!(sweep[1].reports, direct);
    }

    #[test]
    fn parallel_map_keeps_order() {
        let out = parallel_map((0..50).collect(), 4, |x: i32| x * x);
        assert_eq!(out, (0..50).map(|x| x * x).collect::<Vec<_>>());
    }
}
