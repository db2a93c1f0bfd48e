use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{EdgeLabeling, Split};
use crate::error::{Error, Result};

/// Train/validation/test proportions, normalized on construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitRatios {
    pub train: f64,
    pub val: f64,
    pub test: f64,
}

impl Default for SplitRatios {
    /// 1:2:2.
    fn default() -> Self {
        Self {
            train: 0.2,
            val: 0.4,
            test: 0.4,
        }
    }
}

impl SplitRatios {
    pub fn new(train: f64, val: f64, test: f64) -> Result<Self> {
        let all = [train, val, test];
        if all.iter().any(|r| !r.is_finite() || *r < 0.0) {
            return Err(Error::Parameter(format!("split ratios must be non-negative, got {all:?}")));
        }
        let sum: f64 = all.iter().sum();
        if sum <= 0.0 {
            return Err(Error::Parameter("split ratios sum to zero".into()));
        }
        Ok(Self {
            train: train / sum,
            val: val / sum,
            test: test / sum,
        })
    }
}

/// Stratified random partition of the labeled edges. Classes with fewer than
/// three labeled edges cannot be stratified and go entirely to Train.
pub fn split_edges(labeling: &EdgeLabeling, ratios: SplitRatios, seed: u64) -> Result<EdgeLabeling> {
    let ratios = SplitRatios::new(ratios.train, ratios.val, ratios.test)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (labels, _) = labeling.parts();
    let mut splits = vec![None; labels.len()];
    for class in 0..labeling.class_count() {
        let mut members: Vec<usize> = (0..labels.len()).filter(|&e| labels[e] == Some(class)).collect();
        if members.is_empty() {
            continue;
        }
        if members.len() < 3 {
            log::warn!(
                "class {class} has only {} labeled edges; assigning all to train",
                members.len()
            );
            for e in members {
                splits[e] = Some(Split::Train);
            }
            continue;
        }
        members.shuffle(&mut rng);
        let n = members.len();
        let n_train = ((ratios.train * n as f64).round() as usize).min(n);
        let n_val = ((ratios.val * n as f64).round() as usize).min(n - n_train);
        for (i, e) in members.into_iter().enumerate() {
            splits[e] = Some(if i < n_train {
                Split::Train
            } else if i < n_train + n_val {
                Split::Val
            } else {
                Split::Test
            });
        }
    }
    labeling.replace_splits(splits)
}

/// Keeps `⌈keep_ratio · |train|⌉` training edges, stratified per class by
/// largest remainder. Dropped training edges become unlabeled; validation and
/// test assignments are untouched.
pub fn subsample_train_labels(labeling: &EdgeLabeling, keep_ratio: f64, seed: u64) -> Result<EdgeLabeling> {
    if !(keep_ratio > 0.0 && keep_ratio <= 1.0) {
        return Err(Error::Parameter(format!("keep ratio must lie in (0, 1], got {keep_ratio}")));
    }
    if keep_ratio == 1.0 {
        return Ok(labeling.clone());
    }
    let (labels, splits) = labeling.parts();
    let train: Vec<usize> = labeling.edges_in(Split::Train);
    let target = (keep_ratio * train.len() as f64).ceil() as usize;

    let per_class: Vec<Vec<usize>> = (0..labeling.class_count())
        .map(|k| train.iter().copied().filter(|&e| labels[e] == Some(k)).collect())
        .collect();
    let mut quota: Vec<usize> = per_class
        .iter()
        .map(|m| (keep_ratio * m.len() as f64).floor() as usize)
        .collect();
    let mut remainders: Vec<(f64, usize)> = per_class
        .iter()
        .enumerate()
        .map(|(k, m)| (keep_ratio * m.len() as f64 - quota[k] as f64, k))
        .collect();
    remainders.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut missing = target.saturating_sub(quota.iter().sum());
    for &(_, k) in remainders.iter().cycle().take(remainders.len() * 2) {
        if missing == 0 {
            break;
        }
        if quota[k] < per_class[k].len() {
            quota[k] += 1;
            missing -= 1;
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut new_labels = labels.to_vec();
    let mut new_splits = splits.to_vec();
    for (k, members) in per_class.iter().enumerate() {
        let mut shuffled = members.clone();
        shuffled.shuffle(&mut rng);
        for &e in &shuffled[quota[k]..] {
            new_labels[e] = None;
            new_splits[e] = None;
        }
    }
    EdgeLabeling::with_splits(labeling.class_count(), new_labels, new_splits)
}
