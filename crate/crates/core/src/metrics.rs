//! Classification metrics and the per-category / per-entropy diagnostics.

use crate::entropy::{CategoryReport, EdgeCategory, TeProfile};
use crate::error::{Error, Result};

/// Counts per class: `(tp, fp, fn, support)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ClassCounts {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
    pub support: usize,
}

impl ClassCounts {
    /// `2tp / (2tp + fp + fn)`; `None` when all three are zero.
    pub fn f1(&self) -> Option<f64> {
        let denom = 2 * self.tp + self.fp + self.fn_;
        (denom > 0).then(|| 2.0 * self.tp as f64 / denom as f64)
    }

    pub fn recall(&self) -> Option<f64> {
        (self.support > 0).then(|| self.tp as f64 / self.support as f64)
    }

    fn add(&mut self, other: &Self) {
        self.tp += other.tp;
        self.fp += other.fp;
        self.fn_ += other.fn_;
        self.support += other.support;
    }
}

fn check(preds: &[usize], labels: &[usize], classes: usize) -> Result<()> {
    if preds.len() != labels.len() {
        return Err(Error::Dimension(format!("{} predictions for {} labels", preds.len(), labels.len())));
    }
    if labels.is_empty() {
        return Err(Error::Data("no labels to evaluate".into()));
    }
    if let Some(&bad) = preds.iter().chain(labels).find(|&&k| k >= classes) {
        return Err(Error::Dimension(format!("class {bad} out of range for {classes} classes")));
    }
    Ok(())
}

pub fn class_counts(preds: &[usize], labels: &[usize], classes: usize) -> Result<Vec<ClassCounts>> {
    check(preds, labels, classes)?;
    let mut counts = vec![ClassCounts::default(); classes];
    for (&p, &y) in preds.iter().zip(labels) {
        counts[y].support += 1;
        if p == y {
            counts[y].tp += 1;
        } else {
            counts[p].fp += 1;
            counts[y].fn_ += 1;
        }
    }
    Ok(counts)
}

fn require_all_classes(counts: &[ClassCounts]) -> Result<()> {
    if let Some(k) = counts.iter().position(|c| c.support == 0) {
        return Err(Error::Data(format!("class {k} is absent from the evaluated labels")));
    }
    Ok(())
}

/// Mean per-class recall.
pub fn balanced_accuracy(preds: &[usize], labels: &[usize], classes: usize) -> Result<f64> {
    let counts = class_counts(preds, labels, classes)?;
    require_all_classes(&counts)?;
    Ok(counts.iter().map(|c| c.recall().expect("support > 0")).sum::<f64>() / classes as f64)
}

/// Per-class F1; a class never predicted and never correct scores 0.
pub fn per_class_f1(preds: &[usize], labels: &[usize], classes: usize) -> Result<Vec<f64>> {
    let counts = class_counts(preds, labels, classes)?;
    require_all_classes(&counts)?;
    Ok(counts.iter().map(|c| c.f1().unwrap_or(0.0)).collect())
}

pub fn macro_f1(preds: &[usize], labels: &[usize], classes: usize) -> Result<f64> {
    let f1 = per_class_f1(preds, labels, classes)?;
    Ok(f1.iter().sum::<f64>() / classes as f64)
}

/// Arithmetic mean and population standard deviation (ddof = 0).
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassRole {
    Majority,
    Minority,
}

impl ClassRole {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Majority => "majority",
            Self::Minority => "minority",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CategoryF1Row {
    pub category: EdgeCategory,
    pub role: ClassRole,
    /// Evaluated edges in this category (both classes).
    pub count: usize,
    pub counts: ClassCounts,
}

impl CategoryF1Row {
    pub fn f1(&self) -> Option<f64> {
        self.counts.f1()
    }
}

/// F1 per (edge category, class role) for a binary labeling.
#[derive(Debug, Clone, PartialEq)]
pub struct CategoryF1Table {
    pub majority_class: usize,
    pub rows: Vec<CategoryF1Row>,
}

impl CategoryF1Table {
    /// Macro-F1 recombined from the per-category counts.
    pub fn recombined_macro_f1(&self) -> f64 {
        let mut maj = ClassCounts::default();
        let mut min = ClassCounts::default();
        for r in &self.rows {
            match r.role {
                ClassRole::Majority => maj.add(&r.counts),
                ClassRole::Minority => min.add(&r.counts),
            }
        }
        (maj.f1().unwrap_or(0.0) + min.f1().unwrap_or(0.0)) / 2.0
    }
}

/// Splits binary F1 by the edge categories in `report`. `edges` are the
/// evaluated edge ids aligned with `preds` and `labels`.
pub fn category_f1_report(
    preds: &[usize],
    labels: &[usize],
    edges: &[usize],
    report: &CategoryReport,
) -> Result<CategoryF1Table> {
    check(preds, labels, 2)?;
    if edges.len() != labels.len() {
        return Err(Error::Dimension("edge ids and labels are misaligned".into()));
    }
    let maj = report.majority_class;
    let mut rows = Vec::with_capacity(12);
    for cat in EdgeCategory::ALL {
        let mut per_role = [ClassCounts::default(); 2];
        let mut count = 0;
        for ((&p, &y), &e) in preds.iter().zip(labels).zip(edges) {
            if report.edge_category.get(e).copied().flatten() != Some(cat) {
                continue;
            }
            count += 1;
            for (slot, class) in [(0, maj), (1, 1 - maj)] {
                let c = &mut per_role[slot];
                if y == class {
                    c.support += 1;
                }
                match (p == class, y == class) {
                    (true, true) => c.tp += 1,
                    (true, false) => c.fp += 1,
                    (false, true) => c.fn_ += 1,
                    (false, false) => {}
                }
            }
        }
        for (slot, role) in [(0, ClassRole::Majority), (1, ClassRole::Minority)] {
            rows.push(CategoryF1Row {
                category: cat,
                role,
                count,
                counts: per_role[slot],
            });
        }
    }
    Ok(CategoryF1Table {
        majority_class: maj,
        rows,
    })
}

/// How training edges are grouped by entropy.
#[derive(Debug, Clone, PartialEq)]
pub enum TeBuckets {
    /// Equal-count groups over the entropy-sorted edges.
    Quantiles(usize),
    /// Ascending cut points; bucket `b` holds `boundaries[b-1] <= TE < boundaries[b]`.
    Boundaries(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TeBucketRow {
    pub te_lo: f64,
    pub te_hi: f64,
    pub majority_count: usize,
    pub majority_correct: usize,
    pub minority_count: usize,
    pub minority_correct: usize,
}

impl TeBucketRow {
    pub fn majority_accuracy(&self) -> Option<f64> {
        (self.majority_count > 0).then(|| self.majority_correct as f64 / self.majority_count as f64)
    }

    pub fn minority_accuracy(&self) -> Option<f64> {
        (self.minority_count > 0).then(|| self.minority_correct as f64 / self.minority_count as f64)
    }

    pub fn count(&self) -> usize {
        self.majority_count + self.minority_count
    }
}

/// Training accuracy of majority-class and other edges per entropy bucket.
/// `edges`, `preds` and `labels` are aligned over the training edges.
pub fn te_bucket_accuracy(
    edges: &[usize],
    preds: &[usize],
    labels: &[usize],
    profile: &TeProfile,
    majority_class: usize,
    buckets: &TeBuckets,
) -> Result<Vec<TeBucketRow>> {
    if edges.len() != preds.len() || edges.len() != labels.len() {
        return Err(Error::Dimension("edges, predictions and labels are misaligned".into()));
    }
    let mut order: Vec<usize> = (0..edges.len()).collect();
    order.sort_by(|&a, &b| profile.te[edges[a]].total_cmp(&profile.te[edges[b]]).then(edges[a].cmp(&edges[b])));
    let groups: Vec<Vec<usize>> = match buckets {
        TeBuckets::Quantiles(k) => {
            if *k == 0 {
                return Err(Error::Parameter("need at least one bucket".into()));
            }
            let n = order.len();
            (0..*k).map(|b| order[b * n / k..(b + 1) * n / k].to_vec()).collect()
        }
        TeBuckets::Boundaries(cuts) => {
            if cuts.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Parameter("bucket boundaries must be strictly ascending".into()));
            }
            let mut groups = vec![Vec::new(); cuts.len() + 1];
            for &i in &order {
                let te = profile.te[edges[i]];
                groups[cuts.iter().filter(|&&c| te >= c).count()].push(i);
            }
            groups
        }
    };
    let mut rows = Vec::with_capacity(groups.len());
    for (b, g) in groups.iter().enumerate() {
        let (lo, hi) = match buckets {
            TeBuckets::Boundaries(cuts) => (
                if b == 0 { f64::NEG_INFINITY } else { cuts[b - 1] },
                cuts.get(b).copied().unwrap_or(f64::INFINITY),
            ),
            TeBuckets::Quantiles(_) => match (g.first(), g.last()) {
                (Some(&f), Some(&l)) => (profile.te[edges[f]], profile.te[edges[l]]),
                _ => (f64::NAN, f64::NAN),
            },
        };
        let mut row = TeBucketRow {
            te_lo: lo,
            te_hi: hi,
            majority_count: 0,
            majority_correct: 0,
            minority_count: 0,
            minority_correct: 0,
        };
        for &i in g {
            let correct = usize::from(preds[i] == labels[i]);
            if labels[i] == majority_class {
                row.majority_count += 1;
                row.majority_correct += correct;
            } else {
                row.minority_count += 1;
                row.minority_correct += correct;
            }
        }
        rows.push(row);
    }
    Ok(rows)
}
