//! CSV artifacts: run results, diagnostics and dataset analyses.
//!
//! Floats use the shortest decimal form that parses back to the same value;
//! undefined cells are written as `NA`.

use std::path::Path;

use crate::entropy::{CategoryReport, EdgeCategory, TeProfile};
use crate::error::{Error, Result};
use crate::graph::{AttributedGraph, EdgeLabeling, NodeMap, Split};
use crate::metrics::ClassRole;
use crate::mixup::Wedge;
use crate::train::{EvalReport, SweepPoint, WeightSet};

pub const NA: &str = "NA";

pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        NA.to_string()
    } else {
        format!("{x}")
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| NA.to_string(), fmt_f64)
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    Error::Format(format!("{}: {e}", path.display()))
}

/// A CSV file held as strings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
        w.write_record(&self.header).map_err(|e| csv_error(path, e))?;
        for r in &self.rows {
            w.write_record(r).map_err(|e| csv_error(path, e))?;
        }
        w.flush().map_err(|e| Error::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let mut r = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
        let header = r.headers().map_err(|e| csv_error(path, e))?.iter().map(String::from).collect();
        let mut rows = Vec::new();
        for rec in r.records() {
            rows.push(rec.map_err(|e| csv_error(path, e))?.iter().map(String::from).collect());
        }
        Ok(Self { header, rows })
    }
}

fn split_metrics(s: &crate::train::SeedReport, split: Split) -> &crate::train::SplitMetrics {
    match split {
        Split::Train => &s.train,
        Split::Val => &s.val,
        Split::Test => &s.test,
    }
}

/// One row per (method, seed, split).
pub fn results_table(reports: &[EvalReport]) -> Table {
    let classes = reports
        .iter()
        .flat_map(|r| &r.seeds)
        .map(|s| s.test.per_class_f1.len())
        .max()
        .unwrap_or(0);
    let mut header = vec!["method", "seed", "split", "b_acc", "macro_f1", "best_epoch"];
    let class_cols: Vec<String> = (0..classes).map(|k| format!("f1_class_{k}")).collect();
    header.extend(class_cols.iter().map(String::as_str));
    let mut t = Table::new(&header);
    for r in reports {
        for s in &r.seeds {
            for split in Split::ALL {
                let m = split_metrics(s, split);
                let mut row = vec![
                    r.method.to_string(),
                    s.seed.to_string(),
                    split.to_string(),
                    fmt_f64(m.b_acc),
                    fmt_f64(m.macro_f1),
                    s.best_epoch.to_string(),
                ];
                row.extend((0..classes).map(|k| fmt_opt(m.per_class_f1.get(k).copied())));
                t.push(row);
            }
        }
    }
    t
}

/// Mean and population std (ddof = 0) over seeds, per (method, split).
pub fn aggregate_table(reports: &[EvalReport]) -> Table {
    let mut t = Table::new(&[
        "method",
        "split",
        "n_seeds",
        "b_acc_mean",
        "b_acc_std_pop",
        "macro_f1_mean",
        "macro_f1_std_pop",
        "config_hash",
    ]);
    for r in reports {
        for split in Split::ALL {
            let s = r.summary(split);
            t.push(vec![
                r.method.to_string(),
                split.to_string(),
                r.seeds.len().to_string(),
                fmt_f64(s.b_acc.0),
                fmt_f64(s.b_acc.1),
                fmt_f64(s.macro_f1.0),
                fmt_f64(s.macro_f1.1),
                r.config_hash.clone(),
            ]);
        }
    }
    t
}

/// Per-epoch losses and validation Macro-F1.
pub fn history_table(reports: &[EvalReport]) -> Table {
    let mut t = Table::new(&[
        "method",
        "seed",
        "epoch",
        "loss",
        "base_loss",
        "mixup_loss",
        "mixed_rows",
        "lambda",
        "val_macro_f1",
    ]);
    for r in reports {
        for s in &r.seeds {
            for h in &s.history {
                t.push(vec![
                    r.method.to_string(),
                    s.seed.to_string(),
                    h.epoch.to_string(),
                    fmt_f64(h.loss),
                    fmt_f64(h.base_loss),
                    fmt_f64(h.mixup_loss),
                    h.mixed.to_string(),
                    fmt_opt(h.lambda),
                    fmt_f64(h.val_macro_f1),
                ]);
            }
        }
    }
    t
}

/// Validation F1 per edge category and class role.
pub fn category_f1_table(reports: &[EvalReport]) -> Table {
    let mut t = Table::new(&[
        "method", "seed", "category", "class", "edges", "support", "tp", "fp", "fn", "f1",
    ]);
    for r in reports {
        for s in &r.seeds {
            let Some(table) = &s.category_f1 else { continue };
            for row in &table.rows {
                t.push(vec![
                    r.method.to_string(),
                    s.seed.to_string(),
                    row.category.symbol().to_string(),
                    row.role.as_str().to_string(),
                    row.count.to_string(),
                    row.counts.support.to_string(),
                    row.counts.tp.to_string(),
                    row.counts.fp.to_string(),
                    row.counts.fn_.to_string(),
                    fmt_opt(row.f1()),
                ]);
            }
        }
    }
    t
}

/// Training accuracy per entropy bucket.
pub fn te_bucket_table(reports: &[EvalReport]) -> Table {
    let mut t = Table::new(&[
        "method",
        "seed",
        "bucket",
        "te_lo",
        "te_hi",
        "majority_count",
        "majority_acc",
        "minority_count",
        "minority_acc",
    ]);
    for r in reports {
        for s in &r.seeds {
            for (b, row) in s.te_buckets.iter().enumerate() {
                t.push(vec![
                    r.method.to_string(),
                    s.seed.to_string(),
                    b.to_string(),
                    fmt_f64(row.te_lo),
                    fmt_f64(row.te_hi),
                    row.majority_count.to_string(),
                    fmt_opt(row.majority_accuracy()),
                    row.minority_count.to_string(),
                    fmt_opt(row.minority_accuracy()),
                ]);
            }
        }
    }
    t
}

/// Test-split summary per (label ratio, method).
pub fn sweep_table(points: &[SweepPoint]) -> Table {
    let mut t = Table::new(&[
        "label_ratio",
        "method",
        "n_seeds",
        "b_acc_mean",
        "b_acc_std_pop",
        "macro_f1_mean",
        "macro_f1_std_pop",
    ]);
    for p in points {
        for r in &p.reports {
            let s = r.summary(Split::Test);
            t.push(vec![
                fmt_f64(p.ratio),
                r.method.to_string(),
                r.seeds.len().to_string(),
                fmt_f64(s.b_acc.0),
                fmt_f64(s.b_acc.1),
                fmt_f64(s.macro_f1.0),
                fmt_f64(s.macro_f1.1),
            ]);
        }
    }
    t
}

/// Per-edge entropy: `edge_id,src,dst,label,split,te,coverage`.
pub fn te_table(graph: &AttributedGraph, labeling: &EdgeLabeling, names: &NodeMap, profile: &TeProfile) -> Table {
    let mut t = Table::new(&["edge_id", "src", "dst", "label", "split", "te", "coverage"]);
    for (e, &(u, v)) in graph.edges().iter().enumerate() {
        t.push(vec![
            e.to_string(),
            names.name(u).to_string(),
            names.name(v).to_string(),
            labeling.label(e).map_or_else(|| "-".to_string(), |k| k.to_string()),
            labeling.split(e).map_or_else(|| "-".to_string(), |s| s.to_string()),
            fmt_f64(profile.te[e]),
            profile.covered[e].to_string(),
        ]);
    }
    t
}

/// Equal-width histogram of entropy over `[0, ln C]`, split by class.
pub fn te_histogram_table(profile: &TeProfile, labeling: &EdgeLabeling, bins: usize) -> Table {
    let c = labeling.class_count();
    let mut header = vec!["bin".to_string(), "te_lo".into(), "te_hi".into(), "edges".into()];
    header.extend((0..c).map(|k| format!("class_{k}")));
    header.push("unlabeled".into());
    let mut t = Table {
        header,
        rows: Vec::new(),
    };
    let bins = bins.max(1);
    let max = (c as f64).ln();
    let mut counts = vec![vec![0usize; c + 2]; bins];
    for (e, &te) in profile.te.iter().enumerate() {
        let b = ((te / max * bins as f64) as usize).min(bins - 1);
        counts[b][0] += 1;
        match labeling.label(e) {
            Some(k) => counts[b][1 + k] += 1,
            None => counts[b][c + 1] += 1,
        }
    }
    for (b, row) in counts.iter().enumerate() {
        let mut r = vec![
            b.to_string(),
            fmt_f64(max * b as f64 / bins as f64),
            fmt_f64(max * (b + 1) as f64 / bins as f64),
        ];
        r.extend(row.iter().map(ToString::to_string));
        t.rows.push(r);
    }
    t
}

/// Edge counts per category, with the labeled majority/minority composition.
pub fn category_count_table(report: &CategoryReport, labeling: &EdgeLabeling) -> Table {
    let mut t = Table::new(&["category", "edges", "majority_edges", "minority_edges", "minority_fraction"]);
    for (cat, n) in report.histogram() {
        let (mut maj, mut min) = (0usize, 0usize);
        for (e, c) in report.edge_category.iter().enumerate() {
            if *c != Some(cat) {
                continue;
            }
            match labeling.label(e) {
                Some(k) if k == report.majority_class => maj += 1,
                Some(_) => min += 1,
                None => {}
            }
        }
        let frac = (maj + min > 0).then(|| min as f64 / (maj + min) as f64);
        t.push(vec![cat.symbol().to_string(), n.to_string(), maj.to_string(), min.to_string(), fmt_opt(frac)]);
    }
    t
}

/// `edge_id,wq,wt,w_combined` over the training edges.
pub fn weights_table(weights: &WeightSet) -> Table {
    let mut t = Table::new(&["edge_id", "wq", "wt", "w_combined"]);
    for (i, &e) in weights.quantity.edges.iter().enumerate() {
        t.push(vec![
            e.to_string(),
            fmt_f64(weights.quantity.weights[i]),
            fmt_f64(weights.te.weights[i]),
            fmt_f64(weights.combined.weights[i]),
        ]);
    }
    t
}

/// `edge1_id,edge2_id,centric,end_i,end_j,te1,te2`.
pub fn wedges_table(wedges: &[Wedge], names: &NodeMap, profile: &TeProfile) -> Table {
    let mut t = Table::new(&["edge1_id", "edge2_id", "centric", "end_i", "end_j", "te1", "te2"]);
    for w in wedges {
        t.push(vec![
            w.edge_1.to_string(),
            w.edge_2.to_string(),
            names.name(w.centric).to_string(),
            names.name(w.end_i).to_string(),
            names.name(w.end_j).to_string(),
            fmt_f64(profile.te[w.edge_1]),
            fmt_f64(profile.te[w.edge_2]),
        ]);
    }
    t
}

/// Parses a float cell written by this module (`NA` reads as NaN).
pub fn parse_f64(cell: &str) -> Result<f64> {
    if cell == NA {
        return Ok(f64::NAN);
    }
    cell.parse().map_err(|_| Error::Format(format!("not a number: {cell:?}")))
}

/// A parsed row of [`results_table`].
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub method: crate::config::Method,
    pub seed: u64,
    pub split: Split,
    pub b_acc: f64,
    pub macro_f1: f64,
    pub best_epoch: usize,
    pub per_class_f1: Vec<f64>,
}

pub fn read_results(path: &Path) -> Result<Vec<ResultRow>> {
    let t = Table::read(path)?;
    let col = |name: &str| t.column(name).ok_or_else(|| Error::Format(format!("missing column {name}")));
    let (m, s, sp, ba, mf, be) = (
        col("method")?,
        col("seed")?,
        col("split")?,
        col("b_acc")?,
        col("macro_f1")?,
        col("best_epoch")?,
    );
    let class_cols: Vec<usize> = (0..)
        .map_while(|k| t.column(&format!("f1_class_{k}")))
        .collect();
    t.rows
        .iter()
        .map(|r| {
            Ok(ResultRow {
                method: r[m].parse()?,
                seed: r[s].parse().map_err(|_| Error::Format(format!("bad seed {:?}", r[s])))?,
                split: r[sp].parse()?,
                b_acc: parse_f64(&r[ba])?,
                macro_f1: parse_f64(&r[mf])?,
                best_epoch: r[be].parse().map_err(|_| Error::Format(format!("bad epoch {:?}", r[be])))?,
                per_class_f1: class_cols.iter().map(|&c| parse_f64(&r[c])).collect::<Result<_>>()?,
            })
        })
        .collect()
}

impl ClassRole {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "majority" => Some(Self::Majority),
            "minority" => Some(Self::Minority),
            _ => None,
        }
    }
}

impl EdgeCategory {
    pub fn from_symbol(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.symbol() == s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, 1e-300, 12345.678, 0.0, -2.5e-7] {
            assert_eq!(parse_f64(&fmt_f64(x)).unwrap(), x);
        }
        assert!(parse_f64(&fmt_f64(f64::NAN)).unwrap().is_nan());
    }

    #[test]
    fn table_round_trip_with_awkward_cells() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("t.csv");
        let mut t = Table::new(&["a", "b"]);
        t.push(vec!["x,y".into(), "quote\"d".into()]);
        t.push(vec!["".into(), "NA".into()]);
        t.write(&p).unwrap();
        assert_eq!(Table::read(&p).unwrap(), t);
    }

    #[test]
    fn category_symbols_parse_back() {
        for c in EdgeCategory::ALL {
            assert_eq!(EdgeCategory::from_symbol(c.symbol()), Some(c));
        }
        assert_eq!(ClassRole::parse(ClassRole::Minority.as_str()), Some(ClassRole::Minority));
    }
}
