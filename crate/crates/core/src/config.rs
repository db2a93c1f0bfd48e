//! Run configuration and its flat `key = value` text format.
//!
//! One assignment per line, `#` starts a comment, unknown keys are rejected.
//! Lists are comma separated. The config hash is the SHA-256 of the canonical
//! `key=value` lines (every key, sorted), so two configs that differ only in
//! formatting or in keys left at their defaults hash identically.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use sha2::{Digest, Sha256};

use crate::entropy::LabelSource;
use crate::error::{Error, Result};
use crate::graph::{PlantedImbalanceSpec, SplitRatios};
use crate::mixup::SelectionMode;
use crate::nn::Activation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Base,
    Rq,
    Rt,
    Rtq,
    Xe,
    Xte,
    Xw,
    Xtw,
    TopoEdge,
}

/// Loss weighting applied to the real training edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reweighting {
    Uniform,
    Quantity,
    Topological,
    Combined,
}

/// How the first mixup edge set is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FirstSet {
    Random,
    HighEntropy,
}

/// How each first edge finds its partner, and what is interpolated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Partner {
    /// Any other training edge; full edge embeddings are mixed.
    RandomEdge,
    /// A uniformly random incident training edge; end nodes are mixed.
    RandomWedge,
    /// The highest-entropy incident training edge; end nodes are mixed.
    EntropyWedge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MixupScheme {
    pub first: FirstSet,
    pub partner: Partner,
    /// Scale each synthetic row by the interpolated edge weights.
    pub weighted: bool,
}

impl Method {
    pub const ALL: [Method; 9] = [
        Self::Base,
        Self::Rq,
        Self::Rt,
        Self::Rtq,
        Self::Xe,
        Self::Xte,
        Self::Xw,
        Self::Xtw,
        Self::TopoEdge,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Base => "base",
            Self::Rq => "rq",
            Self::Rt => "rt",
            Self::Rtq => "rtq",
            Self::Xe => "xe",
            Self::Xte => "xte",
            Self::Xw => "xw",
            Self::Xtw => "xtw",
            Self::TopoEdge => "topoedge",
        }
    }

    pub fn reweighting(self) -> Reweighting {
        match self {
            Self::Rq => Reweighting::Quantity,
            Self::Rt => Reweighting::Topological,
            Self::Rtq | Self::TopoEdge => Reweighting::Combined,
            _ => Reweighting::Uniform,
        }
    }

    pub fn mixup(self) -> Option<MixupScheme> {
        let scheme = |first, partner, weighted| Some(MixupScheme { first, partner, weighted });
        match self {
            Self::Xe => scheme(FirstSet::Random, Partner::RandomEdge, false),
            Self::Xte => scheme(FirstSet::HighEntropy, Partner::RandomEdge, false),
            Self::Xw => scheme(FirstSet::Random, Partner::RandomWedge, false),
            Self::Xtw => scheme(FirstSet::HighEntropy, Partner::EntropyWedge, false),
            Self::TopoEdge => scheme(FirstSet::HighEntropy, Partner::EntropyWedge, true),
            _ => None,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        Self::ALL
            .into_iter()
            .find(|m| m.as_str() == lower)
            .ok_or_else(|| Error::Config(format!("unknown method {s:?}")))
    }
}

/// Number of edges drawn for mixup each epoch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MixupSize {
    Count(usize),
    /// Fraction of the training set, rounded up.
    Fraction(f64),
}

impl MixupSize {
    pub fn resolve(self, train: usize) -> usize {
        match self {
            Self::Count(k) => k,
            Self::Fraction(f) => ((f * train as f64).ceil() as usize).min(train),
        }
    }
}

impl fmt::Display for MixupSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Count(k) => write!(f, "{k}"),
            Self::Fraction(x) => write!(f, "{}", FloatFmt(*x)),
        }
    }
}

impl FromStr for MixupSize {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s.contains('.') {
            let f: f64 = parse_num(s)?;
            if !(0.0..=1.0).contains(&f) {
                return Err(Error::Config(format!("mixup fraction must lie in [0, 1], got {s}")));
            }
            Ok(Self::Fraction(f))
        } else {
            Ok(Self::Count(parse_num(s)?))
        }
    }
}

/// Where the graph comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum DataSource {
    Planted(PlantedImbalanceSpec),
    Files {
        edges: PathBuf,
        node_features: Option<PathBuf>,
        edge_features: Option<PathBuf>,
        class_count: Option<usize>,
    },
    Cache(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub method: Method,
    pub seeds: Vec<u64>,
    pub epochs: usize,
    pub lr: f64,
    pub weight_decay: f64,
    pub encoder_hidden: Vec<usize>,
    pub classifier_hidden: Vec<usize>,
    pub dropout: f64,
    pub activation: Activation,
    pub te_depth: usize,
    pub te_label_source: LabelSource,
    pub temperature: f64,
    pub theta: f64,
    /// Mean-one normalize each weight family before combining.
    pub normalize_weights: bool,
    pub mixup_k: MixupSize,
    pub alpha: f64,
    pub h: f64,
    pub selection: SelectionMode,
    pub split_ratios: SplitRatios,
    pub split_seed: u64,
    /// Fraction of training labels kept (labeled-ratio experiments).
    pub label_ratio: f64,
    pub category_thresholds: (f64, f64),
    pub te_buckets: usize,
    pub data: DataSource,
    pub methods: Vec<Method>,
    pub sweep_ratios: Vec<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            method: Method::TopoEdge,
            seeds: (0..5).collect(),
            epochs: 200,
            lr: 1e-2,
            weight_decay: 0.0,
            encoder_hidden: vec![64, 64],
            classifier_hidden: vec![64],
            dropout: 0.5,
            activation: Activation::Relu,
            te_depth: 2,
            te_label_source: LabelSource::TrainOnly,
            temperature: 1.0,
            theta: 0.5,
            normalize_weights: true,
            mixup_k: MixupSize::Fraction(0.5),
            alpha: 4.0,
            h: 0.5,
            selection: SelectionMode::WeightedSample,
            split_ratios: SplitRatios::default(),
            split_seed: 0,
            label_ratio: 1.0,
            category_thresholds: (0.3, 0.7),
            te_buckets: 4,
            data: DataSource::Planted(PlantedImbalanceSpec::default()),
            methods: Method::ALL.to_vec(),
            sweep_ratios: vec![0.1, 0.25, 0.5, 0.75, 1.0],
        }
    }
}

/// Shortest round-trip decimal form.
struct FloatFmt(f64);

impl fmt::Display for FloatFmt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

fn parse_num<T: FromStr>(s: &str) -> Result<T> {
    s.trim().parse().map_err(|_| Error::Config(format!("cannot parse {s:?} as a number")))
}

fn parse_bool(s: &str) -> Result<bool> {
    match s.trim() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(Error::Config(format!("expected true or false, got {s:?}"))),
    }
}

fn parse_list<T: FromStr>(s: &str) -> Result<Vec<T>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_num).collect()
}

fn join<T: fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn join_f64(xs: &[f64]) -> String {
    xs.iter().map(|x| FloatFmt(*x).to_string()).collect::<Vec<_>>().join(",")
}

fn parse_seeds(s: &str) -> Result<Vec<u64>> {
    // "0..5" is shorthand for 0,1,2,3,4
    if let Some((a, b)) = s.split_once("..") {
        let (a, b): (u64, u64) = (parse_num(a)?, parse_num(b)?);
        return Ok((a..b).collect());
    }
    parse_list(s)
}

const PLANTED_KEYS: [&str; 9] = [
    "planted.n_nodes",
    "planted.n_communities",
    "planted.p_intra",
    "planted.p_inter",
    "planted.minority_fraction",
    "planted.mixing_profile",
    "planted.feature_noise",
    "planted.affinity_signal",
    "planted.seed",
];

const FILE_KEYS: [&str; 4] = ["data.edges", "data.node_features", "data.edge_features", "data.class_count"];

impl RunConfig {
    /// Every key this format accepts.
    pub fn known_keys() -> Vec<&'static str> {
        let mut keys = vec![
            "method",
            "seeds",
            "epochs",
            "lr",
            "weight_decay",
            "encoder.hidden",
            "classifier.hidden",
            "dropout",
            "activation",
            "te.depth",
            "te.label_source",
            "te.temperature",
            "reweight.theta",
            "reweight.normalize",
            "mixup.k",
            "mixup.alpha",
            "mixup.h",
            "mixup.selection",
            "split.ratios",
            "split.seed",
            "label.ratio",
            "category.p_lo",
            "category.p_hi",
            "eval.te_buckets",
            "data.source",
            "data.cache",
            "benchmark.methods",
            "sweep.ratios",
        ];
        keys.extend(FILE_KEYS);
        keys.extend(PLANTED_KEYS);
        keys
    }

    /// Applies one assignment.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        let ctx = |e: Error| Error::Config(format!("{key}: {e}"));
        self.set_inner(key.trim(), v).map_err(ctx)
    }

    fn planted_mut(&mut self) -> &mut PlantedImbalanceSpec {
        if !matches!(self.data, DataSource::Planted(_)) {
            self.data = DataSource::Planted(PlantedImbalanceSpec::default());
        }
        match &mut self.data {
            DataSource::Planted(spec) => spec,
            _ => unreachable!(),
        }
    }

    fn files_mut(&mut self) -> (&mut PathBuf, &mut Option<PathBuf>, &mut Option<PathBuf>, &mut Option<usize>) {
        if !matches!(self.data, DataSource::Files { .. }) {
            self.data = DataSource::Files {
                edges: PathBuf::new(),
                node_features: None,
                edge_features: None,
                class_count: None,
            };
        }
        match &mut self.data {
            DataSource::Files {
                edges,
                node_features,
                edge_features,
                class_count,
            } => (edges, node_features, edge_features, class_count),
            _ => unreachable!(),
        }
    }

    fn set_inner(&mut self, key: &str, v: &str) -> Result<()> {
        let opt_path = |v: &str| (!v.is_empty()).then(|| PathBuf::from(v));
        match key {
            "method" => self.method = v.parse()?,
            "seeds" => self.seeds = parse_seeds(v)?,
            "epochs" => self.epochs = parse_num(v)?,
            "lr" => self.lr = parse_num(v)?,
            "weight_decay" => self.weight_decay = parse_num(v)?,
            "encoder.hidden" => self.encoder_hidden = parse_list(v)?,
            "classifier.hidden" => self.classifier_hidden = parse_list(v)?,
            "dropout" => self.dropout = parse_num(v)?,
            "activation" => self.activation = v.parse()?,
            "te.depth" => self.te_depth = parse_num(v)?,
            "te.label_source" => self.te_label_source = v.parse()?,
            "te.temperature" => self.temperature = parse_num(v)?,
            "reweight.theta" => self.theta = parse_num(v)?,
            "reweight.normalize" => self.normalize_weights = parse_bool(v)?,
            "mixup.k" => self.mixup_k = v.parse()?,
            "mixup.alpha" => self.alpha = parse_num(v)?,
            "mixup.h" => self.h = parse_num(v)?,
            "mixup.selection" => self.selection = v.parse()?,
            "split.ratios" => {
                let r: Vec<f64> = parse_list(v)?;
                if r.len() != 3 {
                    return Err(Error::Config("expected train,val,test".into()));
                }
                self.split_ratios = SplitRatios::new(r[0], r[1], r[2])?;
            }
            "split.seed" => self.split_seed = parse_num(v)?,
            "label.ratio" => self.label_ratio = parse_num(v)?,
            "category.p_lo" => self.category_thresholds.0 = parse_num(v)?,
            "category.p_hi" => self.category_thresholds.1 = parse_num(v)?,
            "eval.te_buckets" => self.te_buckets = parse_num(v)?,
            "benchmark.methods" => {
                self.methods = v.split(',').map(str::parse).collect::<Result<_>>()?;
            }
            "sweep.ratios" => self.sweep_ratios = parse_list(v)?,
            "data.source" => match v {
                "planted" => {
                    self.planted_mut();
                }
                "files" => {
                    self.files_mut();
                }
                "cache" => {
                    if !matches!(self.data, DataSource::Cache(_)) {
                        self.data = DataSource::Cache(PathBuf::new());
                    }
                }
                _ => return Err(Error::Config(format!("unknown data source {v:?}"))),
            },
            "data.cache" => self.data = DataSource::Cache(PathBuf::from(v)),
            "data.edges" => *self.files_mut().0 = PathBuf::from(v),
            "data.node_features" => *self.files_mut().1 = opt_path(v),
            "data.edge_features" => *self.files_mut().2 = opt_path(v),
            "data.class_count" => *self.files_mut().3 = if v.is_empty() { None } else { Some(parse_num(v)?) },
            "planted.n_nodes" => self.planted_mut().n_nodes = parse_num(v)?,
            "planted.n_communities" => self.planted_mut().n_communities = parse_num(v)?,
            "planted.p_intra" => self.planted_mut().p_intra = parse_num(v)?,
            "planted.p_inter" => self.planted_mut().p_inter = parse_num(v)?,
            "planted.minority_fraction" => self.planted_mut().minority_fraction = parse_num(v)?,
            "planted.mixing_profile" => self.planted_mut().mixing_profile = parse_list(v)?,
            "planted.feature_noise" => self.planted_mut().feature_noise = parse_num(v)?,
            "planted.affinity_signal" => self.planted_mut().affinity_signal = parse_num(v)?,
            "planted.seed" => self.planted_mut().seed = parse_num(v)?,
            _ => return Err(Error::Config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    /// Parses config text on top of the defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        cfg.apply_text(text, Path::new("<config>"))?;
        Ok(cfg)
    }

    pub fn apply_text(&mut self, text: &str, origin: &Path) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(origin, i + 1, "expected key = value"))?;
            self.set(k, v).map_err(|e| Error::parse(origin, i + 1, e.to_string()))?;
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = Self::default();
        cfg.apply_text(&text, path)?;
        Ok(cfg)
    }

    /// `key=value` override, as given on the command line.
    pub fn apply_override(&mut self, assignment: &str) -> Result<()> {
        let (k, v) = assignment
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("override {assignment:?} is not key=value")))?;
        self.set(k, v)
    }

    /// Every key with its canonical value, sorted by key.
    pub fn canonical_pairs(&self) -> BTreeMap<&'static str, String> {
        let mut m = BTreeMap::new();
        m.insert("method", self.method.to_string());
        m.insert("seeds", join(&self.seeds));
        m.insert("epochs", self.epochs.to_string());
        m.insert("lr", FloatFmt(self.lr).to_string());
        m.insert("weight_decay", FloatFmt(self.weight_decay).to_string());
        m.insert("encoder.hidden", join(&self.encoder_hidden));
        m.insert("classifier.hidden", join(&self.classifier_hidden));
        m.insert("dropout", FloatFmt(self.dropout).to_string());
        m.insert("activation", self.activation.to_string());
        m.insert("te.depth", self.te_depth.to_string());
        m.insert("te.label_source", self.te_label_source.to_string());
        m.insert("te.temperature", FloatFmt(self.temperature).to_string());
        m.insert("reweight.theta", FloatFmt(self.theta).to_string());
        m.insert("reweight.normalize", self.normalize_weights.to_string());
        m.insert("mixup.k", self.mixup_k.to_string());
        m.insert("mixup.alpha", FloatFmt(self.alpha).to_string());
        m.insert("mixup.h", FloatFmt(self.h).to_string());
        m.insert("mixup.selection", self.selection.to_string());
        let r = self.split_ratios;
        m.insert("split.ratios", join_f64(&[r.train, r.val, r.test]));
        m.insert("split.seed", self.split_seed.to_string());
        m.insert("label.ratio", FloatFmt(self.label_ratio).to_string());
        m.insert("category.p_lo", FloatFmt(self.category_thresholds.0).to_string());
        m.insert("category.p_hi", FloatFmt(self.category_thresholds.1).to_string());
        m.insert("eval.te_buckets", self.te_buckets.to_string());
        m.insert("benchmark.methods", join(&self.methods));
        m.insert("sweep.ratios", join_f64(&self.sweep_ratios));
        match &self.data {
            DataSource::Planted(p) => {
                m.insert("data.source", "planted".into());
                m.insert("planted.n_nodes", p.n_nodes.to_string());
                m.insert("planted.n_communities", p.n_communities.to_string());
                m.insert("planted.p_intra", FloatFmt(p.p_intra).to_string());
                m.insert("planted.p_inter", FloatFmt(p.p_inter).to_string());
                m.insert("planted.minority_fraction", FloatFmt(p.minority_fraction).to_string());
                m.insert("planted.mixing_profile", join_f64(&p.mixing_profile));
                m.insert("planted.feature_noise", FloatFmt(p.feature_noise).to_string());
                m.insert("planted.affinity_signal", FloatFmt(p.affinity_signal).to_string());
                m.insert("planted.seed", p.seed.to_string());
            }
            DataSource::Files {
                edges,
                node_features,
                edge_features,
                class_count,
            } => {
                let p = |x: &Option<PathBuf>| x.as_ref().map(|p| p.display().to_string()).unwrap_or_default();
                m.insert("data.source", "files".into());
                m.insert("data.edges", edges.display().to_string());
                m.insert("data.node_features", p(node_features));
                m.insert("data.edge_features", p(edge_features));
                m.insert("data.class_count", class_count.map(|c| c.to_string()).unwrap_or_default());
            }
            DataSource::Cache(path) => {
                m.insert("data.source", "cache".into());
                m.insert("data.cache", path.display().to_string());
            }
        }
        m
    }

    /// Canonical config text; parses back to an equal config.
    pub fn to_text(&self) -> String {
        let pairs = self.canonical_pairs();
        // data.source must precede the data keys it selects
        let mut out = format!("data.source = {}\n", pairs["data.source"]);
        for (k, v) in &pairs {
            if *k != "data.source" {
                out.push_str(&format!("{k} = {v}\n"));
            }
        }
        out
    }

    /// Hex SHA-256 of the canonical pairs.
    pub fn hash(&self) -> String {
        let mut hasher = Sha256::new();
        for (k, v) in self.canonical_pairs() {
            hasher.update(k.as_bytes());
            hasher.update(b"=");
            hasher.update(v.as_bytes());
            hasher.update(b"\n");
        }
        hex::encode(hasher.finalize())
    }

    pub fn with_method(&self, method: Method) -> Self {
        Self {
            method,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.seeds.is_empty() {
            return bad("at least one seed is required".into());
        }
        if self.epochs == 0 {
            return bad("epochs must be positive".into());
        }
        if self.encoder_hidden.is_empty() || self.encoder_hidden.contains(&0) {
            return bad("encoder.hidden needs one or more positive widths".into());
        }
        if self.classifier_hidden.contains(&0) {
            return bad("classifier.hidden widths must be positive".into());
        }
        if !(0.0..1.0).contains(&self.dropout) {
            return bad(format!("dropout must lie in [0, 1), got {}", self.dropout));
        }
        if !(self.temperature > 0.0) {
            return bad(format!("te.temperature must be > 0, got {}", self.temperature));
        }
        if !(0.0..=1.0).contains(&self.theta) {
            return bad(format!("reweight.theta must lie in [0, 1], got {}", self.theta));
        }
        if !(self.alpha > 0.0) {
            return bad(format!("mixup.alpha must be > 0, got {}", self.alpha));
        }
        if !(self.h >= 0.0 && self.h.is_finite()) {
            return bad(format!("mixup.h must be >= 0, got {}", self.h));
        }
        if !(self.lr > 0.0) {
            return bad(format!("lr must be > 0, got {}", self.lr));
        }
        if !(self.weight_decay >= 0.0) {
            return bad("weight_decay must be >= 0".into());
        }
        if !(self.label_ratio > 0.0 && self.label_ratio <= 1.0) {
            return bad(format!("label.ratio must lie in (0, 1], got {}", self.label_ratio));
        }
        let (lo, hi) = self.category_thresholds;
        if !(0.0 <= lo && lo < hi && hi <= 1.0) {
            return bad(format!("category thresholds must satisfy 0 <= p_lo < p_hi <= 1, got ({lo}, {hi})"));
        }
        if self.te_buckets == 0 {
            return bad("eval.te_buckets must be positive".into());
        }
        if self.sweep_ratios.iter().any(|r| !(*r > 0.0 && *r <= 1.0)) {
            return bad("sweep.ratios must lie in (0, 1]".into());
        }
        if self.methods.is_empty() {
            return bad("benchmark.methods is empty".into());
        }
        match &self.data {
            DataSource::Planted(p) => p.validate()?,
            DataSource::Files { edges, .. } if edges.as_os_str().is_empty() => return bad("data.edges is not set".into()),
            DataSource::Cache(p) if p.as_os_str().is_empty() => return bad("data.cache is not set".into()),
            _ => {}
        }
        Ok(())
    }

    /// Resolves relative data paths against `base`.
    pub fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() && !p.as_os_str().is_empty() {
                *p = base.join(&*p);
            }
        };
        match &mut self.data {
            DataSource::Files {
                edges,
                node_features,
                edge_features,
                ..
            } => {
                fix(edges);
                node_features.iter_mut().for_each(fix);
                edge_features.iter_mut().for_each(fix);
            }
            DataSource::Cache(p) => fix(p),
            DataSource::Planted(_) => {}
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_with_comments_and_overrides() {
        let cfg = RunConfig::parse("# header\nmethod = rq  # inline\nseeds = 0..3\nmixup.k = 0.25\nencoder.hidden = 32,16\n").unwrap();
        assert_eq!(cfg.method, Method::Rq);
        assert_eq!(cfg.seeds, vec![0, 1, 2]);
        assert_eq!(cfg.mixup_k, MixupSize::Fraction(0.25));
        assert_eq!(cfg.encoder_hidden, vec![32, 16]);
        let mut cfg = cfg;
        cfg.apply_override("mixup.k=12").unwrap();
        assert_eq!(cfg.mixup_k, MixupSize::Count(12));
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        let err = RunConfig::parse("lr = 0.1\nbogus = 3\n").unwrap_err();
        assert!(err.to_string().contains(":2:"), "{err}");
        assert!(RunConfig::parse("lr = fast\n").is_err());
        assert!(RunConfig::parse("just words\n").is_err());
        assert!(RunConfig::parse("method = gat\n").is_err());
    }

    #[test]
    fn text_round_trip_and_hash_stability() {
        let mut cfg = RunConfig::default();
        cfg.apply_override("planted.mixing_profile=0.5,0.25,0.125,0,0,0,0,0,0,1").unwrap();
        cfg.apply_override("te.temperature=0.3").unwrap();
        let back = RunConfig::parse(&cfg.to_text()).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(back.hash(), cfg.hash());
        assert_eq!(cfg.hash().len(), 64);
        assert_ne!(cfg.with_method(Method::Base).hash(), cfg.hash());

        let files = RunConfig::parse("data.edges = e.tsv\ndata.class_count = 3\n").unwrap();
        assert_eq!(RunConfig::parse(&files.to_text()).unwrap(), files);
        let cache = RunConfig::parse("data.cache = d.bin\n").unwrap();
        assert_eq!(RunConfig::parse(&cache.to_text()).unwrap(), cache);
    }

    #[test]
    fn formatting_does_not_change_hash() {
        let a = RunConfig::parse("lr=0.01\n").unwrap();
        let b = RunConfig::parse("  lr =   1e-2   # same\n").unwrap();
        assert_eq!(a.hash(), b.hash());
        assert_eq!(a.hash(), RunConfig::default().hash());
    }

    #[test]
    fn method_schemes() {
        assert_eq!(Method::Base.reweighting(), Reweighting::Uniform);
        assert!(Method::Rtq.mixup().is_none());
        assert!(Method::TopoEdge.mixup().unwrap().weighted);
        assert_eq!(Method::Xw.mixup().unwrap().partner, Partner::RandomWedge);
        for m in Method::ALL {
            assert_eq!(m.as_str().parse::<Method>().unwrap(), m);
        }
        assert_eq!("TopoEdge".parse::<Method>().unwrap(), Method::TopoEdge);
    }

    #[test]
    fn validation() {
        assert!(RunConfig::default().validate().is_ok());
        for bad in ["reweight.theta=1.5", "te.temperature=0", "dropout=1", "seeds=", "label.ratio=0", "mixup.h=-1"] {
            let mut c = RunConfig::default();
            c.apply_override(bad).unwrap();
            assert!(c.validate().is_err(), "{bad}");
        }
    }

    #[test]
    fn mixup_size_resolution() {
        assert_eq!(MixupSize::Fraction(0.5).resolve(7), 4);
        assert_eq!(MixupSize::Count(3).resolve(7), 3);
        assert!("1.5".parse::<MixupSize>().is_err());
    }
}
