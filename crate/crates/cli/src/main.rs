//! `topoedge` command-line driver.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use log::info;
use topoedge::config::{DataSource, RunConfig};
use topoedge::graph::{load_graph_with, write_cache, save_graph, LoadOptions, LoadedDataset};
use topoedge::mixup::MixSample;
use topoedge::nn::{save_checkpoint, Checkpoint};
use topoedge::report::{self, Table};
use topoedge::train::{self, EvalReport, Prepared};

const DATA_DIR_ENV: &str = "TOPOEDGE_DATA_DIR";

#[derive(Debug, Parser)]
#[command(name = "topoedge", version, about = "Topology-aware reweighting and wedge mixup for imbalanced edge classification")]
#[command(arg_required_else_help = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate a dataset (data.edges, data.node_features, ...) and write a binary cache.
    Ingest(Common),
    /// Generate a planted-imbalance graph from the planted.* keys.
    Generate(Common),
    /// Write entropy, category, weight and (optionally) wedge CSVs.
    Analyze {
        #[command(flatten)]
        common: Common,
        /// Also write the first-epoch mixup batch of the configured method.
        #[arg(long)]
        wedges: bool,
    },
    /// Train the configured method on every seed.
    Train(Common),
    /// Train every method listed in benchmark.methods.
    Benchmark(Common),
    /// Repeat the benchmark for each ratio in sweep.ratios.
    Sweep(Common),
}

#[derive(Debug, Args)]
struct Common {
    /// Config file of `key = value` lines.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Run a single seed (for generate: the planted graph seed).
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
    /// Output directory; must not exist unless --force is given.
    #[arg(long, value_name = "DIR", default_value = "topoedge-out")]
    out: PathBuf,
    /// Replace an existing output directory.
    #[arg(long)]
    force: bool,
    /// Worker threads for independent (method, seed) runs.
    #[arg(long, value_name = "N", default_value_t = 1)]
    jobs: usize,
    /// Override one config key; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Base directory for relative data paths.
    #[arg(long, value_name = "DIR", env = DATA_DIR_ENV)]
    data_dir: Option<PathBuf>,
}

/// Failure classes mapped to the process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Failure {
    Usage = 1,
    Data = 2,
    Numeric = 3,
}

#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn classify(err: &anyhow::Error) -> Failure {
    if err.downcast_ref::<UsageError>().is_some() {
        return Failure::Usage;
    }
    match err.downcast_ref::<topoedge::Error>() {
        Some(topoedge::Error::Numeric(_)) => Failure::Numeric,
        Some(topoedge::Error::Config(_) | topoedge::Error::Parameter(_) | topoedge::Error::Unsupported(_)) => {
            Failure::Usage
        }
        _ => Failure::Data,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { Failure::Usage as u8 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(classify(&e) as u8)
        }
    }
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Ingest(c) => with_output(&c, "ingest", ingest),
        Command::Generate(c) => with_output(&c, "generate", generate),
        Command::Analyze { common, wedges } => with_output(&common, "analyze", |cfg, c, dir| analyze(cfg, c, dir, wedges)),
        Command::Train(c) => with_output(&c, "train", train_cmd),
        Command::Benchmark(c) => with_output(&c, "benchmark", benchmark),
        Command::Sweep(c) => with_output(&c, "sweep", sweep),
    }
}

fn build_config(c: &Common, subcommand: &str) -> Result<RunConfig> {
    let usage = |e: topoedge::Error| anyhow::Error::new(UsageError(e.to_string()));
    let mut cfg = match &c.config {
        Some(p) => RunConfig::load(p).map_err(usage)?,
        None => RunConfig::default(),
    };
    for s in &c.set {
        cfg.apply_override(s).map_err(usage)?;
    }
    if let Some(seed) = c.seed {
        match (subcommand, &mut cfg.data) {
            ("generate", DataSource::Planted(spec)) => spec.seed = seed,
            _ => cfg.seeds = vec![seed],
        }
    }
    if c.jobs == 0 {
        return Err(UsageError("--jobs must be at least 1".into()).into());
    }
    let base = match (&c.data_dir, &c.config) {
        (Some(d), _) => d.clone(),
        (None, Some(p)) => p.parent().map(Path::to_path_buf).unwrap_or_default(),
        (None, None) => PathBuf::new(),
    };
    cfg.resolve_paths(&base);
    cfg.validate().map_err(usage)?;
    Ok(cfg)
}

/// Runs `body` against a fresh staging directory, then moves it to `--out`.
fn with_output<F>(c: &Common, subcommand: &str, body: F) -> Result<()>
where
    F: FnOnce(&RunConfig, &Common, &Path) -> Result<()>,
{
    let cfg = build_config(c, subcommand)?;
    if c.out.exists() && !c.force {
        return Err(UsageError(format!("{} exists; pass --force to replace it", c.out.display())).into());
    }
    let parent = c.out.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
    let name = c.out.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_else(|| "out".into());
    let staging = parent.join(format!(".{name}.partial-{}", std::process::id()));
    if staging.exists() {
        fs::remove_dir_all(&staging)?;
    }
    fs::create_dir(&staging).with_context(|| format!("creating {}", staging.display()))?;

    let result = (|| {
        fs::write(staging.join("config.txt"), cfg.to_text())?;
        fs::write(
            staging.join("meta.txt"),
            format!(
                "tool = topoedge\nversion = {}\ncommand = {subcommand}\nconfig_hash = {}\n",
                env!("CARGO_PKG_VERSION"),
                cfg.hash()
            ),
        )?;
        body(&cfg, c, &staging)
    })();
    if let Err(e) = result {
        let _ = fs::remove_dir_all(&staging);
        return Err(e);
    }
    if c.out.exists() {
        fs::remove_dir_all(&c.out).with_context(|| format!("removing {}", c.out.display()))?;
    }
    fs::rename(&staging, &c.out).with_context(|| format!("moving output to {}", c.out.display()))?;
    info!("wrote {}", c.out.display());
    Ok(())
}

fn load(cfg: &RunConfig) -> Result<LoadedDataset> {
    Ok(train::load_dataset(cfg)?)
}

fn prepare(cfg: &RunConfig) -> Result<(LoadedDataset, Prepared)> {
    let data = load(cfg)?;
    let prep = train::prepare(data.graph.clone(), &data.labeling, cfg)?;
    info!(
        "{} nodes, {} edges, {} classes; train/val/test = {}/{}/{}",
        prep.graph.node_count(),
        prep.graph.edge_count(),
        prep.labeling.class_count(),
        prep.train.len(),
        prep.val.len(),
        prep.test.len()
    );
    Ok((data, prep))
}

fn save_dataset(data: &LoadedDataset, dir: &Path) -> Result<()> {
    let node_features = data.graph.node_features().map(|_| dir.join("node_features.tsv"));
    let edge_features = data.graph.edge_features().map(|_| dir.join("edge_features.tsv"));
    save_graph(data, &dir.join("edges.tsv"), node_features.as_deref(), edge_features.as_deref())?;
    write_cache(data, &dir.join("dataset.bin"))?;
    data.node_map.write(&dir.join("node_map.tsv"))?;
    Ok(())
}

fn ingest(cfg: &RunConfig, _: &Common, dir: &Path) -> Result<()> {
    let data = match &cfg.data {
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
        )?,
        _ => load(cfg)?,
    };
    data.graph.validate()?;
    data.labeling.validate_for(&data.graph)?;
    info!("{} nodes, {} edges", data.graph.node_count(), data.graph.edge_count());
    save_dataset(&data, dir)
}

fn generate(cfg: &RunConfig, _: &Common, dir: &Path) -> Result<()> {
    if !matches!(cfg.data, DataSource::Planted(_)) {
        return Err(UsageError("generate needs data.source = planted".into()).into());
    }
    save_dataset(&load(cfg)?, dir)
}

fn analyze(cfg: &RunConfig, _: &Common, dir: &Path, wedges: bool) -> Result<()> {
    let (data, prep) = prepare(cfg)?;
    report::te_table(&prep.graph, &prep.labeling, &data.node_map, &prep.profile).write(&dir.join("te.csv"))?;
    report::te_histogram_table(&prep.profile, &prep.labeling, 20).write(&dir.join("te_histogram.csv"))?;
    if let Some(categories) = &prep.categories {
        report::category_count_table(categories, &prep.labeling).write(&dir.join("categories.csv"))?;
    }
    report::weights_table(&train::weight_set(&prep, cfg)?).write(&dir.join("weights.csv"))?;
    if wedges {
        let seed = cfg.seeds.first().copied().unwrap_or(0);
        let wedge_list: Vec<_> = train::first_mix_batch(&prep, cfg, seed)?
            .map(|b| {
                b.samples
                    .into_iter()
                    .filter_map(|s| match s {
                        MixSample::Wedge(w) => Some(w),
                        MixSample::Pair { .. } => None,
                    })
                    .collect()
            })
            .unwrap_or_default();
        report::wedges_table(&wedge_list, &data.node_map, &prep.profile).write(&dir.join("wedges.csv"))?;
    }
    Ok(())
}

fn write_reports(reports: &[EvalReport], dir: &Path) -> Result<()> {
    report::results_table(reports).write(&dir.join("results.csv"))?;
    report::aggregate_table(reports).write(&dir.join("aggregate.csv"))?;
    report::history_table(reports).write(&dir.join("history.csv"))?;
    report::category_f1_table(reports).write(&dir.join("category_f1.csv"))?;
    report::te_bucket_table(reports).write(&dir.join("te_buckets.csv"))?;
    for r in reports {
        info!(
            "{:>9}: test b_acc {:.4}, macro-F1 {:.4} over {} seeds",
            r.method.to_string(),
            r.summary(topoedge::graph::Split::Test).b_acc.0,
            r.summary(topoedge::graph::Split::Test).macro_f1.0,
            r.seeds.len()
        );
    }
    Ok(())
}

fn write_checkpoints(reports: &[EvalReport], dir: &Path) -> Result<()> {
    let ckpt = dir.join("checkpoints");
    fs::create_dir(&ckpt)?;
    for r in reports {
        for s in &r.seeds {
            let c = Checkpoint {
                config_hash: r.config_hash.clone(),
                model: s.model.clone(),
                optimizer: s.optimizer.clone(),
            };
            save_checkpoint(&c, &ckpt.join(format!("{}_seed{}.ckpt", r.method, s.seed)))?;
        }
    }
    Ok(())
}

fn train_cmd(cfg: &RunConfig, c: &Common, dir: &Path) -> Result<()> {
    let (_, prep) = prepare(cfg)?;
    let reports = vec![train::run(&prep, cfg, c.jobs)?];
    write_reports(&reports, dir)?;
    write_checkpoints(&reports, dir)
}

fn benchmark(cfg: &RunConfig, c: &Common, dir: &Path) -> Result<()> {
    let (_, prep) = prepare(cfg)?;
    let reports = train::run_methods(&prep, cfg, &cfg.methods, c.jobs)?;
    write_reports(&reports, dir)
}

fn sweep(cfg: &RunConfig, c: &Common, dir: &Path) -> Result<()> {
    let data = load(cfg)?;
    let points = train::labeled_ratio_sweep(&data, cfg, &cfg.sweep_ratios, &cfg.methods, c.jobs)?;
    report::sweep_table(&points).write(&dir.join("sweep.csv"))?;
    let mut all = Table::new(&[]);
    for p in &points {
        let mut t = report::results_table(&p.reports);
        if all.header.is_empty() {
            all.header = std::iter::once("label_ratio".to_string()).chain(t.header.clone()).collect();
        }
        for row in t.rows.drain(..) {
            all.rows.push(std::iter::once(report::fmt_f64(p.ratio)).chain(row).collect());
        }
    }
    all.write(&dir.join("sweep_results.csv"))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn help_documents_every_flag() {
        let mut root = Cli::command();
        root.build();
        for sub in root.get_subcommands() {
            let help = sub.clone().render_long_help().to_string();
            for arg in sub.get_arguments() {
                if let Some(long) = arg.get_long() {
                    assert!(help.contains(&format!("--{long}")), "{}: --{long} missing from help", sub.get_name());
                }
                assert!(arg.get_help().is_some() || arg.get_long_help().is_some(), "{}: {} has no help", sub.get_name(), arg.get_id());
            }
        }
    }

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn exit_classes() {
        assert_eq!(classify(&topoedge::Error::Numeric("x".into()).into()), Failure::Numeric);
        assert_eq!(classify(&topoedge::Error::Data("x".into()).into()), Failure::Data);
        assert_eq!(classify(&topoedge::Error::Config("x".into()).into()), Failure::Usage);
        assert_eq!(classify(&UsageError("x".into()).into()), Failure::Usage);
    }
}
