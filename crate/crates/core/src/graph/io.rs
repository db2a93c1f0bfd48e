//! Text and binary formats for graphs and labelings.
//!
//! Edge TSV: `src dst label [split]`, whitespace separated, `label` an
//! integer or `-`, `split` one of `train|val|test`, `#` starts a comment line.
//! Feature TSV: `id v1 ... vk` with a fixed `k`. Node feature ids use the same
//! names as the edge file; edge feature ids are edge ids (0-based order of
//! first appearance in the edge file, after duplicate collapse).

use std::collections::HashMap;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::{AttributedGraph, EdgeLabeling, Split};
use crate::error::{Error, Result};
use crate::tensor::Matrix;

const CACHE_MAGIC: &[u8; 8] = b"TOPOEDGE";
const CACHE_VERSION: u32 = 1;

#[derive(Debug, Clone, Default)]
pub struct LoadOptions {
    /// Number of classes. Inferred as `max label + 1` (at least 2) when absent.
    pub class_count: Option<usize>,
}

/// Dense node index → original node name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeMap {
    names: Vec<String>,
}

impl NodeMap {
    pub fn new(names: Vec<String>) -> Self {
        Self { names }
    }

    /// `0..n` named by their decimal index.
    pub fn identity(n: usize) -> Self {
        Self::new((0..n).map(|i| i.to_string()).collect())
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut out = String::from("# index\tname\n");
        for (i, name) in self.names.iter().enumerate() {
            out.push_str(&format!("{i}\t{name}\n"));
        }
        fs::write(path, out).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut names = Vec::new();
        for (lineno, line) in data_lines(&text) {
            let mut parts = line.split_whitespace();
            let (Some(idx), Some(name), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(Error::parse(path, lineno, "expected `index name`"));
            };
            let idx: usize = idx
                .parse()
                .map_err(|_| Error::parse(path, lineno, "index is not an integer"))?;
            if idx != names.len() {
                return Err(Error::parse(path, lineno, "indices must be dense and ascending"));
            }
            names.push(name.to_string());
        }
        Ok(Self { names })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoadedDataset {
    pub graph: AttributedGraph,
    pub labeling: EdgeLabeling,
    pub node_map: NodeMap,
}

struct EdgeRecord {
    line: usize,
    src: String,
    dst: String,
    label: Option<usize>,
    split: Option<Split>,
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn parse_edge_file(path: &Path) -> Result<Vec<EdgeRecord>> {
    let text = read_text(path)?;
    let mut records = Vec::new();
    for (line, content) in data_lines(&text) {
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.len() < 3 || tokens.len() > 4 {
            return Err(Error::parse(
                path,
                line,
                format!("expected `src dst label [split]`, found {} fields", tokens.len()),
            ));
        }
        let label = match tokens[2] {
            "-" => None,
            t => Some(
                t.parse::<usize>()
                    .map_err(|_| Error::parse(path, line, format!("label `{t}` is not `-` or a class index")))?,
            ),
        };
        let split = match tokens.get(3) {
            None => None,
            Some(s) => Some(
                s.parse::<Split>()
                    .map_err(|_| Error::parse(path, line, format!("unknown split `{s}`")))?,
            ),
        };
        if label.is_none() && split.is_some() {
            return Err(Error::parse(path, line, "unlabeled edge cannot carry a split"));
        }
        records.push(EdgeRecord {
            line,
            src: tokens[0].to_string(),
            dst: tokens[1].to_string(),
            label,
            split,
        });
    }
    Ok(records)
}

fn parse_feature_file(path: &Path) -> Result<Vec<(usize, String, Vec<f64>)>> {
    let text = read_text(path)?;
    let mut rows = Vec::new();
    let mut width = None;
    for (line, content) in data_lines(&text) {
        let mut tokens = content.split_whitespace();
        let id = tokens.next().unwrap_or_default().to_string();
        let values = tokens
            .map(|t| t.parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::parse(path, line, "feature value is not a number"))?;
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::parse(path, line, "feature value is not finite"));
        }
        match width {
            None => width = Some(values.len()),
            Some(k) if k != values.len() => {
                return Err(Error::parse(
                    path,
                    line,
                    format!("expected {k} feature values, found {}", values.len()),
                ))
            }
            _ => {}
        }
        rows.push((line, id, values));
    }
    Ok(rows)
}

/// Dense ordering of node names: numeric order when every name is an
/// integer, first-appearance order otherwise.
fn order_names(names: Vec<String>) -> Vec<String> {
    let numeric: Option<Vec<i64>> = names.iter().map(|s| s.parse::<i64>().ok()).collect();
    match numeric {
        Some(values) => {
            let mut pairs: Vec<(i64, String)> = values.into_iter().zip(names).collect();
            pairs.sort_by_key(|(v, _)| *v);
            pairs.into_iter().map(|(_, s)| s).collect()
        }
        None => names,
    }
}

/// Loads a dataset with class count inferred from the labels.
pub fn load_graph(
    edge_file: &Path,
    node_feature_file: Option<&Path>,
    edge_feature_file: Option<&Path>,
) -> Result<LoadedDataset> {
    load_graph_with(edge_file, node_feature_file, edge_feature_file, &LoadOptions::default())
}

pub fn load_graph_with(
    edge_file: &Path,
    node_feature_file: Option<&Path>,
    edge_feature_file: Option<&Path>,
    options: &LoadOptions,
) -> Result<LoadedDataset> {
    let records = parse_edge_file(edge_file)?;
    if records.is_empty() {
        return Err(Error::Data(format!("{}: no edges", edge_file.display())));
    }

    let node_rows = node_feature_file.map(parse_feature_file).transpose()?;

    // Node universe: the feature file when given, otherwise the edge endpoints.
    let mut first_seen: Vec<String> = Vec::new();
    let mut known: HashMap<String, ()> = HashMap::new();
    match (&node_rows, node_feature_file) {
        (Some(rows), Some(path)) => {
            for (line, id, _) in rows {
                if known.insert(id.clone(), ()).is_some() {
                    return Err(Error::parse(path, *line, format!("duplicate node id `{id}`")));
                }
                first_seen.push(id.clone());
            }
        }
        _ => {
            for r in &records {
                for name in [&r.src, &r.dst] {
                    if known.insert(name.clone(), ()).is_none() {
                        first_seen.push(name.clone());
                    }
                }
            }
        }
    }
    let names = order_names(first_seen);
    let index: HashMap<&str, usize> = names.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();

    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut labels: Vec<Option<usize>> = Vec::new();
    let mut splits: Vec<Option<Split>> = Vec::new();
    let mut edge_ids: HashMap<(usize, usize), usize> = HashMap::new();
    for r in &records {
        let lookup = |name: &str| {
            index.get(name).copied().ok_or_else(|| {
                Error::parse(edge_file, r.line, format!("dangling node id `{name}` has no feature row"))
            })
        };
        let (a, b) = (lookup(&r.src)?, lookup(&r.dst)?);
        if a == b {
            return Err(Error::parse(edge_file, r.line, "self-loop"));
        }
        let key = (a.min(b), a.max(b));
        match edge_ids.get(&key) {
            Some(&id) => {
                if labels[id] != r.label || splits[id] != r.split {
                    return Err(Error::parse(
                        edge_file,
                        r.line,
                        format!("conflicting labels for duplicate edge ({},{})", r.src, r.dst),
                    ));
                }
            }
            None => {
                edge_ids.insert(key, edges.len());
                edges.push(key);
                labels.push(r.label);
                splits.push(r.split);
            }
        }
    }

    let max_label = labels.iter().flatten().copied().max();
    let class_count = match options.class_count {
        Some(c) => {
            if let Some(r) = records.iter().find(|r| r.label.is_some_and(|l| l >= c)) {
                return Err(Error::parse(
                    edge_file,
                    r.line,
                    format!("label {} >= class count {c}", r.label.unwrap_or_default()),
                ));
            }
            c
        }
        None => max_label.map_or(2, |m| (m + 1).max(2)),
    };

    let labeled = labels.iter().filter(|l| l.is_some()).count();
    let with_split = splits.iter().filter(|s| s.is_some()).count();
    if with_split != 0 && with_split != labeled {
        return Err(Error::Data(format!(
            "{}: split column given for {with_split} of {labeled} labeled edges; give it for all or none",
            edge_file.display()
        )));
    }

    let node_features = node_rows.map(|rows| {
        let cols = rows.first().map_or(0, |r| r.2.len());
        let mut x = Matrix::zeros(names.len(), cols);
        for (_, id, values) in rows {
            x.row_mut(index[id.as_str()]).copy_from_slice(&values);
        }
        x
    });

    let edge_features = match edge_feature_file {
        None => None,
        Some(path) => {
            let rows = parse_feature_file(path)?;
            let cols = rows.first().map_or(0, |r| r.2.len());
            let mut s = Matrix::zeros(edges.len(), cols);
            let mut filled = vec![false; edges.len()];
            for (line, id, values) in rows {
                let e: usize = id
                    .parse()
                    .map_err(|_| Error::parse(path, line, format!("edge id `{id}` is not an integer")))?;
                if e >= edges.len() {
                    return Err(Error::parse(path, line, format!("dangling edge id {e}")));
                }
                if std::mem::replace(&mut filled[e], true) {
                    return Err(Error::parse(path, line, format!("duplicate edge id {e}")));
                }
                s.row_mut(e).copy_from_slice(&values);
            }
            if let Some(e) = filled.iter().position(|f| !f) {
                return Err(Error::Data(format!("{}: no feature row for edge {e}", path.display())));
            }
            Some(s)
        }
    };

    let graph = AttributedGraph::from_edges(names.len(), &edges, node_features, edge_features)?;
    let labeling = EdgeLabeling::with_splits(class_count, labels, splits)?;
    Ok(LoadedDataset {
        graph,
        labeling,
        node_map: NodeMap::new(names),
    })
}

fn format_row(out: &mut String, id: &str, values: &[f64]) {
    out.push_str(id);
    for v in values {
        out.push('\t');
        out.push_str(&v.to_string());
    }
    out.push('\n');
}

/// Writes the dataset in the TSV formats read by [`load_graph`]. Feature files
/// are written only when the graph carries the corresponding matrix and a
/// path is supplied.
pub fn save_graph(
    dataset: &LoadedDataset,
    edge_file: &Path,
    node_feature_file: Option<&Path>,
    edge_feature_file: Option<&Path>,
) -> Result<()> {
    let LoadedDataset {
        graph,
        labeling,
        node_map,
    } = dataset;
    let mut out = String::from("# src\tdst\tlabel\tsplit\n");
    for (e, &(u, v)) in graph.edges().iter().enumerate() {
        out.push_str(node_map.name(u));
        out.push('\t');
        out.push_str(node_map.name(v));
        out.push('\t');
        match labeling.label(e) {
            Some(k) => out.push_str(&k.to_string()),
            None => out.push('-'),
        }
        if let Some(s) = labeling.split(e) {
            out.push('\t');
            out.push_str(s.as_str());
        }
        out.push('\n');
    }
    fs::write(edge_file, out).map_err(|e| Error::io(edge_file, e))?;

    if let (Some(path), Some(x)) = (node_feature_file, graph.node_features()) {
        let mut out = String::new();
        for i in 0..graph.node_count() {
            format_row(&mut out, node_map.name(i), x.row(i));
        }
        fs::write(path, out).map_err(|e| Error::io(path, e))?;
    }
    if let (Some(path), Some(s)) = (edge_feature_file, graph.edge_features()) {
        let mut out = String::new();
        for e in 0..graph.edge_count() {
            format_row(&mut out, &e.to_string(), s.row(e));
        }
        fs::write(path, out).map_err(|e| Error::io(path, e))?;
    }
    Ok(())
}

struct Writer<W: Write> {
    inner: W,
}

impl<W: Write> Writer<W> {
    fn u64(&mut self, v: u64) -> std::io::Result<()> {
        self.inner.write_all(&v.to_le_bytes())
    }
    fn f64s(&mut self, vs: &[f64]) -> std::io::Result<()> {
        for v in vs {
            self.inner.write_all(&v.to_bits().to_le_bytes())?;
        }
        Ok(())
    }
    fn matrix(&mut self, m: Option<&Matrix>) -> std::io::Result<()> {
        match m {
            None => self.u64(0),
            Some(m) => {
                self.u64(1)?;
                self.u64(m.rows() as u64)?;
                self.u64(m.cols() as u64)?;
                self.f64s(m.as_slice())
            }
        }
    }
}

pub(crate) struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    pub(crate) fn new(bytes: &'a [u8]) -> Self {
        Self { bytes, pos: 0 }
    }
    pub(crate) fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.pos + n > self.bytes.len() {
            return Err(Error::Format("unexpected end of file".into()));
        }
        let s = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }
    pub(crate) fn u64(&mut self) -> Result<u64> {
        let b = self.take(8)?;
        Ok(u64::from_le_bytes(b.try_into().expect("8 bytes")))
    }
    pub(crate) fn usize(&mut self) -> Result<usize> {
        usize::try_from(self.u64()?).map_err(|_| Error::Format("length overflow".into()))
    }
    pub(crate) fn f64s(&mut self, n: usize) -> Result<Vec<f64>> {
        let b = self.take(n.checked_mul(8).ok_or_else(|| Error::Format("length overflow".into()))?)?;
        Ok(b.chunks_exact(8)
            .map(|c| f64::from_bits(u64::from_le_bytes(c.try_into().expect("8 bytes"))))
            .collect())
    }
    fn matrix(&mut self) -> Result<Option<Matrix>> {
        match self.u64()? {
            0 => Ok(None),
            1 => {
                let rows = self.usize()?;
                let cols = self.usize()?;
                let data = self.f64s(rows * cols)?;
                Ok(Some(Matrix::from_vec(rows, cols, data)))
            }
            t => Err(Error::Format(format!("bad matrix tag {t}"))),
        }
    }
    pub(crate) fn finish(&self) -> Result<()> {
        if self.pos != self.bytes.len() {
            return Err(Error::Format("trailing bytes".into()));
        }
        Ok(())
    }
}

/// Writes the binary dataset cache (`TOPOEDGE` magic, version, little-endian payload).
pub fn write_cache(dataset: &LoadedDataset, path: &Path) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = Writer {
        inner: BufWriter::new(file),
    };
    let io = |e| Error::io(path, e);
    let LoadedDataset {
        graph,
        labeling,
        node_map,
    } = dataset;
    w.inner.write_all(CACHE_MAGIC).map_err(io)?;
    w.inner.write_all(&CACHE_VERSION.to_le_bytes()).map_err(io)?;
    w.u64(graph.node_count() as u64).map_err(io)?;
    w.u64(graph.edge_count() as u64).map_err(io)?;
    w.u64(labeling.class_count() as u64).map_err(io)?;
    for (e, &(u, v)) in graph.edges().iter().enumerate() {
        w.u64(u as u64).map_err(io)?;
        w.u64(v as u64).map_err(io)?;
        let label = labeling.label(e).map_or(u64::MAX, |k| k as u64);
        w.u64(label).map_err(io)?;
        let split = match labeling.split(e) {
            None => 0u8,
            Some(Split::Train) => 1,
            Some(Split::Val) => 2,
            Some(Split::Test) => 3,
        };
        w.inner.write_all(&[split]).map_err(io)?;
    }
    w.matrix(graph.node_features()).map_err(io)?;
    w.matrix(graph.edge_features()).map_err(io)?;
    for i in 0..node_map.len() {
        let name = node_map.name(i).as_bytes();
        w.u64(name.len() as u64).map_err(io)?;
        w.inner.write_all(name).map_err(io)?;
    }
    w.inner.flush().map_err(io)
}

pub fn read_cache(path: &Path) -> Result<LoadedDataset> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let mut r = Reader::new(&bytes);
    if r.take(8)? != CACHE_MAGIC {
        return Err(Error::Format(format!("{}: not a dataset cache", path.display())));
    }
    let version = u32::from_le_bytes(r.take(4)?.try_into().expect("4 bytes"));
    if version != CACHE_VERSION {
        return Err(Error::Format(format!("unsupported cache version {version}")));
    }
    let n = r.usize()?;
    let m = r.usize()?;
    let class_count = r.usize()?;
    let mut edges = Vec::with_capacity(m.min(1 << 24));
    let mut labels = Vec::with_capacity(m.min(1 << 24));
    let mut splits = Vec::with_capacity(m.min(1 << 24));
    for _ in 0..m {
        edges.push((r.usize()?, r.usize()?));
        let l = r.u64()?;
        labels.push(if l == u64::MAX { None } else { Some(l as usize) });
        splits.push(match r.take(1)?[0] {
            0 => None,
            1 => Some(Split::Train),
            2 => Some(Split::Val),
            3 => Some(Split::Test),
            t => return Err(Error::Format(format!("bad split tag {t}"))),
        });
    }
    let node_features = r.matrix()?;
    let edge_features = r.matrix()?;
    let mut names = Vec::with_capacity(n.min(1 << 24));
    for _ in 0..n {
        let len = r.usize()?;
        let s = std::str::from_utf8(r.take(len)?).map_err(|_| Error::Format("node name is not UTF-8".into()))?;
        names.push(s.to_string());
    }
    r.finish()?;
    let graph = AttributedGraph::from_edges(n, &edges, node_features, edge_features)?;
    let labeling = EdgeLabeling::with_splits(class_count, labels, splits)?;
    Ok(LoadedDataset {
        graph,
        labeling,
        node_map: NodeMap::new(names),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(dir: &Path, name: &str, content: &str) -> std::path::PathBuf {
        let p = dir.join(name);
        fs::write(&p, content).unwrap();
        p
    }

    #[test]
    fn triangle_file_parses() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(dir.path(), "e.tsv", "0 1 0\n1 2 1\n0 2 0\n");
        let opts = LoadOptions { class_count: Some(2) };
        let d = load_graph_with(&p, None, None, &opts).unwrap();
        assert_eq!(d.graph.node_count(), 3);
        assert_eq!(d.graph.edge_count(), 3);
        assert_eq!(d.labeling.labels(), &[Some(0), Some(1), Some(0)]);
        assert_eq!(d.labeling.class_count(), 2);
    }

    #[test]
    fn empty_file_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(dir.path(), "e.tsv", "# only a comment\n\n");
        let err = load_graph(&p, None, None).unwrap_err();
        assert!(err.to_string().contains("no edges"), "{err}");
    }

    #[test]
    fn consistent_duplicates_collapse() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(dir.path(), "e.tsv", "0 1 0\n1 0 0\n");
        let d = load_graph(&p, None, None).unwrap();
        assert_eq!(d.graph.edges(), &[(0, 1)]);
        assert_eq!(d.labeling.labels(), &[Some(0)]);
    }

    #[test]
    fn conflicting_duplicates_fail_with_line() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(dir.path(), "e.tsv", "0 1 0\n# c\n1 0 1\n");
        match load_graph(&p, None, None).unwrap_err() {
            Error::Parse { line, message, .. } => {
                assert_eq!(line, 3);
                assert!(message.contains("conflicting"));
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn malformed_line_reports_number() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(dir.path(), "e.tsv", "0 1 0\n1 2\n");
        match load_graph(&p, None, None).unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            e => panic!("unexpected {e}"),
        }
        let p = write(dir.path(), "e2.tsv", "0 1 x\n");
        assert!(matches!(load_graph(&p, None, None), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn label_out_of_range() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(dir.path(), "e.tsv", "0 1 0\n1 2 2\n");
        let opts = LoadOptions { class_count: Some(2) };
        assert!(matches!(load_graph_with(&p, None, None, &opts), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn dangling_node_id() {
        let dir = tempfile::tempdir().unwrap();
        let e = write(dir.path(), "e.tsv", "a b 0\nb c 1\n");
        let x = write(dir.path(), "x.tsv", "a 1 2\nb 3 4\n");
        let err = load_graph(&e, Some(&x), None).unwrap_err();
        assert!(err.to_string().contains("dangling"), "{err}");
    }

    #[test]
    fn string_ids_and_features_remap() {
        let dir = tempfile::tempdir().unwrap();
        let e = write(dir.path(), "e.tsv", "bob alice 1 train\nalice carol 0 test\n");
        let x = write(dir.path(), "x.tsv", "carol 3\nbob 1\nalice 2\ndave 4\n");
        let s = write(dir.path(), "s.tsv", "1 0.5\n0 -0.5\n");
        let d = load_graph(&e, Some(&x), Some(&s)).unwrap();
        assert_eq!(d.graph.node_count(), 4);
        assert_eq!(d.node_map.name(0), "carol");
        let alice = 2;
        assert_eq!(d.graph.node_features().unwrap().row(alice), &[2.0]);
        assert_eq!(d.graph.edge_features().unwrap().row(0), &[-0.5]);
        assert_eq!(d.labeling.split(0), Some(Split::Train));
        assert_eq!(d.graph.degree(3), 0);
    }

    #[test]
    fn numeric_ids_keep_numeric_order() {
        let dir = tempfile::tempdir().unwrap();
        let e = write(dir.path(), "e.tsv", "10 2 0\n2 7 1\n");
        let d = load_graph(&e, None, None).unwrap();
        assert_eq!(d.node_map.name(0), "2");
        assert_eq!(d.node_map.name(2), "10");
        assert_eq!(d.graph.edge(0), (0, 2));
    }

    #[test]
    fn partial_split_column_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let e = write(dir.path(), "e.tsv", "0 1 0 train\n1 2 1\n");
        assert!(matches!(load_graph(&e, None, None), Err(Error::Data(_))));
    }

    #[test]
    fn text_and_cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let e = write(dir.path(), "e.tsv", "n1 n2 1 val\nn2 n3 - \nn3 n1 0 train\n");
        let x = write(dir.path(), "x.tsv", "n1 0.1 1e-3\nn2 2 3\nn3 -4.25 5\n");
        let s = write(dir.path(), "s.tsv", "0 1\n1 2\n2 3\n");
        let d = load_graph(&e, Some(&x), Some(&s)).unwrap();

        let (e2, x2, s2) = (dir.path().join("e2"), dir.path().join("x2"), dir.path().join("s2"));
        save_graph(&d, &e2, Some(&x2), Some(&s2)).unwrap();
        let d2 = load_graph(&e2, Some(&x2), Some(&s2)).unwrap();
        assert_eq!(d, d2);

        let c = dir.path().join("g.bin");
        write_cache(&d, &c).unwrap();
        assert_eq!(read_cache(&c).unwrap(), d);

        let mut bytes = fs::read(&c).unwrap();
        bytes[0] = b'X';
        fs::write(&c, &bytes).unwrap();
        assert!(matches!(read_cache(&c), Err(Error::Format(_))));
    }

    #[test]
    fn node_map_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("map.tsv");
        let m = NodeMap::new(vec!["x".into(), "17".into()]);
        m.write(&p).unwrap();
        assert_eq!(NodeMap::read(&p).unwrap(), m);
    }
}
