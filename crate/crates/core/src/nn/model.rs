use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::AttributedGraph;
use crate::sparse::SparseMatrix;
use crate::tensor::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Activation {
    #[default]
    Relu,
    Tanh,
    Identity,
}

impl Activation {
    fn apply(self, m: &mut Matrix) {
        match self {
            Self::Relu => m.map_inplace(|x| x.max(0.0)),
            Self::Tanh => m.map_inplace(f64::tanh),
            Self::Identity => {}
        }
    }

    /// Multiplies `grad` by the derivative evaluated at pre-activation `pre`.
    fn backprop(self, pre: &Matrix, grad: &mut Matrix) {
        match self {
            Self::Relu => {
                for (g, &p) in grad.as_mut_slice().iter_mut().zip(pre.as_slice()) {
                    if p <= 0.0 {
                        *g = 0.0;
                    }
                }
            }
            Self::Tanh => {
                for (g, &p) in grad.as_mut_slice().iter_mut().zip(pre.as_slice()) {
                    let t = p.tanh();
                    *g *= 1.0 - t * t;
                }
            }
            Self::Identity => {}
        }
    }

    pub(crate) fn tag(self) -> u64 {
        match self {
            Self::Relu => 0,
            Self::Tanh => 1,
            Self::Identity => 2,
        }
    }

    pub(crate) fn from_tag(tag: u64) -> Result<Self> {
        match tag {
            0 => Ok(Self::Relu),
            1 => Ok(Self::Tanh),
            2 => Ok(Self::Identity),
            t => Err(Error::Format(format!("bad activation tag {t}"))),
        }
    }
}

impl fmt::Display for Activation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Relu => "relu",
            Self::Tanh => "tanh",
            Self::Identity => "linear",
        })
    }
}

impl FromStr for Activation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "relu" => Ok(Self::Relu),
            "tanh" => Ok(Self::Tanh),
            "linear" | "identity" => Ok(Self::Identity),
            _ => Err(Error::Config(format!("unknown activation {s:?} (expected relu, tanh or linear)"))),
        }
    }
}

/// Affine map `x ↦ x·W + b` with `W` of shape `in × out`.
#[derive(Debug, Clone, PartialEq)]
pub struct Linear {
    pub w: Matrix,
    pub b: Vec<f64>,
}

impl Linear {
    pub fn zeros(input: usize, output: usize) -> Self {
        Self {
            w: Matrix::zeros(input, output),
            b: vec![0.0; output],
        }
    }

    /// Glorot-uniform weights, zero bias.
    pub fn glorot<R: Rng + ?Sized>(input: usize, output: usize, rng: &mut R) -> Self {
        let limit = (6.0 / (input + output) as f64).sqrt();
        Self {
            w: Matrix::from_fn(input, output, |_, _| rng.random_range(-limit..limit)),
            b: vec![0.0; output],
        }
    }

    pub fn input_dim(&self) -> usize {
        self.w.rows()
    }

    pub fn output_dim(&self) -> usize {
        self.w.cols()
    }

    fn len(&self) -> usize {
        self.w.as_slice().len() + self.b.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelConfig {
    pub input_dim: usize,
    /// Width of the raw edge features appended to each edge embedding (0 if none).
    pub edge_dim: usize,
    /// Output width of each GCN layer.
    pub encoder_dims: Vec<usize>,
    /// Output width of each hidden classifier layer.
    pub classifier_dims: Vec<usize>,
    pub classes: usize,
    pub activation: Activation,
    pub dropout: f64,
}

impl ModelConfig {
    pub fn validate(&self) -> Result<()> {
        if self.input_dim == 0 {
            return Err(Error::Parameter("input dimension must be positive".into()));
        }
        if self.encoder_dims.is_empty() {
            return Err(Error::Parameter("encoder needs at least one layer".into()));
        }
        if self.encoder_dims.iter().chain(&self.classifier_dims).any(|&d| d == 0) {
            return Err(Error::Parameter("layer widths must be positive".into()));
        }
        if self.classes < 2 {
            return Err(Error::Parameter("need at least two classes".into()));
        }
        if !(0.0..1.0).contains(&self.dropout) {
            return Err(Error::Parameter(format!("dropout must lie in [0, 1), got {}", self.dropout)));
        }
        Ok(())
    }

    pub fn embedding_dim(&self) -> usize {
        *self.encoder_dims.last().expect("validated")
    }

    pub fn classifier_input_dim(&self) -> usize {
        2 * self.embedding_dim() + self.edge_dim
    }

    fn encoder_shapes(&self) -> Vec<(usize, usize)> {
        let mut prev = self.input_dim;
        self.encoder_dims
            .iter()
            .map(|&d| {
                let s = (prev, d);
                prev = d;
                s
            })
            .collect()
    }

    fn classifier_shapes(&self) -> Vec<(usize, usize)> {
        let mut prev = self.classifier_input_dim();
        self.classifier_dims
            .iter()
            .chain(std::iter::once(&self.classes))
            .map(|&d| {
                let s = (prev, d);
                prev = d;
                s
            })
            .collect()
    }
}

/// One-hot degree buckets, `min(deg, buckets - 1)`, with at most `cap` buckets.
pub fn degree_features(graph: &AttributedGraph, cap: usize) -> Matrix {
    let degrees = graph.degrees();
    let buckets = (degrees.iter().copied().max().unwrap_or(0) + 1).clamp(1, cap.max(1));
    let mut x = Matrix::zeros(graph.node_count(), buckets);
    for (i, &d) in degrees.iter().enumerate() {
        x.set(i, d.min(buckets - 1), 1.0);
    }
    x
}

/// Everything the model reads from the graph, precomputed once per run.
#[derive(Debug, Clone)]
pub struct ModelInputs {
    pub adjacency: SparseMatrix,
    pub x: Matrix,
    pub s: Option<Matrix>,
    pub edges: Vec<(usize, usize)>,
}

impl ModelInputs {
    pub fn from_graph(graph: &AttributedGraph) -> Self {
        Self {
            adjacency: SparseMatrix::gcn_normalized(graph),
            x: graph.node_features().cloned().unwrap_or_else(|| degree_features(graph, 64)),
            s: graph.edge_features().cloned(),
            edges: graph.edges().to_vec(),
        }
    }

    pub fn edge_dim(&self) -> usize {
        self.s.as_ref().map_or(0, Matrix::cols)
    }
}

/// A classifier input row as linear combinations of node embeddings (left and
/// right halves) and raw edge feature rows.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeInput {
    pub left: Vec<(usize, f64)>,
    pub right: Vec<(usize, f64)>,
    pub edge: Vec<(usize, f64)>,
}

impl EdgeInput {
    /// A real edge, endpoints in canonical (smaller id first) order.
    pub fn real(edge_id: usize, (u, v): (usize, usize)) -> Self {
        let (a, b) = if u <= v { (u, v) } else { (v, u) };
        Self {
            left: vec![(a, 1.0)],
            right: vec![(b, 1.0)],
            edge: vec![(edge_id, 1.0)],
        }
    }

    /// `λ·self + (1 − λ)·other`, term by term.
    pub fn interpolate(&self, other: &Self, lambda: f64) -> Self {
        let mix = |a: &[(usize, f64)], b: &[(usize, f64)]| {
            a.iter()
                .map(|&(i, c)| (i, lambda * c))
                .chain(b.iter().map(|&(i, c)| (i, (1.0 - lambda) * c)))
                .collect()
        };
        Self {
            left: mix(&self.left, &other.left),
            right: mix(&self.right, &other.right),
            edge: mix(&self.edge, &other.edge),
        }
    }
}

fn combine_into(out: &mut [f64], src: &Matrix, terms: &[(usize, f64)]) {
    for &(i, c) in terms {
        for (o, &x) in out.iter_mut().zip(src.row(i)) {
            *o += c * x;
        }
    }
}

/// `Z_i ∥ Z_j (∥ S_e)` for edge `e = (i, j)`, canonical order.
pub fn edge_embed(z: &Matrix, s: Option<&Matrix>, edge_id: usize, edge: (usize, usize)) -> Vec<f64> {
    assemble_rows(z, s, &[EdgeInput::real(edge_id, edge)]).into_vec()
}

pub fn assemble_rows(z: &Matrix, s: Option<&Matrix>, inputs: &[EdgeInput]) -> Matrix {
    let d = z.cols();
    let de = s.map_or(0, Matrix::cols);
    let mut out = Matrix::zeros(inputs.len(), 2 * d + de);
    for (r, input) in inputs.iter().enumerate() {
        let row = out.row_mut(r);
        combine_into(&mut row[..d], z, &input.left);
        combine_into(&mut row[d..2 * d], z, &input.right);
        if let Some(s) = s {
            combine_into(&mut row[2 * d..], s, &input.edge);
        }
    }
    out
}

/// Inverted dropout mask: entries are `0` with probability `p`, else `1/(1-p)`.
pub fn dropout_mask<R: Rng + ?Sized>(rows: usize, cols: usize, p: f64, rng: &mut R) -> Option<Matrix> {
    if p <= 0.0 {
        return None;
    }
    let keep = 1.0 / (1.0 - p);
    Some(Matrix::from_fn(rows, cols, |_, _| if rng.random::<f64>() < p { 0.0 } else { keep }))
}

/// Dropout masks for one forward pass. `None` entries mean no dropout.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Masks {
    /// Applied to the input of each GCN layer.
    pub encoder: Vec<Option<Matrix>>,
    /// Applied to the input of each classifier layer after the first.
    pub classifier: Vec<Option<Matrix>>,
}

impl Masks {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn sample_encoder<R: Rng + ?Sized>(config: &ModelConfig, nodes: usize, rng: &mut R) -> Vec<Option<Matrix>> {
        config
            .encoder_shapes()
            .iter()
            .map(|&(input, _)| dropout_mask(nodes, input, config.dropout, rng))
            .collect()
    }

    pub fn sample_classifier<R: Rng + ?Sized>(config: &ModelConfig, rows: usize, rng: &mut R) -> Vec<Option<Matrix>> {
        config
            .classifier_shapes()
            .iter()
            .skip(1)
            .map(|&(input, _)| dropout_mask(rows, input, config.dropout, rng))
            .collect()
    }

    /// Appends the rows of `extra` below the current classifier masks.
    pub fn append_classifier_rows(&mut self, extra: Vec<Option<Matrix>>) {
        if self.classifier.is_empty() {
            self.classifier = extra;
            return;
        }
        for (mine, theirs) in self.classifier.iter_mut().zip(extra) {
            if let (Some(a), Some(b)) = (mine.as_mut(), theirs) {
                let cols = a.cols();
                let mut data = std::mem::replace(a, Matrix::zeros(0, cols)).into_vec();
                data.extend_from_slice(b.as_slice());
                *a = Matrix::from_vec(data.len() / cols, cols, data);
            }
        }
    }
}

/// Intermediate values recorded by [`EdgeModel::forward`].
#[derive(Debug, Clone)]
pub struct ForwardCache {
    enc_inputs: Vec<Matrix>,
    enc_pre: Vec<Matrix>,
    pub z: Matrix,
    inputs: Vec<EdgeInput>,
    cls_inputs: Vec<Matrix>,
    cls_pre: Vec<Matrix>,
    pub logits: Matrix,
}

/// Parameter gradients, shaped like the model.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub encoder: Vec<Linear>,
    pub classifier: Vec<Linear>,
}

impl Gradients {
    pub fn flatten(&self) -> Vec<f64> {
        flatten(&self.encoder, &self.classifier)
    }

    pub fn is_finite(&self) -> bool {
        self.encoder
            .iter()
            .chain(&self.classifier)
            .all(|l| l.w.is_finite() && l.b.iter().all(|x| x.is_finite()))
    }
}

fn flatten(encoder: &[Linear], classifier: &[Linear]) -> Vec<f64> {
    let mut out = Vec::new();
    for l in encoder.iter().chain(classifier) {
        out.extend_from_slice(l.w.as_slice());
        out.extend_from_slice(&l.b);
    }
    out
}

/// GCN encoder followed by an MLP over concatenated endpoint embeddings.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeModel {
    config: ModelConfig,
    encoder: Vec<Linear>,
    classifier: Vec<Linear>,
}

impl EdgeModel {
    pub fn new<R: Rng + ?Sized>(config: ModelConfig, rng: &mut R) -> Result<Self> {
        config.validate()?;
        let encoder = config.encoder_shapes().into_iter().map(|(i, o)| Linear::glorot(i, o, rng)).collect();
        let classifier = config
            .classifier_shapes()
            .into_iter()
            .map(|(i, o)| Linear::glorot(i, o, rng))
            .collect();
        Ok(Self {
            config,
            encoder,
            classifier,
        })
    }

    /// All parameters zero.
    pub fn zeroed(config: ModelConfig) -> Result<Self> {
        config.validate()?;
        let zeros = |shapes: Vec<(usize, usize)>| shapes.into_iter().map(|(i, o)| Linear::zeros(i, o)).collect();
        Ok(Self {
            encoder: zeros(config.encoder_shapes()),
            classifier: zeros(config.classifier_shapes()),
            config,
        })
    }

    /// Builds a model from explicit layers, checking that shapes chain.
    pub fn from_layers(config: ModelConfig, encoder: Vec<Linear>, classifier: Vec<Linear>) -> Result<Self> {
        config.validate()?;
        let ok = |layers: &[Linear], shapes: Vec<(usize, usize)>| {
            layers.len() == shapes.len()
                && layers
                    .iter()
                    .zip(shapes)
                    .all(|(l, (i, o))| l.input_dim() == i && l.output_dim() == o && l.b.len() == o)
        };
        if !ok(&encoder, config.encoder_shapes()) || !ok(&classifier, config.classifier_shapes()) {
            return Err(Error::Dimension("layer shapes do not match the model configuration".into()));
        }
        Ok(Self {
            config,
            encoder,
            classifier,
        })
    }

    pub fn config(&self) -> &ModelConfig {
        &self.config
    }

    pub fn encoder(&self) -> &[Linear] {
        &self.encoder
    }

    pub fn classifier(&self) -> &[Linear] {
        &self.classifier
    }

    pub fn param_count(&self) -> usize {
        self.encoder.iter().chain(&self.classifier).map(Linear::len).sum()
    }

    pub fn params_flat(&self) -> Vec<f64> {
        flatten(&self.encoder, &self.classifier)
    }

    pub fn set_params_flat(&mut self, params: &[f64]) -> Result<()> {
        if params.len() != self.param_count() {
            return Err(Error::Dimension(format!(
                "{} parameters supplied, model has {}",
                params.len(),
                self.param_count()
            )));
        }
        let mut pos = 0;
        for l in self.encoder.iter_mut().chain(self.classifier.iter_mut()) {
            let nw = l.w.as_slice().len();
            l.w.as_mut_slice().copy_from_slice(&params[pos..pos + nw]);
            pos += nw;
            let nb = l.b.len();
            l.b.copy_from_slice(&params[pos..pos + nb]);
            pos += nb;
        }
        Ok(())
    }

    pub fn is_finite(&self) -> bool {
        self.params_flat().iter().all(|x| x.is_finite())
    }

    pub fn zero_gradients(&self) -> Gradients {
        let zeros = |ls: &[Linear]| ls.iter().map(|l| Linear::zeros(l.input_dim(), l.output_dim())).collect();
        Gradients {
            encoder: zeros(&self.encoder),
            classifier: zeros(&self.classifier),
        }
    }

    fn check_inputs(&self, data: &ModelInputs) -> Result<()> {
        if data.x.cols() != self.config.input_dim {
            return Err(Error::Dimension(format!(
                "node features have {} columns, model expects {}",
                data.x.cols(),
                self.config.input_dim
            )));
        }
        if data.x.rows() != data.adjacency.dim() {
            return Err(Error::Dimension("feature rows do not match node count".into()));
        }
        if data.edge_dim() != self.config.edge_dim {
            return Err(Error::Dimension(format!(
                "edge features have {} columns, model expects {}",
                data.edge_dim(),
                self.config.edge_dim
            )));
        }
        Ok(())
    }

    /// Node embeddings `Z`; eval mode (no dropout).
    pub fn embed(&self, data: &ModelInputs) -> Result<Matrix> {
        self.check_inputs(data)?;
        let (z, _, _) = self.encode(data, &[]);
        Ok(z)
    }

    fn encode(&self, data: &ModelInputs, masks: &[Option<Matrix>]) -> (Matrix, Vec<Matrix>, Vec<Matrix>) {
        let mut inputs = Vec::with_capacity(self.encoder.len());
        let mut pre = Vec::with_capacity(self.encoder.len());
        let mut h = data.x.clone();
        let last = self.encoder.len() - 1;
        for (l, layer) in self.encoder.iter().enumerate() {
            if let Some(Some(mask)) = masks.get(l) {
                h.hadamard_inplace(mask);
            }
            let t = h.matmul(&layer.w);
            let mut p = data.adjacency.matmul(&t);
            p.add_row_vector(&layer.b);
            inputs.push(h);
            h = p.clone();
            if l < last {
                self.config.activation.apply(&mut h);
            }
            pre.push(p);
        }
        (h, inputs, pre)
    }

    pub fn forward(&self, data: &ModelInputs, inputs: &[EdgeInput], masks: &Masks) -> Result<ForwardCache> {
        self.check_inputs(data)?;
        let n = data.x.rows();
        let m = data.edges.len();
        for input in inputs {
            if input.left.iter().chain(&input.right).any(|&(i, _)| i >= n) {
                return Err(Error::Dimension("edge input references a node out of range".into()));
            }
            if input.edge.iter().any(|&(e, _)| e >= m) {
                return Err(Error::Dimension("edge input references an edge out of range".into()));
            }
        }
        let (z, enc_inputs, enc_pre) = self.encode(data, &masks.encoder);
        let mut h = assemble_rows(&z, data.s.as_ref(), inputs);
        let mut cls_inputs = Vec::with_capacity(self.classifier.len());
        let mut cls_pre = Vec::with_capacity(self.classifier.len());
        let last = self.classifier.len() - 1;
        for (l, layer) in self.classifier.iter().enumerate() {
            if l > 0 {
                if let Some(Some(mask)) = masks.classifier.get(l - 1) {
                    if mask.shape() != h.shape() {
                        return Err(Error::Dimension("classifier dropout mask shape".into()));
                    }
                    h.hadamard_inplace(mask);
                }
            }
            let mut p = h.matmul(&layer.w);
            p.add_row_vector(&layer.b);
            cls_inputs.push(h);
            h = p.clone();
            if l < last {
                self.config.activation.apply(&mut h);
            }
            cls_pre.push(p);
        }
        if !h.is_finite() {
            return Err(Error::Numeric("non-finite logits in forward pass".into()));
        }
        Ok(ForwardCache {
            enc_inputs,
            enc_pre,
            z,
            inputs: inputs.to_vec(),
            cls_inputs,
            cls_pre,
            logits: h,
        })
    }

    /// Eval-mode logits for `inputs`.
    pub fn predict(&self, data: &ModelInputs, inputs: &[EdgeInput]) -> Result<Matrix> {
        Ok(self.forward(data, inputs, &Masks::none())?.logits)
    }

    /// Reverse pass for a scalar loss whose gradient w.r.t. the logits is `dlogits`.
    pub fn backward(&self, data: &ModelInputs, cache: &ForwardCache, masks: &Masks, dlogits: &Matrix) -> Result<Gradients> {
        if dlogits.shape() != cache.logits.shape() {
            return Err(Error::Dimension("logit gradient shape".into()));
        }
        if !dlogits.is_finite() {
            return Err(Error::Numeric("non-finite logit gradient".into()));
        }
        let act = self.config.activation;
        let mut grads = self.zero_gradients();

        let mut dp = dlogits.clone();
        let mut de = Matrix::zeros(0, 0);
        for l in (0..self.classifier.len()).rev() {
            let layer = &self.classifier[l];
            grads.classifier[l].w = cache.cls_inputs[l].t_matmul(&dp);
            grads.classifier[l].b = dp.column_sums();
            let mut dx = dp.matmul_t(&layer.w);
            if l == 0 {
                de = dx;
                break;
            }
            if let Some(Some(mask)) = masks.classifier.get(l - 1) {
                dx.hadamard_inplace(mask);
            }
            act.backprop(&cache.cls_pre[l - 1], &mut dx);
            dp = dx;
        }

        let d = cache.z.cols();
        let mut dz = Matrix::zeros(cache.z.rows(), d);
        for (r, input) in cache.inputs.iter().enumerate() {
            let g = de.row(r);
            for (half, terms) in [(0, &input.left), (1, &input.right)] {
                let gh = &g[half * d..(half + 1) * d];
                for &(i, c) in terms {
                    for (o, &x) in dz.row_mut(i).iter_mut().zip(gh) {
                        *o += c * x;
                    }
                }
            }
        }

        let mut dp = dz;
        for l in (0..self.encoder.len()).rev() {
            let dt = data.adjacency.matmul(&dp);
            grads.encoder[l].w = cache.enc_inputs[l].t_matmul(&dt);
            grads.encoder[l].b = dp.column_sums();
            if l == 0 {
                break;
            }
            let mut dx = dt.matmul_t(&self.encoder[l].w);
            if let Some(Some(mask)) = masks.encoder.get(l) {
                dx.hadamard_inplace(mask);
            }
            act.backprop(&cache.enc_pre[l - 1], &mut dx);
            dp = dx;
        }
        if !grads.is_finite() {
            return Err(Error::Numeric("non-finite gradient".into()));
        }
        Ok(grads)
    }
}
