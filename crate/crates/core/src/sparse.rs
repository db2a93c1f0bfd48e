//! CSR operators derived from an [`AttributedGraph`].

use crate::graph::AttributedGraph;
use crate::tensor::Matrix;

#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    n: usize,
    offsets: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl SparseMatrix {
    /// `D⁻¹A`. Rows of isolated nodes are empty (all-zero).
    pub fn row_normalized(graph: &AttributedGraph) -> Self {
        let n = graph.node_count();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        offsets.push(0);
        for i in 0..n {
            let nbrs = graph.neighbors(i);
            let w = if nbrs.is_empty() { 0.0 } else { 1.0 / nbrs.len() as f64 };
            for &j in nbrs {
                cols.push(j);
                vals.push(w);
            }
            offsets.push(cols.len());
        }
        Self { n, offsets, cols, vals }
    }

    /// `D̃^{-1/2}(A + I)D̃^{-1/2}` with `D̃` the degree matrix of `A + I`.
    pub fn gcn_normalized(graph: &AttributedGraph) -> Self {
        let n = graph.node_count();
        let inv_sqrt: Vec<f64> = (0..n).map(|i| 1.0 / ((graph.degree(i) + 1) as f64).sqrt()).collect();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        offsets.push(0);
        for i in 0..n {
            let mut row: Vec<usize> = graph.neighbors(i).to_vec();
            row.push(i);
            row.sort_unstable();
            for j in row {
                cols.push(j);
                vals.push(inv_sqrt[i] * inv_sqrt[j]);
            }
            offsets.push(cols.len());
        }
        Self { n, offsets, cols, vals }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// `self · dense`, accumulating each row in stored column order.
    pub fn matmul(&self, dense: &Matrix) -> Matrix {
        assert_eq!(dense.rows(), self.n, "sparse matmul dimensions");
        let c = dense.cols();
        let mut out = Matrix::zeros(self.n, c);
        for i in 0..self.n {
            let o = out.row_mut(i);
            for p in self.offsets[i]..self.offsets[i + 1] {
                let w = self.vals[p];
                for (x, &y) in o.iter_mut().zip(dense.row(self.cols[p])) {
                    *x += w * y;
                }
            }
        }
        out
    }

    pub fn to_dense(&self) -> Matrix {
        let mut m = Matrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for p in self.offsets[i]..self.offsets[i + 1] {
                m.set(i, self.cols[p], self.vals[p]);
            }
        }
        m
    }
}
