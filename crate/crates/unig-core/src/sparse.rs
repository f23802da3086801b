//! Compressed sparse row matrices.
//!
//! Incidence, projection, and adjacency operators are stored in CSR so the
//! encoder scales with the number of incidences rather than |V| * |E|.
//! Column indices within each row are kept sorted; products walk rows in
//! order, which makes every operation reproducible bit-for-bit.

use alloc::vec;
use alloc::vec::Vec;

use crate::dense::DenseMatrix;

/// Sparse matrix in compressed sparse row form.
///
/// `offsets` has `rows + 1` entries; row `i` occupies the half-open range
/// `offsets[i]..offsets[i + 1]` of `indices`/`values`. Explicit zeros are
/// allowed but never produced by the constructors here.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    rows: usize,
    cols: usize,
    offsets: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    /// Builds from per-row `(column, value)` lists. Panics if a row holds an
    /// out-of-range or duplicate column. Entries may arrive unsorted.
    pub fn from_rows(rows: usize, cols: usize, entries: &[Vec<(usize, f64)>]) -> Self {
        assert_eq!(entries.len(), rows, "row count mismatch");
        let mut offsets = Vec::with_capacity(rows + 1);
        offsets.push(0);
        let nnz: usize = entries.iter().map(Vec::len).sum();
        let mut indices = Vec::with_capacity(nnz);
        let mut values = Vec::with_capacity(nnz);
        for row in entries {
            let mut sorted: Vec<(usize, f64)> = row.clone();
            sorted.sort_unstable_by_key(|&(col, _)| col);
            for window in sorted.windows(2) {
                assert_ne!(window[0].0, window[1].0, "duplicate column in CSR row");
            }
            for (col, value) in sorted {
                assert!(col < cols, "column {col} out of range for {cols} columns");
                indices.push(col);
                values.push(value);
            }
            offsets.push(indices.len());
        }
        Self {
            rows,
            cols,
            offsets,
            indices,
            values,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            rows: n,
            cols: n,
            offsets: (0..=n).collect(),
            indices: (0..n).collect(),
            values: vec![1.0; n],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.indices.len()
    }

    /// Sorted `(column, value)` pairs of row `i`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.offsets[i]..self.offsets[i + 1];
        self.indices[range.clone()]
            .iter()
            .copied()
            .zip(self.values[range].iter().copied())
    }

    /// Value at `(row, col)`, zero if the position is not stored.
    pub fn get(&self, row: usize, col: usize) -> f64 {
        let range = self.offsets[row]..self.offsets[row + 1];
        match self.indices[range.clone()].binary_search(&col) {
            Ok(pos) => self.values[range.start + pos],
            Err(_) => 0.0,
        }
    }

    /// Transpose via counting sort on column indices; output rows stay sorted.
    pub fn transpose(&self) -> CsrMatrix {
        let mut counts = vec![0usize; self.cols + 1];
        for &col in &self.indices {
            counts[col + 1] += 1;
        }
        for i in 0..self.cols {
            counts[i + 1] += counts[i];
        }
        let offsets = counts.clone();
        let mut indices = vec![0usize; self.nnz()];
        let mut values = vec![0.0; self.nnz()];
        let mut next = counts;
        for row in 0..self.rows {
            for (col, value) in self.row(row) {
                let slot = next[col];
                indices[slot] = row;
                values[slot] = value;
                next[col] += 1;
            }
        }
        CsrMatrix {
            rows: self.cols,
            cols: self.rows,
            offsets,
            indices,
            values,
        }
    }

    /// `self * dense`.
    pub fn mul_dense(&self, dense: &DenseMatrix) -> DenseMatrix {
        assert_eq!(
            self.cols,
            dense.rows(),
            "sparse-dense dimension mismatch: {}x{} * {}x{}",
            self.rows,
            self.cols,
            dense.rows(),
            dense.cols()
        );
        let width = dense.cols();
        let mut out = DenseMatrix::zeros(self.rows, width);
        for i in 0..self.rows {
            let out_row = out.row_mut(i);
            for (col, value) in self.row(i) {
                let src = dense.row(col);
                for (o, &x) in out_row.iter_mut().zip(src) {
                    *o += value * x;
                }
            }
        }
        out
    }

    /// `self * other` using a per-row dense accumulator. Touched columns are
    /// collected and sorted, so the result is deterministic regardless of
    /// operand entry order.
    pub fn mul_sparse(&self, other: &CsrMatrix) -> CsrMatrix {
        assert_eq!(
            self.cols, other.rows,
            "sparse-sparse dimension mismatch: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut offsets = Vec::with_capacity(self.rows + 1);
        offsets.push(0);
        let mut indices = Vec::new();
        let mut values = Vec::new();
        let mut accumulator = vec![0.0; other.cols];
        let mut touched: Vec<usize> = Vec::new();
        for i in 0..self.rows {
            for (k, a) in self.row(i) {
                for (j, b) in other.row(k) {
                    if accumulator[j] == 0.0 && !touched.contains(&j) {
                        touched.push(j);
                    }
                    accumulator[j] += a * b;
                }
            }
            touched.sort_unstable();
            for &j in &touched {
                let v = accumulator[j];
                accumulator[j] = 0.0;
                if v != 0.0 {
                    indices.push(j);
                    values.push(v);
                }
            }
            touched.clear();
            offsets.push(indices.len());
        }
        CsrMatrix {
            rows: self.rows,
            cols: other.cols,
            offsets,
            indices,
            values,
        }
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.rows)
            .map(|i| self.row(i).map(|(_, v)| v).sum())
            .collect()
    }

    pub fn col_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.cols];
        for (&col, &value) in self.indices.iter().zip(&self.values) {
            sums[col] += value;
        }
        sums
    }

    /// Multiplies row `i` by `factors[i]` in place.
    pub fn scale_rows(&mut self, factors: &[f64]) {
        assert_eq!(factors.len(), self.rows, "row factor length mismatch");
        for (i, &factor) in factors.iter().enumerate() {
            let range = self.offsets[i]..self.offsets[i + 1];
            for v in &mut self.values[range] {
                *v *= factor;
            }
        }
    }

    /// Multiplies column `j` by `factors[j]` in place.
    pub fn scale_cols(&mut self, factors: &[f64]) {
        assert_eq!(factors.len(), self.cols, "column factor length mismatch");
        for (&col, v) in self.indices.iter().zip(&mut self.values) {
            *v *= factors[col];
        }
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for (col, value) in self.row(i) {
                out.set(i, col, value);
            }
        }
        out
    }

    /// Stacks `top` above `bottom`; both must share a column count.
    pub fn vstack(top: &CsrMatrix, bottom: &CsrMatrix) -> CsrMatrix {
        assert_eq!(top.cols, bottom.cols, "vstack column mismatch");
        let mut offsets = top.offsets.clone();
        let shift = *offsets.last().unwrap();
        offsets.extend(bottom.offsets[1..].iter().map(|o| o + shift));
        let mut indices = top.indices.clone();
        indices.extend_from_slice(&bottom.indices);
        let mut values = top.values.clone();
        values.extend_from_slice(&bottom.values);
        CsrMatrix {
            rows: top.rows + bottom.rows,
            cols: top.cols,
            offsets,
            indices,
            values,
        }
    }
}
