//! Dense Gaussian elimination over a prime field.

use super::field::Field;

/// Row-major dense matrix with entries in Montgomery form.
#[derive(Debug, Clone)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Reduces in place to row echelon form (reduced when `full` is set) and
    /// returns the pivot columns.
    pub fn eliminate(&mut self, f: &Field, full: bool) -> Vec<usize> {
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.data[i * cols + c] != 0) else {
                continue;
            };
            if p != r {
                for j in c..cols {
                    self.data.swap(p * cols + j, r * cols + j);
                }
            }
            let inv = f.inv(self.data[r * cols + c]);
            for x in &mut self.data[r * cols + c..(r + 1) * cols] {
                *x = f.mul(*x, inv);
            }
            let (head, tail) = self.data.split_at_mut(r * cols);
            let (pivot_row, below) = tail.split_at_mut(cols);
            let pivot_row = &pivot_row[c..];
            for row in below.chunks_exact_mut(cols) {
                reduce_row(f, &mut row[c..], pivot_row);
            }
            if full {
                for row in head.chunks_exact_mut(cols) {
                    reduce_row(f, &mut row[c..], pivot_row);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(mut self, f: &Field) -> usize {
        self.eliminate(f, false).len()
    }

    /// A basis of `{ x : M x = 0 }`.
    pub fn kernel(mut self, f: &Field) -> Vec<Vec<u64>> {
        let pivots = self.eliminate(f, true);
        let mut is_pivot = vec![None; self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            is_pivot[c] = Some(r);
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| is_pivot[c].is_none()) {
            let mut v = vec![0; self.cols];
            v[free] = f.one();
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = f.neg(self.data[r * self.cols + free]);
            }
            basis.push(v);
        }
        basis
    }
}

#[inline]
fn reduce_row(f: &Field, row: &mut [u64], pivot_row: &[u64]) {
    let factor = row[0];
    if factor == 0 {
        return;
    }
    for (x, &p) in row.iter_mut().zip(pivot_row) {
        *x = f.sub(*x, f.mul(factor, p));
    }
}
