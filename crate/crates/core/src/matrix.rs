//! Internal exact linear algebra over the field abstraction: reduced row
//! echelon form with pivots chosen left to right, used for canonical bases,
//! coordinate solves, and rank computations.

use crate::field::FieldScalar;

/// A dense matrix over an exact field; rows of equal length.
pub(crate) struct Matrix {
    pub cols: usize,
    pub rows: Vec<Vec<FieldScalar>>,
}

impl Matrix {
    pub fn new(cols: usize) -> Self {
        Matrix {
            cols,
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<FieldScalar>) {
        assert_eq!(row.len(), self.cols);
        self.rows.push(row);
    }

    /// Reduces in place to reduced row echelon form (each pivot 1, its
    /// column cleared above and below, pivot columns strictly increasing).
    /// Zero rows are dropped.  Returns the pivot column of each row.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0usize;
        for col in 0..self.cols {
            let Some(src) = (row..self.rows.len()).find(|&r| !self.rows[r][col].is_zero())
            else {
                continue;
            };
            self.rows.swap(row, src);
            let inv = self.rows[row][col].inv().expect("nonzero pivot");
            for c in col..self.cols {
                self.rows[row][c] = &self.rows[row][c] * &inv;
            }
            for r in 0..self.rows.len() {
                if r != row && !self.rows[r][col].is_zero() {
                    let factor = self.rows[r][col].clone();
                    for c in col..self.cols {
                        let t = &self.rows[row][c] * &factor;
                        self.rows[r][c] = &self.rows[r][c] - &t;
                    }
                }
            }
            pivots.push(col);
            row += 1;
            if row == self.rows.len() {
                break;
            }
        }
        self.rows.truncate(row);
        pivots
    }

    pub fn rank(&mut self) -> usize {
        self.rref().len()
    }
}

/// Reduces `target` against RREF `rows` with the given `pivots`; returns the
/// coordinates used per row and the residual.
pub(crate) fn reduce_against(
    rows: &[Vec<FieldScalar>],
    pivots: &[usize],
    target: &[FieldScalar],
) -> (Vec<FieldScalar>, Vec<FieldScalar>) {
    let mut residual = target.to_vec();
    let mut coords = Vec::with_capacity(rows.len());
    for (row, &p) in rows.iter().zip(pivots) {
        let c = residual[p].clone();
        if !c.is_zero() {
            for (j, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    let t = v * &c;
                    residual[j] = &residual[j] - &t;
                }
            }
        }
        coords.push(c);
    }
    (coords, residual)
}
