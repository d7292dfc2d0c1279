//! Dense matrices over an exact field and rank by Gaussian elimination.

use crate::field::Field;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &F {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: F) {
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[F] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(F::is_zero)
    }

    /// Nonzero entries as `(row, col)` pairs.
    pub fn support(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.data
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(move |(i, _)| (i / self.cols, i % self.cols))
    }

    pub fn rank(&self) -> usize {
        rank_of_rows(self.rows, self.cols, self.data.clone())
    }
}

/// Row-reduces a row-major buffer in place and returns its rank.
pub(crate) fn rank_of_rows<F: Field>(rows: usize, cols: usize, mut data: Vec<F>) -> usize {
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| !data[r * cols + col].is_zero()) else {
            continue;
        };
        if pivot != rank {
            for c in col..cols {
                data.swap(pivot * cols + c, rank * cols + c);
            }
        }
        let inv = data[rank * cols + col].inverse().expect("pivot is nonzero");
        for c in col..cols {
            let scaled = data[rank * cols + c].clone() * inv.clone();
            data[rank * cols + c] = scaled;
        }
        for r in rank + 1..rows {
            let factor = data[r * cols + col].clone();
            if factor.is_zero() {
                continue;
            }
            for c in col..cols {
                let update = data[r * cols + c].clone() - factor.clone() * data[rank * cols + c].clone();
                data[r * cols + c] = update;
            }
        }
        rank += 1;
    }
    rank
}

/// A sparse linear system assembled row by row, solved for rank only.
pub(crate) struct SparseSystem<F> {
    unknowns: usize,
    rows: Vec<Vec<(usize, F)>>,
}

impl<F: Field> SparseSystem<F> {
    pub(crate) fn new(unknowns: usize) -> Self {
        Self {
            unknowns,
            rows: Vec::new(),
        }
    }

    pub(crate) fn push_row(&mut self, mut entries: Vec<(usize, F)>) {
        entries.retain(|(_, x)| !x.is_zero());
        if !entries.is_empty() {
            self.rows.push(entries);
        }
    }

    /// Dimension of the solution space.
    pub(crate) fn nullity(self) -> usize {
        let cols = self.unknowns;
        let rows = self.rows.len();
        let mut data = vec![F::zero(); rows * cols];
        for (r, row) in self.rows.into_iter().enumerate() {
            for (c, x) in row {
                let cell = &mut data[r * cols + c];
                *cell = cell.clone() + x;
            }
        }
        cols - rank_of_rows(rows, cols, data)
    }
}
