use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;

/// Tolerance on row sums for a row to count as stochastic.
pub const ROW_SUM_TOLERANCE: f64 = 1e-9;

/// A square first-order transition matrix with a zero diagonal.
///
/// Every row either sums to one or is entirely zero (an absorbing chord).
#[derive(Clone, Debug, PartialEq)]
pub struct TransitionMatrix {
    n: usize,
    probs: Vec<f64>,
}

impl TransitionMatrix {
    /// Validates and wraps a row-major probability table.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self, Error> {
        let n = rows.len();
        let mut probs = Vec::with_capacity(n * n);
        for row in &rows {
            if row.len() != n {
                return Err(Error::MatrixShape {
                    rows: n,
                    cols: row.len(),
                    expected: n,
                });
            }
            probs.extend_from_slice(row);
        }
        Self::from_flat(n, probs)
    }

    pub fn from_flat(n: usize, probs: Vec<f64>) -> Result<Self, Error> {
        if probs.len() != n * n {
            return Err(Error::MatrixShape {
                rows: n,
                cols: probs.len().checked_div(n).unwrap_or(probs.len()),
                expected: n,
            });
        }
        let matrix = TransitionMatrix { n, probs };
        matrix.validate()?;
        Ok(matrix)
    }

    /// Builds a matrix by normalising non-negative weights row by row.
    pub fn normalized(n: usize, weights: Vec<f64>) -> Result<Self, Error> {
        debug_assert_eq!(weights.len(), n * n);
        let mut probs = weights;
        for row in probs.chunks_mut(n.max(1)) {
            let total: f64 = row.iter().sum();
            if total > 0.0 {
                for p in row.iter_mut() {
                    *p /= total;
                }
            }
        }
        Self::from_flat(n, probs)
    }

    pub fn zeros(n: usize) -> Self {
        TransitionMatrix {
            n,
            probs: vec![0.0; n * n],
        }
    }

    fn validate(&self) -> Result<(), Error> {
        for row in 0..self.n {
            for col in 0..self.n {
                let value = self.get(row, col);
                if !(0.0..=1.0).contains(&value) {
                    return Err(Error::ProbabilityOutOfRange { row, col, value });
                }
            }
            let diagonal = self.get(row, row);
            if diagonal != 0.0 {
                return Err(Error::NonzeroDiagonal {
                    index: row,
                    value: diagonal,
                });
            }
            let sum = self.row_sum(row);
            if sum != 0.0 && (sum - 1.0).abs() > ROW_SUM_TOLERANCE {
                return Err(Error::RowSum { row, sum });
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.probs[row * self.n + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.probs[row * self.n..(row + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.probs.chunks(self.n.max(1)).take(self.n)
    }

    pub fn row_sum(&self, row: usize) -> f64 {
        self.row(row).iter().sum()
    }

    pub fn is_absorbing(&self, row: usize) -> bool {
        self.row(row).iter().all(|&p| p == 0.0)
    }

    /// Cells with nonzero probability in row-major order.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.probs
            .iter()
            .enumerate()
            .filter(|(_, &p)| p != 0.0)
            .map(move |(k, &p)| (k / self.n, k % self.n, p))
    }

    pub fn has_transitions(&self) -> bool {
        self.probs.iter().any(|&p| p != 0.0)
    }

    /// The same matrix with rows and columns reordered: entry `(i, j)` of
    /// the result is entry `(perm[i], perm[j])` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        debug_assert_eq!(perm.len(), self.n);
        let mut probs = Vec::with_capacity(self.probs.len());
        for &i in perm {
            for &j in perm {
                probs.push(self.get(i, j));
            }
        }
        TransitionMatrix { n: self.n, probs }
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.rows().map(|r| r.to_vec()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_stochastic_and_absorbing_rows() {
        let m = TransitionMatrix::from_rows(vec![
            vec![0.0, 0.25, 0.75],
            vec![0.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0],
        ])
        .unwrap();
        assert!(m.is_absorbing(1));
        assert_eq!(m.nonzero().count(), 3);
    }

    #[test]
    fn rejects_bad_matrices() {
        assert!(matches!(
            TransitionMatrix::from_rows(vec![vec![0.5, 0.5], vec![1.0, 0.0]]),
            Err(Error::NonzeroDiagonal { index: 0, .. })
        ));
        assert!(matches!(
            TransitionMatrix::from_rows(vec![vec![0.0, 0.9], vec![1.0, 0.0]]),
            Err(Error::RowSum { row: 0, .. })
        ));
        assert!(matches!(
            TransitionMatrix::from_rows(vec![vec![0.0, -1.0], vec![1.0, 0.0]]),
            Err(Error::ProbabilityOutOfRange { .. })
        ));
        assert!(matches!(
            TransitionMatrix::from_rows(vec![vec![0.0, 1.0]]),
            Err(Error::MatrixShape { .. })
        ));
    }

    #[test]
    fn normalizes_rows() {
        let m = TransitionMatrix::normalized(2, vec![0.0, 3.0, 0.0, 0.0]).unwrap();
        assert_eq!(m.get(0, 1), 1.0);
        assert!(m.is_absorbing(1));
    }

    #[test]
    fn permutation_relabels() {
        let m = TransitionMatrix::from_rows(vec![
            vec![0.0, 1.0, 0.0],
            vec![0.5, 0.0, 0.5],
            vec![0.0, 0.0, 0.0],
        ])
        .unwrap();
        let p = m.permuted(&[2, 0, 1]);
        assert_eq!(p.get(1, 2), 1.0);
        assert_eq!(p.get(2, 1), 0.5);
        assert_eq!(p.get(2, 0), 0.5);
        assert!(p.is_absorbing(0));
    }
}
