//! Minimal dense linear algebra: square row-major matrices and an in-place
//! LU factorization with partial pivoting.
//!
//! The batch engine spends a large share of its wall time here; the
//! elimination inner loop runs over contiguous row tails so it vectorizes.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Pivots smaller than this are treated as exact zeros.
const PIVOT_FLOOR: f64 = 1e-300;

/// Square dense matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> DenseMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        DenseMatrix {
            n,
            data: vec![T::zero(); n * n],
        }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            assert_eq!(row.len(), n, "matrix must be square");
            data.extend(row);
        }
        DenseMatrix { n, data }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.n + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [T] {
        &mut self.data[i * self.n..(i + 1) * self.n]
    }

    /// Infinity norm (max absolute row sum).
    pub fn norm_inf(&self) -> T {
        (0..self.n)
            .map(|i| self.row(i).iter().fold(T::zero(), |acc, v| acc + v.abs()))
            .fold(T::zero(), |a, b| a.max(b))
    }

    /// `A x` for a matching-length vector.
    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(T::zero(), |acc, (&a, &b)| acc + a * b)
            })
            .collect()
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        let (lo, hi) = (i.min(j), i.max(j));
        let (head, tail) = self.data.split_at_mut(hi * self.n);
        head[lo * self.n..(lo + 1) * self.n].swap_with_slice(&mut tail[..self.n]);
    }
}

/// Solves `A x = b` by in-place LU with partial pivoting, overwriting `a`
/// with the factors and `b` with the solution.
pub fn lu_solve_in_place<T: Scalar>(a: &mut DenseMatrix<T>, b: &mut [T]) -> Result<()> {
    let n = a.n();
    assert_eq!(b.len(), n);
    let floor = T::of(PIVOT_FLOOR);

    for k in 0..n {
        // Partial pivoting on column k.
        let mut pivot_row = k;
        let mut pivot_mag = a.get(k, k).abs();
        for i in k + 1..n {
            let mag = a.get(i, k).abs();
            if mag > pivot_mag {
                pivot_mag = mag;
                pivot_row = i;
            }
        }
        if pivot_mag < floor {
            return Err(Error::SingularSystem);
        }
        a.swap_rows(k, pivot_row);
        b.swap(k, pivot_row);

        let pivot = a.get(k, k);
        for i in k + 1..n {
            let factor = a.get(i, k) / pivot;
            a.set(i, k, factor);
            // Contiguous row-tail update keeps this loop vectorizable.
            let (up_to_i, from_i) = a.data.split_at_mut(i * n);
            let pivot_row_tail = &up_to_i[k * n + k + 1..(k + 1) * n];
            let target_tail = &mut from_i[k + 1..n];
            for (t, &p) in target_tail.iter_mut().zip(pivot_row_tail) {
                *t -= factor * p;
            }
            b[i] -= factor * b[k];
        }
    }

    // Back substitution on U.
    for i in (0..n).rev() {
        let mut acc = b[i];
        let row = a.row(i);
        for j in i + 1..n {
            acc -= row[j] * b[j];
        }
        b[i] = acc / row[i];
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_returns_rhs() {
        let mut a = DenseMatrix::zeros(4);
        for i in 0..4 {
            a.set(i, i, 1.0_f64);
        }
        let mut b = vec![3.0, -1.0, 0.5, 2.0];
        let expect = b.clone();
        lu_solve_in_place(&mut a, &mut b).unwrap();
        assert_eq!(b, expect);
    }

    #[test]
    fn hand_solved_2x2() {
        let mut a = DenseMatrix::from_rows(vec![vec![2.0_f64, 1.0], vec![1.0, 3.0]]);
        let mut b = vec![3.0, 5.0];
        lu_solve_in_place(&mut a, &mut b).unwrap();
        assert!((b[0] - 0.8).abs() < 1e-15);
        assert!((b[1] - 1.4).abs() < 1e-15);
    }

    #[test]
    fn singular_matrix_detected() {
        let mut a = DenseMatrix::from_rows(vec![
            vec![1.0_f64, 2.0, 3.0],
            vec![2.0, 4.0, 6.0],
            vec![0.0, 1.0, 1.0],
        ]);
        let mut b = vec![1.0, 2.0, 3.0];
        assert_eq!(lu_solve_in_place(&mut a, &mut b), Err(Error::SingularSystem));
    }

    #[test]
    fn pivoting_handles_zero_leading_entry() {
        let mut a = DenseMatrix::from_rows(vec![vec![0.0_f64, 1.0], vec![1.0, 0.0]]);
        let mut b = vec![2.0, 5.0];
        lu_solve_in_place(&mut a, &mut b).unwrap();
        assert_eq!(b, vec![5.0, 2.0]);
    }
}
