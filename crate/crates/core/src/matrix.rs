//! Sparse row-major matrices over an arbitrary [`Scalar`].
//!
//! The lattice operators of this crate have bandwidth at most four, and every
//! identity the test suite asserts about them is exact, so the natural store
//! is a canonical sparse form: per-row column-sorted entry lists with no
//! explicit zeros. Equality of canonical forms is then structural equality,
//! and products of n x n band matrices cost O(n) instead of O(n^3).

use crate::scalar::Scalar;
use std::collections::BTreeMap;

/// Sparse matrix in canonical row-major form.
///
/// Invariants: each row is sorted by column index, holds no zero entries, and
/// no column index repeats. All constructors and operations preserve this,
/// which makes derived equality exact equality of matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix<T: Scalar> {
    nrows: usize,
    ncols: usize,
    rows: Vec<Vec<(usize, T)>>,
}

impl<T: Scalar> SparseMatrix<T> {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols,
            rows: vec![Vec::new(); nrows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n).map(|i| vec![(i, T::one())]).collect();
        Self {
            nrows: n,
            ncols: n,
            rows,
        }
    }

    /// Builds from (row, col, value) triplets; duplicate positions accumulate.
    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, T)>,
    ) -> Self {
        let mut maps: Vec<BTreeMap<usize, T>> = vec![BTreeMap::new(); nrows];
        for (r, c, v) in triplets {
            assert!(r < nrows && c < ncols, "triplet ({r},{c}) out of bounds");
            let slot = maps[r].entry(c).or_insert_with(T::zero);
            *slot = slot.add_exact(v);
        }
        let rows = maps
            .into_iter()
            .map(|m| m.into_iter().filter(|(_, v)| !v.is_zero()).collect())
            .collect();
        Self { nrows, ncols, rows }
    }

    pub fn from_dense_rows(rows: &[Vec<T>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        Self::from_triplets(
            nrows,
            ncols,
            rows.iter().enumerate().flat_map(|(i, row)| {
                assert_eq!(row.len(), ncols, "ragged dense rows");
                row.iter().enumerate().map(move |(j, &v)| (i, j, v))
            }),
        )
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn is_square(&self) -> bool {
        self.nrows == self.ncols
    }

    pub fn row(&self, i: usize) -> &[(usize, T)] {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.rows[i]
            .binary_search_by_key(&j, |&(c, _)| c)
            .map_or_else(|_| T::zero(), |k| self.rows[i][k].1)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().map(move |&(j, v)| (i, j, v)))
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(self.nrows)
    }

    pub fn transpose(&self) -> Self {
        Self::from_triplets(
            self.ncols,
            self.nrows,
            self.entries().map(|(i, j, v)| (j, i, v)),
        )
    }

    pub fn map<U: Scalar>(&self, mut f: impl FnMut(T) -> U) -> SparseMatrix<U> {
        SparseMatrix::from_triplets(
            self.nrows,
            self.ncols,
            self.entries().map(|(i, j, v)| (i, j, f(v))),
        )
    }

    pub fn scale(&self, k: T) -> Self {
        self.map(|v| v.mul_exact(k))
    }

    pub fn neg(&self) -> Self {
        self.map(Scalar::neg_exact)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        Self::from_triplets(
            self.nrows,
            self.ncols,
            self.entries().chain(other.entries()),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(
            self.ncols, other.nrows,
            "inner dimensions {} and {} differ",
            self.ncols, other.nrows
        );
        let mut rows = Vec::with_capacity(self.nrows);
        for row in &self.rows {
            let mut acc: BTreeMap<usize, T> = BTreeMap::new();
            for &(k, a) in row {
                for &(j, b) in &other.rows[k] {
                    let slot = acc.entry(j).or_insert_with(T::zero);
                    *slot = slot.add_exact(a.mul_exact(b));
                }
            }
            rows.push(
                acc.into_iter()
                    .filter(|(_, v)| !v.is_zero())
                    .collect::<Vec<_>>(),
            );
        }
        Self {
            nrows: self.nrows,
            ncols: other.ncols,
            rows,
        }
    }

    /// Matrix-vector product, rows in order (deterministic accumulation).
    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.ncols);
        self.rows
            .iter()
            .map(|row| {
                let mut acc = T::zero();
                for &(j, val) in row {
                    acc = acc.add_exact(val.mul_exact(v[j]));
                }
                acc
            })
            .collect()
    }

    /// Repeated-squaring power of a square matrix.
    pub fn pow(&self, mut e: u64) -> Self {
        assert!(self.is_square());
        let mut result = Self::identity(self.nrows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.matmul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.matmul(&base);
            }
        }
        result
    }
}

impl SparseMatrix<i64> {
    /// Dense f64 image; every stored entry must be exactly representable.
    pub fn to_real(&self) -> nalgebra::DMatrix<f64> {
        let mut m = nalgebra::DMatrix::zeros(self.nrows, self.ncols);
        for (i, j, v) in self.entries() {
            assert!(
                v.abs() < (1i64 << 53),
                "entry {v} too large for exact f64 conversion"
            );
            m[(i, j)] = v as f64;
        }
        m
    }

    pub fn to_complex(&self) -> nalgebra::DMatrix<num_complex::Complex<f64>> {
        self.to_real().map(|v| num_complex::Complex::new(v, 0.0))
    }

    /// Sparse f64 image; every stored entry must be exactly representable.
    pub fn to_real_sparse(&self) -> SparseMatrix<f64> {
        self.map(|v| {
            assert!(
                v.abs() < (1i64 << 53),
                "entry {v} too large for exact f64 conversion"
            );
            v as f64
        })
    }

    /// Exact determinant by fraction-free (Bareiss) elimination over i128.
    pub fn det_exact(&self) -> i128 {
        assert!(self.is_square());
        let n = self.nrows;
        if n == 0 {
            return 1;
        }
        let mut a: Vec<Vec<i128>> = vec![vec![0; n]; n];
        for (i, j, v) in self.entries() {
            a[i][j] = i128::from(v);
        }
        let mut sign: i128 = 1;
        let mut prev: i128 = 1;
        for k in 0..n - 1 {
            if a[k][k] == 0 {
                let Some(p) = (k + 1..n).find(|&p| a[p][k] != 0) else {
                    return 0;
                };
                a.swap(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = a[k][k]
                        .checked_mul(a[i][j])
                        .and_then(|x| a[i][k].checked_mul(a[k][j]).map(|y| x - y))
                        .expect("overflow in exact determinant");
                    a[i][j] = num / prev;
                }
                a[i][k] = 0;
            }
            prev = a[k][k];
        }
        sign * a[n - 1][n - 1]
    }
}
