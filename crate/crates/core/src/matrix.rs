//! Dense row-major matrices and column/row permutations.

use std::fmt;
use std::ops::Index;

use crate::error::{Error, Result};
use crate::numeric::{Rational, Scalar};

/// Dense `rows x cols` matrix in row-major order. Zero-sized dimensions are
/// allowed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T = Rational> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Builds from a list of rows. An empty list gives a 0x0 matrix.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(m * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            data.extend(row);
        }
        Ok(Matrix {
            rows: m,
            cols: n,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&T> {
        (i < self.rows && j < self.cols).then(|| &self.data[i * self.cols + j])
    }

    pub fn set(&mut self, i: usize, j: usize, value: T) -> Result<()> {
        if i >= self.rows {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: self.rows,
            });
        }
        if j >= self.cols {
            return Err(Error::IndexOutOfRange {
                index: j,
                len: self.cols,
            });
        }
        self.data[i * self.cols + j] = value;
        Ok(())
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[T]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<T> {
        self.data
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub(crate) fn at_mut(&mut self, i: usize, j: usize) -> &mut T {
        &mut self.data[i * self.cols + j]
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let (lo, hi) = (a.min(b), a.max(b));
        let (head, tail) = self.data.split_at_mut(hi * self.cols);
        head[lo * self.cols..(lo + 1) * self.cols].swap_with_slice(&mut tail[..self.cols]);
    }

    /// Disjoint borrows of row `src` (shared) and row `dst` (mutable).
    pub(crate) fn row_pair_mut(&mut self, src: usize, dst: usize) -> (&[T], &mut [T]) {
        assert_ne!(src, dst);
        let c = self.cols;
        if src < dst {
            let (head, tail) = self.data.split_at_mut(dst * c);
            (&head[src * c..(src + 1) * c], &mut tail[..c])
        } else {
            let (head, tail) = self.data.split_at_mut(src * c);
            (&tail[..c], &mut head[dst * c..(dst + 1) * c])
        }
    }

    pub(crate) fn row_mut(&mut self, i: usize) -> &mut [T] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }
}

impl<T: Clone> Matrix<T> {
    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn column_matrix(v: Vec<T>) -> Self {
        Matrix {
            rows: v.len(),
            cols: 1,
            data: v,
        }
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self[(i, j)].clone());
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// Rows and columns at the given indices, which must be strictly
    /// increasing and in range.
    pub fn submatrix(&self, row_idx: &[usize], col_idx: &[usize]) -> Result<Self> {
        check_indices(row_idx, self.rows)?;
        check_indices(col_idx, self.cols)?;
        Ok(self.select(row_idx, col_idx))
    }

    /// Like [`Matrix::submatrix`] but accepts indices in any order.
    pub(crate) fn select(&self, row_idx: &[usize], col_idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(row_idx.len() * col_idx.len());
        for &i in row_idx {
            for &j in col_idx {
                data.push(self[(i, j)].clone());
            }
        }
        Matrix {
            rows: row_idx.len(),
            cols: col_idx.len(),
            data,
        }
    }

    pub(crate) fn select_columns(&self, col_idx: &[usize]) -> Self {
        let all: Vec<usize> = (0..self.rows).collect();
        self.select(&all, col_idx)
    }

    pub(crate) fn select_rows(&self, row_idx: &[usize]) -> Self {
        let all: Vec<usize> = (0..self.cols).collect();
        self.select(row_idx, &all)
    }

    /// `[self other]`
    pub fn hstack(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "hstack of {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut data = Vec::with_capacity(self.data.len() + other.data.len());
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(other.row(i));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols + other.cols,
            data,
        })
    }

    /// `[self; other]`
    pub fn vstack(&self, other: &Self) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "vstack of {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = T::one();
        }
        m
    }

    pub fn from_i64_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.as_ref().iter().map(|&v| T::from_i64(v)).collect())
                .collect(),
        )
    }

    pub fn from_rational(m: &Matrix<Rational>) -> Self {
        m.map(T::from_rational)
    }

    /// Exact product in rational mode. An `m x 0` times `0 x n` product is
    /// the `m x n` zero matrix.
    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_exact_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let p = a.mul_ref(&rhs[(k, j)]);
                    let slot = out.at_mut(i, j);
                    *slot = slot.add_ref(&p);
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        if self.shape() != rhs.shape() {
            return Err(Error::DimensionMismatch(format!(
                "cannot subtract {}x{} and {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.sub_ref(b))
                .collect(),
        })
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.data.iter().all(Scalar::is_exact_zero)
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        self.row_iter()
            .map(|r| r.iter().map(Scalar::magnitude).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn apply_col_permutation(&self, p: &Permutation) -> Result<Self> {
        apply_col_permutation(self, p)
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i}, {j}) out of range"
        );
        &self.data[i * self.cols + j]
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.data.iter().map(ToString::to_string).collect();
        let mut widths = vec![0usize; self.cols];
        for (k, c) in cells.iter().enumerate() {
            let j = k % self.cols.max(1);
            widths[j] = widths[j].max(c.chars().count());
        }
        for i in 0..self.rows {
            let line: Vec<String> = (0..self.cols)
                .map(|j| format!("{:>w$}", cells[i * self.cols + j], w = widths[j]))
                .collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            f.debug_list()
                .entries(&self.data[i * self.cols..(i + 1) * self.cols])
                .finish()?;
        }
        write!(f, "]")
    }
}

fn check_indices(idx: &[usize], len: usize) -> Result<()> {
    for (k, &i) in idx.iter().enumerate() {
        if i >= len {
            return Err(Error::IndexOutOfRange { index: i, len });
        }
        if k > 0 && idx[k - 1] >= i {
            return Err(Error::NonIncreasingIndices);
        }
    }
    Ok(())
}

/// Permutation of `n` positions stored as an index array.
///
/// `positions[i]` is the original index that sits at position `i` of the
/// reordered (pivot-first) arrangement. Viewed as a 0/1 matrix `P` with
/// `P[i][positions[i]] = 1`, right-multiplying a pivot-first matrix by `P`
/// scatters its columns back to their original places.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    positions: Vec<usize>,
}

impl Permutation {
    pub fn new(positions: Vec<usize>) -> Result<Self> {
        let n = positions.len();
        let mut seen = vec![false; n];
        for &p in &positions {
            if p >= n || seen[p] {
                return Err(Error::InvalidPermutation(format!(
                    "{positions:?} is not a bijection on 0..{n}"
                )));
            }
            seen[p] = true;
        }
        Ok(Permutation { positions })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            positions: (0..n).collect(),
        }
    }

    /// The given indices first (in the given order), then every other index
    /// in increasing order.
    pub fn leading(first: &[usize], n: usize) -> Result<Self> {
        let mut used = vec![false; n];
        let mut positions = Vec::with_capacity(n);
        for &i in first {
            if i >= n {
                return Err(Error::IndexOutOfRange { index: i, len: n });
            }
            if used[i] {
                return Err(Error::InvalidPermutation(format!("index {i} repeated")));
            }
            used[i] = true;
            positions.push(i);
        }
        positions.extend((0..n).filter(|&i| !used[i]));
        Ok(Permutation { positions })
    }

    /// Exchanges positions `a` and `b` of the identity.
    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut p = Self::identity(n);
        p.positions.swap(a, b);
        p
    }

    pub fn size(&self) -> usize {
        self.positions.len()
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn is_identity(&self) -> bool {
        self.positions.iter().enumerate().all(|(i, &p)| i == p)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.positions.len()];
        for (i, &p) in self.positions.iter().enumerate() {
            inv[p] = i;
        }
        Permutation { positions: inv }
    }

    /// Explicit 0/1 matrix, for verification products only.
    pub fn to_matrix<T: Scalar>(&self) -> Matrix<T> {
        let n = self.size();
        let mut m = Matrix::zeros(n, n);
        for (i, &p) in self.positions.iter().enumerate() {
            *m.at_mut(i, p) = T::one();
        }
        m
    }

    /// `m * P^T`: column `i` of the result is column `positions[i]` of `m`,
    /// i.e. original order to pivot-first order.
    pub fn gather_columns<T: Clone>(&self, m: &Matrix<T>) -> Result<Matrix<T>> {
        if self.size() != m.cols() {
            return Err(Error::DimensionMismatch(format!(
                "permutation of size {} applied to {} columns",
                self.size(),
                m.cols()
            )));
        }
        Ok(m.select_columns(&self.positions))
    }

    /// `P * m`: row `i` of the result is row `positions[i]` of `m`.
    pub fn permute_rows<T: Clone>(&self, m: &Matrix<T>) -> Result<Matrix<T>> {
        if self.size() != m.rows() {
            return Err(Error::DimensionMismatch(format!(
                "permutation of size {} applied to {} rows",
                self.size(),
                m.rows()
            )));
        }
        Ok(m.select_rows(&self.positions))
    }

    /// 1-based positions, the form printed by the command line.
    pub fn one_based(&self) -> Vec<usize> {
        self.positions.iter().map(|p| p + 1).collect()
    }
}

/// `m * P`: column `i` of `m` (pivot-first order) lands at column
/// `positions[i]` of the result (original order).
pub fn apply_col_permutation<T: Clone>(m: &Matrix<T>, p: &Permutation) -> Result<Matrix<T>> {
    if p.size() != m.cols() {
        return Err(Error::DimensionMismatch(format!(
            "permutation of size {} applied to {} columns",
            p.size(),
            m.cols()
        )));
    }
    Ok(m.select_columns(p.inverse().positions()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type Q = Matrix<Rational>;

    fn example_a() -> Q {
        Q::from_i64_rows(&[[1, 2, 11, 17], [3, 7, 37, 57], [4, 9, 48, 74]]).unwrap()
    }

    #[test]
    fn matmul_c_times_r() {
        let c = Q::from_i64_rows(&[[1, 2], [3, 7], [4, 9]]).unwrap();
        let r = Q::from_i64_rows(&[[1, 0, 3, 5], [0, 1, 4, 6]]).unwrap();
        assert_eq!(c.matmul(&r).unwrap(), example_a());
        assert_eq!(Q::identity(3).matmul(&example_a()).unwrap(), example_a());
        let a = Q::zeros(2, 3);
        let b = Q::zeros(4, 2);
        assert!(matches!(a.matmul(&b), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn empty_products() {
        let c = Q::zeros(3, 0);
        let r = Q::zeros(0, 4);
        let p = c.matmul(&r).unwrap();
        assert_eq!(p.shape(), (3, 4));
        assert!(p.is_zero_matrix());
    }

    #[test]
    fn col_permutation_examples() {
        let i_f = Q::from_i64_rows(&[[1, 0, 2, 1], [0, 1, 0, 1]]).unwrap();
        let p = Permutation::transposition(4, 1, 2);
        let expected = Q::from_i64_rows(&[[1, 2, 0, 1], [0, 0, 1, 1]]).unwrap();
        assert_eq!(apply_col_permutation(&i_f, &p).unwrap(), expected);
        assert_eq!(
            apply_col_permutation(&i_f, &Permutation::identity(4)).unwrap(),
            i_f
        );
        assert!(matches!(
            apply_col_permutation(&i_f, &Permutation::identity(3)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn submatrix_examples() {
        let a = example_a();
        assert_eq!(
            a.submatrix(&[0, 1], &[0, 1]).unwrap(),
            Q::from_i64_rows(&[[1, 2], [3, 7]]).unwrap()
        );
        assert_eq!(a.submatrix(&[0, 1, 2], &[0, 1, 2, 3]).unwrap(), a);
        assert_eq!(
            a.submatrix(&[0, 2], &[1, 3]).unwrap(),
            Q::from_i64_rows(&[[2, 17], [9, 74]]).unwrap()
        );
        assert_eq!(
            a.submatrix(&[0, 3], &[0]),
            Err(Error::IndexOutOfRange { index: 3, len: 3 })
        );
        assert_eq!(a.submatrix(&[1, 0], &[0]), Err(Error::NonIncreasingIndices));
        assert_eq!(a.submatrix(&[1, 1], &[0]), Err(Error::NonIncreasingIndices));
    }

    #[test]
    fn permutation_validation() {
        assert!(Permutation::new(vec![0, 0]).is_err());
        assert!(Permutation::new(vec![1, 2]).is_err());
        let p = Permutation::leading(&[2, 0], 4).unwrap();
        assert_eq!(p.positions(), &[2, 0, 1, 3]);
        assert!(Permutation::leading(&[4], 4).is_err());
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(Q::from_rows(vec![vec![Rational::one()], vec![]]).is_err());
        assert_eq!(Q::from_rows(vec![]).unwrap().shape(), (0, 0));
    }

    #[test]
    fn display_aligns_columns() {
        let m = Q::from_i64_rows(&[[1, -20], [300, 4]]).unwrap();
        assert_eq!(m.to_string(), "  1 -20\n300   4\n");
    }

    fn arb_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Q> {
        proptest::collection::vec(-9i64..=9, rows * cols).prop_map(move |v| {
            Q::new(
                rows,
                cols,
                v.into_iter().map(Rational::from_integer).collect(),
            )
            .unwrap()
        })
    }

    fn arb_perm(n: usize) -> impl Strategy<Value = Permutation> {
        Just((0..n).collect::<Vec<_>>())
            .prop_shuffle()
            .prop_map(|v| Permutation::new(v).unwrap())
    }

    proptest! {
        #[test]
        fn permutation_inverse_round_trip((m, p) in (0usize..5, 0usize..6)
            .prop_flat_map(|(r, c)| (arb_matrix(r, c), arb_perm(c))))
        {
            let moved = apply_col_permutation(&m, &p).unwrap();
            prop_assert_eq!(apply_col_permutation(&moved, &p.inverse()).unwrap(), m.clone());
            prop_assert_eq!(p.gather_columns(&moved).unwrap(), m);
        }

        #[test]
        fn permutation_is_matrix_product((m, p) in (0usize..5, 0usize..6)
            .prop_flat_map(|(r, c)| (arb_matrix(r, c), arb_perm(c))))
        {
            let pm: Q = p.to_matrix();
            prop_assert_eq!(apply_col_permutation(&m, &p).unwrap(), m.matmul(&pm).unwrap());
            let ppt = pm.matmul(&pm.transpose()).unwrap();
            prop_assert_eq!(ppt, Q::identity(p.size()));
            prop_assert_eq!(p.permute_rows(&pm.transpose()).unwrap(), Q::identity(p.size()));
        }

        #[test]
        fn matmul_associative((a, b, c) in (1usize..4, 1usize..4, 1usize..4, 1usize..4)
            .prop_flat_map(|(m, k, l, n)| (arb_matrix(m, k), arb_matrix(k, l), arb_matrix(l, n))))
        {
            let left = a.matmul(&b).unwrap().matmul(&c).unwrap();
            let right = a.matmul(&b.matmul(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }
    }
}
