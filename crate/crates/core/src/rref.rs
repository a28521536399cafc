//! Gauss-Jordan elimination to reduced row echelon form.
//!
//! The engine works one column at a time, left to right. After `k` columns
//! the consumed part of the working matrix is itself in reduced echelon form
//! `[I F; 0 0]` (up to the column permutation). The next column is split into
//! an upper part `u` (rows of existing pivots) and a lower part `l`. If `l`
//! is zero the column depends on earlier pivot columns and `u` becomes a new
//! column of `F`; otherwise a pivot is picked from `l`, swapped up to the top
//! of `l`, scaled to one and eliminated from every other row.
//!
//! Row operations are applied eagerly to all trailing columns.

use std::ops::AddAssign;

use crate::error::{Error, Result};
use crate::matrix::{apply_col_permutation, Matrix, Permutation};
use crate::numeric::{Scalar, ZeroPolicy};

/// How a pivot is chosen among the nonzero entries of the lower part.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PivotRule {
    /// Topmost nonzero entry.
    #[default]
    FirstNonzero,
    /// Entry of largest magnitude; ties go to the topmost.
    LargestMagnitude,
}

impl PivotRule {
    /// `FirstNonzero` for exact arithmetic, `LargestMagnitude` otherwise.
    pub fn default_for(policy: &ZeroPolicy) -> Self {
        if policy.is_exact() {
            PivotRule::FirstNonzero
        } else {
            PivotRule::LargestMagnitude
        }
    }
}

/// Arithmetic operation counts. Comparisons and zero tests are free; each
/// eliminated entry costs one multiplication and one subtraction and each
/// scaled entry one division.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub struct OpCount {
    pub mults: u64,
    pub divs: u64,
    pub add_subs: u64,
    pub row_swaps: u64,
}

impl OpCount {
    /// Arithmetic operations, excluding row swaps.
    pub fn total(&self) -> u64 {
        self.mults + self.divs + self.add_subs
    }
}

impl AddAssign for OpCount {
    fn add_assign(&mut self, rhs: Self) {
        self.mults += rhs.mults;
        self.divs += rhs.divs;
        self.add_subs += rhs.add_subs;
        self.row_swaps += rhs.row_swaps;
    }
}

/// The three elementary row operations.
#[derive(Debug, Clone, PartialEq)]
pub enum RowOp<T> {
    /// `row[dst] -= factor * row[src]`
    SubtractMultiple {
        src: usize,
        dst: usize,
        factor: T,
    },
    Swap(usize, usize),
    /// `row /= divisor`
    Scale {
        row: usize,
        divisor: T,
    },
}

impl<T: Scalar> RowOp<T> {
    /// Cost of applying this operation to a matrix with `cols` columns.
    pub fn cost(&self, cols: usize) -> OpCount {
        let c = cols as u64;
        match self {
            RowOp::SubtractMultiple { .. } => OpCount {
                mults: c,
                add_subs: c,
                ..OpCount::default()
            },
            RowOp::Swap(i, j) => OpCount {
                row_swaps: u64::from(i != j),
                ..OpCount::default()
            },
            RowOp::Scale { .. } => OpCount {
                divs: c,
                ..OpCount::default()
            },
        }
    }

    /// The operation that undoes this one.
    pub fn inverse(&self) -> Self {
        match self {
            RowOp::SubtractMultiple { src, dst, factor } => RowOp::SubtractMultiple {
                src: *src,
                dst: *dst,
                factor: factor.neg_ref(),
            },
            RowOp::Swap(i, j) => RowOp::Swap(*i, *j),
            RowOp::Scale { row, divisor } => RowOp::Scale {
                row: *row,
                divisor: T::one().div_ref(divisor),
            },
        }
    }
}

/// Applies one row operation, returning the transformed matrix. The caller
/// accounts for the cost with [`RowOp::cost`].
pub fn row_op<T: Scalar>(m: &Matrix<T>, op: &RowOp<T>) -> Result<Matrix<T>> {
    let mut out = m.clone();
    apply_row_op(&mut out, op)?;
    Ok(out)
}

fn check_row(i: usize, rows: usize) -> Result<()> {
    if i >= rows {
        return Err(Error::IndexOutOfRange {
            index: i,
            len: rows,
        });
    }
    Ok(())
}

pub(crate) fn apply_row_op<T: Scalar>(m: &mut Matrix<T>, op: &RowOp<T>) -> Result<()> {
    let rows = m.rows();
    match op {
        RowOp::SubtractMultiple { src, dst, factor } => {
            check_row(*src, rows)?;
            check_row(*dst, rows)?;
            if src == dst {
                return Err(Error::SameRow);
            }
            let (s, d) = m.row_pair_mut(*src, *dst);
            for (x, y) in d.iter_mut().zip(s) {
                x.sub_mul_assign(factor, y);
            }
        }
        RowOp::Swap(i, j) => {
            check_row(*i, rows)?;
            check_row(*j, rows)?;
            m.swap_rows(*i, *j);
        }
        RowOp::Scale { row, divisor } => {
            check_row(*row, rows)?;
            if divisor.is_exact_zero() {
                return Err(Error::ZeroScaleDivisor);
            }
            for x in m.row_mut(*row) {
                *x = x.div_ref(divisor);
            }
        }
    }
    Ok(())
}

/// Result of a full reduction `Z = rref(A) = [I F; 0 0] P`.
#[derive(Debug, Clone, PartialEq)]
pub struct EchelonForm<T> {
    pub rank: usize,
    /// Original indices of the pivot columns, increasing.
    pub pivot_cols: Vec<usize>,
    /// Original indices of the remaining columns, increasing.
    pub free_cols: Vec<usize>,
    /// Original indices of the rows that supplied each pivot, in pivot order.
    pub pivot_rows: Vec<usize>,
    /// Pivot entries before they were scaled to one.
    pub pivot_values: Vec<T>,
    /// `rank x (n - rank)`
    pub f: Matrix<T>,
    /// Pivot columns first, then free columns.
    pub p: Permutation,
    pub z: Matrix<T>,
    /// `E A = Z`, when tracking was requested.
    pub e: Option<Matrix<T>>,
    pub op_count: OpCount,
}

impl<T: Scalar> EchelonForm<T> {
    pub fn rows(&self) -> usize {
        self.z.rows()
    }

    pub fn cols(&self) -> usize {
        self.z.cols()
    }

    /// `[I F; 0 0] P`, rebuilt from `F` and `P` alone.
    pub fn reconstruct_z(&self) -> Matrix<T> {
        let (m, n) = (self.rows(), self.cols());
        let top = Matrix::identity(self.rank)
            .hstack(&self.f)
            .expect("F has rank rows");
        let full = top
            .vstack(&Matrix::zeros(m - self.rank, n))
            .expect("widths agree");
        apply_col_permutation(&full, &self.p).expect("P has n positions")
    }

    /// `det(E)` from the run itself: every swap contributes `-1` and every
    /// pivot scaling `1 / pivot`.
    pub fn elimination_determinant(&self) -> T {
        let mut d = if self.op_count.row_swaps.is_multiple_of(2) {
            T::one()
        } else {
            T::one().neg_ref()
        };
        for p in &self.pivot_values {
            d = d.div_ref(p);
        }
        d
    }
}

/// What happened to a consumed column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnOutcome {
    /// Independent column; the pivot came from working row `from_row`.
    Pivot { from_row: usize },
    /// Dependent on the pivot columns to its left.
    Dependent,
}

/// Column-by-column elimination state.
#[derive(Debug, Clone)]
pub struct IncrementalState<T> {
    work: Matrix<T>,
    e: Option<Matrix<T>>,
    col_scales: Vec<f64>,
    consumed: usize,
    pivot_cols: Vec<usize>,
    free_cols: Vec<usize>,
    pivot_values: Vec<T>,
    row_order: Vec<usize>,
    op_count: OpCount,
    policy: ZeroPolicy,
    rule: PivotRule,
}

impl<T: Scalar> IncrementalState<T> {
    pub fn new(a: &Matrix<T>, policy: ZeroPolicy, rule: PivotRule, track_e: bool) -> Self {
        let col_scales = (0..a.cols())
            .map(|j| a.row_iter().map(|r| r[j].magnitude()).fold(0.0, f64::max))
            .collect();
        IncrementalState {
            work: a.clone(),
            e: track_e.then(|| Matrix::identity(a.rows())),
            col_scales,
            consumed: 0,
            pivot_cols: Vec::new(),
            free_cols: Vec::new(),
            pivot_values: Vec::new(),
            row_order: (0..a.rows()).collect(),
            op_count: OpCount::default(),
            policy,
            rule,
        }
    }

    /// Columns consumed so far.
    pub fn k(&self) -> usize {
        self.consumed
    }

    pub fn rank_so_far(&self) -> usize {
        self.pivot_cols.len()
    }

    pub fn remaining(&self) -> usize {
        self.work.cols() - self.consumed
    }

    pub fn pivot_cols(&self) -> &[usize] {
        &self.pivot_cols
    }

    pub fn free_cols(&self) -> &[usize] {
        &self.free_cols
    }

    /// Original row index now sitting at each working row.
    pub fn row_order(&self) -> &[usize] {
        &self.row_order
    }

    /// The full working matrix, trailing columns included.
    pub fn working(&self) -> &Matrix<T> {
        &self.work
    }

    pub fn op_count(&self) -> OpCount {
        self.op_count
    }

    /// `P_k` over the consumed columns.
    pub fn permutation_so_far(&self) -> Permutation {
        Permutation::leading(&self.pivot_cols, self.consumed).expect("pivots are consumed columns")
    }

    /// The consumed columns of the working matrix.
    pub fn leading_block(&self) -> Matrix<T> {
        self.work
            .select_columns(&(0..self.consumed).collect::<Vec<_>>())
    }

    fn column_scale(&self, j: usize) -> f64 {
        let current = self
            .work
            .row_iter()
            .map(|r| r[j].magnitude())
            .fold(0.0, f64::max);
        current.max(self.col_scales[j])
    }

    fn choose_pivot(&self, j: usize, scale: f64) -> Option<usize> {
        let r = self.rank_so_far();
        let mut candidates = (r..self.work.rows())
            .filter(|&i| !self.policy.is_zero_scaled(&self.work[(i, j)], scale));
        match self.rule {
            PivotRule::FirstNonzero => candidates.next(),
            PivotRule::LargestMagnitude => {
                candidates.fold(None, |best: Option<usize>, i| match best {
                    Some(b)
                        if self.work[(b, j)].cmp_magnitude(&self.work[(i, j)])
                            != std::cmp::Ordering::Less =>
                    {
                        Some(b)
                    }
                    _ => Some(i),
                })
            }
        }
    }

    /// Consumes the next column: either it joins the identity block as a new
    /// pivot, or its upper part joins `F`.
    pub fn consume_column(&mut self) -> Result<ColumnOutcome> {
        if self.remaining() == 0 {
            return Err(Error::NoColumnsRemaining);
        }
        let j = self.consumed;
        let r = self.rank_so_far();
        let (m, n) = self.work.shape();
        let scale = self.column_scale(j);
        self.consumed += 1;

        let Some(p) = self.choose_pivot(j, scale) else {
            // Entries judged zero in the lower part are cleared so the zero
            // rows of Z are exact.
            for i in r..m {
                *self.work.at_mut(i, j) = T::zero();
            }
            self.free_cols.push(j);
            return Ok(ColumnOutcome::Dependent);
        };

        if p != r {
            self.work.swap_rows(p, r);
            if let Some(e) = self.e.as_mut() {
                e.swap_rows(p, r);
            }
            self.row_order.swap(p, r);
            self.op_count.row_swaps += 1;
        }

        let pivot = self.work[(r, j)].clone();
        for c in j + 1..n {
            let v = self.work[(r, c)].div_ref(&pivot);
            *self.work.at_mut(r, c) = v;
        }
        *self.work.at_mut(r, j) = T::one();
        self.op_count.divs += (n - j - 1) as u64;
        if let Some(e) = self.e.as_mut() {
            for x in e.row_mut(r) {
                *x = x.div_ref(&pivot);
            }
        }

        for i in (0..m).filter(|&i| i != r) {
            let factor = self.work[(i, j)].clone();
            if factor.is_exact_zero() {
                continue;
            }
            let (src, dst) = self.work.row_pair_mut(r, i);
            for c in j + 1..n {
                dst[c].sub_mul_assign(&factor, &src[c]);
            }
            dst[j] = T::zero();
            self.op_count.mults += (n - j - 1) as u64;
            self.op_count.add_subs += (n - j - 1) as u64;
            if let Some(e) = self.e.as_mut() {
                let (src, dst) = e.row_pair_mut(r, i);
                for (x, y) in dst.iter_mut().zip(src) {
                    x.sub_mul_assign(&factor, y);
                }
            }
        }

        self.pivot_cols.push(j);
        self.pivot_values.push(pivot);
        Ok(ColumnOutcome::Pivot { from_row: p })
    }

    /// Echelon form of the consumed columns. Unconsumed trailing columns
    /// (such as an augmented right-hand side) are left out of `Z` and `F`.
    pub fn into_echelon(self) -> EchelonForm<T> {
        let k = self.consumed;
        let rank = self.pivot_cols.len();
        let z = self.work.select_columns(&(0..k).collect::<Vec<_>>());
        let top_rows: Vec<usize> = (0..rank).collect();
        let f = z.select(&top_rows, &self.free_cols);
        let p = Permutation::leading(&self.pivot_cols, k).expect("pivots are consumed columns");
        EchelonForm {
            rank,
            pivot_rows: self.row_order[..rank].to_vec(),
            pivot_cols: self.pivot_cols,
            free_cols: self.free_cols,
            pivot_values: self.pivot_values,
            f,
            p,
            z,
            e: self.e,
            op_count: self.op_count,
        }
    }

    /// Consumes every remaining column and returns the echelon form.
    pub fn finish(mut self) -> EchelonForm<T> {
        while self.remaining() > 0 {
            self.consume_column().expect("columns remain");
        }
        self.into_echelon()
    }
}

/// Reduces `a` to `Z = [I F; 0 0] P`. Total: empty and zero matrices give
/// rank 0.
pub fn rref<T: Scalar>(
    a: &Matrix<T>,
    policy: ZeroPolicy,
    rule: PivotRule,
    track_e: bool,
) -> EchelonForm<T> {
    IncrementalState::new(a, policy, rule, track_e).finish()
}

/// Forward elimination output: `U x = c` has the same solutions as `A x = b`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussForward<T> {
    pub u: Matrix<T>,
    pub c: Vec<T>,
    pub rank: usize,
    pub op_count: OpCount,
}

/// Gaussian elimination downwards only, to row echelon form. Pivots are not
/// scaled. Works for any `m x n`; square invertible input yields an upper
/// triangular `U`.
pub fn gauss_forward<T: Scalar>(
    a: &Matrix<T>,
    b: &[T],
    policy: ZeroPolicy,
) -> Result<GaussForward<T>> {
    let (m, n) = a.shape();
    if b.len() != m {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side has {} entries for {m} rows",
            b.len()
        )));
    }
    let rule = PivotRule::default_for(&policy);
    let mut u = a.clone();
    let mut c = b.to_vec();
    let mut ops = OpCount::default();
    let mut r = 0;
    for j in 0..n {
        if r == m {
            break;
        }
        let scale = a
            .row_iter()
            .chain(u.row_iter())
            .map(|row| row[j].magnitude())
            .fold(0.0, f64::max);
        let mut candidates = (r..m).filter(|&i| !policy.is_zero_scaled(&u[(i, j)], scale));
        let pick = match rule {
            PivotRule::FirstNonzero => candidates.next(),
            PivotRule::LargestMagnitude => {
                candidates.fold(None, |best: Option<usize>, i| match best {
                    Some(b) if u[(b, j)].cmp_magnitude(&u[(i, j)]) != std::cmp::Ordering::Less => {
                        Some(b)
                    }
                    _ => Some(i),
                })
            }
        };
        let Some(p) = pick else {
            for i in r..m {
                *u.at_mut(i, j) = T::zero();
            }
            continue;
        };
        if p != r {
            u.swap_rows(p, r);
            c.swap(p, r);
            ops.row_swaps += 1;
        }
        for i in r + 1..m {
            if u[(i, j)].is_exact_zero() {
                continue;
            }
            let factor = u[(i, j)].div_ref(&u[(r, j)]);
            ops.divs += 1;
            let (src, dst) = u.row_pair_mut(r, i);
            for k in j + 1..n {
                dst[k].sub_mul_assign(&factor, &src[k]);
            }
            dst[j] = T::zero();
            let cr = c[r].clone();
            c[i].sub_mul_assign(&factor, &cr);
            ops.mults += (n - j) as u64;
            ops.add_subs += (n - j) as u64;
        }
        r += 1;
    }
    Ok(GaussForward {
        u,
        c,
        rank: r,
        op_count: ops,
    })
}

/// Solves `U x = c` for square upper triangular `U`, with operation counts.
pub fn back_substitute_counted<T: Scalar>(
    u: &Matrix<T>,
    c: &[T],
    policy: ZeroPolicy,
) -> Result<(Vec<T>, OpCount)> {
    let n = u.rows();
    if !u.is_square() {
        return Err(Error::NotSquare {
            rows: u.rows(),
            cols: u.cols(),
        });
    }
    if c.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side has {} entries for {n} rows",
            c.len()
        )));
    }
    let mut ops = OpCount::default();
    let mut x = vec![T::zero(); n];
    for i in (0..n).rev() {
        let diag = &u[(i, i)];
        if policy.is_zero(diag, &u.column(i)) {
            return Err(Error::SingularTriangular(i));
        }
        let mut s = c[i].clone();
        for j in i + 1..n {
            if u[(i, j)].is_exact_zero() {
                continue;
            }
            s.sub_mul_assign(&u[(i, j)], &x[j]);
            ops.mults += 1;
            ops.add_subs += 1;
        }
        x[i] = s.div_ref(diag);
        ops.divs += 1;
    }
    Ok((x, ops))
}

pub fn back_substitute<T: Scalar>(u: &Matrix<T>, c: &[T], policy: ZeroPolicy) -> Result<Vec<T>> {
    back_substitute_counted(u, c, policy).map(|(x, _)| x)
}

/// Determinant by forward elimination: the signed product of the pivots.
pub fn determinant<T: Scalar>(a: &Matrix<T>, policy: ZeroPolicy) -> Result<T> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    let g = gauss_forward(a, &vec![T::zero(); n], policy)?;
    if g.rank < n {
        return Ok(T::zero());
    }
    let mut d = if g.op_count.row_swaps % 2 == 0 {
        T::one()
    } else {
        T::one().neg_ref()
    };
    for i in 0..n {
        d = d.mul_ref(&g.u[(i, i)]);
    }
    Ok(d)
}
