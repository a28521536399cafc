//! Block elimination of `P_r A P_c = [W H; J K]` to `[I W^-1 H; 0 0]`, and
//! the check that `r` independent rows meet `r` independent columns in an
//! invertible `r x r` block.

use crate::error::{Error, Result};
use crate::matrix::{Matrix, Permutation};
use crate::numeric::{Scalar, ZeroPolicy};
use crate::rref::{rref, PivotRule};

/// `P_r A P_c = [W H; J K]`.
///
/// `row_perm` and `col_perm` list original indices in their new order:
/// row `i` of the permuted matrix is row `row_perm.positions()[i]` of `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockPartition<T> {
    pub w: Matrix<T>,
    pub h: Matrix<T>,
    pub j: Matrix<T>,
    pub k: Matrix<T>,
    pub row_perm: Permutation,
    pub col_perm: Permutation,
}

impl<T: Scalar> BlockPartition<T> {
    pub fn new(
        a: &Matrix<T>,
        row_perm: Permutation,
        col_perm: Permutation,
        r: usize,
    ) -> Result<Self> {
        let (m, n) = a.shape();
        if r > m.min(n) {
            return Err(Error::DimensionMismatch(format!(
                "block size {r} exceeds a {m}x{n} matrix"
            )));
        }
        let permuted = col_perm.gather_columns(&row_perm.permute_rows(a)?)?;
        let top: Vec<usize> = (0..r).collect();
        let bottom: Vec<usize> = (r..m).collect();
        let left: Vec<usize> = (0..r).collect();
        let right: Vec<usize> = (r..n).collect();
        Ok(BlockPartition {
            w: permuted.select(&top, &left),
            h: permuted.select(&top, &right),
            j: permuted.select(&bottom, &left),
            k: permuted.select(&bottom, &right),
            row_perm,
            col_perm,
        })
    }

    pub fn size(&self) -> usize {
        self.w.rows()
    }

    /// `[W H; J K]`
    pub fn assemble(&self) -> Matrix<T> {
        let top = self.w.hstack(&self.h).expect("W and H share rows");
        let bottom = self.j.hstack(&self.k).expect("J and K share rows");
        top.vstack(&bottom).expect("block widths agree")
    }
}

/// LU factors of a square matrix with partial pivoting: `P W = L U`, stored
/// compactly with a unit lower triangle.
#[derive(Debug, Clone)]
pub struct LuFactors<T> {
    lu: Matrix<T>,
    perm: Vec<usize>,
    swaps: usize,
}

impl<T: Scalar> LuFactors<T> {
    /// Fails with `SingularBlock` when a pivot column has no nonzero entry.
    pub fn new(w: &Matrix<T>, policy: ZeroPolicy) -> Result<Self> {
        if !w.is_square() {
            return Err(Error::NotSquare {
                rows: w.rows(),
                cols: w.cols(),
            });
        }
        let n = w.rows();
        let rule = PivotRule::default_for(&policy);
        let mut lu = w.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0;
        for col in 0..n {
            let scale = w
                .column(col)
                .iter()
                .chain(lu.column(col).iter())
                .map(Scalar::magnitude)
                .fold(0.0, f64::max);
            let mut nonzero = (col..n).filter(|&i| !policy.is_zero_scaled(&lu[(i, col)], scale));
            let pivot = match rule {
                PivotRule::FirstNonzero => nonzero.next(),
                PivotRule::LargestMagnitude => nonzero
                    .max_by(|&a, &b| lu[(a, col)].cmp_magnitude(&lu[(b, col)]).then(b.cmp(&a))),
            }
            .ok_or(Error::SingularBlock(n))?;
            if pivot != col {
                lu.swap_rows(pivot, col);
                perm.swap(pivot, col);
                swaps += 1;
            }
            let p = lu[(col, col)].clone();
            for i in col + 1..n {
                let l = lu[(i, col)].div_ref(&p);
                if l.is_exact_zero() {
                    continue;
                }
                let (src, dst) = lu.row_pair_mut(col, i);
                for c in col + 1..n {
                    dst[c].sub_mul_assign(&l, &src[c]);
                }
                dst[col] = l;
            }
        }
        Ok(LuFactors { lu, perm, swaps })
    }

    pub fn determinant(&self) -> T {
        let mut d = if self.swaps.is_multiple_of(2) {
            T::one()
        } else {
            T::one().neg_ref()
        };
        for i in 0..self.lu.rows() {
            d = d.mul_ref(&self.lu[(i, i)]);
        }
        d
    }

    /// `W^-1 B` column by column.
    pub fn solve_matrix(&self, b: &Matrix<T>) -> Result<Matrix<T>> {
        let n = self.lu.rows();
        if b.rows() != n {
            return Err(Error::DimensionMismatch(format!(
                "{n}x{n} system with a {}-row right-hand side",
                b.rows()
            )));
        }
        let mut out = Matrix::zeros(n, b.cols());
        for col in 0..b.cols() {
            let mut y: Vec<T> = self.perm.iter().map(|&i| b[(i, col)].clone()).collect();
            for i in 0..n {
                for k in 0..i {
                    let yk = y[k].clone();
                    y[i].sub_mul_assign(&self.lu[(i, k)], &yk);
                }
            }
            for i in (0..n).rev() {
                for k in i + 1..n {
                    let yk = y[k].clone();
                    y[i].sub_mul_assign(&self.lu[(i, k)], &yk);
                }
                y[i] = y[i].div_ref(&self.lu[(i, i)]);
            }
            for (i, v) in y.into_iter().enumerate() {
                *out.at_mut(i, col) = v;
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockElimination<T> {
    pub partition: BlockPartition<T>,
    /// `W^-1 H`
    pub f: Matrix<T>,
    /// `[I F; 0 0]`, in the permuted column order.
    pub reduced: Matrix<T>,
}

/// Eliminates with the leading `r x r` block of `P_r A P_c` as a whole:
/// `F = W^-1 H` by LU of `W`, then checks that the trailing rows vanish,
/// `[J K] = J W^-1 [W H]`, which reduces to `K = J F`.
pub fn block_eliminate<T: Scalar>(
    a: &Matrix<T>,
    row_perm: &Permutation,
    col_perm: &Permutation,
    r: usize,
    policy: ZeroPolicy,
) -> Result<BlockElimination<T>> {
    let partition = BlockPartition::new(a, row_perm.clone(), col_perm.clone(), r)?;
    let lu = LuFactors::new(&partition.w, policy).map_err(|_| Error::SingularBlock(r))?;
    let f = lu.solve_matrix(&partition.h)?;

    let predicted = partition.j.matmul(&f)?;
    for col in 0..partition.k.cols() {
        let scale = partition
            .k
            .column(col)
            .iter()
            .chain(predicted.column(col).iter())
            .map(Scalar::magnitude)
            .fold(0.0, f64::max);
        for row in 0..partition.k.rows() {
            let diff = partition.k[(row, col)].sub_ref(&predicted[(row, col)]);
            if !policy.is_zero_scaled(&diff, scale) {
                return Err(Error::RankMismatch(r));
            }
        }
    }

    let (m, n) = a.shape();
    let reduced = Matrix::identity(r)
        .hstack(&f)?
        .vstack(&Matrix::zeros(m - r, n))?;
    Ok(BlockElimination {
        partition,
        f,
        reduced,
    })
}

/// Moves pivot rows and pivot columns (found by elimination) to the front,
/// so the leading `r x r` block is invertible.
pub fn find_invertible_block<T: Scalar>(a: &Matrix<T>, policy: ZeroPolicy) -> BlockPartition<T> {
    let ech = rref(a, policy, PivotRule::default_for(&policy), false);
    let row_perm =
        Permutation::leading(&ech.pivot_rows, a.rows()).expect("pivot rows are distinct");
    let col_perm =
        Permutation::leading(&ech.pivot_cols, a.cols()).expect("pivot columns are distinct");
    BlockPartition::new(a, row_perm, col_perm, ech.rank).expect("rank fits the matrix")
}

#[derive(Debug, Clone, PartialEq)]
pub struct Intersection<T> {
    pub w: Matrix<T>,
    pub invertible: bool,
    pub det: T,
}

/// Extracts `W`, the crossing of the given rows and columns, after checking
/// that there are exactly `rank(A)` of each and that both sets are
/// independent.
pub fn intersection_check<T: Scalar>(
    a: &Matrix<T>,
    row_idx: &[usize],
    col_idx: &[usize],
    policy: ZeroPolicy,
) -> Result<Intersection<T>> {
    let rule = PivotRule::default_for(&policy);
    let rank = rref(a, policy, rule, false).rank;
    if row_idx.len() != rank || col_idx.len() != rank {
        return Err(Error::WrongCardinality {
            expected: rank,
            rows: row_idx.len(),
            cols: col_idx.len(),
        });
    }
    let all_rows: Vec<usize> = (0..a.rows()).collect();
    let all_cols: Vec<usize> = (0..a.cols()).collect();
    let rows = a.submatrix(row_idx, &all_cols)?;
    if rref(&rows, policy, rule, false).rank != rank {
        return Err(Error::DependentRowsGiven);
    }
    let cols = a.submatrix(&all_rows, col_idx)?;
    if rref(&cols, policy, rule, false).rank != rank {
        return Err(Error::DependentColumnsGiven);
    }
    let w = a.submatrix(row_idx, col_idx)?;
    let invertible = rref(&w, policy, rule, false).rank == rank;
    let det = match LuFactors::new(&w, policy) {
        Ok(lu) => lu.determinant(),
        Err(_) => T::zero(),
    };
    Ok(Intersection { w, invertible, det })
}
