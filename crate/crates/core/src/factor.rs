//! Column-row factorization `A = C R`, nullspace bases and general solutions
//! of `A x = b`, all read off the reduced echelon form.

use crate::error::{Error, Result};
use crate::matrix::{apply_col_permutation, Matrix, Permutation};
use crate::numeric::{Scalar, ZeroPolicy};
use crate::rref::{rref, EchelonForm, IncrementalState, OpCount, PivotRule};

/// `A = C R` with `C` the pivot columns of `A` and `R = [I F] P`.
#[derive(Debug, Clone, PartialEq)]
pub struct CrFactorization<T> {
    /// `m x r`, copied from `A`.
    pub c: Matrix<T>,
    /// `r x n`
    pub r: Matrix<T>,
    pub f: Matrix<T>,
    pub p: Permutation,
    pub pivot_cols: Vec<usize>,
}

impl<T: Scalar> CrFactorization<T> {
    pub fn rank(&self) -> usize {
        self.pivot_cols.len()
    }

    /// `C R`; the `m x 0` by `0 x n` case is the zero matrix.
    pub fn product(&self) -> Matrix<T> {
        self.c
            .matmul(&self.r)
            .expect("C has r columns, R has r rows")
    }

    /// `||A - C R||_inf`
    pub fn residual_inf(&self, a: &Matrix<T>) -> Result<f64> {
        Ok(a.sub(&self.product())?.norm_inf())
    }

    /// Exact equality for exact scalars, otherwise
    /// `||A - C R||_inf <= rel_tol * ||A||_inf`.
    pub fn verify(&self, a: &Matrix<T>, rel_tol: f64) -> bool {
        if T::EXACT {
            return self.product() == *a;
        }
        match self.residual_inf(a) {
            Ok(res) => res <= rel_tol * a.norm_inf(),
            Err(_) => false,
        }
    }
}

pub fn cr_from_echelon<T: Scalar>(a: &Matrix<T>, ech: &EchelonForm<T>) -> CrFactorization<T> {
    let c = a.select_columns(&ech.pivot_cols);
    let i_f = Matrix::identity(ech.rank)
        .hstack(&ech.f)
        .expect("F has rank rows");
    let r = apply_col_permutation(&i_f, &ech.p).expect("P has n positions");
    CrFactorization {
        c,
        r,
        f: ech.f.clone(),
        p: ech.p.clone(),
        pivot_cols: ech.pivot_cols.clone(),
    }
}

pub fn cr_factor<T: Scalar>(a: &Matrix<T>, policy: ZeroPolicy) -> CrFactorization<T> {
    let ech = rref(a, policy, PivotRule::default_for(&policy), false);
    cr_from_echelon(a, &ech)
}

/// Special solutions of `A x = 0`, one per free column.
#[derive(Debug, Clone, PartialEq)]
pub struct NullspaceBasis<T> {
    /// `n x (n - r)`, equal to `P^T [-F; I]`.
    pub x: Matrix<T>,
    pub free_cols: Vec<usize>,
}

impl<T: Scalar> NullspaceBasis<T> {
    pub fn dim(&self) -> usize {
        self.x.cols()
    }
}

fn special_solutions<T: Scalar>(
    f: &Matrix<T>,
    p: &Permutation,
    free_cols: &[usize],
) -> NullspaceBasis<T> {
    let free = free_cols.len();
    let stacked = f
        .map(Scalar::neg_ref)
        .vstack(&Matrix::identity(free))
        .expect("F has n - r columns");
    let x = p
        .inverse()
        .permute_rows(&stacked)
        .expect("P has n positions");
    NullspaceBasis {
        x,
        free_cols: free_cols.to_vec(),
    }
}

pub fn nullspace_from_echelon<T: Scalar>(ech: &EchelonForm<T>) -> NullspaceBasis<T> {
    special_solutions(&ech.f, &ech.p, &ech.free_cols)
}

pub fn nullspace<T: Scalar>(a: &Matrix<T>, policy: ZeroPolicy) -> NullspaceBasis<T> {
    let ech = rref(a, policy, PivotRule::default_for(&policy), false);
    nullspace_from_echelon(&ech)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Unique,
    Infinite,
    Inconsistent,
}

impl SolveStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolveStatus::Unique => "unique",
            SolveStatus::Infinite => "infinite",
            SolveStatus::Inconsistent => "inconsistent",
        }
    }
}

/// Complete solution of `A x = b`: `particular + span(nullspace.x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult<T> {
    pub status: SolveStatus,
    /// Free variables set to zero. `None` when inconsistent.
    pub particular: Option<Vec<T>>,
    pub nullspace: NullspaceBasis<T>,
    pub rank: usize,
    /// Cost of the Gauss-Jordan reduction of `[A b]`.
    pub op_count: OpCount,
}

/// Reduces `[A b]` over the columns of `A` to `[Z d]` and reads off the
/// solution set.
pub fn solve<T: Scalar>(a: &Matrix<T>, b: &[T], policy: ZeroPolicy) -> Result<SolveResult<T>> {
    let (m, n) = a.shape();
    if b.len() != m {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side has {} entries for {m} rows",
            b.len()
        )));
    }
    let augmented = a.hstack(&Matrix::column_matrix(b.to_vec()))?;
    let mut state =
        IncrementalState::new(&augmented, policy, PivotRule::default_for(&policy), false);
    for _ in 0..n {
        state.consume_column()?;
    }
    let d = state.working().column(n);
    let rank = state.rank_so_far();
    let b_scale = b
        .iter()
        .chain(&d)
        .map(Scalar::magnitude)
        .fold(0.0, f64::max);
    let consistent = d[rank..].iter().all(|v| policy.is_zero_scaled(v, b_scale));
    let op_count = state.op_count();
    let pivot_cols = state.pivot_cols().to_vec();
    let ech = state.into_echelon();
    let nullspace = nullspace_from_echelon(&ech);

    let (status, particular) = if !consistent {
        (SolveStatus::Inconsistent, None)
    } else {
        let mut x = vec![T::zero(); n];
        for (i, &j) in pivot_cols.iter().enumerate() {
            x[j] = d[i].clone();
        }
        let status = if rank == n {
            SolveStatus::Unique
        } else {
            SolveStatus::Infinite
        };
        (status, Some(x))
    };
    Ok(SolveResult {
        status,
        particular,
        nullspace,
        rank,
        op_count,
    })
}

/// Column rank from `rref(A)` and row rank from an independent reduction of
/// `A^T`.
pub fn rank_theorem_check<T: Scalar>(a: &Matrix<T>, policy: ZeroPolicy) -> (usize, usize) {
    let rule = PivotRule::default_for(&policy);
    let col_rank = rref(a, policy, rule, false).rank;
    let row_rank = rref(&a.transpose(), policy, rule, false).rank;
    (col_rank, row_rank)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::Rational;

    type Q = Matrix<Rational>;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| Rational::from_integer(x)).collect()
    }

    fn example_a() -> Q {
        Q::from_i64_rows(&[[1, 2, 11, 17], [3, 7, 37, 57], [4, 9, 48, 74]]).unwrap()
    }

    fn permuted_a() -> Q {
        Q::from_i64_rows(&[[1, 2, 3, 4], [1, 2, 4, 5]]).unwrap()
    }

    #[test]
    fn cr_of_examples() {
        let cr = cr_factor(&example_a(), ZeroPolicy::exact());
        assert_eq!(cr.c, Q::from_i64_rows(&[[1, 2], [3, 7], [4, 9]]).unwrap());
        assert_eq!(
            cr.r,
            Q::from_i64_rows(&[[1, 0, 3, 5], [0, 1, 4, 6]]).unwrap()
        );
        assert_eq!(cr.product(), example_a());

        let cr = cr_factor(&permuted_a(), ZeroPolicy::exact());
        assert_eq!(cr.c, Q::from_i64_rows(&[[1, 3], [1, 4]]).unwrap());
        assert_eq!(
            cr.r,
            Q::from_i64_rows(&[[1, 2, 0, 1], [0, 0, 1, 1]]).unwrap()
        );
        assert_eq!(cr.pivot_cols, vec![0, 2]);
        assert!(cr.verify(&permuted_a(), 0.0));
    }

    #[test]
    fn cr_of_zero_matrix() {
        let a = Q::zeros(3, 4);
        let cr = cr_factor(&a, ZeroPolicy::exact());
        assert_eq!(cr.c.shape(), (3, 0));
        assert_eq!(cr.r.shape(), (0, 4));
        assert_eq!(cr.product(), a);
    }

    #[test]
    fn dependent_columns_are_c_times_f() {
        let a = example_a();
        let cr = cr_factor(&a, ZeroPolicy::exact());
        let cf = cr.c.matmul(&cr.f).unwrap();
        assert_eq!(cf.column(0), a.column(2));
        assert_eq!(cf.column(1), a.column(3));
    }

    #[test]
    fn nullspace_examples() {
        let ns = nullspace(&example_a(), ZeroPolicy::exact());
        assert_eq!(ns.x.column(0), ints(&[-3, -4, 1, 0]));
        assert_eq!(ns.x.column(1), ints(&[-5, -6, 0, 1]));
        assert!(example_a().matmul(&ns.x).unwrap().is_zero_matrix());

        let ns = nullspace(&permuted_a(), ZeroPolicy::exact());
        assert_eq!(ns.x.column(0), ints(&[-2, 1, 0, 0]));
        assert_eq!(ns.x.column(1), ints(&[-1, 0, -1, 1]));
        assert_eq!(ns.free_cols, vec![1, 3]);
        assert!(permuted_a().matmul(&ns.x).unwrap().is_zero_matrix());

        let ns = nullspace(&Q::identity(3), ZeroPolicy::exact());
        assert_eq!(ns.x.shape(), (3, 0));
    }

    #[test]
    fn solve_examples() {
        let a = example_a();
        let s = solve(&a, &ints(&[17, 57, 74]), ZeroPolicy::exact()).unwrap();
        assert_eq!(s.status, SolveStatus::Infinite);
        assert_eq!(s.particular.unwrap(), ints(&[5, 6, 0, 0]));
        assert_eq!(s.nullspace.dim(), 2);

        let s = solve(&a, &ints(&[0, 0, 0]), ZeroPolicy::exact()).unwrap();
        assert_eq!(s.status, SolveStatus::Infinite);
        assert_eq!(s.particular.unwrap(), ints(&[0, 0, 0, 0]));

        let s = solve(&a, &ints(&[0, 0, 1]), ZeroPolicy::exact()).unwrap();
        assert_eq!(s.status, SolveStatus::Inconsistent);
        assert!(s.particular.is_none());

        let w = Q::from_i64_rows(&[[2, 1], [4, 4]]).unwrap();
        let s = solve(&w, &ints(&[3, 10]), ZeroPolicy::exact()).unwrap();
        assert_eq!(s.status, SolveStatus::Unique);
        assert_eq!(s.particular.unwrap(), vec![q("1/2"), q("2")]);
        assert_eq!(s.nullspace.x.shape(), (2, 0));

        assert!(matches!(
            solve(&a, &ints(&[1, 2]), ZeroPolicy::exact()),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn rank_theorem_examples() {
        assert_eq!(
            rank_theorem_check(&example_a(), ZeroPolicy::exact()),
            (2, 2)
        );
        assert_eq!(
            rank_theorem_check(&Q::zeros(3, 2), ZeroPolicy::exact()),
            (0, 0)
        );
    }
}
