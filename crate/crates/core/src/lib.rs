//! Row reduction to `Z = [I F; 0 0] P`, the column-row factorization
//! `A = CR`, nullspace bases, block elimination, and the independent oracles
//! used to check them.

pub mod block;
pub mod cli;
pub mod error;
pub mod factor;
pub mod io;
pub mod matrix;
pub mod numeric;
pub mod oracle;
pub mod rref;

pub use block::{
    block_eliminate, find_invertible_block, intersection_check, BlockElimination, Intersection,
};
pub use error::{Error, Result};
pub use factor::{
    cr_factor, nullspace, solve, CrFactorization, NullspaceBasis, SolveResult, SolveStatus,
};
pub use matrix::{apply_col_permutation, Matrix, Permutation};
pub use numeric::{Rational, Scalar, ZeroMode, ZeroPolicy};
pub use rref::{rref, EchelonForm, IncrementalState, OpCount, PivotRule, RowOp};
