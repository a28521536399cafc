//! Brute-force ground truth for tests, independent of the elimination code:
//! determinants by cofactor expansion, rank by searching for a nonsingular
//! square submatrix, and random matrices of prescribed rank.

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::numeric::Rational;

pub const MAX_COFACTOR_SIZE: usize = 8;
pub const MAX_BRUTEFORCE_RANK_DIM: usize = 6;
/// Cap on the number of square minors a brute-force rank search may visit,
/// `sum_k C(m, k) C(n, k) = C(m + n, min(m, n))`.
pub const MAX_BRUTEFORCE_MINORS: u128 = 1_000_000;

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Whether [`rank_bruteforce`] accepts a matrix of this shape.
pub fn bruteforce_feasible(rows: usize, cols: usize) -> bool {
    rows.min(cols) <= MAX_BRUTEFORCE_RANK_DIM
        && binomial(rows + cols, rows.min(cols)) <= MAX_BRUTEFORCE_MINORS
}

/// Exact determinant by Laplace expansion along the first row.
pub fn det_cofactor(m: &Matrix<Rational>) -> Result<Rational> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if m.rows() > MAX_COFACTOR_SIZE {
        return Err(Error::TooLarge(format!(
            "cofactor expansion limited to {MAX_COFACTOR_SIZE}x{MAX_COFACTOR_SIZE}, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let rows: Vec<usize> = (0..m.rows()).collect();
    let cols: Vec<usize> = (0..m.cols()).collect();
    Ok(cofactor(m, &rows, &cols))
}

fn cofactor(m: &Matrix<Rational>, rows: &[usize], cols: &[usize]) -> Rational {
    match rows.len() {
        0 => Rational::one(),
        1 => m[(rows[0], cols[0])].clone(),
        2 => {
            &m[(rows[0], cols[0])] * &m[(rows[1], cols[1])]
                - &m[(rows[0], cols[1])] * &m[(rows[1], cols[0])]
        }
        _ => {
            let mut total = Rational::zero();
            for (k, &c) in cols.iter().enumerate() {
                let entry = &m[(rows[0], c)];
                if entry.is_zero() {
                    continue;
                }
                let minor_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                let term = entry * &cofactor(m, &rows[1..], &minor_cols);
                total = if k % 2 == 0 {
                    total + term
                } else {
                    total - term
                };
            }
            total
        }
    }
}

/// Largest `k` for which some `k x k` submatrix has a nonzero determinant.
pub fn rank_bruteforce(m: &Matrix<Rational>) -> Result<usize> {
    let limit = m.rows().min(m.cols());
    if !bruteforce_feasible(m.rows(), m.cols()) {
        return Err(Error::TooLarge(format!(
            "brute-force rank needs min dimension <= {MAX_BRUTEFORCE_RANK_DIM} \
             and at most {MAX_BRUTEFORCE_MINORS} minors, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    for k in (1..=limit).rev() {
        for rows in (0..m.rows()).combinations(k) {
            for cols in (0..m.cols()).combinations(k) {
                if !cofactor(m, &rows, &cols).is_zero() {
                    return Ok(k);
                }
            }
        }
    }
    Ok(0)
}

/// 2^61 - 1
const MODULUS: u64 = (1 << 61) - 1;

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % MODULUS as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64) -> u64 {
    let mut acc = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base);
        }
        base = mul_mod(base, base);
        exp >>= 1;
    }
    acc
}

fn to_residue(v: &BigInt) -> u64 {
    v.mod_floor(&BigInt::from(MODULUS))
        .to_u64()
        .expect("reduced below modulus")
}

/// Rank of an integer matrix over the field of integers modulo `2^61 - 1`.
///
/// The modular rank never exceeds the rational rank, so a modular rank equal
/// to `min(m, n)` certifies full rank over the rationals. Returns `None` for
/// non-integer entries.
pub fn rank_mod_prime(m: &Matrix<Rational>) -> Option<usize> {
    let (rows, cols) = m.shape();
    let mut a: Vec<Vec<u64>> = Vec::with_capacity(rows);
    for row in m.row_iter() {
        let mut out = Vec::with_capacity(cols);
        for v in row {
            if !v.is_integer() {
                return None;
            }
            out.push(to_residue(v.numer()));
        }
        a.push(out);
    }
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(p, rank);
        let inv = pow_mod(a[rank][c], MODULUS - 2);
        let (top, below) = a.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        for row in below {
            if row[c] == 0 {
                continue;
            }
            let factor = mul_mod(row[c], inv);
            for (x, &p) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                *x = (*x + MODULUS - mul_mod(factor, p)) % MODULUS;
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    Some(rank)
}

/// Whether an integer matrix has rank `min(m, n)`, decided by brute force
/// when small and by the modular certificate otherwise. The certificate can
/// reject a full-rank matrix (with negligible probability) but never accepts
/// a deficient one.
pub fn is_certified_full_rank(m: &Matrix<Rational>) -> bool {
    let full = m.rows().min(m.cols());
    if bruteforce_feasible(m.rows(), m.cols()) {
        return rank_bruteforce(m).map(|r| r == full).unwrap_or(false);
    }
    rank_mod_prime(m) == Some(full)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomMatrixSpec {
    pub rows: usize,
    pub cols: usize,
    pub target_rank: usize,
    /// Factor entries are drawn uniformly from `-entry_bound..=entry_bound`.
    pub entry_bound: i64,
    pub seed: u64,
}

/// Uniform integer matrix with entries in `-bound..=bound`.
pub fn random_integer_matrix<R: Rng>(
    rows: usize,
    cols: usize,
    bound: i64,
    rng: &mut R,
) -> Matrix<Rational> {
    let data = (0..rows * cols)
        .map(|_| Rational::from_integer(rng.gen_range(-bound..=bound)))
        .collect();
    Matrix::new(rows, cols, data).expect("sized by construction")
}

/// Draws until the matrix has full rank `min(rows, cols)`.
pub fn random_full_rank<R: Rng>(
    rows: usize,
    cols: usize,
    bound: i64,
    rng: &mut R,
) -> Matrix<Rational> {
    loop {
        let m = random_integer_matrix(rows, cols, bound, rng);
        if is_certified_full_rank(&m) {
            return m;
        }
    }
}

/// Factors `G` (`m x r`) and `B` (`r x n`) of full rank and their product.
pub fn random_rank_r_factors(
    spec: &RandomMatrixSpec,
) -> Result<(Matrix<Rational>, Matrix<Rational>, Matrix<Rational>)> {
    let RandomMatrixSpec {
        rows,
        cols,
        target_rank,
        entry_bound,
        seed,
    } = *spec;
    if target_rank > rows.min(cols) {
        return Err(Error::InvalidSpec(format!(
            "rank {target_rank} impossible for {rows}x{cols}"
        )));
    }
    if entry_bound < 1 && target_rank > 0 {
        return Err(Error::InvalidSpec("entry bound must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = random_full_rank(rows, target_rank, entry_bound, &mut rng);
    let b = random_full_rank(target_rank, cols, entry_bound, &mut rng);
    let a = g.matmul(&b)?;
    if bruteforce_feasible(rows, cols) {
        let r = rank_bruteforce(&a)?;
        assert_eq!(r, target_rank, "product of full-rank factors lost rank");
    }
    Ok((g, b, a))
}

/// A random integer `rows x cols` matrix of exact rank `target_rank`,
/// deterministic for a fixed seed.
pub fn random_rank_r(spec: &RandomMatrixSpec) -> Result<Matrix<Rational>> {
    random_rank_r_factors(spec).map(|(_, _, a)| a)
}

#[cfg(test)]
mod tests {
    use super::*;

    type Q = Matrix<Rational>;

    #[test]
    fn det_examples() {
        assert_eq!(
            det_cofactor(&Q::from_i64_rows(&[[1, 2], [3, 7]]).unwrap()).unwrap(),
            Rational::one()
        );
        assert_eq!(det_cofactor(&Q::identity(3)).unwrap(), Rational::one());
        assert!(det_cofactor(&Q::from_i64_rows(&[[1, 2], [2, 4]]).unwrap())
            .unwrap()
            .is_zero());
        assert_eq!(det_cofactor(&Q::zeros(0, 0)).unwrap(), Rational::one());
        assert!(matches!(
            det_cofactor(&Q::zeros(2, 3)),
            Err(Error::NotSquare { .. })
        ));
        assert!(matches!(
            det_cofactor(&Q::identity(9)),
            Err(Error::TooLarge(_))
        ));
        // 3x3 with a known determinant: 0(0-1) - 2(0-1) + 1(3-1) = 4
        let m = Q::from_i64_rows(&[[0, 2, 1], [3, 1, 1], [1, 1, 0]]).unwrap();
        assert_eq!(det_cofactor(&m).unwrap(), Rational::from_integer(4));
    }

    #[test]
    fn rank_examples() {
        let a = Q::from_i64_rows(&[[1, 2, 11, 17], [3, 7, 37, 57], [4, 9, 48, 74]]).unwrap();
        assert_eq!(rank_bruteforce(&a).unwrap(), 2);
        assert_eq!(rank_bruteforce(&Q::zeros(3, 3)).unwrap(), 0);
        let b = Q::from_i64_rows(&[[1, 2, 3, 4], [1, 2, 4, 5]]).unwrap();
        assert_eq!(rank_bruteforce(&b).unwrap(), 2);
        assert!(matches!(
            rank_bruteforce(&Q::zeros(7, 7)),
            Err(Error::TooLarge(_))
        ));
        assert_eq!(rank_bruteforce(&Q::zeros(7, 2)).unwrap(), 0);
        assert!(matches!(
            rank_bruteforce(&Q::zeros(6, 150)),
            Err(Error::TooLarge(_))
        ));
        assert!(bruteforce_feasible(6, 8));
    }

    #[test]
    fn modular_rank_agrees_on_small_cases() {
        let a = Q::from_i64_rows(&[[1, 2, 11, 17], [3, 7, 37, 57], [4, 9, 48, 74]]).unwrap();
        assert_eq!(rank_mod_prime(&a), Some(2));
        assert_eq!(rank_mod_prime(&Q::identity(10)), Some(10));
        let half = Q::new(1, 1, vec!["1/2".parse().unwrap()]).unwrap();
        assert_eq!(rank_mod_prime(&half), None);
    }

    #[test]
    fn random_rank_r_examples() {
        let spec = RandomMatrixSpec {
            rows: 3,
            cols: 4,
            target_rank: 2,
            entry_bound: 5,
            seed: 7,
        };
        let a = random_rank_r(&spec).unwrap();
        assert_eq!(a.shape(), (3, 4));
        assert_eq!(rank_bruteforce(&a).unwrap(), 2);
        assert_eq!(random_rank_r(&spec).unwrap(), a);

        let zero = random_rank_r(&RandomMatrixSpec {
            target_rank: 0,
            ..spec
        })
        .unwrap();
        assert!(zero.is_zero_matrix());

        let full = random_rank_r(&RandomMatrixSpec {
            target_rank: 3,
            entry_bound: 1,
            ..spec
        })
        .unwrap();
        assert_eq!(rank_bruteforce(&full).unwrap(), 3);

        assert!(matches!(
            random_rank_r(&RandomMatrixSpec {
                target_rank: 4,
                ..spec
            }),
            Err(Error::InvalidSpec(_))
        ));
    }

    #[test]
    fn large_factors_are_certified() {
        let spec = RandomMatrixSpec {
            rows: 20,
            cols: 30,
            target_rank: 12,
            entry_bound: 3,
            seed: 1,
        };
        let (g, b, _) = random_rank_r_factors(&spec).unwrap();
        assert_eq!(rank_mod_prime(&g), Some(12));
        assert_eq!(rank_mod_prime(&b), Some(12));
    }
}
