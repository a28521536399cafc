//! The `echelon` command line. [`run`] takes its streams as arguments so the
//! whole surface can be exercised in-process.
//!
//! Exit codes: 0 success (an inconsistent system is a valid answer), 1
//! internal invariant failure, 2 bad input, 3 violated precondition.

use std::fmt::Write as _;
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::block::{block_eliminate, find_invertible_block, intersection_check};
use crate::error::Error;
use crate::factor::{cr_from_echelon, nullspace_from_echelon, solve};
use crate::io::{
    self, matrix_value, mode_name, one_based, push_matrix, DocMode, FormatHint, OutputFormat,
    Record, ResultRef,
};
use crate::matrix::{Matrix, Permutation};
use crate::numeric::{Rational, Scalar, ZeroPolicy};
use crate::oracle::{random_full_rank, random_integer_matrix};
use crate::rref::{back_substitute_counted, gauss_forward, rref, OpCount, PivotRule};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVARIANT: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;

/// Relative residual accepted by `cr` in float mode.
pub const CR_FLOAT_TOLERANCE: f64 = 1e-8;

/// Entry bound for the random systems generated by `bench`.
pub const BENCH_ENTRY_BOUND: i64 = 10;

#[derive(Parser, Debug)]
#[command(
    name = "echelon",
    version,
    about = "Reduced row echelon form, A = CR, nullspaces and block elimination"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Arithmetic: exact rationals or f64 with a thresholded zero test.
    /// Defaults to float when the input uses non-integral decimals.
    #[arg(long, global = true, value_enum)]
    mode: Option<ModeArg>,

    /// Absolute zero threshold (float mode only).
    #[arg(long, global = true)]
    tol_abs: Option<f64>,

    /// Relative zero threshold (float mode only).
    #[arg(long, global = true)]
    tol_rel: Option<f64>,

    #[arg(long, global = true, value_enum)]
    pivot: Option<PivotArg>,

    #[arg(long, global = true, value_enum, default_value_t = OutputArg::Text)]
    output: OutputArg,

    /// Master seed (bench only).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// 1-based row indices, comma separated (block, intersect).
    #[arg(long, global = true)]
    rows: Option<String>,

    /// 1-based column indices, comma separated (block, intersect).
    #[arg(long, global = true)]
    cols: Option<String>,

    /// Right-hand side file, m x 1 or 1 x m (solve).
    #[arg(long, global = true)]
    rhs: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Reduced row echelon form Z = [I F; 0 0] P.
    Rref {
        input: Option<PathBuf>,
        /// Also accumulate E with E A = Z.
        #[arg(long)]
        track_e: bool,
    },
    /// Column-row factorization A = C R.
    Cr { input: Option<PathBuf> },
    /// Nullspace basis X = P^T [-F; I].
    Nullspace { input: Option<PathBuf> },
    /// Complete solution of A x = b.
    Solve { input: Option<PathBuf> },
    /// Block elimination with an invertible r x r block W.
    Block { input: Option<PathBuf> },
    /// Check that r independent rows and r independent columns cross in an
    /// invertible W.
    Intersect { input: Option<PathBuf> },
    /// Operation counts of Gauss versus Gauss-Jordan on random systems.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "5,10,20,40")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 5)]
        trials: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exact,
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum PivotArg {
    First,
    Largest,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutputArg {
    Text,
    Structured,
}

/// A failed command: exit code plus message for standard error.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    fn invariant(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INVARIANT,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::DependentRowsGiven
            | Error::DependentColumnsGiven
            | Error::WrongCardinality { .. }
            | Error::SingularBlock(_)
            | Error::RankMismatch(_) => EXIT_PRECONDITION,
            Error::DimensionMismatch(_)
            | Error::IndexOutOfRange { .. }
            | Error::NonIncreasingIndices
            | Error::InvalidTolerance(_)
            | Error::InvalidPermutation(_)
            | Error::InvalidSpec(_) => EXIT_INPUT,
            _ => EXIT_INVARIANT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::ReadError> for Failure {
    fn from(e: io::ReadError) -> Self {
        Failure::input(e.to_string())
    }
}

type CmdResult = Result<Vec<u8>, Failure>;

struct Settings {
    policy: ZeroPolicy,
    rule: PivotRule,
    output: OutputFormat,
}

/// Runs one invocation and returns its exit code.
pub fn run<I, S>(
    args: I,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = stderr.write_all(text.as_bytes());
                return EXIT_INPUT;
            }
            let _ = stdout.write_all(text.as_bytes());
            return EXIT_OK;
        }
    };
    match execute(&cli, stdin) {
        Ok(bytes) => {
            if stdout
                .write_all(&bytes)
                .and_then(|_| stdout.flush())
                .is_err()
            {
                return EXIT_INVARIANT;
            }
            EXIT_OK
        }
        Err(Failure { code, message }) => {
            let _ = writeln!(stderr, "error: {message}");
            code
        }
    }
}

fn execute(cli: &Cli, stdin: &mut dyn Read) -> CmdResult {
    let is_bench = matches!(cli.command, Command::Bench { .. });
    let takes_indices = matches!(
        cli.command,
        Command::Block { .. } | Command::Intersect { .. }
    );
    if cli.seed.is_some() && !is_bench {
        return Err(Failure::input("--seed is only valid for bench"));
    }
    if (cli.rows.is_some() || cli.cols.is_some()) && !takes_indices {
        return Err(Failure::input(
            "--rows/--cols are only valid for block and intersect",
        ));
    }
    if cli.rhs.is_some() && !matches!(cli.command, Command::Solve { .. }) {
        return Err(Failure::input("--rhs is only valid for solve"));
    }

    if let Command::Bench { sizes, trials } = &cli.command {
        let float = cli.mode == Some(ModeArg::Float);
        let settings = settings(cli, float)?;
        let seed = cli.seed.unwrap_or(0);
        return if float {
            bench::<f64>(sizes, *trials, seed, &settings)
        } else {
            bench::<Rational>(sizes, *trials, seed, &settings)
        };
    }

    let input = match &cli.command {
        Command::Rref { input, .. }
        | Command::Cr { input }
        | Command::Nullspace { input }
        | Command::Solve { input }
        | Command::Block { input }
        | Command::Intersect { input } => input.as_deref(),
        Command::Bench { .. } => unreachable!(),
    };
    let doc = read_input(input, stdin)?;
    let float = match cli.mode {
        Some(ModeArg::Exact) => false,
        Some(ModeArg::Float) => true,
        None => doc.mode == DocMode::Float,
    };
    let settings = settings(cli, float)?;
    if float {
        dispatch(cli, &Matrix::<f64>::from_rational(&doc.matrix), &settings)
    } else {
        dispatch(cli, &doc.matrix, &settings)
    }
}

fn settings(cli: &Cli, float: bool) -> Result<Settings, Failure> {
    let policy = if float {
        ZeroPolicy::thresholded(
            cli.tol_abs.unwrap_or(ZeroPolicy::DEFAULT_TOL_ABS),
            cli.tol_rel.unwrap_or(ZeroPolicy::DEFAULT_TOL_REL),
        )?
    } else {
        if cli.tol_abs.is_some() || cli.tol_rel.is_some() {
            return Err(Failure::input("--tol-abs/--tol-rel require --mode float"));
        }
        ZeroPolicy::exact()
    };
    let rule = match cli.pivot {
        Some(PivotArg::First) => PivotRule::FirstNonzero,
        Some(PivotArg::Largest) => PivotRule::LargestMagnitude,
        None => PivotRule::default_for(&policy),
    };
    let output = match cli.output {
        OutputArg::Text => OutputFormat::Text,
        OutputArg::Structured => OutputFormat::Structured,
    };
    Ok(Settings {
        policy,
        rule,
        output,
    })
}

fn read_input(path: Option<&Path>, stdin: &mut dyn Read) -> Result<io::MatrixDocument, Failure> {
    match path {
        Some(p) if p != Path::new("-") => {
            let text = fs::read_to_string(p)
                .map_err(|e| Failure::input(format!("{}: {e}", p.display())))?;
            Ok(io::read_matrix_str(&text, FormatHint::Auto)
                .map_err(|e| Failure::input(format!("{}: {e}", p.display())))?)
        }
        _ => Ok(io::read_matrix(stdin, FormatHint::Auto)?),
    }
}

fn dispatch<T: Scalar>(cli: &Cli, a: &Matrix<T>, s: &Settings) -> CmdResult {
    match &cli.command {
        Command::Rref { track_e, .. } => cmd_rref(a, s, *track_e),
        Command::Cr { .. } => cmd_cr(a, s),
        Command::Nullspace { .. } => cmd_nullspace(a, s),
        Command::Solve { .. } => {
            let rhs = cli
                .rhs
                .as_deref()
                .ok_or_else(|| Failure::input("solve requires --rhs"))?;
            let doc = read_input(Some(rhs), &mut std::io::empty())?;
            let b = match doc.matrix.shape() {
                (_, 1) => doc.matrix.column(0),
                (1, _) => doc.matrix.row(0).to_vec(),
                (r, c) => {
                    return Err(Failure::input(format!(
                        "right-hand side is {r}x{c}, expected a vector"
                    )))
                }
            };
            let b: Vec<T> = b.iter().map(T::from_rational).collect();
            cmd_solve(a, &b, s)
        }
        Command::Block { .. } => {
            let idx = match (&cli.rows, &cli.cols) {
                (Some(r), Some(c)) => Some((
                    parse_indices(r, a.rows(), "--rows")?,
                    parse_indices(c, a.cols(), "--cols")?,
                )),
                (None, None) => None,
                _ => {
                    return Err(Failure::input(
                        "block needs both --rows and --cols, or neither",
                    ))
                }
            };
            cmd_block(a, idx, s)
        }
        Command::Intersect { .. } => {
            let (Some(r), Some(c)) = (&cli.rows, &cli.cols) else {
                return Err(Failure::input("intersect requires --rows and --cols"));
            };
            let rows = parse_indices(r, a.rows(), "--rows")?;
            let cols = parse_indices(c, a.cols(), "--cols")?;
            cmd_intersect(a, &rows, &cols, s)
        }
        Command::Bench { .. } => unreachable!(),
    }
}

/// Parses a comma-separated list of distinct 1-based indices into 0-based.
fn parse_indices(text: &str, len: usize, flag: &str) -> Result<Vec<usize>, Failure> {
    let mut out = Vec::new();
    for piece in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let i: usize = piece
            .parse()
            .map_err(|_| Failure::input(format!("{flag}: `{piece}` is not an index")))?;
        if i == 0 || i > len {
            return Err(Failure::input(format!(
                "{flag}: index {i} outside 1..={len}"
            )));
        }
        if out.contains(&(i - 1)) {
            return Err(Failure::input(format!("{flag}: index {i} repeated")));
        }
        out.push(i - 1);
    }
    Ok(out)
}

fn emit(rec: Record, text: String, s: &Settings) -> Vec<u8> {
    match s.output {
        OutputFormat::Text => text.into_bytes(),
        OutputFormat::Structured => rec.to_string().into_bytes(),
    }
}

fn cmd_rref<T: Scalar>(a: &Matrix<T>, s: &Settings, track_e: bool) -> CmdResult {
    let ech = rref(a, s.policy, s.rule, track_e);
    if ech.reconstruct_z() != ech.z {
        return Err(Failure::invariant("Z differs from [I F; 0 0] P"));
    }
    Ok(io::write_result(ResultRef::Echelon(&ech), s.output))
}

fn cmd_cr<T: Scalar>(a: &Matrix<T>, s: &Settings) -> CmdResult {
    let ech = rref(a, s.policy, s.rule, false);
    let cr = cr_from_echelon(a, &ech);
    let verified = cr.verify(a, CR_FLOAT_TOLERANCE);
    let r = ResultRef::Cr(&cr);
    let mut rec = r.to_record();
    rec.push("verified", json!(verified));
    let mut text = r.to_text();
    let _ = writeln!(text, "verified: {verified}");
    if T::EXACT && !verified {
        return Err(Failure::invariant(format!("A != C R\n{text}")));
    }
    Ok(emit(rec, text, s))
}

fn cmd_nullspace<T: Scalar>(a: &Matrix<T>, s: &Settings) -> CmdResult {
    let ech = rref(a, s.policy, s.rule, false);
    let ns = nullspace_from_echelon(&ech);
    if T::EXACT && !a.matmul(&ns.x)?.is_zero_matrix() {
        return Err(Failure::invariant("A X != 0"));
    }
    Ok(io::write_result(ResultRef::Nullspace(&ns), s.output))
}

fn cmd_solve<T: Scalar>(a: &Matrix<T>, b: &[T], s: &Settings) -> CmdResult {
    let sol = solve(a, b, s.policy)?;
    Ok(io::write_result(ResultRef::Solve(&sol), s.output))
}

fn cmd_block<T: Scalar>(
    a: &Matrix<T>,
    idx: Option<(Vec<usize>, Vec<usize>)>,
    s: &Settings,
) -> CmdResult {
    let (row_perm, col_perm, r) = match idx {
        Some((rows, cols)) => {
            if rows.len() != cols.len() {
                return Err(Failure::input(format!(
                    "--rows has {} indices but --cols has {}",
                    rows.len(),
                    cols.len()
                )));
            }
            (
                Permutation::leading(&rows, a.rows())?,
                Permutation::leading(&cols, a.cols())?,
                rows.len(),
            )
        }
        None => {
            let part = find_invertible_block(a, s.policy);
            let r = part.size();
            (part.row_perm, part.col_perm, r)
        }
    };
    let be = block_eliminate(a, &row_perm, &col_perm, r, s.policy)?;
    let part = &be.partition;

    let mut rec = Record::new();
    rec.push("kind", json!("block"))
        .push("mode", json!(mode_name::<T>()))
        .push("r", json!(r))
        .push("row_order", json!(row_perm.one_based()))
        .push("col_order", json!(col_perm.one_based()))
        .push("W", matrix_value(&part.w))
        .push("H", matrix_value(&part.h))
        .push("J", matrix_value(&part.j))
        .push("K", matrix_value(&part.k))
        .push("F", matrix_value(&be.f))
        .push("reduced", matrix_value(&be.reduced));

    let mut text = String::new();
    let _ = writeln!(text, "r: {r}");
    let _ = writeln!(text, "row order: {}", join(&row_perm.one_based()));
    let _ = writeln!(text, "column order: {}", join(&col_perm.one_based()));
    for (name, m) in [
        ("W", &part.w),
        ("H", &part.h),
        ("J", &part.j),
        ("K", &part.k),
        ("F", &be.f),
    ] {
        push_matrix(&mut text, name, m);
    }
    push_matrix(&mut text, "[I F; 0 0]", &be.reduced);
    Ok(emit(rec, text, s))
}

fn cmd_intersect<T: Scalar>(
    a: &Matrix<T>,
    rows: &[usize],
    cols: &[usize],
    s: &Settings,
) -> CmdResult {
    let mut rows = rows.to_vec();
    let mut cols = cols.to_vec();
    rows.sort_unstable();
    cols.sort_unstable();
    let x = intersection_check(a, &rows, &cols, s.policy)?;
    if !x.invertible {
        return Err(Failure::invariant(
            "independent rows and columns met in a singular W",
        ));
    }
    let mut rec = Record::new();
    rec.push("kind", json!("intersect"))
        .push("mode", json!(mode_name::<T>()))
        .push("rows", one_based(&rows))
        .push("cols", one_based(&cols))
        .push("W", matrix_value(&x.w))
        .push("invertible", json!(x.invertible))
        .push("det", json!(x.det.to_structured()));

    let mut text = String::new();
    let _ = writeln!(text, "rows: {}", join(&one_based_vec(&rows)));
    let _ = writeln!(text, "columns: {}", join(&one_based_vec(&cols)));
    push_matrix(&mut text, "W", &x.w);
    let _ = writeln!(text, "invertible: {}", x.invertible);
    let _ = writeln!(text, "det: {}", x.det);
    Ok(emit(rec, text, s))
}

fn one_based_vec(v: &[usize]) -> Vec<usize> {
    v.iter().map(|i| i + 1).collect()
}

fn join(v: &[usize]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

/// Summed operation counts of both methods at one size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchRow {
    pub n: usize,
    pub trials: usize,
    pub gauss: u64,
    pub gauss_jordan: u64,
    /// Gauss was strictly cheaper in every trial.
    pub strict: bool,
}

impl BenchRow {
    pub fn ratio(&self) -> f64 {
        self.gauss_jordan as f64 / self.gauss as f64
    }
}

/// Per-trial seed, a fixed function of the master seed, size and trial.
pub fn trial_seed(seed: u64, n: usize, trial: usize) -> u64 {
    seed ^ (n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ (trial as u64).wrapping_mul(0xC2B2_AE3D_27D4_EB4F)
}

/// Gauss (forward elimination plus back substitution) and Gauss-Jordan
/// costs on one random invertible `n x n` system with a right-hand side.
pub fn bench_trial<T: Scalar>(
    n: usize,
    seed: u64,
    policy: ZeroPolicy,
) -> Result<(OpCount, OpCount), Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = random_full_rank(n, n, BENCH_ENTRY_BOUND, &mut rng);
    let b = random_integer_matrix(n, 1, BENCH_ENTRY_BOUND, &mut rng);
    // Make sure b is not trivially zero, which would let both methods skip work.
    let b: Vec<Rational> = b
        .column(0)
        .into_iter()
        .map(|v| {
            if v.is_zero() {
                Rational::from_integer(rng.gen_range(1..=BENCH_ENTRY_BOUND))
            } else {
                v
            }
        })
        .collect();
    let a = Matrix::<T>::from_rational(&a);
    let b: Vec<T> = b.iter().map(T::from_rational).collect();

    let fwd = gauss_forward(&a, &b, policy)?;
    let (_, back) = back_substitute_counted(&fwd.u, &fwd.c, policy)?;
    let mut gauss = fwd.op_count;
    gauss += back;
    let gj = solve(&a, &b, policy)?.op_count;
    Ok((gauss, gj))
}

pub fn bench_rows<T: Scalar>(
    sizes: &[usize],
    trials: usize,
    seed: u64,
    policy: ZeroPolicy,
) -> Result<Vec<BenchRow>, Error> {
    sizes
        .iter()
        .map(|&n| {
            let mut row = BenchRow {
                n,
                trials,
                gauss: 0,
                gauss_jordan: 0,
                strict: true,
            };
            for t in 0..trials {
                let (g, gj) = bench_trial::<T>(n, trial_seed(seed, n, t), policy)?;
                row.gauss += g.total();
                row.gauss_jordan += gj.total();
                row.strict &= g.total() < gj.total();
            }
            Ok(row)
        })
        .collect()
}

fn bench<T: Scalar>(sizes: &[usize], trials: usize, seed: u64, s: &Settings) -> CmdResult {
    if sizes.is_empty() || trials == 0 {
        return Err(Failure::input(
            "bench needs at least one size and one trial",
        ));
    }
    let rows = bench_rows::<T>(sizes, trials, seed, s.policy)?;

    let mut text = format!("seed: {seed}\n");
    let _ = writeln!(
        text,
        "{:>5} {:>7} {:>12} {:>17} {:>8} {:>7}",
        "n", "trials", "gauss_ops", "gauss_jordan_ops", "ratio", "strict"
    );
    let mut results = Vec::new();
    for r in &rows {
        let _ = writeln!(
            text,
            "{:>5} {:>7} {:>12} {:>17} {:>8.4} {:>7}",
            r.n,
            r.trials,
            r.gauss,
            r.gauss_jordan,
            r.ratio(),
            r.strict
        );
        results.push(json!({
            "n": r.n,
            "trials": r.trials,
            "gauss_ops": r.gauss,
            "gauss_jordan_ops": r.gauss_jordan,
            "ratio": r.ratio(),
            "strict": r.strict,
        }));
    }
    let mut rec = Record::new();
    rec.push("kind", json!("bench"))
        .push("mode", json!(mode_name::<T>()))
        .push("seed", json!(seed))
        .push("results", json!(results));

    if let Some(r) = rows.iter().find(|r| r.gauss > r.gauss_jordan) {
        return Err(Failure::invariant(format!(
            "Gauss cost exceeded Gauss-Jordan at n = {}",
            r.n
        )));
    }
    Ok(emit(rec, text, s))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str], input: &str) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut args_full = vec!["echelon"];
        args_full.extend_from_slice(args);
        let code = run(args_full, &mut input.as_bytes(), &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    const EXAMPLE: &str = "1,2,11,17\n3,7,37,57\n4,9,48,74\n";

    #[test]
    fn rref_from_stdin() {
        let (code, out, _) = run_str(&["rref"], EXAMPLE);
        assert_eq!(code, 0);
        for row in ["1 0 3 5", "0 1 4 6", "0 0 0 0"] {
            assert!(out.contains(row), "{out}");
        }
    }

    #[test]
    fn tolerance_rejected_in_exact_mode() {
        assert_eq!(run_str(&["rref", "--tol-rel", "1e-6"], EXAMPLE).0, 2);
        assert_eq!(
            run_str(&["rref", "--mode", "float", "--tol-rel", "1e-6"], EXAMPLE).0,
            0
        );
        assert_eq!(
            run_str(&["rref", "--mode", "float", "--tol-rel", "-1"], EXAMPLE).0,
            2
        );
    }

    #[test]
    fn seed_only_for_bench() {
        assert_eq!(run_str(&["rref", "--seed", "3"], EXAMPLE).0, 2);
    }

    #[test]
    fn cr_verified() {
        let (code, out, _) = run_str(&["cr", "--output", "structured"], EXAMPLE);
        assert_eq!(code, 0);
        assert!(out.ends_with("verified: true\n"), "{out}");
    }

    #[test]
    fn intersect_codes() {
        let (code, out, _) = run_str(&["intersect", "--rows", "1,2", "--cols", "1,2"], EXAMPLE);
        assert_eq!(code, 0);
        assert!(out.contains("det: 1\n"));
        assert_eq!(
            run_str(&["intersect", "--rows", "1", "--cols", "1,2"], EXAMPLE).0,
            3
        );
        assert_eq!(
            run_str(&["intersect", "--rows", "1,5", "--cols", "1,2"], EXAMPLE).0,
            2
        );
    }

    #[test]
    fn block_default_and_explicit() {
        let (code, out, _) = run_str(&["block"], EXAMPLE);
        assert_eq!(code, 0);
        assert!(out.contains("  3 5\n  4 6\n"), "{out}");
        // Rows 1 and 3 with columns 1 and 2: W = [[1,2],[4,9]] is invertible.
        assert_eq!(
            run_str(&["block", "--rows", "1,3", "--cols", "1,2"], EXAMPLE).0,
            0
        );
        // Too small a block leaves nonzero trailing rows.
        assert_eq!(
            run_str(&["block", "--rows", "1", "--cols", "1"], EXAMPLE).0,
            3
        );
    }

    #[test]
    fn bench_small() {
        let (code, out, _) = run_str(
            &["bench", "--sizes", "2,5", "--trials", "2", "--seed", "7"],
            "",
        );
        assert_eq!(code, 0, "{out}");
        let (_, again, _) = run_str(
            &["bench", "--sizes", "2,5", "--trials", "2", "--seed", "7"],
            "",
        );
        assert_eq!(out, again);
    }

    #[test]
    fn bad_flag_is_input_error() {
        assert_eq!(run_str(&["rref", "--pivot", "sideways"], EXAMPLE).0, 2);
        assert_eq!(run_str(&["--help"], "").0, 0);
    }
}
