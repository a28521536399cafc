// Result rendering.
//
// The structured form is UTF-8, one `key: value` pair per line, where each
// value is compact JSON. Matrices are objects `{"cols":n,"entries":[[..]],
// "rows":m}` whose entries are strings (exact `p/q`, or 17 significant
// digits in float mode), so shapes survive even with zero rows or columns.
// Index lists are 1-based. Keys appear in a fixed order per result kind.

use std::fmt::Write as _;

use serde_json::{json, Value};

use super::ReadError;
use crate::factor::{CrFactorization, NullspaceBasis, SolveResult, SolveStatus};
use crate::matrix::{Matrix, Permutation};
use crate::numeric::Scalar;
use crate::rref::{EchelonForm, OpCount};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    Structured,
}

/// Ordered key/value lines of the structured format.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Record {
    entries: Vec<(String, Value)>,
}

impl Record {
    pub fn new() -> Self {
        Record::default()
    }

    pub fn push(&mut self, key: &str, value: Value) -> &mut Self {
        self.entries.push((key.to_string(), value));
        self
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(k, _)| k.as_str())
    }

    pub fn parse(text: &str) -> Result<Self, ReadError> {
        let mut rec = Record::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once(": ")
                .ok_or_else(|| ReadError::parse(i + 1, 1, "expected `key: value`"))?;
            let value: Value = serde_json::from_str(value).map_err(|e| {
                ReadError::parse(
                    i + 1,
                    key.len() + 3 + e.column().saturating_sub(1),
                    e.to_string(),
                )
            })?;
            rec.push(key, value);
        }
        Ok(rec)
    }
}

impl std::fmt::Display for Record {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (k, v) in &self.entries {
            writeln!(f, "{k}: {v}")?;
        }
        Ok(())
    }
}

pub(crate) fn matrix_value<T: Scalar>(m: &Matrix<T>) -> Value {
    let entries: Vec<Value> = m
        .row_iter()
        .map(|r| Value::Array(r.iter().map(|v| Value::String(v.to_structured())).collect()))
        .collect();
    json!({ "rows": m.rows(), "cols": m.cols(), "entries": entries })
}

pub(crate) fn vector_value<T: Scalar>(v: &[T]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(x.to_structured())).collect())
}

pub(crate) fn one_based(idx: &[usize]) -> Value {
    json!(idx.iter().map(|i| i + 1).collect::<Vec<_>>())
}

fn op_count_value(ops: &OpCount) -> Value {
    json!({
        "mults": ops.mults,
        "divs": ops.divs,
        "add_subs": ops.add_subs,
        "row_swaps": ops.row_swaps,
    })
}

pub(crate) fn mode_name<T: Scalar>() -> &'static str {
    if T::EXACT {
        "exact"
    } else {
        "float"
    }
}

/// Borrowed view of any result that can be written.
#[derive(Debug, Clone, Copy)]
pub enum ResultRef<'a, T> {
    Echelon(&'a EchelonForm<T>),
    Cr(&'a CrFactorization<T>),
    Nullspace(&'a NullspaceBasis<T>),
    Solve(&'a SolveResult<T>),
}

/// Owned result recovered from the structured form.
#[derive(Debug, Clone, PartialEq)]
pub enum StructuredResult<T> {
    Echelon(EchelonForm<T>),
    Cr(CrFactorization<T>),
    Nullspace(NullspaceBasis<T>),
    Solve(SolveResult<T>),
}

impl<T: Scalar> ResultRef<'_, T> {
    pub fn kind(&self) -> &'static str {
        match self {
            ResultRef::Echelon(_) => "rref",
            ResultRef::Cr(_) => "cr",
            ResultRef::Nullspace(_) => "nullspace",
            ResultRef::Solve(_) => "solve",
        }
    }

    pub fn to_record(&self) -> Record {
        let mut rec = Record::new();
        rec.push("kind", json!(self.kind()));
        rec.push("mode", json!(mode_name::<T>()));
        match self {
            ResultRef::Echelon(e) => {
                rec.push("rows", json!(e.rows()))
                    .push("cols", json!(e.cols()))
                    .push("rank", json!(e.rank))
                    .push("pivot_cols", one_based(&e.pivot_cols))
                    .push("free_cols", one_based(&e.free_cols))
                    .push("pivot_rows", one_based(&e.pivot_rows))
                    .push("pivot_values", vector_value(&e.pivot_values))
                    .push("permutation", json!(e.p.one_based()))
                    .push("F", matrix_value(&e.f))
                    .push("Z", matrix_value(&e.z))
                    .push("E", e.e.as_ref().map_or(Value::Null, matrix_value))
                    .push("op_count", op_count_value(&e.op_count));
            }
            ResultRef::Cr(cr) => {
                rec.push("rows", json!(cr.c.rows()))
                    .push("cols", json!(cr.r.cols()))
                    .push("rank", json!(cr.rank()))
                    .push("pivot_cols", one_based(&cr.pivot_cols))
                    .push("permutation", json!(cr.p.one_based()))
                    .push("C", matrix_value(&cr.c))
                    .push("R", matrix_value(&cr.r))
                    .push("F", matrix_value(&cr.f));
            }
            ResultRef::Nullspace(ns) => {
                rec.push("cols", json!(ns.x.rows()))
                    .push("dim", json!(ns.dim()))
                    .push("free_cols", one_based(&ns.free_cols))
                    .push("X", matrix_value(&ns.x));
            }
            ResultRef::Solve(s) => {
                rec.push("status", json!(s.status.as_str()))
                    .push("rank", json!(s.rank))
                    .push(
                        "particular",
                        s.particular.as_deref().map_or(Value::Null, vector_value),
                    )
                    .push("free_cols", one_based(&s.nullspace.free_cols))
                    .push("X", matrix_value(&s.nullspace.x))
                    .push("op_count", op_count_value(&s.op_count));
            }
        }
        rec
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let idx = |v: &[usize]| -> String {
            v.iter()
                .map(|i| (i + 1).to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        match self {
            ResultRef::Echelon(e) => {
                let _ = writeln!(out, "rank: {}", e.rank);
                let _ = writeln!(out, "pivot columns: {}", idx(&e.pivot_cols));
                let _ = writeln!(out, "free columns: {}", idx(&e.free_cols));
                let _ = writeln!(out, "P: {}", idx(e.p.positions()));
                push_matrix(&mut out, "Z", &e.z);
                push_matrix(&mut out, "F", &e.f);
                if let Some(m) = &e.e {
                    push_matrix(&mut out, "E", m);
                }
                push_ops(&mut out, &e.op_count);
            }
            ResultRef::Cr(cr) => {
                let _ = writeln!(out, "rank: {}", cr.rank());
                let _ = writeln!(out, "pivot columns: {}", idx(&cr.pivot_cols));
                let _ = writeln!(out, "P: {}", idx(cr.p.positions()));
                push_matrix(&mut out, "C", &cr.c);
                push_matrix(&mut out, "R", &cr.r);
                push_matrix(&mut out, "F", &cr.f);
            }
            ResultRef::Nullspace(ns) => {
                let _ = writeln!(out, "dimension: {}", ns.dim());
                let _ = writeln!(out, "free columns: {}", idx(&ns.free_cols));
                push_matrix(&mut out, "X", &ns.x);
            }
            ResultRef::Solve(s) => {
                let _ = writeln!(out, "status: {}", s.status.as_str());
                let _ = writeln!(out, "rank: {}", s.rank);
                if let Some(p) = &s.particular {
                    let cells: Vec<String> = p.iter().map(ToString::to_string).collect();
                    let _ = writeln!(out, "particular: {}", cells.join(" "));
                    push_matrix(&mut out, "nullspace basis X", &s.nullspace.x);
                }
                push_ops(&mut out, &s.op_count);
            }
        }
        out
    }
}

pub(crate) fn push_matrix<T: Scalar>(out: &mut String, name: &str, m: &Matrix<T>) {
    if m.rows() == 0 || m.cols() == 0 {
        let _ = writeln!(out, "{name}: ({}x{}, empty)", m.rows(), m.cols());
        return;
    }
    let _ = writeln!(out, "{name}: ({}x{})", m.rows(), m.cols());
    for line in m.to_string().lines() {
        let _ = writeln!(out, "  {line}");
    }
}

fn push_ops(out: &mut String, ops: &OpCount) {
    let _ = writeln!(
        out,
        "ops: mults={} divs={} add_subs={} row_swaps={}",
        ops.mults, ops.divs, ops.add_subs, ops.row_swaps
    );
}

pub fn write_result<T: Scalar>(result: ResultRef<'_, T>, format: OutputFormat) -> Vec<u8> {
    match format {
        OutputFormat::Text => result.to_text().into_bytes(),
        OutputFormat::Structured => result.to_record().to_string().into_bytes(),
    }
}

fn bad(key: &str, why: &str) -> ReadError {
    ReadError::parse(0, 0, format!("field `{key}`: {why}"))
}

fn field<'a>(rec: &'a Record, key: &str) -> Result<&'a Value, ReadError> {
    rec.get(key).ok_or_else(|| bad(key, "missing"))
}

fn usize_field(rec: &Record, key: &str) -> Result<usize, ReadError> {
    field(rec, key)?
        .as_u64()
        .map(|v| v as usize)
        .ok_or_else(|| bad(key, "expected a nonnegative integer"))
}

fn u64_of(v: &Value, key: &str) -> Result<u64, ReadError> {
    v.as_u64()
        .ok_or_else(|| bad(key, "expected a nonnegative integer"))
}

fn index_field(rec: &Record, key: &str) -> Result<Vec<usize>, ReadError> {
    field(rec, key)?
        .as_array()
        .ok_or_else(|| bad(key, "expected an array"))?
        .iter()
        .map(|v| match v.as_u64() {
            Some(i) if i >= 1 => Ok(i as usize - 1),
            _ => Err(bad(key, "expected 1-based indices")),
        })
        .collect()
}

fn scalar_of<T: Scalar>(v: &Value, key: &str) -> Result<T, ReadError> {
    v.as_str()
        .and_then(T::from_structured)
        .ok_or_else(|| bad(key, "expected a number string"))
}

fn vector_of<T: Scalar>(v: &Value, key: &str) -> Result<Vec<T>, ReadError> {
    v.as_array()
        .ok_or_else(|| bad(key, "expected an array"))?
        .iter()
        .map(|x| scalar_of(x, key))
        .collect()
}

fn matrix_of<T: Scalar>(v: &Value, key: &str) -> Result<Matrix<T>, ReadError> {
    let rows = v
        .get("rows")
        .and_then(Value::as_u64)
        .ok_or_else(|| bad(key, "missing rows"))? as usize;
    let cols = v
        .get("cols")
        .and_then(Value::as_u64)
        .ok_or_else(|| bad(key, "missing cols"))? as usize;
    let entries = v
        .get("entries")
        .and_then(Value::as_array)
        .ok_or_else(|| bad(key, "missing entries"))?;
    if entries.len() != rows {
        return Err(bad(key, "row count does not match entries"));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for row in entries {
        let row = vector_of::<T>(row, key)?;
        if row.len() != cols {
            return Err(bad(key, "column count does not match entries"));
        }
        data.extend(row);
    }
    Matrix::new(rows, cols, data).map_err(|e| bad(key, &e.to_string()))
}

fn matrix_field<T: Scalar>(rec: &Record, key: &str) -> Result<Matrix<T>, ReadError> {
    matrix_of(field(rec, key)?, key)
}

fn permutation_field(rec: &Record, key: &str) -> Result<Permutation, ReadError> {
    Permutation::new(index_field(rec, key)?).map_err(|e| bad(key, &e.to_string()))
}

fn op_count_field(rec: &Record, key: &str) -> Result<OpCount, ReadError> {
    let v = field(rec, key)?;
    let get = |name: &str| u64_of(v.get(name).unwrap_or(&Value::Null), key);
    Ok(OpCount {
        mults: get("mults")?,
        divs: get("divs")?,
        add_subs: get("add_subs")?,
        row_swaps: get("row_swaps")?,
    })
}

/// Reads back a result written with [`OutputFormat::Structured`]. The
/// document's mode must match the scalar type requested.
pub fn parse_structured<T: Scalar>(text: &str) -> Result<StructuredResult<T>, ReadError> {
    let rec = Record::parse(text)?;
    let mode = field(&rec, "mode")?.as_str().unwrap_or_default();
    if mode != mode_name::<T>() {
        return Err(ReadError::UnsupportedFormat(format!(
            "document mode `{mode}` read as {}",
            mode_name::<T>()
        )));
    }
    let kind = field(&rec, "kind")?
        .as_str()
        .unwrap_or_default()
        .to_string();
    match kind.as_str() {
        "rref" => {
            let e = match field(&rec, "E")? {
                Value::Null => None,
                v => Some(matrix_of(v, "E")?),
            };
            Ok(StructuredResult::Echelon(EchelonForm {
                rank: usize_field(&rec, "rank")?,
                pivot_cols: index_field(&rec, "pivot_cols")?,
                free_cols: index_field(&rec, "free_cols")?,
                pivot_rows: index_field(&rec, "pivot_rows")?,
                pivot_values: vector_of(field(&rec, "pivot_values")?, "pivot_values")?,
                f: matrix_field(&rec, "F")?,
                p: permutation_field(&rec, "permutation")?,
                z: matrix_field(&rec, "Z")?,
                e,
                op_count: op_count_field(&rec, "op_count")?,
            }))
        }
        "cr" => Ok(StructuredResult::Cr(CrFactorization {
            c: matrix_field(&rec, "C")?,
            r: matrix_field(&rec, "R")?,
            f: matrix_field(&rec, "F")?,
            p: permutation_field(&rec, "permutation")?,
            pivot_cols: index_field(&rec, "pivot_cols")?,
        })),
        "nullspace" => Ok(StructuredResult::Nullspace(NullspaceBasis {
            x: matrix_field(&rec, "X")?,
            free_cols: index_field(&rec, "free_cols")?,
        })),
        "solve" => {
            let status = match field(&rec, "status")?.as_str() {
                Some("unique") => SolveStatus::Unique,
                Some("infinite") => SolveStatus::Infinite,
                Some("inconsistent") => SolveStatus::Inconsistent,
                _ => return Err(bad("status", "unknown status")),
            };
            let particular = match field(&rec, "particular")? {
                Value::Null => None,
                v => Some(vector_of(v, "particular")?),
            };
            Ok(StructuredResult::Solve(SolveResult {
                status,
                particular,
                nullspace: NullspaceBasis {
                    x: matrix_field(&rec, "X")?,
                    free_cols: index_field(&rec, "free_cols")?,
                },
                rank: usize_field(&rec, "rank")?,
                op_count: op_count_field(&rec, "op_count")?,
            }))
        }
        other => Err(ReadError::UnsupportedFormat(format!(
            "result kind `{other}`"
        ))),
    }
}
