// Comma-separated rationals, one matrix row per line, no header.

use super::{entry_text, DocMode, MatrixDocument, ReadError, SourceFormat};
use crate::matrix::Matrix;
use crate::numeric::Rational;

pub(super) fn read(text: &str) -> Result<MatrixDocument, ReadError> {
    let mut lines: Vec<(usize, &str)> = text
        .split('\n')
        .map(|l| l.strip_suffix('\r').unwrap_or(l))
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .collect();
    while lines.last().is_some_and(|(_, l)| l.trim().is_empty()) {
        lines.pop();
    }

    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(lines.len());
    let mut mode = DocMode::Exact;
    let mut width = None;
    for (line_no, line) in lines {
        if line.trim().is_empty() {
            return Err(ReadError::parse(line_no, 1, "empty row"));
        }
        let mut row = Vec::new();
        let mut column = 1;
        for cell in line.split(',') {
            let lead = cell.len() - cell.trim_start().len();
            let (value, decimal) = Rational::parse_literal(cell)
                .map_err(|e| ReadError::parse(line_no, column + lead, e.to_string()))?;
            if decimal && !value.is_integer() {
                mode = DocMode::Float;
            }
            row.push(value);
            column += cell.chars().count() + 1;
        }
        match width {
            None => width = Some(row.len()),
            Some(w) if w != row.len() => {
                return Err(ReadError::RaggedRows {
                    line: line_no,
                    expected: w,
                    found: row.len(),
                })
            }
            Some(_) => {}
        }
        rows.push(row);
    }
    let matrix = Matrix::from_rows(rows).expect("row widths checked");
    Ok(MatrixDocument {
        matrix,
        source_format: SourceFormat::RationalCsv,
        mode,
    })
}

pub(super) fn write(m: &Matrix<Rational>, mode: DocMode) -> String {
    let mut out = String::new();
    for row in m.row_iter() {
        let cells: Vec<String> = row.iter().map(|v| entry_text(v, mode)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}
