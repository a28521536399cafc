// Matrix Market exchange format: `array` and `coordinate` layouts, `real`
// and `integer` fields, `general` symmetry. Coordinate input is densified.
//
// Entries of a `real` field may also be written as exact fractions `p/q`;
// the writer uses that form for values without a terminating decimal.

use super::{entry_text, DocMode, MatrixDocument, ReadError, SourceFormat};
use crate::matrix::Matrix;
use crate::numeric::Rational;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Field {
    Real,
    Integer,
}

struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

fn tokens(text: &str, start_line: usize) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate().skip(start_line) {
        let trimmed = line.trim_start();
        if trimmed.starts_with('%') {
            continue;
        }
        let mut offset = 0;
        for piece in line.split_whitespace() {
            let pos = line[offset..].find(piece).map_or(offset, |p| p + offset);
            out.push(Token {
                text: piece,
                line: i + 1,
                column: pos + 1,
            });
            offset = pos + piece.len();
        }
    }
    out
}

fn parse_usize(t: &Token<'_>, what: &str) -> Result<usize, ReadError> {
    t.text
        .parse()
        .map_err(|_| ReadError::parse(t.line, t.column, format!("invalid {what} `{}`", t.text)))
}

fn parse_entry(t: &Token<'_>, field: Field, mode: &mut DocMode) -> Result<Rational, ReadError> {
    let (value, decimal) = match field {
        Field::Integer => (
            t.text
                .parse::<Rational>()
                .ok()
                .filter(Rational::is_integer)
                .ok_or_else(|| {
                    ReadError::parse(t.line, t.column, format!("invalid integer `{}`", t.text))
                })?,
            false,
        ),
        Field::Real => Rational::parse_literal(t.text)
            .map_err(|e| ReadError::parse(t.line, t.column, e.to_string()))?,
    };
    if decimal && !value.is_integer() {
        *mode = DocMode::Float;
    }
    Ok(value)
}

pub(super) fn read(text: &str) -> Result<MatrixDocument, ReadError> {
    let header = text.trim_start().lines().next().unwrap_or("");
    let header_line = text.lines().position(|l| !l.trim().is_empty()).unwrap_or(0);
    let words: Vec<String> = header
        .split_whitespace()
        .map(str::to_ascii_lowercase)
        .collect();
    if words.len() != 5 || words[0] != "%%matrixmarket" || words[1] != "matrix" {
        return Err(ReadError::parse(
            header_line + 1,
            1,
            "expected `%%MatrixMarket matrix <layout> <field> <symmetry>`",
        ));
    }
    let coordinate = match words[2].as_str() {
        "array" => false,
        "coordinate" => true,
        other => return Err(ReadError::UnsupportedFormat(format!("layout `{other}`"))),
    };
    let field = match words[3].as_str() {
        "real" => Field::Real,
        "integer" => Field::Integer,
        other => return Err(ReadError::UnsupportedFormat(format!("field `{other}`"))),
    };
    if words[4] != "general" {
        return Err(ReadError::UnsupportedFormat(format!(
            "symmetry `{}`",
            words[4]
        )));
    }

    let toks = tokens(text, header_line + 1);
    let size_len = if coordinate { 3 } else { 2 };
    if toks.len() < size_len {
        return Err(ReadError::parse(header_line + 2, 1, "missing size line"));
    }
    let rows = parse_usize(&toks[0], "row count")?;
    let cols = parse_usize(&toks[1], "column count")?;
    let body = &toks[size_len..];
    let mut mode = DocMode::Exact;
    let mut matrix = Matrix::<Rational>::zeros(rows, cols);

    if coordinate {
        let nnz = parse_usize(&toks[2], "entry count")?;
        if body.len() != 3 * nnz {
            let at = body.last().unwrap_or(&toks[2]);
            return Err(ReadError::parse(
                at.line,
                at.column,
                format!(
                    "expected {nnz} entries of `row col value`, found {} tokens",
                    body.len()
                ),
            ));
        }
        for triple in body.chunks(3) {
            let i = parse_usize(&triple[0], "row index")?;
            let j = parse_usize(&triple[1], "column index")?;
            if i == 0 || i > rows || j == 0 || j > cols {
                return Err(ReadError::parse(
                    triple[0].line,
                    triple[0].column,
                    format!("index ({i}, {j}) outside {rows}x{cols}"),
                ));
            }
            let v = parse_entry(&triple[2], field, &mut mode)?;
            let slot = matrix.at_mut(i - 1, j - 1);
            *slot = &*slot + &v;
        }
        return Ok(MatrixDocument {
            matrix,
            source_format: SourceFormat::MatrixMarketCoordinate,
            mode,
        });
    }

    if body.len() != rows * cols {
        let at = body.last().unwrap_or(&toks[1]);
        return Err(ReadError::parse(
            at.line,
            at.column,
            format!("expected {} entries, found {}", rows * cols, body.len()),
        ));
    }
    // Column-major order.
    for (k, t) in body.iter().enumerate() {
        *matrix.at_mut(k % rows, k / rows) = parse_entry(t, field, &mut mode)?;
    }
    Ok(MatrixDocument {
        matrix,
        source_format: SourceFormat::MatrixMarketArray,
        mode,
    })
}

pub(super) fn write(m: &Matrix<Rational>, mode: DocMode) -> String {
    let integral = m.as_slice().iter().all(Rational::is_integer);
    let field = if integral { "integer" } else { "real" };
    let mut out = format!("%%MatrixMarket matrix array {field} general\n");
    out.push_str(&format!("{} {}\n", m.rows(), m.cols()));
    for j in 0..m.cols() {
        for i in 0..m.rows() {
            out.push_str(&entry_text(&m[(i, j)], mode));
            out.push('\n');
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    type Q = Matrix<Rational>;

    #[test]
    fn array_is_column_major() {
        let text =
            "%%MatrixMarket matrix array integer general\n% comment\n2 3\n1\n4\n2\n5\n3\n6\n";
        let doc = read(text).unwrap();
        assert_eq!(
            doc.matrix,
            Q::from_i64_rows(&[[1, 2, 3], [4, 5, 6]]).unwrap()
        );
        assert_eq!(doc.mode, DocMode::Exact);
    }

    #[test]
    fn coordinate_is_densified() {
        let text =
            "%%MatrixMarket matrix coordinate real general\n3 3 3\n1 1 1.5\n3 2 -2\n1 1 0.5\n";
        let doc = read(text).unwrap();
        assert_eq!(doc.source_format, SourceFormat::MatrixMarketCoordinate);
        assert_eq!(
            doc.matrix,
            Q::from_i64_rows(&[[2, 0, 0], [0, 0, 0], [0, -2, 0]]).unwrap()
        );
        // 1.5 is non-integral decimal notation.
        assert_eq!(doc.mode, DocMode::Float);
    }

    #[test]
    fn integral_reals_stay_exact() {
        let text = "%%MatrixMarket matrix array real general\n1 2\n1.0\n2e1\n";
        let doc = read(text).unwrap();
        assert_eq!(doc.mode, DocMode::Exact);
        assert_eq!(doc.matrix, Q::from_i64_rows(&[[1, 20]]).unwrap());
    }

    #[test]
    fn unsupported_variants() {
        for header in [
            "%%MatrixMarket matrix array complex general",
            "%%MatrixMarket matrix coordinate pattern general",
            "%%MatrixMarket matrix array real symmetric",
        ] {
            let text = format!("{header}\n1 1\n1\n");
            assert!(
                matches!(read(&text), Err(ReadError::UnsupportedFormat(_))),
                "{header}"
            );
        }
    }

    #[test]
    fn malformed_bodies() {
        assert!(matches!(
            read("%%MatrixMarket matrix array integer general\n2 2\n1\n2\n3\n"),
            Err(ReadError::Parse { .. })
        ));
        assert!(matches!(
            read("%%MatrixMarket matrix coordinate integer general\n2 2 1\n3 1 4\n"),
            Err(ReadError::Parse { line: 3, .. })
        ));
        assert!(matches!(
            read("%%MatrixMarket matrix array integer general\n1 1\n1.5\n"),
            Err(ReadError::Parse {
                line: 3,
                column: 1,
                ..
            })
        ));
        assert!(matches!(
            read("%%MatrixMarket vector\n"),
            Err(ReadError::Parse { .. })
        ));
    }

    #[test]
    fn writes_fractions_in_real_field() {
        let m = Q::new(
            1,
            2,
            vec!["1/3".parse().unwrap(), Rational::from_integer(2)],
        )
        .unwrap();
        let text = write(&m, DocMode::Exact);
        assert!(text.starts_with("%%MatrixMarket matrix array real general\n1 2\n1/3\n2\n"));
        assert_eq!(read(&text).unwrap().matrix, m);
    }
}
