//! Reading and writing matrices (rational CSV, Matrix Market) and rendering
//! results as text or as the line-oriented structured format.

mod csv;
mod market;
mod structured;

use std::fs;
use std::io::Read;
use std::path::Path;

use thiserror::Error;

use crate::matrix::Matrix;
use crate::numeric::Rational;

pub(crate) use structured::{matrix_value, mode_name, one_based, push_matrix};
pub use structured::{
    parse_structured, write_result, OutputFormat, Record, ResultRef, StructuredResult,
};

#[derive(Debug, Error)]
pub enum ReadError {
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: row has {found} entries, expected {expected}")]
    RaggedRows {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("unsupported format: {0}")]
    UnsupportedFormat(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl ReadError {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        ReadError::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceFormat {
    RationalCsv,
    MatrixMarketArray,
    MatrixMarketCoordinate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FormatHint {
    #[default]
    Auto,
    Csv,
    MatrixMarket,
}

/// Numeric mode implied by the input: `Float` when some entry was written in
/// decimal or scientific notation with a non-integral value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DocMode {
    Exact,
    Float,
}

/// A matrix read from a file. Entries are kept as exact rationals even in
/// `Float` mode: a decimal literal denotes an exact rational value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixDocument {
    pub matrix: Matrix<Rational>,
    pub source_format: SourceFormat,
    pub mode: DocMode,
}

pub fn is_matrix_market(text: &str) -> bool {
    text.trim_start().starts_with("%%MatrixMarket")
}

pub fn read_matrix_str(text: &str, hint: FormatHint) -> Result<MatrixDocument, ReadError> {
    let market = match hint {
        FormatHint::Auto => is_matrix_market(text),
        FormatHint::Csv => false,
        FormatHint::MatrixMarket => true,
    };
    if market {
        market::read(text)
    } else {
        csv::read(text)
    }
}

pub fn read_matrix<R: Read>(mut reader: R, hint: FormatHint) -> Result<MatrixDocument, ReadError> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    read_matrix_str(&text, hint)
}

pub fn read_matrix_file(path: &Path, hint: FormatHint) -> Result<MatrixDocument, ReadError> {
    read_matrix_str(&fs::read_to_string(path)?, hint)
}

/// Entry text for CSV and Matrix Market output. Exact documents use `p/q`;
/// float documents use terminating decimals where possible.
fn entry_text(v: &Rational, mode: DocMode) -> String {
    match mode {
        DocMode::Exact => v.to_string(),
        DocMode::Float => v.to_terminating_decimal().unwrap_or_else(|| v.to_string()),
    }
}

/// Serializes a document in its own source format.
pub fn write_matrix(doc: &MatrixDocument) -> String {
    match doc.source_format {
        SourceFormat::RationalCsv => csv::write(&doc.matrix, doc.mode),
        SourceFormat::MatrixMarketArray | SourceFormat::MatrixMarketCoordinate => {
            market::write(&doc.matrix, doc.mode)
        }
    }
}

pub fn write_csv(m: &Matrix<Rational>, mode: DocMode) -> String {
    csv::write(m, mode)
}

pub fn write_matrix_market(m: &Matrix<Rational>, mode: DocMode) -> String {
    market::write(m, mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // CSV has no way to spell an m x 0 or 0 x n matrix, so shapes are nonempty.
    fn arb_doc() -> impl Strategy<Value = MatrixDocument> {
        let mats = (1usize..4, 1usize..4).prop_flat_map(|(r, c)| {
            proptest::collection::vec((-50i64..50, 1i64..12), r * c).prop_map(move |v| {
                Matrix::new(
                    r,
                    c,
                    v.into_iter()
                        .map(|(p, q)| Rational::new(p, q).unwrap())
                        .collect(),
                )
                .unwrap()
            })
        });
        (
            mats,
            prop_oneof![
                Just(SourceFormat::RationalCsv),
                Just(SourceFormat::MatrixMarketArray)
            ],
        )
            .prop_map(|(matrix, source_format)| MatrixDocument {
                matrix,
                source_format,
                mode: DocMode::Exact,
            })
    }

    proptest! {
        #[test]
        fn exact_round_trip(doc in arb_doc()) {
            let text = write_matrix(&doc);
            let back = read_matrix_str(&text, FormatHint::Auto).unwrap();
            prop_assert_eq!(back.matrix, doc.matrix);
            prop_assert_eq!(back.mode, DocMode::Exact);
        }
    }

    #[test]
    fn float_document_round_trip() {
        let doc = read_matrix_str("0.5,1.25\n-3e-2,4", FormatHint::Auto).unwrap();
        assert_eq!(doc.mode, DocMode::Float);
        for text in [
            write_csv(&doc.matrix, doc.mode),
            write_matrix_market(&doc.matrix, doc.mode),
        ] {
            let back = read_matrix_str(&text, FormatHint::Auto).unwrap();
            assert_eq!(back.matrix, doc.matrix);
            assert_eq!(back.mode, DocMode::Float);
        }
    }

    #[test]
    fn auto_detection() {
        assert!(is_matrix_market(
            "  %%MatrixMarket matrix array integer general\n1 1\n5\n"
        ));
        assert!(!is_matrix_market("1,2\n"));
        let doc = read_matrix_str(
            "%%MatrixMarket matrix array integer general\n1 1\n5\n",
            FormatHint::Auto,
        )
        .unwrap();
        assert_eq!(doc.source_format, SourceFormat::MatrixMarketArray);
    }
}
