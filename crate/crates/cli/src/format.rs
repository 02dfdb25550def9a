//! JSON-shaped matrix and block-matrix files.
//!
//! A matrix file is
//!
//! ```text
//! {
//!   "rows": 2,
//!   "cols": 1,
//!   "data": [
//!     [5.0000000000000000e-1, 0.0000000000000000e0],
//!     [-1.0000000000000000e0, 2.5000000000000000e-1]
//!   ]
//! }
//! ```
//!
//! with `data` row-major and each entry a `[re, im]` pair. Numbers are written
//! with 17 significant digits, which round-trips every finite `f64` exactly.
//! A block file maps the keys `"A"`, `"B"`, `"C"`, `"D"` to matrix objects.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use pseudopivot::{BlockMatrix, Matrix};
use serde::Deserialize;

#[derive(Debug)]
pub enum FormatError {
    Io(std::io::Error),
    Json(serde_json::Error),
    Invalid(String),
}

impl std::fmt::Display for FormatError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FormatError::Io(e) => write!(f, "{e}"),
            FormatError::Json(e) => write!(f, "malformed file: {e}"),
            FormatError::Invalid(why) => write!(f, "invalid file: {why}"),
        }
    }
}

impl std::error::Error for FormatError {}

impl From<std::io::Error> for FormatError {
    fn from(e: std::io::Error) -> Self {
        FormatError::Io(e)
    }
}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        FormatError::Json(e)
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockFile {
    #[serde(rename = "A")]
    pub a: MatrixFile,
    #[serde(rename = "B")]
    pub b: MatrixFile,
    #[serde(rename = "C")]
    pub c: MatrixFile,
    #[serde(rename = "D")]
    pub d: MatrixFile,
}

impl MatrixFile {
    pub fn from_matrix(m: &Matrix) -> Self {
        MatrixFile {
            rows: m.rows(),
            cols: m.cols(),
            data: m.as_slice().iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<Matrix, FormatError> {
        let data = self.data.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
        Matrix::new(self.rows, self.cols, data).map_err(|e| FormatError::Invalid(e.to_string()))
    }
}

impl BlockFile {
    pub fn from_block(m: &BlockMatrix) -> Self {
        BlockFile {
            a: MatrixFile::from_matrix(m.a()),
            b: MatrixFile::from_matrix(m.b()),
            c: MatrixFile::from_matrix(m.c()),
            d: MatrixFile::from_matrix(m.d()),
        }
    }

    pub fn to_block(&self) -> Result<BlockMatrix, FormatError> {
        BlockMatrix::new(
            self.a.to_matrix()?,
            self.b.to_matrix()?,
            self.c.to_matrix()?,
            self.d.to_matrix()?,
        )
        .map_err(|e| FormatError::Invalid(e.to_string()))
    }
}

/// 17 significant digits in exponent form, e.g. `-1.2500000000000000e-3`.
pub fn render_number(x: f64) -> String {
    format!("{x:.16e}")
}

fn render_matrix_body(m: &MatrixFile, indent: &str, out: &mut String) {
    let _ = writeln!(out, "{{");
    let _ = writeln!(out, "{indent}  \"rows\": {},", m.rows);
    let _ = writeln!(out, "{indent}  \"cols\": {},", m.cols);
    let _ = writeln!(out, "{indent}  \"data\": [");
    for (k, [re, im]) in m.data.iter().enumerate() {
        let sep = if k + 1 == m.data.len() { "" } else { "," };
        let _ = writeln!(out, "{indent}    [{}, {}]{sep}", render_number(*re), render_number(*im));
    }
    let _ = writeln!(out, "{indent}  ]");
    let _ = write!(out, "{indent}}}");
}

pub fn render_matrix_file(m: &MatrixFile) -> String {
    let mut out = String::new();
    render_matrix_body(m, "", &mut out);
    out.push('\n');
    out
}

pub fn render_block_file(b: &BlockFile) -> String {
    let mut out = String::from("{\n");
    let parts = [("A", &b.a), ("B", &b.b), ("C", &b.c), ("D", &b.d)];
    for (k, (key, m)) in parts.iter().enumerate() {
        let _ = write!(out, "  \"{key}\": ");
        render_matrix_body(m, "  ", &mut out);
        out.push_str(if k + 1 == parts.len() { "\n" } else { ",\n" });
    }
    out.push_str("}\n");
    out
}

pub fn render_matrix(m: &Matrix) -> String {
    render_matrix_file(&MatrixFile::from_matrix(m))
}

pub fn render_block(m: &BlockMatrix) -> String {
    render_block_file(&BlockFile::from_block(m))
}

pub fn parse_matrix(text: &str) -> Result<Matrix, FormatError> {
    serde_json::from_str::<MatrixFile>(text)?.to_matrix()
}

pub fn parse_block(text: &str) -> Result<BlockMatrix, FormatError> {
    serde_json::from_str::<BlockFile>(text)?.to_block()
}

pub fn read_matrix(path: &Path) -> Result<Matrix, FormatError> {
    parse_matrix(&fs::read_to_string(path)?)
}

pub fn read_block(path: &Path) -> Result<BlockMatrix, FormatError> {
    parse_block(&fs::read_to_string(path)?)
}
