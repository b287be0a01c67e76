//! JSON documents for densities, spin coefficient tables, decompositions and
//! basis listings.
//!
//! Every document carries `format_version` and `kind`. Complex numbers are
//! `[re, im]` pairs and matrices are row lists. Floats are written with 17
//! significant digits so that a parse/serialize cycle is lossless, and each
//! matrix row sits on one line.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use spinsep::{ComplexMatrix, DimVector, Factor, SeparableDecomposition, SpinCoefficients, Term};

use crate::error::CliError;

pub const FORMAT_VERSION: u32 = 1;

pub type Entry = [f64; 2];
pub type MatrixRows = Vec<Vec<Entry>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Density,
    SpinCoefficients,
    Decomposition,
    Basis,
    CertificateReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityFile {
    pub format_version: u32,
    pub kind: Kind,
    pub dims: Vec<usize>,
    pub matrix: MatrixRows,
}

/// `coefficients[j][k] = s_{j,k}` over flat labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientsFile {
    pub format_version: u32,
    pub kind: Kind,
    pub dims: Vec<usize>,
    pub coefficients: MatrixRows,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermRecord {
    pub weight: f64,
    pub factors: Vec<MatrixRows>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecompositionFile {
    pub format_version: u32,
    pub kind: Kind,
    pub dims: Vec<usize>,
    pub terms: Vec<TermRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisEntry {
    pub j: Vec<usize>,
    pub k: Vec<usize>,
    pub matrix: MatrixRows,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisFile {
    pub format_version: u32,
    pub kind: Kind,
    pub dims: Vec<usize>,
    pub matrices: Vec<BasisEntry>,
}

pub fn rows_from_matrix(m: &ComplexMatrix) -> MatrixRows {
    m.entries()
        .chunks(m.dim())
        .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

pub fn matrix_from_rows(rows: &MatrixRows, what: &str) -> Result<ComplexMatrix, CliError> {
    let n = rows.len();
    let mut entries = Vec::with_capacity(n * n);
    for (r, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(CliError::Format(format!(
                "{what}: row {r} has {} entries, expected {n}",
                row.len()
            )));
        }
        for (c, e) in row.iter().enumerate() {
            if !e[0].is_finite() || !e[1].is_finite() {
                return Err(CliError::Format(format!("{what}: entry ({r},{c}) is not finite")));
            }
            entries.push(Complex64::new(e[0], e[1]));
        }
    }
    ComplexMatrix::new(n, entries).map_err(|e| CliError::Format(format!("{what}: {e}")))
}

fn check_header(version: u32, kind: Kind, want: Kind) -> Result<(), CliError> {
    if version != FORMAT_VERSION {
        return Err(CliError::Format(format!(
            "unsupported format_version {version}, expected {FORMAT_VERSION}"
        )));
    }
    if kind != want {
        return Err(CliError::Format(format!(
            "expected a {want:?} document, found {kind:?}"
        )));
    }
    Ok(())
}

pub(crate) fn dim_vector(dims: &[usize]) -> Result<DimVector, CliError> {
    DimVector::new(dims.to_vec()).map_err(CliError::semantic)
}

fn check_size(dims: &DimVector, n: usize, what: &str) -> Result<(), CliError> {
    if dims.total() != n {
        return Err(CliError::Semantic(format!(
            "{what}: dims {dims} give N = {}, but the matrix is {n}x{n}",
            dims.total()
        )));
    }
    Ok(())
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Format(e.to_string()))
}

impl DensityFile {
    pub fn new(dims: &DimVector, m: &ComplexMatrix) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            kind: Kind::Density,
            dims: dims.as_slice().to_vec(),
            matrix: rows_from_matrix(m),
        }
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let file: Self = parse_json(text)?;
        check_header(file.format_version, file.kind, Kind::Density)?;
        Ok(file)
    }

    /// Dims and matrix, with the dims product checked against the size.
    pub fn to_matrix(&self) -> Result<(DimVector, ComplexMatrix), CliError> {
        let m = matrix_from_rows(&self.matrix, "matrix")?;
        let dims = dim_vector(&self.dims)?;
        check_size(&dims, m.dim(), "matrix")?;
        Ok((dims, m))
    }
}

impl CoefficientsFile {
    pub fn new(coeffs: &SpinCoefficients) -> Self {
        let n = coeffs.dims().total();
        Self {
            format_version: FORMAT_VERSION,
            kind: Kind::SpinCoefficients,
            dims: coeffs.dims().as_slice().to_vec(),
            coefficients: coeffs
                .table()
                .chunks(n)
                .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
                .collect(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let file: Self = parse_json(text)?;
        check_header(file.format_version, file.kind, Kind::SpinCoefficients)?;
        Ok(file)
    }

    pub fn to_coefficients(&self) -> Result<SpinCoefficients, CliError> {
        let table = matrix_from_rows(&self.coefficients, "coefficients")?;
        let dims = dim_vector(&self.dims)?;
        check_size(&dims, table.dim(), "coefficients")?;
        SpinCoefficients::new(dims, table.into_entries()).map_err(CliError::semantic)
    }
}

impl DecompositionFile {
    pub fn new(dec: &SeparableDecomposition) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            kind: Kind::Decomposition,
            dims: dec.dims().as_slice().to_vec(),
            terms: dec
                .terms()
                .iter()
                .map(|t| TermRecord {
                    weight: t.weight,
                    factors: t.factors.iter().map(|f| rows_from_matrix(&f.matrix)).collect(),
                })
                .collect(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let file: Self = parse_json(text)?;
        check_header(file.format_version, file.kind, Kind::Decomposition)?;
        Ok(file)
    }

    pub fn to_decomposition(&self) -> Result<SeparableDecomposition, CliError> {
        let dims = dim_vector(&self.dims)?;
        let mut terms = Vec::with_capacity(self.terms.len());
        for (i, t) in self.terms.iter().enumerate() {
            if !t.weight.is_finite() {
                return Err(CliError::Format(format!("term {i}: weight is not finite")));
            }
            let factors = t
                .factors
                .iter()
                .enumerate()
                .map(|(k, rows)| matrix_from_rows(rows, &format!("term {i} factor {k}")).map(Factor::explicit))
                .collect::<Result<Vec<_>, _>>()?;
            terms.push(Term {
                weight: t.weight,
                factors,
            });
        }
        SeparableDecomposition::new(dims, terms).map_err(CliError::semantic)
    }
}

impl BasisFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let file: Self = parse_json(text)?;
        check_header(file.format_version, file.kind, Kind::Basis)?;
        Ok(file)
    }
}

/// Serializes with 17 significant digits, two-space indentation, and
/// numeric arrays (including rows of `[re, im]` pairs) kept on one line.
pub fn to_json<T: Serialize>(doc: &T) -> String {
    let value = serde_json::to_value(doc).expect("documents serialize to JSON");
    let mut out = String::new();
    write_value(&mut out, &value, 0);
    out.push('\n');
    out
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(items) => items.iter().all(|x| match x {
            Value::Array(inner) => inner.iter().all(|y| !y.is_array() && !y.is_object()),
            Value::Object(_) => false,
            _ => true,
        }),
        _ => true,
    }
}

fn write_number(out: &mut String, n: &serde_json::Number) {
    if n.is_f64() {
        let x = n.as_f64().expect("f64 number");
        if x == 0.0 {
            out.push_str(if x.is_sign_negative() { "-0.0" } else { "0.0" });
        } else {
            write!(out, "{x:.16e}").expect("write to string");
        }
    } else {
        write!(out, "{n}").expect("write to string");
    }
}

fn write_inline(out: &mut String, v: &Value) {
    match v {
        Value::Array(items) => {
            out.push('[');
            for (i, x) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_inline(out, x);
            }
            out.push(']');
        }
        Value::Number(n) => write_number(out, n),
        other => out.push_str(&other.to_string()),
    }
}

fn indent(out: &mut String, level: usize) {
    for _ in 0..level {
        out.push_str("  ");
    }
}

fn write_value(out: &mut String, v: &Value, level: usize) {
    match v {
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (i, (key, x)) in map.iter().enumerate() {
                indent(out, level + 1);
                out.push_str(&Value::String(key.clone()).to_string());
                out.push_str(": ");
                write_value(out, x, level + 1);
                if i + 1 < map.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            indent(out, level);
            out.push('}');
        }
        Value::Array(items) if !items.is_empty() && !is_flat(v) => {
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                indent(out, level + 1);
                write_value(out, x, level + 1);
                if i + 1 < items.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            indent(out, level);
            out.push(']');
        }
        other => write_inline(out, other),
    }
}
