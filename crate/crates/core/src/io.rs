//! Input parsing and output emission: the `--field` grammar, integer matrix
//! input, the JSON document and the Magma and GAP text formats.

use std::io::{self, Write};

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::field::arith::{is_prime, prime_power};
use crate::field::{find_irreducible_polynomial, Field, FieldSpec};
use crate::linops::DenseMatrix;
use crate::symplectic::{SpMatrix, SymplecticError, Word};
use crate::weilmodule::Irreducible;

pub const TOOL: &str = concat!("weil ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Error)]
pub enum IoError {
    #[error("invalid field '{0}': expected cyclotomic, auto-prime, gf:q, gf:p^k or gf2-auto")]
    FieldSyntax(String),
    #[error("invalid field '{arg}': {reason}")]
    FieldValue { arg: String, reason: String },
    #[error("invalid matrix: {0}")]
    Matrix(String),
    #[error(transparent)]
    Symplectic(#[from] SymplecticError),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Parses `cyclotomic | auto-prime | gf:q | gf:p^k | gf2-auto`; `q` may be a
/// prime or a prime power. Extension fields use the lexicographically
/// smallest monic irreducible modulus.
pub fn parse_field(arg: &str, r: u64) -> Result<FieldSpec, IoError> {
    let bad = |reason: &str| IoError::FieldValue { arg: arg.into(), reason: reason.into() };
    match arg {
        "cyclotomic" => return Ok(FieldSpec::Cyclotomic { r }),
        "auto-prime" => return Ok(FieldSpec::AutoPrime { r }),
        "gf2-auto" => return Ok(FieldSpec::AutoChar2 { r }),
        _ => {}
    }
    let body = arg.strip_prefix("gf:").ok_or_else(|| IoError::FieldSyntax(arg.into()))?;
    let number = |s: &str| s.trim().parse::<u64>().map_err(|_| IoError::FieldSyntax(arg.into()));
    let (p, k) = match body.split_once('^') {
        Some((p, k)) => {
            let (p, k) = (number(p)?, number(k)?);
            if !is_prime(p) {
                return Err(bad("base is not prime"));
            }
            if k == 0 || k > 62 {
                return Err(bad("exponent out of range"));
            }
            (p, k as u32)
        }
        None => prime_power(number(body)?).ok_or_else(|| bad("not a prime power"))?,
    };
    if k == 1 {
        Ok(FieldSpec::PrimeField { r, p })
    } else {
        if (p as u128).pow(k) >= 1 << 62 {
            return Err(bad("field too large"));
        }
        Ok(FieldSpec::ExtensionField { r, p, k, modulus: find_irreducible_polynomial(p, k) })
    }
}

/// Reads a `2ℓ × 2ℓ` matrix written as whitespace- or comma-separated
/// integers in row-major order (brackets and semicolons are ignored), and
/// reduces it mod `r`.
pub fn parse_sp_matrix(text: &str, r: u64, ell: usize) -> Result<SpMatrix, IoError> {
    let entries = text
        .split(|c: char| c.is_whitespace() || ",;[]".contains(c))
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<i64>().map_err(|_| IoError::Matrix(format!("'{s}' is not an integer"))))
        .collect::<Result<Vec<_>, _>>()?;
    let n = 2 * ell;
    if entries.len() != n * n {
        return Err(IoError::Matrix(format!("expected {} entries for l = {ell}, got {}", n * n, entries.len())));
    }
    Ok(SpMatrix::from_flat(r, ell, &entries)?)
}

/// The JSON output of every command.
///
/// Emitted compactly with keys in declaration order; parsing an emitted
/// document and serializing it again reproduces it byte for byte.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputDocument {
    pub tool: String,
    pub r: u64,
    pub l: usize,
    pub field: FieldSpec,
    pub theta: Value,
    pub lambda: Value,
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    pub matrices: IndexMap<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<Vec<Vec<u64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub irreducible: Option<Irreducible>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub word: Option<Word>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<Value>,
}

impl OutputDocument {
    pub fn header<F: Field>(f: &F, ell: usize, lambda: &F::Elem) -> Self {
        OutputDocument {
            tool: TOOL.into(),
            r: f.root_order(),
            l: ell,
            field: f.spec(),
            theta: f.encode(&f.theta()),
            lambda: f.encode(lambda),
            matrices: IndexMap::new(),
            g: None,
            irreducible: None,
            word: None,
            report: None,
        }
    }
}

/// Writes `doc` with `matrices` inserted after `lambda`, one row at a time,
/// matching the serde serialization of the complete document.
pub fn write_json<F: Field, W: Write + ?Sized>(
    w: &mut W,
    f: &F,
    doc: &OutputDocument,
    matrices: &[(String, DenseMatrix<F::Elem>)],
) -> Result<(), IoError> {
    let Value::Object(fields) = serde_json::to_value(doc)? else {
        unreachable!("documents serialize to objects")
    };
    let mut sep = "";
    w.write_all(b"{")?;
    for (key, value) in &fields {
        write!(w, "{sep}")?;
        sep = ",";
        serde_json::to_writer(&mut *w, key)?;
        w.write_all(b":")?;
        serde_json::to_writer(&mut *w, value)?;
        if key == "lambda" && !matrices.is_empty() {
            w.write_all(b",\"matrices\":{")?;
            for (i, (name, m)) in matrices.iter().enumerate() {
                if i > 0 {
                    w.write_all(b",")?;
                }
                serde_json::to_writer(&mut *w, name)?;
                w.write_all(b":[")?;
                for row in 0..m.rows() {
                    if row > 0 {
                        w.write_all(b",")?;
                    }
                    let encoded: Vec<Value> = m.row(row).iter().map(|x| f.encode(x)).collect();
                    serde_json::to_writer(&mut *w, &encoded)?;
                }
                w.write_all(b"]")?;
            }
            w.write_all(b"}")?;
        }
    }
    w.write_all(b"}\n")?;
    Ok(())
}

/// Text for a field element in Magma or GAP syntax.
fn element_text<F: Field>(f: &F, a: &F::Elem, gen: &str) -> String {
    let s = f.format(a, gen);
    if s.is_empty() {
        "0".into()
    } else {
        s
    }
}

fn modulus_text(modulus: &[u64], var: &str) -> String {
    let terms: Vec<String> = modulus
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| match (i, c) {
            (0, c) => c.to_string(),
            (1, 1) => var.to_string(),
            (1, c) => format!("{c}*{var}"),
            (i, 1) => format!("{var}^{i}"),
            (i, c) => format!("{c}*{var}^{i}"),
        })
        .collect();
    terms.join(" + ")
}

/// Magma script defining `K`, `theta`, `lambda` and one matrix per entry.
pub fn write_magma<F: Field, W: Write + ?Sized>(
    w: &mut W,
    f: &F,
    doc: &OutputDocument,
    matrices: &[(String, DenseMatrix<F::Elem>)],
) -> Result<(), IoError> {
    writeln!(w, "// {}: r = {}, l = {}, field = {}", doc.tool, doc.r, doc.l, doc.field)?;
    let gen = match &doc.field {
        FieldSpec::Cyclotomic { r } => {
            writeln!(w, "K := CyclotomicField({r});")?;
            writeln!(w, "theta := K.1;")?;
            "theta"
        }
        FieldSpec::PrimeField { p, .. } => {
            writeln!(w, "K := GF({p});")?;
            writeln!(w, "theta := K!{};", element_text(f, &f.theta(), ""))?;
            ""
        }
        FieldSpec::ExtensionField { p, modulus, .. } => {
            writeln!(w, "F := GF({p});")?;
            writeln!(w, "P<x> := PolynomialRing(F);")?;
            writeln!(w, "K<x> := ext<F | {}>;", modulus_text(modulus, "x"))?;
            writeln!(w, "theta := {};", element_text(f, &f.theta(), "x"))?;
            "x"
        }
        FieldSpec::AutoPrime { .. } | FieldSpec::AutoChar2 { .. } => unreachable!("resolved specs only"),
    };
    writeln!(w, "lambda := K!({});", element_text(f, &element_of(f, &doc.lambda)?, gen))?;
    for (name, m) in matrices {
        write!(w, "{name} := Matrix(K, {}, {}, [", m.rows(), m.cols())?;
        for (k, x) in m.entries().iter().enumerate() {
            if k > 0 {
                w.write_all(b", ")?;
            }
            write!(w, "{}", element_text(f, x, gen))?;
        }
        writeln!(w, "]);")?;
    }
    Ok(())
}

/// GAP script: matrices are lists of rows over `E(r)`, `GF(p)` or an
/// `AlgebraicExtension` of `GF(p)`.
pub fn write_gap<F: Field, W: Write + ?Sized>(
    w: &mut W,
    f: &F,
    doc: &OutputDocument,
    matrices: &[(String, DenseMatrix<F::Elem>)],
) -> Result<(), IoError> {
    writeln!(w, "# {}: r = {}, l = {}, field = {}", doc.tool, doc.r, doc.l, doc.field)?;
    let (gen, one) = match &doc.field {
        FieldSpec::Cyclotomic { r } => {
            writeln!(w, "theta := E({r});")?;
            ("theta", String::new())
        }
        FieldSpec::PrimeField { p, .. } => {
            writeln!(w, "one := One(GF({p}));")?;
            writeln!(w, "theta := {} * one;", element_text(f, &f.theta(), ""))?;
            ("", " * one".to_string())
        }
        FieldSpec::ExtensionField { p, modulus, .. } => {
            writeln!(w, "x := Indeterminate(GF({p}), \"x\");")?;
            writeln!(w, "K := AlgebraicExtension(GF({p}), {});", modulus_text(modulus, "x"))?;
            writeln!(w, "a := RootOfDefiningPolynomial(K);")?;
            writeln!(w, "one := One(K);")?;
            writeln!(w, "theta := ({}) * one;", element_text(f, &f.theta(), "a"))?;
            ("a", " * one".to_string())
        }
        FieldSpec::AutoPrime { .. } | FieldSpec::AutoChar2 { .. } => unreachable!("resolved specs only"),
    };
    writeln!(w, "lambda := ({}){one};", element_text(f, &element_of(f, &doc.lambda)?, gen))?;
    for (name, m) in matrices {
        write!(w, "{name} := [")?;
        for i in 0..m.rows() {
            if i > 0 {
                w.write_all(b", ")?;
            }
            let row: Vec<String> = m.row(i).iter().map(|x| element_text(f, x, gen)).collect();
            write!(w, "[{}]", row.join(", "))?;
        }
        writeln!(w, "]{one};")?;
    }
    Ok(())
}

fn element_of<F: Field>(f: &F, v: &Value) -> Result<F::Elem, IoError> {
    f.decode(v).map_err(|e| IoError::Matrix(e.to_string()))
}
