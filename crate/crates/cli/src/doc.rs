//! JSON documents.
//!
//! Complex scalars are `[re, im]` pairs and matrices are row-major nested
//! arrays. Every schema violation carries a JSON pointer to the offending
//! node.

use std::fs;
use std::path::Path;

use blockcoh::linalg::{self, c64};
use blockcoh::structure::BlockStructure;
use blockcoh::{CMatrix, CVector, C64};
use serde_json::{json, Value};

use crate::error::CliError;

pub fn read(path: &Path) -> Result<Value, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::Json {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

pub fn write(path: &Path, doc: &Value) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(doc).expect("documents serialize");
    text.push('\n');
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Walks a document while remembering where it is.
struct Node<'a> {
    path: &'a Path,
    value: &'a Value,
    pointer: String,
}

impl<'a> Node<'a> {
    fn root(path: &'a Path, value: &'a Value) -> Self {
        Node {
            path,
            value,
            pointer: String::new(),
        }
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T, CliError> {
        Err(CliError::Schema {
            path: self.path.to_path_buf(),
            pointer: if self.pointer.is_empty() {
                String::from("/")
            } else {
                self.pointer.clone()
            },
            message: message.into(),
        })
    }

    fn field(&self, key: &str) -> Result<Node<'a>, CliError> {
        let Some(obj) = self.value.as_object() else {
            return self.fail("expected an object");
        };
        match obj.get(key) {
            Some(value) => Ok(Node {
                path: self.path,
                value,
                pointer: format!("{}/{}", self.pointer, key),
            }),
            None => self.fail(format!("missing field \"{key}\"")),
        }
    }

    fn items(&self) -> Result<Vec<Node<'a>>, CliError> {
        let Some(arr) = self.value.as_array() else {
            return self.fail("expected an array");
        };
        Ok(arr
            .iter()
            .enumerate()
            .map(|(i, value)| Node {
                path: self.path,
                value,
                pointer: format!("{}/{}", self.pointer, i),
            })
            .collect())
    }

    fn number(&self) -> Result<f64, CliError> {
        match self.value.as_f64() {
            Some(x) if x.is_finite() => Ok(x),
            _ => self.fail("expected a finite number"),
        }
    }

    fn index(&self) -> Result<usize, CliError> {
        match self.value.as_u64() {
            Some(i) => Ok(i as usize),
            None => self.fail("expected a nonnegative integer"),
        }
    }

    fn complex(&self) -> Result<C64, CliError> {
        let parts = self.items()?;
        if parts.len() != 2 {
            return self.fail("expected a complex number [re, im]");
        }
        Ok(c64(parts[0].number()?, parts[1].number()?))
    }

    fn vector(&self) -> Result<CVector, CliError> {
        let entries = self.items()?;
        if entries.is_empty() {
            return self.fail("expected a nonempty array");
        }
        let v: Vec<C64> = entries.iter().map(Node::complex).collect::<Result<_, _>>()?;
        Ok(CVector::from_vec(v))
    }

    fn matrix(&self) -> Result<CMatrix, CliError> {
        let rows = self.items()?;
        if rows.is_empty() {
            return self.fail("expected a nonempty array of rows");
        }
        let rows: Vec<(Node, CVector)> = rows
            .into_iter()
            .map(|r| {
                let v = r.vector()?;
                Ok((r, v))
            })
            .collect::<Result<_, CliError>>()?;
        let cols = rows[0].1.len();
        if let Some((r, v)) = rows.iter().find(|(_, v)| v.len() != cols) {
            return r.fail(format!("row has {} entries, expected {cols}", v.len()));
        }
        Ok(CMatrix::from_fn(rows.len(), cols, |i, j| rows[i].1[j]))
    }

    fn square(&self) -> Result<CMatrix, CliError> {
        let m = self.matrix()?;
        if m.nrows() != m.ncols() {
            return self.fail(format!("expected a square matrix, found {}x{}", m.nrows(), m.ncols()));
        }
        Ok(m)
    }
}

pub fn structure(path: &Path) -> Result<BlockStructure, CliError> {
    let doc = read(path)?;
    let node = Node::root(path, &doc).field("groups")?;
    let groups: Vec<Vec<usize>> = node
        .items()?
        .iter()
        .map(|g| g.items()?.iter().map(Node::index).collect())
        .collect::<Result<_, _>>()?;
    let dim = groups.iter().map(Vec::len).sum();
    BlockStructure::new(groups, dim).or_else(|e| node.fail(e.to_string()))
}

pub fn state(path: &Path) -> Result<CVector, CliError> {
    let doc = read(path)?;
    Node::root(path, &doc).field("amplitudes")?.vector()
}

pub fn density(path: &Path) -> Result<CMatrix, CliError> {
    let doc = read(path)?;
    Node::root(path, &doc).field("density")?.square()
}

pub fn unitary(path: &Path) -> Result<CMatrix, CliError> {
    let doc = read(path)?;
    Node::root(path, &doc).field("unitary")?.square()
}

/// Kraus operators, checked for shape and completeness.
pub fn channel(path: &Path) -> Result<Vec<CMatrix>, CliError> {
    let doc = read(path)?;
    let node = Node::root(path, &doc).field("kraus")?;
    let items = node.items()?;
    if items.is_empty() {
        return node.fail("expected at least one Kraus operator");
    }
    let mut kraus = Vec::with_capacity(items.len());
    for item in &items {
        let k = item.matrix()?;
        if let Some(first) = kraus.first() {
            let first: &CMatrix = first;
            if k.shape() != first.shape() {
                return item.fail(format!(
                    "Kraus operator is {}x{}, expected {}x{}",
                    k.nrows(),
                    k.ncols(),
                    first.nrows(),
                    first.ncols()
                ));
            }
        }
        kraus.push(k);
    }
    let sum = kraus.iter().fold(CMatrix::zeros(kraus[0].ncols(), kraus[0].ncols()), |acc, k| {
        acc + k.adjoint() * k
    });
    let residual = linalg::identity_residual(&sum);
    if residual > blockcoh::tol::CPTP {
        return node.fail(format!("Kraus operators are not complete: sum K^dag K - I residual {residual:e}"));
    }
    Ok(kraus)
}

pub fn complex_value(z: C64) -> Value {
    json!([z.re, z.im])
}

pub fn vector_value(v: &CVector) -> Value {
    Value::Array(v.iter().map(|&z| complex_value(z)).collect())
}

pub fn matrix_value(m: &CMatrix) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| complex_value(m[(i, j)])).collect()))
            .collect(),
    )
}

pub fn structure_doc(s: &BlockStructure) -> Value {
    json!({ "groups": s.groups() })
}

pub fn state_doc(v: &CVector) -> Value {
    json!({ "amplitudes": vector_value(v) })
}

pub fn density_doc(m: &CMatrix) -> Value {
    json!({ "density": matrix_value(m) })
}

pub fn unitary_doc(m: &CMatrix) -> Value {
    json!({ "unitary": matrix_value(m) })
}

pub fn channel_doc(kraus: &[CMatrix]) -> Value {
    json!({ "kraus": kraus.iter().map(matrix_value).collect::<Vec<_>>() })
}

/// Compact summary printed with every report.
pub fn structure_summary(s: &BlockStructure) -> Vec<(String, Value)> {
    vec![
        (String::from("structure.blocks"), json!(s.num_blocks())),
        (String::from("structure.dims"), json!(s.dims())),
        (String::from("structure.groups"), json!(s.groups())),
    ]
}
