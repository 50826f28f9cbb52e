//! JSON formats for matrices, vectors, systems, dilation bundles and pointer
//! setups.
//!
//! Complex numbers are `[re, im]` pairs. Floats are written in the shortest
//! form that parses back to the same `f64`, so every file round-trips
//! bit-exactly.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::dilation::{DilationResiduals, DilationResult};
use crate::error::Error;
use crate::linalg::{CMatrix, C64};
use crate::tolerance::Tolerances;
use crate::weak::WeakSetup;

pub const BUNDLE_FORMAT: u32 = 1;

/// Failure to read, parse or write a file; distinct from numerical failures.
#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{context}: {message}")]
    Parse { context: String, message: String },
}

impl FormatError {
    fn parse(context: impl Into<String>, message: impl ToString) -> Self {
        FormatError::Parse {
            context: context.into(),
            message: message.to_string(),
        }
    }
}

/// A load failure: the file was unreadable or malformed, or its content was
/// rejected by a numerical check.
#[derive(Debug, Error)]
pub enum LoadError {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Domain(#[from] Error),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<[f64; 2]>>,
}

impl From<&CMatrix> for MatrixFile {
    fn from(m: &CMatrix) -> Self {
        MatrixFile {
            rows: m.rows(),
            cols: m.cols(),
            data: (0..m.rows())
                .map(|i| m.row(i).iter().map(|z| [z.re, z.im]).collect())
                .collect(),
        }
    }
}

impl MatrixFile {
    pub fn to_matrix(&self) -> Result<CMatrix, String> {
        if self.rows == 0 || self.cols == 0 {
            return Err("rows and cols must be positive".into());
        }
        if self.data.len() != self.rows {
            return Err(format!("{} rows declared, {} given", self.rows, self.data.len()));
        }
        let mut entries = Vec::with_capacity(self.rows * self.cols);
        for (i, row) in self.data.iter().enumerate() {
            if row.len() != self.cols {
                return Err(format!("row {i} has {} entries, expected {}", row.len(), self.cols));
            }
            for (j, [re, im]) in row.iter().enumerate() {
                if !re.is_finite() || !im.is_finite() {
                    return Err(format!("entry ({i}, {j}) is not finite"));
                }
                entries.push(C64::new(*re, *im));
            }
        }
        CMatrix::new(self.rows, self.cols, entries).map_err(|e| e.to_string())
    }
}

fn read_text(path: &Path) -> Result<String, FormatError> {
    fs::read_to_string(path).map_err(|e| FormatError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn read_json(path: &Path) -> Result<Value, FormatError> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|e| FormatError::parse(path.display().to_string(), e))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), FormatError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| FormatError::parse("serialize", e))?;
    fs::write(path, text + "\n").map_err(|e| FormatError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// Parse the matrix stored under `key`, naming the key in any error.
fn matrix_at(value: &Value, key: &str) -> Result<CMatrix, FormatError> {
    let v = value
        .get(key)
        .ok_or_else(|| FormatError::parse(format!("key `{key}`"), "missing"))?;
    let file: MatrixFile = serde_json::from_value(v.clone())
        .map_err(|e| FormatError::parse(format!("key `{key}`"), e))?;
    file.to_matrix().map_err(|e| FormatError::parse(format!("key `{key}`"), e))
}

fn optional_matrix_at(value: &Value, key: &str) -> Result<Option<CMatrix>, FormatError> {
    match value.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(_) => matrix_at(value, key).map(Some),
    }
}

pub fn matrix_to_json(m: &CMatrix) -> Value {
    serde_json::to_value(MatrixFile::from(m)).expect("matrix serializes")
}

pub fn read_matrix(path: &Path) -> Result<CMatrix, FormatError> {
    let value = read_json(path)?;
    let file: MatrixFile =
        serde_json::from_value(value).map_err(|e| FormatError::parse(path.display().to_string(), e))?;
    file.to_matrix()
        .map_err(|e| FormatError::parse(path.display().to_string(), e))
}

pub fn write_matrix(path: &Path, m: &CMatrix) -> Result<(), FormatError> {
    write_json(path, &MatrixFile::from(m))
}

pub fn vector_to_json(v: &[C64]) -> Value {
    Value::from(v.iter().map(|z| vec![z.re, z.im]).collect::<Vec<_>>())
}

fn vector_from_value(value: &Value, context: &str) -> Result<Vec<C64>, FormatError> {
    let pairs: Vec<[f64; 2]> =
        serde_json::from_value(value.clone()).map_err(|e| FormatError::parse(context, e))?;
    if pairs.is_empty() {
        return Err(FormatError::parse(context, "empty vector"));
    }
    if pairs.iter().flatten().any(|x| !x.is_finite()) {
        return Err(FormatError::parse(context, "non-finite entry"));
    }
    Ok(pairs.into_iter().map(|[re, im]| C64::new(re, im)).collect())
}

/// A vector file is a JSON array of `[re, im]` pairs.
pub fn read_vector(path: &Path) -> Result<Vec<C64>, FormatError> {
    vector_from_value(&read_json(path)?, &path.display().to_string())
}

pub fn write_vector(path: &Path, v: &[C64]) -> Result<(), FormatError> {
    write_json(path, &vector_to_json(v))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BenderParams {
    pub r: f64,
    pub theta: f64,
    pub s: f64,
}

/// `{"H": ..., "P": ..., "T": ..., "eta": optional, "bender": optional {r, theta, s}}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemFile {
    pub h: CMatrix,
    pub p: CMatrix,
    pub t: CMatrix,
    pub eta: Option<CMatrix>,
    pub bender: Option<BenderParams>,
}

pub fn read_system(path: &Path) -> Result<SystemFile, FormatError> {
    let value = read_json(path)?;
    if !value.is_object() {
        return Err(FormatError::parse(path.display().to_string(), "expected a JSON object"));
    }
    let bender = match value.get("bender") {
        None | Some(Value::Null) => None,
        Some(b) => Some(
            serde_json::from_value(b.clone()).map_err(|e| FormatError::parse("key `bender`", e))?,
        ),
    };
    Ok(SystemFile {
        h: matrix_at(&value, "H")?,
        p: matrix_at(&value, "P")?,
        t: matrix_at(&value, "T")?,
        eta: optional_matrix_at(&value, "eta")?,
        bender,
    })
}

pub fn system_to_json(sys: &SystemFile) -> Value {
    let mut obj = serde_json::json!({
        "H": matrix_to_json(&sys.h),
        "P": matrix_to_json(&sys.p),
        "T": matrix_to_json(&sys.t),
    });
    if let Some(eta) = &sys.eta {
        obj["eta"] = matrix_to_json(eta);
    }
    if let Some(b) = &sys.bender {
        obj["bender"] = serde_json::to_value(b).expect("params serialize");
    }
    obj
}

pub fn write_system(path: &Path, sys: &SystemFile) -> Result<(), FormatError> {
    write_json(path, &system_to_json(sys))
}

const BUNDLE_MATRICES: [&str; 14] = [
    "h", "h_tilde", "psi_tilde", "phi_tilde", "psi_prime", "psi", "xi", "sigma", "eta", "s", "j",
    "h1", "h2", "h4",
];

/// A dilation as a versioned JSON object, with its residuals for inspection.
pub fn bundle_to_json(d: &DilationResult) -> Value {
    let matrices = [
        &d.h,
        &d.h_tilde,
        &d.psi_tilde,
        &d.phi_tilde,
        &d.psi_prime,
        &d.psi,
        &d.xi,
        &d.sigma,
        &d.eta,
        &d.s,
        &d.j,
        &d.h1,
        &d.h2,
        &d.h4,
    ];
    let mut obj = serde_json::Map::new();
    obj.insert("format".into(), Value::from(BUNDLE_FORMAT));
    for (key, m) in BUNDLE_MATRICES.iter().zip(matrices) {
        obj.insert((*key).into(), matrix_to_json(m));
    }
    obj.insert("perm".into(), Value::from(d.perm.clone()));
    obj.insert("c".into(), Value::from(d.c));
    obj.insert(
        "residuals".into(),
        serde_json::to_value::<DilationResiduals>(d.residuals()).expect("residuals serialize"),
    );
    Value::Object(obj)
}

pub fn write_bundle(path: &Path, d: &DilationResult) -> Result<(), FormatError> {
    write_json(path, &bundle_to_json(d))
}

/// Parse a bundle and re-verify it; a bundle that fails the check is a
/// [`LoadError::Domain`] error.
pub fn bundle_from_json(value: &Value, tol: &Tolerances) -> Result<DilationResult, LoadError> {
    match value.get("format").and_then(Value::as_u64) {
        Some(f) if f == u64::from(BUNDLE_FORMAT) => {}
        Some(f) => {
            return Err(FormatError::parse("key `format`", format!("unsupported version {f}")).into())
        }
        None => return Err(FormatError::parse("key `format`", "missing or not an integer").into()),
    }
    let mut m = Vec::with_capacity(BUNDLE_MATRICES.len());
    for key in BUNDLE_MATRICES {
        m.push(matrix_at(value, key)?);
    }
    let perm: Vec<usize> = value
        .get("perm")
        .ok_or_else(|| FormatError::parse("key `perm`", "missing"))
        .and_then(|v| serde_json::from_value(v.clone()).map_err(|e| FormatError::parse("key `perm`", e)))?;
    let c = value
        .get("c")
        .and_then(Value::as_f64)
        .ok_or_else(|| FormatError::parse("key `c`", "missing or not a number"))?;
    let n = m[5].rows();
    if perm.len() != n || perm.iter().any(|&p| p >= n) {
        return Err(FormatError::parse("key `perm`", format!("not a permutation of 0..{n}")).into());
    }
    let mut it = m.into_iter();
    let mut next = || it.next().expect("all matrices parsed");
    let d = DilationResult {
        h: next(),
        h_tilde: next(),
        psi_tilde: next(),
        phi_tilde: next(),
        psi_prime: next(),
        psi: next(),
        xi: next(),
        sigma: next(),
        eta: next(),
        s: next(),
        j: next(),
        h1: next(),
        h2: next(),
        h4: next(),
        perm,
        c,
    };
    d.verify(tol)?;
    Ok(d)
}

pub fn read_bundle(path: &Path, tol: &Tolerances) -> Result<DilationResult, LoadError> {
    bundle_from_json(&read_json(path)?, tol)
}

/// `{"observable": matrix, "pre": vector, "post": vector, "g": number, "width": number}`.
pub fn read_setup(path: &Path, tol: &Tolerances) -> Result<WeakSetup, LoadError> {
    let value = read_json(path)?;
    let observable = matrix_at(&value, "observable")?;
    let vector = |key: &str| -> Result<Vec<C64>, FormatError> {
        let v = value
            .get(key)
            .ok_or_else(|| FormatError::parse(format!("key `{key}`"), "missing"))?;
        vector_from_value(v, &format!("key `{key}`"))
    };
    let number = |key: &str| -> Result<f64, FormatError> {
        value
            .get(key)
            .and_then(Value::as_f64)
            .ok_or_else(|| FormatError::parse(format!("key `{key}`"), "missing or not a number"))
    };
    let (pre, post) = (vector("pre")?, vector("post")?);
    let (g, width) = (number("g")?, number("width")?);
    Ok(WeakSetup::new(observable, pre, post, g, width, tol)?)
}

pub fn setup_to_json(s: &WeakSetup) -> Value {
    serde_json::json!({
        "observable": matrix_to_json(&s.observable),
        "pre": vector_to_json(&s.pre),
        "post": vector_to_json(&s.post),
        "g": s.g,
        "width": s.pointer_width,
    })
}

pub fn write_setup(path: &Path, s: &WeakSetup) -> Result<(), FormatError> {
    write_json(path, &setup_to_json(s))
}
