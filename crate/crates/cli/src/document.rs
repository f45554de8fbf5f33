//! The XMOD-JSON input document.

use serde_json::{Map, Value};
use thiserror::Error;
use xmodcat_core::group::{named_group, Group, GroupError};
use xmodcat_core::xmod::{make_dg, make_rg, CrossedModule};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("range error at {path}: {message}")]
    Range { path: String, message: String },
}

impl ParseError {
    pub fn kind(&self) -> &'static str {
        match self {
            ParseError::Syntax(_) => "syntax",
            ParseError::Schema { .. } => "schema",
            ParseError::Range { .. } => "range",
        }
    }

    pub fn path(&self) -> Option<&str> {
        match self {
            ParseError::Syntax(_) => None,
            ParseError::Schema { path, .. } | ParseError::Range { path, .. } => Some(path),
        }
    }
}

/// A structurally valid document. Group construction happens in
/// [`XmodDocument::build`], since a well-formed table may still fail the
/// group axioms.
#[derive(Debug, Clone)]
pub struct XmodDocument {
    pub name: Option<String>,
    pub body: Body,
    pub metadata: Option<Value>,
    /// The input as parsed, echoed into reports.
    pub source: Value,
}

#[derive(Debug, Clone)]
pub enum Body {
    Explicit { x1: GroupSpec, x2: GroupSpec, action: Vec<Vec<usize>>, boundary: Vec<usize> },
    Constructor { kind: ConstructorKind, group: GroupSpec },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstructorKind {
    Rg,
    Dg,
}

#[derive(Debug, Clone)]
pub enum GroupSpec {
    Table(Vec<Vec<usize>>),
    Perm { degree: usize, generators: Vec<Vec<usize>> },
    Named(String),
}

/// Failure to turn a parsed document into a crossed module.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{path}: {source}")]
pub struct BuildError {
    pub path: String,
    pub source: GroupError,
}

fn schema(path: &str, message: impl Into<String>) -> ParseError {
    ParseError::Schema { path: path.to_string(), message: message.into() }
}

fn range(path: &str, message: impl Into<String>) -> ParseError {
    ParseError::Range { path: path.to_string(), message: message.into() }
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

fn field<'a>(obj: &'a Map<String, Value>, path: &str, key: &str) -> Result<&'a Value, ParseError> {
    obj.get(key).ok_or_else(|| schema(&join(path, key), "missing field"))
}

fn as_object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>, ParseError> {
    v.as_object().ok_or_else(|| schema(path, "expected an object"))
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, ParseError> {
    v.as_array().ok_or_else(|| schema(path, "expected an array"))
}

fn as_index(v: &Value, path: &str) -> Result<usize, ParseError> {
    match v.as_i64() {
        Some(k) if k < 0 => Err(range(path, format!("{k} is negative"))),
        Some(k) => usize::try_from(k).map_err(|_| range(path, format!("{k} is too large"))),
        None if v.is_u64() => Err(range(path, format!("{v} is too large"))),
        None => Err(schema(path, "expected a non-negative integer")),
    }
}

fn bounded(v: &Value, path: &str, bound: usize, what: &str) -> Result<usize, ParseError> {
    let k = as_index(v, path)?;
    if k >= bound {
        return Err(range(path, format!("{k} is not below {what} {bound}")));
    }
    Ok(k)
}

fn index_matrix(v: &Value, path: &str, rows: usize, cols: usize, bound: usize, what: &str) -> Result<Vec<Vec<usize>>, ParseError> {
    let arr = as_array(v, path)?;
    if arr.len() != rows {
        return Err(schema(path, format!("expected {rows} rows, found {}", arr.len())));
    }
    arr.iter()
        .enumerate()
        .map(|(i, row)| {
            let rpath = format!("{path}[{i}]");
            let r = as_array(row, &rpath)?;
            if r.len() != cols {
                return Err(schema(&rpath, format!("expected {cols} entries, found {}", r.len())));
            }
            r.iter().enumerate().map(|(j, e)| bounded(e, &format!("{rpath}[{j}]"), bound, what)).collect()
        })
        .collect()
}

/// Order of a table group; `None` when only the built group knows it.
fn declared_order(spec: &GroupSpec) -> Option<usize> {
    match spec {
        GroupSpec::Table(t) => Some(t.len()),
        _ => None,
    }
}

fn parse_group(v: &Value, path: &str) -> Result<GroupSpec, ParseError> {
    let obj = as_object(v, path)?;
    let kind_path = join(path, "kind");
    let kind = field(obj, path, "kind")?.as_str().ok_or_else(|| schema(&kind_path, "expected a string"))?;
    match kind {
        "table" => {
            let tpath = join(path, "table");
            let rows = as_array(field(obj, path, "table")?, &tpath)?;
            let n = rows.len();
            if n == 0 {
                return Err(schema(&tpath, "empty table"));
            }
            Ok(GroupSpec::Table(index_matrix(obj.get("table").unwrap(), &tpath, n, n, n, "order")?))
        }
        "perm" => {
            let dpath = join(path, "degree");
            let degree = as_index(field(obj, path, "degree")?, &dpath)?;
            if degree == 0 {
                return Err(range(&dpath, "degree must be positive"));
            }
            let gpath = join(path, "generators");
            let gens = as_array(field(obj, path, "generators")?, &gpath)?;
            let generators = index_matrix(obj.get("generators").unwrap(), &gpath, gens.len(), degree, degree, "degree")?;
            Ok(GroupSpec::Perm { degree, generators })
        }
        "named" => {
            let npath = join(path, "name");
            let name = field(obj, path, "name")?.as_str().ok_or_else(|| schema(&npath, "expected a string"))?;
            if named_group(name).is_err() {
                return Err(schema(&npath, format!("unknown named group {name:?}")));
            }
            Ok(GroupSpec::Named(name.to_string()))
        }
        other => Err(schema(&kind_path, format!("unknown group kind {other:?}"))),
    }
}

impl GroupSpec {
    pub fn build(&self) -> Result<Group, GroupError> {
        match self {
            GroupSpec::Table(t) => Group::from_table(t.len(), t),
            GroupSpec::Perm { degree, generators } => Group::from_permutations(*degree, generators),
            GroupSpec::Named(n) => named_group(n),
        }
    }
}

/// Parses document text. Table shapes and index ranges are checked against
/// table groups immediately; for permutation groups the order is only known
/// after closure, so those checks happen in [`XmodDocument::build`].
pub fn parse(text: &str) -> Result<XmodDocument, ParseError> {
    let source: Value = serde_json::from_str(text).map_err(|e| ParseError::Syntax(e.to_string()))?;
    let obj = as_object(&source, "$")?;
    let name = match obj.get("name") {
        None => None,
        Some(v) => Some(v.as_str().ok_or_else(|| schema("name", "expected a string"))?.to_string()),
    };
    let metadata = obj.get("metadata").cloned();
    let body = if let Some(kind) = obj.get("kind") {
        let kind = match kind.as_str() {
            Some("RG") => ConstructorKind::Rg,
            Some("DG") => ConstructorKind::Dg,
            _ => return Err(schema("kind", "expected \"RG\" or \"DG\"")),
        };
        Body::Constructor { kind, group: parse_group(field(obj, "", "group")?, "group")? }
    } else {
        let x1 = parse_group(field(obj, "", "x1")?, "x1")?;
        let x2 = parse_group(field(obj, "", "x2")?, "x2")?;
        let action = field(obj, "", "action")?;
        let boundary = field(obj, "", "boundary")?;
        let (action, boundary) = match (declared_order(&x1), declared_order(&x2)) {
            (Some(n1), Some(n2)) => {
                let b = as_array(boundary, "boundary")?;
                (index_matrix(action, "action", n2, n1, n2, "|X2| =")?, parse_boundary(b, n2, n1)?)
            }
            _ => (loose_matrix(action, "action")?, loose_vector(boundary, "boundary")?),
        };
        Body::Explicit { x1, x2, action, boundary }
    };
    Ok(XmodDocument { name, body, metadata, source })
}

fn parse_boundary(b: &[Value], n2: usize, n1: usize) -> Result<Vec<usize>, ParseError> {
    if b.len() != n2 {
        return Err(schema("boundary", format!("expected length |X2| = {n2}, found {}", b.len())));
    }
    b.iter().enumerate().map(|(i, e)| bounded(e, &format!("boundary[{i}]"), n1, "|X1| =")).collect()
}

fn loose_matrix(v: &Value, path: &str) -> Result<Vec<Vec<usize>>, ParseError> {
    as_array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, row)| loose_vector(row, &format!("{path}[{i}]")))
        .collect()
}

fn loose_vector(v: &Value, path: &str) -> Result<Vec<usize>, ParseError> {
    as_array(v, path)?.iter().enumerate().map(|(i, e)| as_index(e, &format!("{path}[{i}]"))).collect()
}

/// Errors from [`XmodDocument::build`]: either the late shape/range checks
/// (exit code 2) or a group that fails its axioms (exit code 1).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocumentError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Build(#[from] BuildError),
}

impl XmodDocument {
    pub fn build(&self) -> Result<CrossedModule, DocumentError> {
        let group = |spec: &GroupSpec, path: &str| spec.build().map_err(|source| BuildError { path: path.into(), source });
        let x = match &self.body {
            Body::Constructor { kind, group: spec } => {
                let mut g = group(spec, "group")?;
                if let GroupSpec::Named(n) = spec {
                    g = g.with_name(n.clone());
                }
                match kind {
                    ConstructorKind::Rg => make_rg(&g),
                    ConstructorKind::Dg => make_dg(&g),
                }
            }
            Body::Explicit { x1, x2, action, boundary } => {
                let g1 = group(x1, "x1")?;
                let g2 = group(x2, "x2")?;
                let (n1, n2) = (g1.order(), g2.order());
                let action_value = serde_json::to_value(action).expect("integers serialize");
                let action = index_matrix(&action_value, "action", n2, n1, n2, "|X2| =")?;
                let boundary_values: Vec<Value> = boundary.iter().map(|&b| Value::from(b)).collect();
                let boundary = parse_boundary(&boundary_values, n2, n1)?;
                CrossedModule::new(g1, g2, action, boundary).map_err(|e| schema("$", e.to_string()))?
            }
        };
        Ok(match &self.name {
            Some(n) => x.with_name(n.clone()),
            None => x,
        })
    }

    /// Display name: the document's own, else the constructor name.
    pub fn display_name(&self, x: &CrossedModule) -> String {
        self.name.clone().or_else(|| x.name().map(str::to_string)).unwrap_or_else(|| "unnamed".into())
    }
}
