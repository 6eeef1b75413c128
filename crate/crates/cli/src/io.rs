//! JSON input/output and the error-to-exit-code contract.

use std::fmt;
use std::io::{self, Read, Write};
use std::path::Path;

use posmap::matspace::{DensityMatrix, Tolerance};
use posmap::{ComplexMatrix, MapRep, MapWire};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

pub const ATOL_ENV: &str = "POSMAP_ATOL";

#[derive(Debug)]
pub enum CliError {
    /// A well-formed request the library rejected (exit 1).
    Domain(posmap::Error),
    /// Input JSON that does not match its schema (exit 2).
    Schema {
        file: String,
        path: String,
        detail: String,
    },
    /// Unreadable input or a bad environment setting (exit 2).
    Usage(String),
}

impl From<posmap::Error> for CliError {
    fn from(e: posmap::Error) -> Self {
        CliError::Domain(e)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Domain(e) => write!(f, "{e}"),
            CliError::Schema { file, path, detail } => write!(f, "{file}: at `{path}`: {detail}"),
            CliError::Usage(msg) => f.write_str(msg),
        }
    }
}

#[derive(Serialize)]
struct ErrorObject<'a> {
    error: &'a str,
    detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    file: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    path: Option<&'a str>,
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Schema { .. } | CliError::Usage(_) => 2,
        }
    }

    pub fn to_json(&self) -> String {
        let obj = match self {
            CliError::Domain(e) => ErrorObject {
                error: e.code(),
                detail: e.to_string(),
                file: None,
                path: None,
            },
            CliError::Schema { file, path, detail } => ErrorObject {
                error: "SchemaError",
                detail: detail.clone(),
                file: Some(file),
                path: Some(path),
            },
            CliError::Usage(msg) => ErrorObject {
                error: "UsageError",
                detail: msg.clone(),
                file: None,
                path: None,
            },
        };
        to_pretty(&obj)
    }
}

pub fn tolerance_from_env() -> Result<Tolerance, CliError> {
    match std::env::var(ATOL_ENV) {
        Err(std::env::VarError::NotPresent) => Ok(Tolerance::default()),
        Err(e) => Err(CliError::Usage(format!("{ATOL_ENV}: {e}"))),
        Ok(s) => match s.trim().parse::<f64>() {
            Ok(v) if v.is_finite() && v > 0.0 => Ok(Tolerance::new(v)),
            _ => Err(CliError::Usage(format!(
                "{ATOL_ENV} must be a positive decimal, got {s:?}"
            ))),
        },
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| CliError::Usage(format!("reading stdin: {e}")))?;
    } else {
        text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    }
    Ok(text)
}

/// Deserializes `path`, reporting the JSON path of the first violation.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = read_text(path)?;
    let file = path.display().to_string();
    let mut de = serde_json::Deserializer::from_str(&text);
    let value = serde_path_to_error::deserialize(&mut de).map_err(|e| CliError::Schema {
        file: file.clone(),
        path: e.path().to_string(),
        detail: e.into_inner().to_string(),
    })?;
    de.end().map_err(|e| CliError::Schema {
        file,
        path: ".".into(),
        detail: e.to_string(),
    })?;
    Ok(value)
}

pub fn read_map(path: &Path, tol: Tolerance) -> Result<MapRep, CliError> {
    let value: Value = read_json(path)?;
    let wire = match serde_path_to_error::deserialize::<_, MapWire>(&value) {
        Ok(w) => w,
        Err(e) => return Err(locate_map_error(path, &value, e)),
    };
    Ok(wire.into_map(tol)?)
}

/// `data` is untagged, so a bad element inside it is first reported at
/// `data` alone. Re-reading it as the shape `repr` asks for recovers the
/// full path.
fn locate_map_error(
    path: &Path,
    value: &Value,
    e: serde_path_to_error::Error<serde_json::Error>,
) -> CliError {
    let file = path.display().to_string();
    let schema = |path: String, detail: String| CliError::Schema {
        file: file.clone(),
        path,
        detail,
    };
    if e.path().to_string() == "data" {
        if let Some(data) = value.get("data") {
            let inner = if value.get("repr").and_then(Value::as_str) == Some("kraus") {
                serde_path_to_error::deserialize::<_, Vec<ComplexMatrix>>(data).err()
            } else {
                serde_path_to_error::deserialize::<_, ComplexMatrix>(data).err()
            };
            if let Some(inner) = inner {
                let sub = inner.path().to_string();
                let joined = if sub == "." {
                    "data".to_string()
                } else if sub.starts_with('[') {
                    format!("data{sub}")
                } else {
                    format!("data.{sub}")
                };
                return schema(joined, inner.into_inner().to_string());
            }
        }
    }
    schema(e.path().to_string(), e.into_inner().to_string())
}

pub fn read_matrix(path: &Path) -> Result<ComplexMatrix, CliError> {
    read_json(path)
}

pub fn read_state(path: &Path, tol: Tolerance) -> Result<DensityMatrix, CliError> {
    Ok(DensityMatrix::new(read_matrix(path)?, tol)?)
}

pub fn to_pretty<T: Serialize>(value: &T) -> String {
    crate::json::render(value)
}

pub fn emit<T: Serialize>(value: &T) -> Result<(), CliError> {
    io::stdout()
        .lock()
        .write_all(to_pretty(value).as_bytes())
        .map_err(|e| CliError::Usage(format!("writing stdout: {e}")))
}
