use std::io::Write;
use std::path::Path;

use fracmap_core::scalar::ProjectiveScalar;
use serde_json::{json, Map, Value};

use crate::CliError;

/// Keys whose string values are names, never numbers.
const TEXT_KEYS: [&str; 6] = ["label", "labels", "name", "kind", "jumped_branch", "witness"];

/// Rewrites every exact number string `"s"` as `{"exact": "s", "float": f}`.
pub fn annotate(value: Value) -> Value {
    annotate_inner(value, false)
}

fn annotate_inner(value: Value, text: bool) -> Value {
    match value {
        Value::String(s) if !text => match s.parse::<ProjectiveScalar>() {
            Ok(x) => {
                let f = x.to_f64();
                json!({ "exact": s, "float": if f.is_finite() { json!(f) } else { Value::Null } })
            }
            Err(_) => Value::String(s),
        },
        Value::Array(items) => Value::Array(items.into_iter().map(|v| annotate_inner(v, text)).collect()),
        Value::Object(fields) => Value::Object(
            fields
                .into_iter()
                .map(|(k, v)| {
                    let text = TEXT_KEYS.contains(&k.as_str());
                    (k, annotate_inner(v, text))
                })
                .collect::<Map<_, _>>(),
        ),
        other => other,
    }
}

/// Inverse of [`annotate`], so emitted reports can be read back.
pub fn strip_annotations(value: Value) -> Value {
    match value {
        Value::Object(fields) if fields.len() == 2 && fields.contains_key("exact") && fields.contains_key("float") => {
            fields.get("exact").cloned().unwrap_or(Value::Null)
        }
        Value::Object(fields) => Value::Object(fields.into_iter().map(|(k, v)| (k, strip_annotations(v))).collect()),
        Value::Array(items) => Value::Array(items.into_iter().map(strip_annotations).collect()),
        other => other,
    }
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let io = |e: std::io::Error| CliError::Config(format!("cannot write {}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

pub fn emit(path: Option<&Path>, contents: &str) -> Result<(), CliError> {
    match path {
        Some(p) => write_atomic(p, contents),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

pub fn emit_json(path: Option<&Path>, value: &Value) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(&annotate(value.clone())).expect("JSON values always serialize");
    text.push('\n');
    emit(path, &text)
}
