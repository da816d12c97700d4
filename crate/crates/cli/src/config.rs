//! Config files: flat `key = value` lines or a flat JSON object. Entries are
//! turned into `--key value` arguments placed ahead of the command-line
//! flags, so explicit flags win.

use std::ffi::OsString;
use std::path::Path;

use crate::CliError;

const SUBCOMMANDS: [&str; 4] = ["solve", "sweep", "simulate", "evaluate"];

/// Parses a config file into `(key, value)` pairs. Keys may use `_` or `-`.
pub fn parse_config(text: &str) -> Result<Vec<(String, Option<String>)>, CliError> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        let value: serde_json::Value = serde_json::from_str(text)
            .map_err(|e| CliError::Usage(format!("config: invalid JSON: {e}")))?;
        let object = value
            .as_object()
            .ok_or_else(|| CliError::Usage("config: JSON root must be an object".into()))?;
        let mut out = Vec::new();
        for (key, v) in object {
            let rendered = match v {
                serde_json::Value::String(s) => Some(s.clone()),
                serde_json::Value::Number(n) => Some(n.to_string()),
                serde_json::Value::Bool(true) => None,
                serde_json::Value::Bool(false) => continue,
                serde_json::Value::Array(items) => Some(
                    items
                        .iter()
                        .map(|i| match i {
                            serde_json::Value::String(s) => s.clone(),
                            other => other.to_string(),
                        })
                        .collect::<Vec<_>>()
                        .join(","),
                ),
                _ => {
                    return Err(CliError::Usage(format!(
                        "config: unsupported value for `{key}`"
                    )))
                }
            };
            out.push((normalize_key(key), rendered));
        }
        return Ok(out);
    }

    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected key=value", i + 1)))?;
        let value = value.trim().trim_matches('"');
        out.push((normalize_key(key.trim()), Some(value.to_string())));
    }
    Ok(out)
}

fn normalize_key(key: &str) -> String {
    key.replace('_', "-")
}

/// Expands `--config <path>` (or `--config=<path>`) into explicit flags
/// inserted right after the subcommand.
pub fn expand_config_args(args: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let mut path = None;
    let mut rest = Vec::with_capacity(args.len());
    let mut iter = args.into_iter();
    while let Some(arg) = iter.next() {
        match arg.to_str() {
            Some("--config") => {
                let value = iter
                    .next()
                    .ok_or_else(|| CliError::Usage("--config requires a path".into()))?;
                path = Some(value);
            }
            Some(s) if s.starts_with("--config=") => {
                path = Some(OsString::from(&s["--config=".len()..]));
            }
            _ => rest.push(arg),
        }
    }
    let Some(path) = path else {
        return Ok(rest);
    };
    let text = std::fs::read_to_string(Path::new(&path))?;
    let entries = parse_config(&text)?;

    let position = rest
        .iter()
        .position(|a| a.to_str().is_some_and(|s| SUBCOMMANDS.contains(&s)))
        .ok_or_else(|| CliError::Usage("a subcommand is required".into()))?;
    let mut injected = Vec::new();
    for (key, value) in entries {
        injected.push(OsString::from(format!("--{key}")));
        if let Some(v) = value {
            injected.push(OsString::from(v));
        }
    }
    rest.splice(position + 1..position + 1, injected);
    Ok(rest)
}
