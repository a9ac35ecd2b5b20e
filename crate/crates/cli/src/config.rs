//! Merges a JSON config file into the argument vector.

use crate::args::Cli;
use clap::CommandFactory;
use serde_json::Value;
use std::ffi::OsString;

fn config_path(args: &[OsString]) -> Option<(usize, usize, OsString)> {
    for (i, a) in args.iter().enumerate() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return args.get(i + 1).map(|p| (i, 2, p.clone()));
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some((i, 1, p.into()));
        }
    }
    None
}

fn scalar(v: &Value) -> Result<String, String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        other => Err(format!("unsupported config value {other}")),
    }
}

/// Expands `--config F` into flags. A `command` key (string or array of
/// words) supplies the subcommand when none is given; every other key
/// becomes `--key value`, with booleans as bare flags and arrays joined by
/// commas. Flags already present on the command line win. Unknown keys
/// reach the parser and are rejected there.
pub fn expand(mut args: Vec<OsString>) -> Result<Vec<OsString>, String> {
    let Some((pos, width, path)) = config_path(&args) else {
        return Ok(args);
    };
    args.drain(pos..pos + width);
    let text = std::fs::read_to_string(&path)
        .map_err(|e| format!("cannot read config {}: {e}", path.to_string_lossy()))?;
    let json: Value =
        serde_json::from_str(&text).map_err(|e| format!("invalid config JSON: {e}"))?;
    let Value::Object(map) = json else {
        return Err("config must be a JSON object".into());
    };
    let present: Vec<String> = args
        .iter()
        .filter_map(|a| a.to_str())
        .filter_map(|s| s.strip_prefix("--"))
        .map(|s| s.split('=').next().unwrap_or(s).to_string())
        .collect();
    let top = Cli::command();
    let has_command = args.iter().skip(1).any(|a| {
        top.get_subcommands()
            .any(|c| a.to_str() == Some(c.get_name()))
    });
    let mut extra: Vec<OsString> = Vec::new();
    for (key, value) in &map {
        if key == "command" {
            if !has_command {
                let words: Vec<String> = match value {
                    Value::String(s) => s.split_whitespace().map(String::from).collect(),
                    Value::Array(a) => a.iter().map(scalar).collect::<Result<_, _>>()?,
                    other => return Err(format!("unsupported command value {other}")),
                };
                for (i, w) in words.into_iter().enumerate() {
                    args.insert(1 + i, w.into());
                }
            }
            continue;
        }
        let flag = key.replace('_', "-");
        if present.iter().any(|p| *p == flag || *p == *key) {
            continue;
        }
        match value {
            Value::Bool(true) => extra.push(format!("--{key}").into()),
            Value::Bool(false) | Value::Null => {}
            Value::Array(items) => {
                let joined = items
                    .iter()
                    .map(scalar)
                    .collect::<Result<Vec<_>, _>>()?
                    .join(",");
                extra.push(format!("--{key}").into());
                extra.push(joined.into());
            }
            v => {
                extra.push(format!("--{key}").into());
                extra.push(scalar(v)?.into());
            }
        }
    }
    args.extend(extra);
    Ok(args)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expands_keys_after_the_command() {
        let dir = std::env::temp_dir().join(format!("kappa-config-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("c.json");
        std::fs::write(
            &path,
            r#"{"command": "perc theta", "graph": "path5", "p": 0.5, "vertex": 2, "exact": true}"#,
        )
        .unwrap();
        let args: Vec<OsString> = vec![
            "kappa".into(),
            "--config".into(),
            path.clone().into(),
            "--vertex".into(),
            "1".into(),
        ];
        let out: Vec<String> = expand(args)
            .unwrap()
            .into_iter()
            .map(|s| s.into_string().unwrap())
            .collect();
        assert_eq!(&out[..3], &["kappa", "perc", "theta"]);
        assert!(out.windows(2).any(|w| w == ["--graph", "path5"]));
        assert!(out.contains(&"--exact".to_string()));
        assert_eq!(out.iter().filter(|s| *s == "--vertex").count(), 1);
        std::fs::remove_dir_all(&dir).ok();
    }
}
