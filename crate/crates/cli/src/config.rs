//! Parameter resolution: built-in defaults, then a `key = value` file, then
//! command-line flags.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::CliError;

/// Fully resolved parameters of one command, sorted by key.
pub type Params = BTreeMap<String, String>;

/// Reads a plain-text config file. Blank lines and `#` comments are skipped.
pub fn read_config_file(path: &Path) -> Result<Params, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text).map_err(|msg| CliError::Config(format!("{}: {msg}", path.display())))
}

pub fn parse_config(text: &str) -> Result<Params, String> {
    let mut out = Params::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected key = value", lineno + 1))?;
        let key = k.trim().replace('_', "-");
        if key.is_empty() {
            return Err(format!("line {}: empty key", lineno + 1));
        }
        if out.insert(key.clone(), v.trim().to_string()).is_some() {
            return Err(format!("line {}: duplicate key {key:?}", lineno + 1));
        }
    }
    Ok(out)
}

/// Layers file values and flags over `defaults`. Keys outside `defaults`
/// are rejected, except `out`, which the caller resolves separately.
pub fn resolve(
    command: &str,
    defaults: &[(&str, &str)],
    file: &Params,
    flags: &[(&str, Option<String>)],
) -> Result<Params, CliError> {
    let mut params: Params = defaults
        .iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect();
    for (k, v) in file {
        if k == "out" {
            continue;
        }
        if !params.contains_key(k) {
            let known: Vec<&str> = defaults.iter().map(|(k, _)| *k).collect();
            return Err(CliError::Config(format!(
                "unknown key {k:?} for {command} (known: {})",
                known.join(", ")
            )));
        }
        params.insert(k.clone(), v.clone());
    }
    for (k, v) in flags {
        if let Some(v) = v {
            debug_assert!(params.contains_key(*k), "flag {k} missing from defaults");
            params.insert(k.to_string(), v.clone());
        }
    }
    Ok(params)
}

/// Output directory: flag, then environment, then config file, then `out`.
pub fn resolve_out(flag: Option<PathBuf>, env: Option<PathBuf>, file: &Params) -> PathBuf {
    flag.or(env)
        .or_else(|| file.get("out").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"))
}

pub fn get<T>(params: &Params, key: &str) -> Result<T, CliError>
where
    T: FromStr,
    T::Err: std::fmt::Display,
{
    let raw = params
        .get(key)
        .ok_or_else(|| CliError::Config(format!("missing key {key:?}")))?;
    raw.trim()
        .parse()
        .map_err(|e| CliError::Config(format!("invalid value {raw:?} for {key}: {e}")))
}

/// Semicolon-separated list, since descriptors themselves contain commas.
pub fn get_list<T>(params: &Params, key: &str) -> Result<Vec<T>, CliError>
where
    T: FromStr,
    T::Err: std::fmt::Display,
{
    let raw = params
        .get(key)
        .ok_or_else(|| CliError::Config(format!("missing key {key:?}")))?;
    let items: Vec<T> = raw
        .split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse()
                .map_err(|e| CliError::Config(format!("invalid item {s:?} in {key}: {e}")))
        })
        .collect::<Result<_, _>>()?;
    if items.is_empty() {
        return Err(CliError::Config(format!("{key} is empty")));
    }
    Ok(items)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_underscores() {
        let p = parse_config("# header\nn = 16\nwigner_stride=2 # every other\n\n").unwrap();
        assert_eq!(p.get("n").unwrap(), "16");
        assert_eq!(p.get("wigner-stride").unwrap(), "2");
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(parse_config("n 16").is_err());
        assert!(parse_config("n = 1\nn = 2").is_err());
        assert!(parse_config("= 3").is_err());
    }

    #[test]
    fn flags_beat_file_beat_defaults() {
        let file = parse_config("n = 16\neps = 0.1").unwrap();
        let flags = [("eps", Some("0.3".to_string())), ("channel", None)];
        let p = resolve("x", &[("n", "32"), ("eps", "0.4"), ("channel", "dc")], &file, &flags).unwrap();
        assert_eq!(p["n"], "16");
        assert_eq!(p["eps"], "0.3");
        assert_eq!(p["channel"], "dc");
    }

    #[test]
    fn unknown_file_key_is_a_config_error() {
        let file = parse_config("bogus = 1").unwrap();
        let err = resolve("x", &[("n", "32")], &file, &[]).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn out_precedence() {
        let file = parse_config("out = from-file").unwrap();
        assert_eq!(resolve_out(None, None, &file), PathBuf::from("from-file"));
        assert_eq!(resolve_out(None, Some("env".into()), &file), PathBuf::from("env"));
        assert_eq!(
            resolve_out(Some("flag".into()), Some("env".into()), &file),
            PathBuf::from("flag")
        );
        assert_eq!(resolve_out(None, None, &Params::new()), PathBuf::from("out"));
    }

    #[test]
    fn lists_split_on_semicolons() {
        let mut p = Params::new();
        p.insert("channels".into(), "dc; pdc-line:1,1,0;".into());
        let v: Vec<torusnoise::ChannelSpec> = get_list(&p, "channels").unwrap();
        assert_eq!(v.len(), 2);
        p.insert("channels".into(), " ; ".into());
        assert!(get_list::<torusnoise::ChannelSpec>(&p, "channels").is_err());
    }
}
