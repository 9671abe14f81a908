//! Flat `key = value` config files.
//!
//! Each entry becomes `--key value` inserted right after the subcommand, ahead
//! of the user's own flags. Every subcommand lets a later occurrence of a flag
//! override an earlier one, so explicit flags win.

use std::ffi::OsString;
use std::path::Path;

use crate::{CliError, CliResult};

/// Parses the config text into `(key, value)` pairs. `#` starts a comment.
pub fn parse(text: &str) -> CliResult<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::usage(format!("config line {}: expected key = value, got {raw:?}", no + 1)))?;
        let key = key.trim().replace('_', "-");
        if key.is_empty() || key == "config" || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '-') {
            return Err(CliError::usage(format!("config line {}: bad key {key:?}", no + 1)));
        }
        out.push((key, value.trim().to_string()));
    }
    Ok(out)
}

/// Flags for one entry. `true` and `false` toggle switches.
fn to_flags(key: &str, value: &str) -> Vec<OsString> {
    match value {
        "true" => vec![format!("--{key}").into()],
        "false" => Vec::new(),
        _ => vec![format!("--{key}").into(), value.into()],
    }
}

fn config_path(argv: &[OsString]) -> CliResult<Option<OsString>> {
    let mut found = None;
    let mut iter = argv.iter().skip(2);
    while let Some(arg) = iter.next() {
        let s = arg.to_string_lossy();
        if s == "--" {
            break;
        }
        if s == "--config" {
            let path = iter.next().ok_or_else(|| CliError::usage("--config needs a path"))?;
            found = Some(path.clone());
        } else if let Some(path) = s.strip_prefix("--config=") {
            found = Some(path.into());
        }
    }
    Ok(found)
}

/// Expands `--config FILE` (program name and subcommand first in `argv`).
pub fn merge_config(argv: Vec<OsString>) -> CliResult<Vec<OsString>> {
    let Some(path) = config_path(&argv)? else {
        return Ok(argv);
    };
    let path = Path::new(&path);
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut merged: Vec<OsString> = argv[..2].to_vec();
    for (key, value) in parse(&text)? {
        merged.extend(to_flags(&key, &value));
    }
    merged.extend(argv[2..].iter().cloned());
    Ok(merged)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn os(v: &[&str]) -> Vec<OsString> {
        v.iter().map(OsString::from).collect()
    }

    #[test]
    fn parse_entries() {
        let got = parse("# comment\nseed = 7\n\nsamples=100 # trailing\ncode_file = a b\n").unwrap();
        assert_eq!(
            got,
            vec![
                ("seed".into(), "7".into()),
                ("samples".into(), "100".into()),
                ("code-file".into(), "a b".into())
            ]
        );
        assert!(parse("seed 7").is_err());
        assert!(parse("= 7").is_err());
        assert!(parse("config = x").is_err());
    }

    #[test]
    fn flags_follow_config() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.cfg");
        std::fs::write(&path, "seed = 3\nall = true\njobs = 2\nmode = false\n").unwrap();
        let argv = os(&["qthreshold", "verify", "--config", path.to_str().unwrap(), "--seed", "9"]);
        let merged = merge_config(argv).unwrap();
        let expected = os(&["qthreshold", "verify", "--seed", "3", "--all", "--jobs", "2", "--config"]);
        assert_eq!(&merged[..8], &expected[..]);
        assert_eq!(merged.last().unwrap(), "9");
        let plain = os(&["qthreshold", "verify", "--all"]);
        assert_eq!(merge_config(plain.clone()).unwrap(), plain);
        assert!(merge_config(os(&["qthreshold", "verify", "--config"])).is_err());
    }
}
