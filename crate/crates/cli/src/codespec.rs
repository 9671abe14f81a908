//! Builtin code specs and the generator-matrix file format.

use std::path::Path;

use qthreshold::{Field, LinearCode, Word};

use crate::args::CodeArgs;
use crate::{CliError, CliResult};

pub const FILE_FORMAT: &str =
    "expected a header line \"q n k\" followed by k rows of n field elements (whitespace or comma separated)";

/// Parses `rep:q:n`, `hamming:7:4`, `random:q:n:k:seed` or
/// `augment-e1:<spec>`.
pub fn parse_spec(spec: &str) -> CliResult<LinearCode> {
    if let Some(inner) = spec.strip_prefix("augment-e1:") {
        return Ok(parse_spec(inner)?.augment_e1()?.code);
    }
    let parts: Vec<&str> = spec.split(':').collect();
    let num = |s: &str| -> CliResult<u64> {
        s.trim()
            .parse()
            .map_err(|_| CliError::usage(format!("code spec {spec:?}: {s:?} is not a nonnegative integer")))
    };
    match parts.as_slice() {
        ["rep", q, n] => {
            let field = field(num(q)?)?;
            Ok(LinearCode::repetition(&field, num(n)? as usize)?)
        }
        ["hamming", "7", "4"] => Ok(LinearCode::hamming_7_4()),
        ["random", q, n, k, seed] => {
            let field = field(num(q)?)?;
            Ok(LinearCode::random(&field, num(n)? as usize, num(k)? as usize, num(seed)?)?)
        }
        _ => Err(CliError::usage(format!(
            "unknown code spec {spec:?}; expected rep:q:n, hamming:7:4, random:q:n:k:seed or augment-e1:<spec>"
        ))),
    }
}

fn field(q: u64) -> CliResult<Field> {
    let q = u32::try_from(q).map_err(|_| CliError::usage(format!("alphabet size {q} too large")))?;
    Ok(Field::new(q)?)
}

/// Parses the generator-matrix text format. Blank lines and `#` comments are
/// skipped.
pub fn parse_code_text(text: &str) -> CliResult<LinearCode> {
    let bad = |detail: String| CliError::usage(format!("malformed code file: {detail}; {FILE_FORMAT}"));
    let mut lines = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty());
    let header = lines.next().ok_or_else(|| bad("empty file".into()))?;
    let fields = split_numbers(header).map_err(|e| bad(format!("header: {e}")))?;
    let [q, n, k] = fields[..] else {
        return Err(bad(format!("header has {} numbers", fields.len())));
    };
    let field = Field::new(u32::try_from(q).map_err(|_| bad(format!("q = {q} too large")))?)
        .map_err(|e| bad(e.to_string()))?;
    let mut rows = Vec::with_capacity(k as usize);
    for r in 0..k {
        let line = lines.next().ok_or_else(|| bad(format!("expected {k} rows, found {r}")))?;
        let row = split_numbers(line).map_err(|e| bad(format!("row {}: {e}", r + 1)))?;
        if row.len() as u64 != n {
            return Err(bad(format!("row {} has {} entries, header says n = {n}", r + 1, row.len())));
        }
        let row = row
            .into_iter()
            .map(|x| u8::try_from(x).ok().filter(|&x| field.is_element(x)))
            .collect::<Option<Vec<u8>>>()
            .ok_or_else(|| bad(format!("row {} has an entry outside F_{q}", r + 1)))?;
        rows.push(row);
    }
    if let Some(extra) = lines.next() {
        return Err(bad(format!("unexpected extra line {extra:?}")));
    }
    Ok(LinearCode::from_generator(&field, rows)?)
}

fn split_numbers(line: &str) -> Result<Vec<u64>, String> {
    line.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<u64>().map_err(|_| format!("{s:?} is not a nonnegative integer")))
        .collect()
}

pub fn load(args: &CodeArgs) -> CliResult<LinearCode> {
    match (&args.code, &args.code_file) {
        (Some(spec), None) => parse_spec(spec),
        (None, Some(path)) => load_file(path),
        _ => Err(CliError::usage("give exactly one of --code and --code-file")),
    }
}

pub fn load_file(path: &Path) -> CliResult<LinearCode> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_code_text(&text)
}

/// A short name for reports.
pub fn describe(args: &CodeArgs) -> String {
    match (&args.code, &args.code_file) {
        (Some(spec), _) => spec.clone(),
        (_, Some(path)) => format!("file:{}", path.display()),
        _ => String::new(),
    }
}

/// Comma-separated symbols.
pub fn parse_word(field: &Field, text: &str) -> CliResult<Word> {
    let entries = split_numbers(text)
        .map_err(|e| CliError::usage(format!("word {text:?}: {e}")))?
        .into_iter()
        .map(|x| u8::try_from(x).map_err(|_| CliError::usage(format!("symbol {x} out of range"))))
        .collect::<CliResult<Vec<u8>>>()?;
    Ok(Word::new(field, entries)?)
}
