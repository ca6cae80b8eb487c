//! Plain-text set files: one integer per line, `#` starts a comment line,
//! blank lines and duplicate values are tolerated (the loaded set is
//! deduplicated).

use crate::error::{Error, Result};
use crate::model::IntSet;
use std::fmt::Write as _;
use std::path::Path;

pub fn parse_set(text: &str) -> Result<IntSet> {
    let mut values = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let v: i64 = line.parse().map_err(|e| Error::InvalidSetFile {
            line: idx + 1,
            reason: format!("{e}: {line:?}"),
        })?;
        values.push(v);
    }
    Ok(IntSet::new(values))
}

pub fn read_set(path: impl AsRef<Path>) -> Result<IntSet> {
    parse_set(&std::fs::read_to_string(path)?)
}

pub fn format_set(set: &IntSet) -> String {
    let mut out = String::new();
    for x in set.iter() {
        let _ = writeln!(out, "{x}");
    }
    out
}

pub fn write_set(path: impl AsRef<Path>, set: &IntSet) -> Result<()> {
    std::fs::write(path, format_set(set))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_blanks_duplicates() {
        let s = parse_set("# header\n3\n\n1\n1\n-7\n").unwrap();
        assert_eq!(s.elements(), &[-7, 1, 3]);
    }

    #[test]
    fn rejects_garbage_with_line_number() {
        match parse_set("1\nxyz\n") {
            Err(Error::InvalidSetFile { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected InvalidSetFile, got {other:?}"),
        }
    }

    #[test]
    fn round_trips_through_text() {
        let s = IntSet::new([5, -2, 0]);
        assert_eq!(parse_set(&format_set(&s)).unwrap(), s);
    }
}
