//! Readers and writers for the line-oriented corpus, tag, score, and weight
//! file formats.
//!
//! All files are UTF-8 with one segment per line and single spaces between
//! fields. Writing what was read back out is byte-identical for canonical
//! files, and every parse error carries a 1-based line number.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::optimizer::TraceRecord;
use crate::scalar::Real;
use crate::types::{PredictionMatrix, Tag, TagSequence, TokenSequence};

/// Canonical score serialization: shortest decimal digits that round-trip,
/// with a trailing `.0` on integral values so every score reads back as a
/// float ("1" becomes "1.0", "0.5" stays "0.5").
pub fn format_score<R: Real>(v: R) -> String {
    let mut s = format!("{}", v.as_f64());
    if !s.contains('.') && !s.contains('e') && !s.contains("inf") && !s.contains("NaN") {
        s.push_str(".0");
    }
    s
}

/// Reads one token sequence per line. Empty lines parse as empty sequences;
/// whether those are acceptable is decided by the consuming operation.
pub fn read_corpus<B: BufRead>(reader: B) -> Result<Vec<TokenSequence>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        out.push(TokenSequence::parse(&line).map_err(|e| e.at_line(i + 1))?);
    }
    Ok(out)
}

pub fn read_corpus_file(path: impl AsRef<Path>) -> Result<Vec<TokenSequence>> {
    read_corpus(BufReader::new(File::open(path)?))
}

pub fn write_corpus<W: Write>(mut writer: W, segments: &[TokenSequence]) -> Result<()> {
    for seg in segments {
        writeln!(writer, "{seg}")?;
    }
    Ok(())
}

pub fn write_corpus_file(path: impl AsRef<Path>, segments: &[TokenSequence]) -> Result<()> {
    write_corpus(File::create(path)?, segments)
}

/// Reads one tag sequence per line; labels must be exactly OK or BAD and
/// every line must hold an odd number of labels.
pub fn read_tags<B: BufRead>(reader: B) -> Result<Vec<TagSequence>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let mut tags = Vec::new();
        if !line.is_empty() {
            for (j, field) in line.split(' ').enumerate() {
                let tag = Tag::parse(field).ok_or_else(|| Error::BadLabel {
                    line: i + 1,
                    column: j + 1,
                    label: field.to_owned(),
                })?;
                tags.push(tag);
            }
        }
        out.push(TagSequence::new(tags).map_err(|e| e.at_line(i + 1))?);
    }
    Ok(out)
}

pub fn read_tags_file(path: impl AsRef<Path>) -> Result<Vec<TagSequence>> {
    read_tags(BufReader::new(File::open(path)?))
}

pub fn write_tags<W: Write>(mut writer: W, tags: &[TagSequence]) -> Result<()> {
    for seq in tags {
        writeln!(writer, "{seq}")?;
    }
    Ok(())
}

pub fn write_tags_file(path: impl AsRef<Path>, tags: &[TagSequence]) -> Result<()> {
    write_tags(File::create(path)?, tags)
}

/// Reads per-segment p(OK) rows; every value must be a decimal in [0, 1]
/// and every row must have an odd number of values.
pub fn read_scores<R: Real, B: BufRead>(reader: B) -> Result<PredictionMatrix<R>> {
    let mut rows = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let mut row = Vec::new();
        if !line.is_empty() {
            for (j, field) in line.split(' ').enumerate() {
                let bad = || Error::BadFloat {
                    line: i + 1,
                    column: j + 1,
                    value: field.to_owned(),
                };
                let value: f64 = field.parse().map_err(|_| bad())?;
                if !(0.0..=1.0).contains(&value) {
                    return Err(bad());
                }
                row.push(R::from_f64(value).ok_or_else(bad)?);
            }
        }
        if row.len() % 2 == 0 {
            return Err(Error::UnevenArity { len: row.len() }.at_line(i + 1));
        }
        rows.push(row);
    }
    Ok(PredictionMatrix::from_valid_rows(rows))
}

pub fn read_scores_file<R: Real>(path: impl AsRef<Path>) -> Result<PredictionMatrix<R>> {
    read_scores(BufReader::new(File::open(path)?))
}

pub fn write_scores<R: Real, W: Write>(mut writer: W, matrix: &PredictionMatrix<R>) -> Result<()> {
    for row in matrix.rows() {
        let line: Vec<String> = row.iter().map(|&v| format_score(v)).collect();
        writeln!(writer, "{}", line.join(" "))?;
    }
    Ok(())
}

pub fn write_scores_file<R: Real>(
    path: impl AsRef<Path>,
    matrix: &PredictionMatrix<R>,
) -> Result<()> {
    write_scores(File::create(path)?, matrix)
}

/// Reads ensemble weights, one decimal per line; values are unconstrained.
pub fn read_weights<R: Real, B: BufRead>(reader: B) -> Result<Vec<R>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let bad = || Error::BadFloat {
            line: i + 1,
            column: 1,
            value: line.clone(),
        };
        let value: f64 = line.trim().parse().map_err(|_| bad())?;
        if value.is_nan() {
            return Err(bad());
        }
        out.push(R::from_f64(value).ok_or_else(bad)?);
    }
    Ok(out)
}

pub fn read_weights_file<R: Real>(path: impl AsRef<Path>) -> Result<Vec<R>> {
    read_weights(BufReader::new(File::open(path)?))
}

pub fn write_weights<R: Real, W: Write>(mut writer: W, weights: &[R]) -> Result<()> {
    for &w in weights {
        writeln!(writer, "{}", format_score(w))?;
    }
    Ok(())
}

pub fn write_weights_file<R: Real>(path: impl AsRef<Path>, weights: &[R]) -> Result<()> {
    write_weights(File::create(path)?, weights)
}

/// Writes optimizer trace records, one `iteration f_best spread` line each.
pub fn write_trace<R: Real, W: Write>(mut writer: W, trace: &[TraceRecord<R>]) -> Result<()> {
    for record in trace {
        writeln!(writer, "{record}")?;
    }
    Ok(())
}

pub fn write_trace_file<R: Real>(path: impl AsRef<Path>, trace: &[TraceRecord<R>]) -> Result<()> {
    write_trace(File::create(path)?, trace)
}
