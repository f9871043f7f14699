//! Domain types shared by the whole toolkit.
//!
//! A segment of n words carries 2n+1 quality slots: one gap slot before each
//! word, one slot per word, and one final gap. Even indices (0-based) are
//! gaps, odd indices are words. All types here are immutable after
//! construction and safe to share across threads.

use std::fmt;
use std::ops::{Add, AddAssign};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Binary quality label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tag {
    Ok,
    Bad,
}

impl Tag {
    pub fn is_ok(self) -> bool {
        matches!(self, Tag::Ok)
    }

    pub fn is_bad(self) -> bool {
        matches!(self, Tag::Bad)
    }

    /// The opposite label.
    pub fn flipped(self) -> Tag {
        match self {
            Tag::Ok => Tag::Bad,
            Tag::Bad => Tag::Ok,
        }
    }

    /// Canonical serialization, case-sensitive.
    pub fn as_str(self) -> &'static str {
        match self {
            Tag::Ok => "OK",
            Tag::Bad => "BAD",
        }
    }

    /// Parses the canonical serialization; anything else is rejected.
    pub fn parse(s: &str) -> Option<Tag> {
        match s {
            "OK" => Some(Tag::Ok),
            "BAD" => Some(Tag::Bad),
            _ => None,
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// True iff `tags` is a legal annotation for a segment of `n` words:
/// exactly 2n+1 slots. Label validity is guaranteed by the `Tag` type.
pub fn validate_tag_sequence(tags: &[Tag], n: usize) -> bool {
    tags.len() == 2 * n + 1
}

/// Interleaved gap/word tags for one segment; always of odd length 2n+1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TagSequence {
    tags: Vec<Tag>,
}

impl TagSequence {
    /// Builds a sequence, rejecting even lengths (including zero).
    pub fn new(tags: Vec<Tag>) -> Result<Self> {
        if tags.len() % 2 == 0 {
            return Err(Error::UnevenArity { len: tags.len() });
        }
        Ok(TagSequence { tags })
    }

    /// All-OK sequence for a segment of `n` words.
    pub fn all_ok(n: usize) -> Self {
        TagSequence {
            tags: vec![Tag::Ok; 2 * n + 1],
        }
    }

    /// Number of words annotated.
    pub fn arity(&self) -> usize {
        (self.tags.len() - 1) / 2
    }

    /// Number of slots (2·arity + 1).
    pub fn len(&self) -> usize {
        self.tags.len()
    }

    /// Never true; kept for iterator-style call sites.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn tags(&self) -> &[Tag] {
        &self.tags
    }

    /// Gap slot before word `j` (gap `arity()` is the trailing gap).
    pub fn gap(&self, j: usize) -> Tag {
        self.tags[2 * j]
    }

    /// Word slot `k`.
    pub fn word(&self, k: usize) -> Tag {
        self.tags[2 * k + 1]
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Tag> {
        self.tags.iter()
    }

    pub fn all_slots_ok(&self) -> bool {
        self.tags.iter().all(|t| t.is_ok())
    }
}

impl fmt::Display for TagSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.tags.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(t.as_str())?;
        }
        Ok(())
    }
}

/// A tokenized segment: words or subword pieces.
///
/// Tokens are non-empty and contain no ASCII space. The sequence itself may
/// be empty only where an operation explicitly permits it (e.g. the source
/// side of a triplet).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenSequence {
    tokens: Vec<String>,
}

impl TokenSequence {
    pub fn new(tokens: Vec<String>) -> Result<Self> {
        for t in &tokens {
            if t.is_empty() || t.contains(' ') {
                return Err(Error::InvalidToken { token: t.clone() });
            }
        }
        Ok(TokenSequence { tokens })
    }

    /// Zero-token sequence.
    pub fn empty() -> Self {
        TokenSequence { tokens: Vec::new() }
    }

    /// Parses a line of single-space-separated tokens. An empty line yields
    /// an empty sequence; runs of spaces produce empty tokens and fail.
    pub fn parse(line: &str) -> Result<Self> {
        if line.is_empty() {
            return Ok(TokenSequence::empty());
        }
        let tokens: Vec<String> = line.split(' ').map(str::to_owned).collect();
        TokenSequence::new(tokens)
    }

    pub fn from_words<S: AsRef<str>>(words: &[S]) -> Result<Self> {
        TokenSequence::new(words.iter().map(|w| w.as_ref().to_owned()).collect())
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn get(&self, i: usize) -> Option<&str> {
        self.tokens.get(i).map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.tokens.iter().map(String::as_str)
    }
}

impl fmt::Display for TokenSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tokens.join(" "))
    }
}

/// Aligned (source, MT output, post-edited output) segments.
///
/// The source may be empty: reference tag generation never reads it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslationTriplet {
    pub src: TokenSequence,
    pub mt: TokenSequence,
    pub pe: TokenSequence,
}

impl TranslationTriplet {
    pub fn new(src: TokenSequence, mt: TokenSequence, pe: TokenSequence) -> Result<Self> {
        if mt.is_empty() || pe.is_empty() {
            return Err(Error::EmptySegment);
        }
        Ok(TranslationTriplet { src, mt, pe })
    }
}

/// Per-word contiguous half-open index spans into a subword sequence.
///
/// Spans are non-empty, contiguous, start at 0, and end at the subword count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubwordMap {
    spans: Vec<(usize, usize)>,
}

impl SubwordMap {
    pub fn from_spans(spans: Vec<(usize, usize)>) -> Result<Self> {
        let mut expected_start = 0;
        for (k, &(s, e)) in spans.iter().enumerate() {
            if s != expected_start || e <= s {
                return Err(Error::SegmentationMismatch {
                    word_index: k,
                    word: String::new(),
                    reason: format!(
                        "span ({s}, {e}) is empty or not contiguous with the previous span"
                    ),
                });
            }
            expected_start = e;
        }
        Ok(SubwordMap { spans })
    }

    pub fn word_count(&self) -> usize {
        self.spans.len()
    }

    /// Total number of subword pieces covered.
    pub fn subword_count(&self) -> usize {
        self.spans.last().map_or(0, |&(_, e)| e)
    }

    pub fn spans(&self) -> &[(usize, usize)] {
        &self.spans
    }

    pub fn span(&self, k: usize) -> (usize, usize) {
        self.spans[k]
    }
}

/// Pooled binary confusion counts; BAD is the positive class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ConfusionCounts {
    /// Reference BAD predicted BAD.
    pub tpc: u64,
    /// Reference OK predicted OK.
    pub tnc: u64,
    /// Reference OK predicted BAD.
    pub fpc: u64,
    /// Reference BAD predicted OK.
    pub fnc: u64,
}

impl ConfusionCounts {
    pub fn new(tpc: u64, tnc: u64, fpc: u64, fnc: u64) -> Self {
        ConfusionCounts { tpc, tnc, fpc, fnc }
    }

    /// Number of compared slots.
    pub fn total(&self) -> u64 {
        self.tpc + self.tnc + self.fpc + self.fnc
    }

    /// Records one (reference, prediction) slot pair.
    pub fn record(&mut self, reference: Tag, predicted: Tag) {
        match (reference, predicted) {
            (Tag::Bad, Tag::Bad) => self.tpc += 1,
            (Tag::Ok, Tag::Ok) => self.tnc += 1,
            (Tag::Ok, Tag::Bad) => self.fpc += 1,
            (Tag::Bad, Tag::Ok) => self.fnc += 1,
        }
    }
}

// Reduction over per-segment counts is associative and commutative, so
// segments may be counted in parallel and summed.
impl Add for ConfusionCounts {
    type Output = ConfusionCounts;

    fn add(self, rhs: ConfusionCounts) -> ConfusionCounts {
        ConfusionCounts {
            tpc: self.tpc + rhs.tpc,
            tnc: self.tnc + rhs.tnc,
            fpc: self.fpc + rhs.fpc,
            fnc: self.fnc + rhs.fnc,
        }
    }
}

impl AddAssign for ConfusionCounts {
    fn add_assign(&mut self, rhs: ConfusionCounts) {
        *self = *self + rhs;
    }
}

/// Per-segment rows of p(OK) scores, one value per tag slot.
///
/// Every value lies in [0, 1] and every row has odd length.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictionMatrix<R: Real = f64> {
    rows: Vec<Vec<R>>,
}

impl<R: Real> PredictionMatrix<R> {
    pub fn new(rows: Vec<Vec<R>>) -> Result<Self> {
        for (i, row) in rows.iter().enumerate() {
            if row.len() % 2 == 0 {
                return Err(Error::UnevenArity { len: row.len() }.at_line(i + 1));
            }
            for &v in row {
                if !(v >= R::zero() && v <= R::one()) {
                    return Err(Error::ShapeMismatch {
                        detail: format!("score {v} in row {} is outside [0, 1]", i + 1),
                    });
                }
            }
        }
        Ok(PredictionMatrix { rows })
    }

    /// Internal constructor for rows already known to satisfy the invariants.
    pub(crate) fn from_valid_rows(rows: Vec<Vec<R>>) -> Self {
        debug_assert!(rows
            .iter()
            .all(|r| r.len() % 2 == 1 && r.iter().all(|&v| v >= R::zero() && v <= R::one())));
        PredictionMatrix { rows }
    }

    pub fn num_segments(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<R>] {
        &self.rows
    }

    pub fn row(&self, k: usize) -> &[R] {
        &self.rows[k]
    }

    pub fn same_shape(&self, other: &PredictionMatrix<R>) -> bool {
        self.rows.len() == other.rows.len()
            && self
                .rows
                .iter()
                .zip(&other.rows)
                .all(|(a, b)| a.len() == b.len())
    }

    /// Checks that row lengths match the slot counts of `refs`.
    pub fn matches_tags(&self, refs: &[TagSequence]) -> Result<()> {
        if self.rows.len() != refs.len() {
            return Err(Error::LengthMismatch {
                left: self.rows.len(),
                right: refs.len(),
            });
        }
        for (row, seq) in self.rows.iter().zip(refs) {
            if row.len() != seq.len() {
                return Err(Error::ArityMismatch {
                    expected: seq.len(),
                    actual: row.len(),
                });
            }
        }
        Ok(())
    }
}

/// Linear combination weights, one per model; unconstrained in sign.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleWeights<R: Real = f64> {
    lambdas: Vec<R>,
}

impl<R: Real> EnsembleWeights<R> {
    pub fn new(lambdas: Vec<R>) -> Result<Self> {
        if lambdas.is_empty() {
            return Err(Error::InvalidConfig {
                detail: "ensemble weights need at least one model".into(),
            });
        }
        if lambdas.iter().any(|l| l.is_nan()) {
            return Err(Error::InvalidConfig {
                detail: "ensemble weights must not be NaN".into(),
            });
        }
        Ok(EnsembleWeights { lambdas })
    }

    /// Weight 1 on model `j`, 0 elsewhere.
    pub fn one_hot(k: usize, j: usize) -> Self {
        let mut lambdas = vec![R::zero(); k];
        lambdas[j] = R::one();
        EnsembleWeights { lambdas }
    }

    /// 1/k on every model.
    pub fn uniform(k: usize) -> Self {
        let w = R::one() / R::from_usize(k).expect("k fits in the scalar type");
        EnsembleWeights {
            lambdas: vec![w; k],
        }
    }

    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn lambdas(&self) -> &[R] {
        &self.lambdas
    }
}
