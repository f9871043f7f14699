//! Tag conversion between word and subword granularity.
//!
//! Quality models that operate on subword pieces need their tags lifted to
//! word level for evaluation, and need subword-level reference tags for
//! training. The up-conversion collapses each word's span of piece tags into
//! one word tag; the reference construction interpolates word-level tags
//! with naive subword-level tags so that converting the result back up
//! reproduces the word-level tags exactly.

use crate::error::{Error, Result};
use crate::ter::{generate_reference_tags, ShiftParams};
use crate::types::{SubwordMap, Tag, TagSequence, TokenSequence, TranslationTriplet};

/// Where a tokenizer puts its continuation marker.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MarkerPosition {
    /// Every non-final piece of a word ends with the marker ("he@@ llo").
    SuffixOfNonFinal,
    /// Every continuation piece starts with the marker ("he ##llo").
    PrefixOfContinuation,
}

/// Subword marker convention used to strip pieces back into word text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubwordConvention {
    marker: String,
    position: MarkerPosition,
}

impl SubwordConvention {
    pub fn new(marker: impl Into<String>, position: MarkerPosition) -> Result<Self> {
        let marker = marker.into();
        if marker.is_empty() {
            return Err(Error::InvalidConfig {
                detail: "subword marker must be non-empty".into(),
            });
        }
        Ok(SubwordConvention { marker, position })
    }

    pub fn marker(&self) -> &str {
        &self.marker
    }

    pub fn position(&self) -> MarkerPosition {
        self.position
    }

    /// Strips the marker at its conventional position. A piece equal to the
    /// bare marker is left alone so literal marker tokens match literally.
    fn strip<'a>(&self, piece: &'a str) -> &'a str {
        if piece == self.marker {
            return piece;
        }
        match self.position {
            MarkerPosition::SuffixOfNonFinal => {
                piece.strip_suffix(self.marker.as_str()).unwrap_or(piece)
            }
            MarkerPosition::PrefixOfContinuation => {
                piece.strip_prefix(self.marker.as_str()).unwrap_or(piece)
            }
        }
    }
}

impl Default for SubwordConvention {
    fn default() -> Self {
        SubwordConvention {
            marker: "@@".into(),
            position: MarkerPosition::SuffixOfNonFinal,
        }
    }
}

/// Matches subword pieces back onto words, greedily left to right:
/// marker-stripped pieces are concatenated until they spell the current
/// word, which closes that word's span.
pub fn build_subword_map(
    words: &TokenSequence,
    subwords: &TokenSequence,
    conv: &SubwordConvention,
) -> Result<SubwordMap> {
    if words.is_empty() || subwords.is_empty() {
        return Err(Error::EmptySegment);
    }
    let pieces = subwords.tokens();
    let mut spans = Vec::with_capacity(words.len());
    let mut cursor = 0;
    for (k, word) in words.iter().enumerate() {
        let start = cursor;
        let mut acc = String::new();
        loop {
            if cursor == pieces.len() {
                return Err(Error::SegmentationMismatch {
                    word_index: k,
                    word: word.to_owned(),
                    reason: format!("subwords exhausted after {acc:?}"),
                });
            }
            acc.push_str(conv.strip(&pieces[cursor]));
            cursor += 1;
            if acc == word {
                break;
            }
            if !word.starts_with(acc.as_str()) {
                return Err(Error::SegmentationMismatch {
                    word_index: k,
                    word: word.to_owned(),
                    reason: format!("concatenation {acc:?} is not a prefix of the word"),
                });
            }
        }
        spans.push((start, cursor));
    }
    if cursor != pieces.len() {
        return Err(Error::SegmentationMismatch {
            word_index: words.len(),
            word: String::new(),
            reason: format!("{} subword pieces left over", pieces.len() - cursor),
        });
    }
    SubwordMap::from_spans(spans)
}

/// Converts subword-level tags up to word level.
///
/// For each word the output copies the gap tag before the word's span, then
/// emits OK iff every piece tag and every intra-span gap tag is OK; the
/// trailing subword gap tag closes the sequence.
pub fn subword_tags_to_word_tags(q_sw: &TagSequence, map: &SubwordMap) -> Result<TagSequence> {
    if q_sw.arity() != map.subword_count() {
        return Err(Error::ArityMismatch {
            expected: map.subword_count(),
            actual: q_sw.arity(),
        });
    }
    let mut out = Vec::with_capacity(2 * map.word_count() + 1);
    for &(s, e) in map.spans() {
        out.push(q_sw.gap(s));
        let span_ok = (s..e).all(|i| q_sw.word(i).is_ok())
            && (s + 1..e).all(|i| q_sw.gap(i).is_ok());
        out.push(if span_ok { Tag::Ok } else { Tag::Bad });
    }
    out.push(q_sw.gap(map.subword_count()));
    TagSequence::new(out)
}

/// Tags obtained by running the TER aligner directly on subword-tokenized
/// MT and post-edited segments.
pub fn naive_subword_tags(
    mt_sw: &TokenSequence,
    pe_sw: &TokenSequence,
    params: &ShiftParams,
) -> Result<TagSequence> {
    let triplet = TranslationTriplet::new(TokenSequence::empty(), mt_sw.clone(), pe_sw.clone())?;
    generate_reference_tags(&triplet, params)
}

/// Builds subword-level reference tags that convert back to the word-level
/// tags without loss.
///
/// Per word: copy the word-level left gap tag; if the word tag is OK, all
/// 2n-1 in-span slots become OK; otherwise, if the naive tags contain a BAD
/// anywhere in the span, they are copied verbatim; otherwise the span is
/// forced all-BAD. The word-level ending gap tag closes the sequence.
pub fn heuristic_subword_tags(
    q_w: &TagSequence,
    q_sw_naive: &TagSequence,
    map: &SubwordMap,
) -> Result<TagSequence> {
    if q_w.arity() != map.word_count() {
        return Err(Error::ArityMismatch {
            expected: map.word_count(),
            actual: q_w.arity(),
        });
    }
    if q_sw_naive.arity() != map.subword_count() {
        return Err(Error::ArityMismatch {
            expected: map.subword_count(),
            actual: q_sw_naive.arity(),
        });
    }
    let mut out = Vec::with_capacity(2 * map.subword_count() + 1);
    for (k, &(s, e)) in map.spans().iter().enumerate() {
        out.push(q_w.gap(k));
        let n = e - s;
        if q_w.word(k).is_ok() {
            out.extend(std::iter::repeat(Tag::Ok).take(2 * n - 1));
        } else {
            let naive_has_bad = (s..e).any(|i| q_sw_naive.word(i).is_bad())
                || (s + 1..e).any(|i| q_sw_naive.gap(i).is_bad());
            if naive_has_bad {
                for i in s..e {
                    out.push(q_sw_naive.word(i));
                    if i + 1 < e {
                        out.push(q_sw_naive.gap(i + 1));
                    }
                }
            } else {
                out.extend(std::iter::repeat(Tag::Bad).take(2 * n - 1));
            }
        }
    }
    out.push(q_w.gap(map.word_count()));
    TagSequence::new(out)
}

/// Slot-level disagreement between two corpora of tag sequences with
/// identical shapes. Useful for measuring how much information naive
/// subword tags lose when converted up to word level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Disagreement {
    pub slots: u64,
    pub differing: u64,
}

impl Disagreement {
    pub fn rate(&self) -> f64 {
        if self.slots == 0 {
            0.0
        } else {
            self.differing as f64 / self.slots as f64
        }
    }
}

/// Counts differing slots between two tag corpora of identical shape.
pub fn disagreement(a: &[TagSequence], b: &[TagSequence]) -> Result<Disagreement> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let mut report = Disagreement::default();
    for (sa, sb) in a.iter().zip(b) {
        if sa.len() != sb.len() {
            return Err(Error::ArityMismatch {
                expected: sa.len(),
                actual: sb.len(),
            });
        }
        for (ta, tb) in sa.iter().zip(sb.iter()) {
            report.slots += 1;
            if ta != tb {
                report.differing += 1;
            }
        }
    }
    Ok(report)
}
