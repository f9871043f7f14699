//! Translation edit rate alignment and reference tag generation.
//!
//! The aligner works on whitespace-tokenized segments and compares tokens by
//! exact, case-sensitive string equality so that reference tags are
//! bit-reproducible. The base aligner is a word-level Levenshtein alignment
//! (unit cost for substitution/insertion/deletion, zero for match); the full
//! aligner adds a greedy block-shift loop on top, each applied shift costing
//! one edit. TER is the total edit count divided by the post-edited length.

use crate::error::{Error, Result};
use crate::script::{EditOp, EditScript};
use crate::types::{Tag, TagSequence, TokenSequence, TranslationTriplet};

/// Limits for the greedy block-shift search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShiftParams {
    /// Whether block shifts are considered at all.
    pub enabled: bool,
    /// Longest movable block, in tokens.
    pub max_span: usize,
    /// Farthest move, measured as |destination - start|.
    pub max_distance: usize,
}

impl Default for ShiftParams {
    fn default() -> Self {
        ShiftParams {
            enabled: true,
            max_span: 10,
            max_distance: 50,
        }
    }
}

impl ShiftParams {
    /// Shift search disabled; alignment is pure Levenshtein.
    pub fn disabled() -> Self {
        ShiftParams {
            enabled: false,
            ..ShiftParams::default()
        }
    }
}

/// Interns the tokens of both segments so the inner loops compare integers.
fn intern(mt: &TokenSequence, pe: &TokenSequence) -> (Vec<u32>, Vec<u32>) {
    let mut ids: std::collections::HashMap<&str, u32> = std::collections::HashMap::new();
    let mut mt_ids = Vec::with_capacity(mt.len());
    for tok in mt.iter() {
        let next = ids.len() as u32;
        mt_ids.push(*ids.entry(tok).or_insert(next));
    }
    let mut pe_ids = Vec::with_capacity(pe.len());
    for tok in pe.iter() {
        let next = ids.len() as u32;
        pe_ids.push(*ids.entry(tok).or_insert(next));
    }
    (mt_ids, pe_ids)
}

/// Two-row Levenshtein cost between id sequences.
fn lev_cost(a: &[u32], b: &[u32]) -> usize {
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0usize; b.len() + 1];
    for (i, &ai) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, &bj) in b.iter().enumerate() {
            let diag = prev[j] + usize::from(ai != bj);
            cur[j + 1] = diag.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// Full-matrix Levenshtein alignment over id sequences. Returns edits in
/// local (working) MT coordinates. Backtrace ties are broken by preferring
/// match, then substitution, then deletion (PE-only token), then insertion
/// (MT-only token).
fn align_ids(a: &[u32], b: &[u32]) -> Vec<EditOp> {
    let m = a.len();
    let n = b.len();
    let mut dp = vec![vec![0usize; n + 1]; m + 1];
    for (i, row) in dp.iter_mut().enumerate() {
        row[0] = i;
    }
    for j in 0..=n {
        dp[0][j] = j;
    }
    for i in 1..=m {
        for j in 1..=n {
            let diag = dp[i - 1][j - 1] + usize::from(a[i - 1] != b[j - 1]);
            dp[i][j] = diag.min(dp[i][j - 1] + 1).min(dp[i - 1][j] + 1);
        }
    }

    let mut edits = Vec::with_capacity(m.max(n));
    let (mut i, mut j) = (m, n);
    while i > 0 || j > 0 {
        if i > 0 && j > 0 && a[i - 1] == b[j - 1] && dp[i][j] == dp[i - 1][j - 1] {
            edits.push(EditOp::Match {
                mt_index: i - 1,
                pe_index: j - 1,
            });
            i -= 1;
            j -= 1;
        } else if i > 0 && j > 0 && a[i - 1] != b[j - 1] && dp[i][j] == dp[i - 1][j - 1] + 1 {
            edits.push(EditOp::Substitution {
                mt_index: i - 1,
                pe_index: j - 1,
            });
            i -= 1;
            j -= 1;
        } else if j > 0 && dp[i][j] == dp[i][j - 1] + 1 {
            edits.push(EditOp::Deletion { pe_index: j - 1 });
            j -= 1;
        } else {
            edits.push(EditOp::Insertion { mt_index: i - 1 });
            i -= 1;
        }
    }
    edits.reverse();
    edits
}

/// Minimal-cost shift-free alignment between `mt` and `pe`.
///
/// Insertions are tokens present in MT but absent from PE; deletions are PE
/// tokens missing from MT. Replaying the returned script on `mt` reproduces
/// `pe`.
pub fn levenshtein_align(mt: &TokenSequence, pe: &TokenSequence) -> Result<EditScript> {
    if mt.is_empty() || pe.is_empty() {
        return Err(Error::EmptySegment);
    }
    let (mt_ids, pe_ids) = intern(mt, pe);
    Ok(EditScript::new(align_ids(&mt_ids, &pe_ids)))
}

/// Applies one block shift to `seq`: the block `[start, start+len)` is
/// removed and reinserted at `destination` of the remaining sequence.
fn apply_shift<T: Copy>(seq: &[T], start: usize, len: usize, destination: usize, out: &mut Vec<T>) {
    out.clear();
    out.extend_from_slice(&seq[..start]);
    out.extend_from_slice(&seq[start + len..]);
    let block = &seq[start..start + len];
    // insert block so it starts at `destination`
    out.splice(destination..destination, block.iter().copied());
}

struct BestShift {
    start: usize,
    len: usize,
    destination: usize,
    cost_after: usize,
}

/// Scans every block shift within `params` and returns the one that most
/// reduces the remaining Levenshtein cost, if any strictly does. Ties go to
/// the smallest start index, then the smallest span, then the smallest
/// destination (guaranteed by scan order).
fn best_shift(working: &[u32], pe: &[u32], cur_cost: usize, params: &ShiftParams) -> Option<BestShift> {
    let m = working.len();
    let mut best: Option<BestShift> = None;
    let mut candidate = Vec::with_capacity(m);
    for start in 0..m {
        for len in 1..=params.max_span.min(m - start) {
            for destination in 0..=(m - len) {
                if destination == start {
                    continue;
                }
                let distance = destination.abs_diff(start);
                if distance > params.max_distance {
                    continue;
                }
                apply_shift(working, start, len, destination, &mut candidate);
                let cost = lev_cost(&candidate, pe);
                if cost < cur_cost && best.as_ref().map_or(true, |b| cost < b.cost_after) {
                    best = Some(BestShift {
                        start,
                        len,
                        destination,
                        cost_after: cost,
                    });
                }
            }
        }
    }
    best
}

/// TER alignment: greedy block shifts followed by a Levenshtein alignment.
///
/// The shift loop repeatedly applies the block move that most reduces the
/// remaining Levenshtein cost and stops when no move strictly reduces it.
/// Each shift costs one edit. The second value is the TER itself: total cost
/// divided by the post-edited length.
pub fn ter_align(
    mt: &TokenSequence,
    pe: &TokenSequence,
    params: &ShiftParams,
) -> Result<(EditScript, f64)> {
    if mt.is_empty() || pe.is_empty() {
        return Err(Error::EmptySegment);
    }
    let (mt_ids, pe_ids) = intern(mt, pe);

    // Working sequence as original indices plus the parallel id view.
    let mut order: Vec<usize> = (0..mt_ids.len()).collect();
    let mut working = mt_ids.clone();
    let mut edits: Vec<EditOp> = Vec::new();

    if params.enabled {
        let mut cur_cost = lev_cost(&working, &pe_ids);
        let mut scratch_ids = Vec::new();
        let mut scratch_order = Vec::new();
        while cur_cost > 0 {
            let Some(shift) = best_shift(&working, &pe_ids, cur_cost, params) else {
                break;
            };
            apply_shift(&working, shift.start, shift.len, shift.destination, &mut scratch_ids);
            apply_shift(&order, shift.start, shift.len, shift.destination, &mut scratch_order);
            std::mem::swap(&mut working, &mut scratch_ids);
            std::mem::swap(&mut order, &mut scratch_order);
            cur_cost = shift.cost_after;
            edits.push(EditOp::Shift {
                start: shift.start,
                len: shift.len,
                destination: shift.destination,
            });
        }
    }

    // Final monotone alignment over the shifted sequence, with MT indices
    // mapped back to the original token order.
    for op in align_ids(&working, &pe_ids) {
        edits.push(match op {
            EditOp::Match { mt_index, pe_index } => EditOp::Match {
                mt_index: order[mt_index],
                pe_index,
            },
            EditOp::Substitution { mt_index, pe_index } => EditOp::Substitution {
                mt_index: order[mt_index],
                pe_index,
            },
            EditOp::Insertion { mt_index } => EditOp::Insertion {
                mt_index: order[mt_index],
            },
            other => other,
        });
    }

    let script = EditScript::new(edits);
    let ter = script.total_cost() as f64 / pe.len() as f64;
    Ok((script, ter))
}

/// Derives the 2n+1 OK/BAD tags for an MT segment of `mt_len` tokens from
/// its edit script.
///
/// A word is BAD when its token participates in a substitution, an
/// insertion, or a shift. A gap is BAD when at least one PE-only token lands
/// in it; runs of consecutive deletions collapse into the single gap slot
/// between the surrounding MT tokens. Deletions land in the gap before the
/// next MT token consumed by the alignment (in original token order), or in
/// the final gap when nothing follows.
pub fn edits_to_tags(script: &EditScript, mt_len: usize) -> Result<TagSequence> {
    let (_, moved) = script.shift_permutation(mt_len)?;
    let consumed = script.mt_tokens_consumed();
    if consumed != mt_len {
        return Err(Error::ScriptMismatch {
            expected: mt_len,
            actual: consumed,
        });
    }

    let mut word_bad = moved; // shifted tokens are tagged at their MT position
    let mut gap_bad = vec![false; mt_len + 1];

    let alignment: Vec<&EditOp> = script
        .edits()
        .iter()
        .filter(|e| !matches!(e, EditOp::Shift { .. }))
        .collect();
    for (idx, edit) in alignment.iter().enumerate() {
        match **edit {
            EditOp::Match { mt_index, .. } => {
                if mt_index >= mt_len {
                    return Err(Error::ScriptMismatch {
                        expected: mt_len,
                        actual: mt_index + 1,
                    });
                }
            }
            EditOp::Substitution { mt_index, .. } | EditOp::Insertion { mt_index } => {
                if mt_index >= mt_len {
                    return Err(Error::ScriptMismatch {
                        expected: mt_len,
                        actual: mt_index + 1,
                    });
                }
                word_bad[mt_index] = true;
            }
            EditOp::Deletion { .. } => {
                let gap = alignment[idx + 1..]
                    .iter()
                    .find_map(|later| match **later {
                        EditOp::Match { mt_index, .. }
                        | EditOp::Substitution { mt_index, .. }
                        | EditOp::Insertion { mt_index } => Some(mt_index),
                        _ => None,
                    })
                    .unwrap_or(mt_len);
                if gap > mt_len {
                    return Err(Error::ScriptMismatch {
                        expected: mt_len,
                        actual: gap,
                    });
                }
                gap_bad[gap] = true;
            }
            EditOp::Shift { .. } => unreachable!("shifts were filtered out"),
        }
    }

    let mut tags = Vec::with_capacity(2 * mt_len + 1);
    for k in 0..mt_len {
        tags.push(if gap_bad[k] { Tag::Bad } else { Tag::Ok });
        tags.push(if word_bad[k] { Tag::Bad } else { Tag::Ok });
    }
    tags.push(if gap_bad[mt_len] { Tag::Bad } else { Tag::Ok });
    TagSequence::new(tags)
}

/// Reference tags for a triplet: TER alignment of MT against PE, then tag
/// derivation. The source side is never read.
pub fn generate_reference_tags(
    triplet: &TranslationTriplet,
    params: &ShiftParams,
) -> Result<TagSequence> {
    let (script, _) = ter_align(&triplet.mt, &triplet.pe, params)?;
    edits_to_tags(&script, triplet.mt.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> TokenSequence {
        TokenSequence::parse(s).unwrap()
    }

    /// Textbook recursive edit distance, memoized; the independent oracle
    /// for alignment costs.
    fn oracle_cost(a: &[&str], b: &[&str]) -> usize {
        fn go(
            a: &[&str],
            b: &[&str],
            i: usize,
            j: usize,
            memo: &mut Vec<Vec<Option<usize>>>,
        ) -> usize {
            if i == a.len() {
                return b.len() - j;
            }
            if j == b.len() {
                return a.len() - i;
            }
            if let Some(v) = memo[i][j] {
                return v;
            }
            let sub = go(a, b, i + 1, j + 1, memo) + usize::from(a[i] != b[j]);
            let del = go(a, b, i, j + 1, memo) + 1;
            let ins = go(a, b, i + 1, j, memo) + 1;
            let best = sub.min(del).min(ins);
            memo[i][j] = Some(best);
            best
        }
        let mut memo = vec![vec![None; b.len()]; a.len()];
        go(a, b, 0, 0, &mut memo)
    }

    fn tag_str(tags: &TagSequence) -> String {
        tags.to_string()
    }

    #[test]
    fn identical_sequences_cost_zero() {
        let script = levenshtein_align(&toks("a b c"), &toks("a b c")).unwrap();
        assert_eq!(script.total_cost(), 0);
        assert_eq!(script.edits().len(), 3);
        assert!(script
            .edits()
            .iter()
            .all(|e| matches!(e, EditOp::Match { .. })));
    }

    #[test]
    fn substitution_alignment() {
        // oracle over this length-3 pair confirms cost 1
        assert_eq!(oracle_cost(&["a", "x", "c"], &["a", "b", "c"]), 1);
        let script = levenshtein_align(&toks("a x c"), &toks("a b c")).unwrap();
        assert_eq!(script.total_cost(), 1);
        assert_eq!(
            script.edits(),
            &[
                EditOp::Match {
                    mt_index: 0,
                    pe_index: 0
                },
                EditOp::Substitution {
                    mt_index: 1,
                    pe_index: 1
                },
                EditOp::Match {
                    mt_index: 2,
                    pe_index: 2
                },
            ]
        );
    }

    #[test]
    fn deletion_alignment() {
        assert_eq!(oracle_cost(&["a", "c"], &["a", "b", "c"]), 1);
        let script = levenshtein_align(&toks("a c"), &toks("a b c")).unwrap();
        assert_eq!(script.total_cost(), 1);
        assert_eq!(
            script.edits(),
            &[
                EditOp::Match {
                    mt_index: 0,
                    pe_index: 0
                },
                EditOp::Deletion { pe_index: 1 },
                EditOp::Match {
                    mt_index: 1,
                    pe_index: 2
                },
            ]
        );
    }

    #[test]
    fn empty_inputs_are_rejected() {
        assert!(matches!(
            levenshtein_align(&TokenSequence::empty(), &toks("a")),
            Err(Error::EmptySegment)
        ));
        assert!(matches!(
            ter_align(&toks("a"), &TokenSequence::empty(), &ShiftParams::default()),
            Err(Error::EmptySegment)
        ));
    }

    #[test]
    fn exhaustive_small_pairs_match_oracle() {
        // all pairs over {a,b} with lengths 1..=4
        let alphabet = ["a", "b"];
        let mut seqs: Vec<Vec<&str>> = Vec::new();
        for len in 1..=4usize {
            let mut stack: Vec<Vec<&str>> = vec![Vec::new()];
            for _ in 0..len {
                let mut next = Vec::new();
                for prefix in stack {
                    for sym in alphabet {
                        let mut s = prefix.clone();
                        s.push(sym);
                        next.push(s);
                    }
                }
                stack = next;
            }
            seqs.extend(stack);
        }
        for a in &seqs {
            for b in &seqs {
                let mt = TokenSequence::from_words(a).unwrap();
                let pe = TokenSequence::from_words(b).unwrap();
                let script = levenshtein_align(&mt, &pe).unwrap();
                assert_eq!(script.total_cost(), oracle_cost(a, b), "{a:?} vs {b:?}");
                assert_eq!(script.replay(&mt, &pe).unwrap(), pe, "{a:?} vs {b:?}");
            }
        }
    }

    #[test]
    fn ter_identical_is_zero() {
        let (script, ter) = ter_align(&toks("a b c"), &toks("a b c"), &ShiftParams::default())
            .unwrap();
        assert_eq!(script.total_cost(), 0);
        assert_eq!(ter, 0.0);
    }

    #[test]
    fn ter_single_shift_beats_levenshtein() {
        let mt = toks("c a b");
        let pe = toks("a b c");

        // brute force over all single shifts of a length-3 sequence: the
        // best is moving block (0,1) to the end, leaving zero edits
        let ids = ["c", "a", "b"];
        let mut best = (usize::MAX, 0, 0, 0);
        for start in 0..3 {
            for len in 1..=(3 - start) {
                for dest in 0..=(3 - len) {
                    if dest == start {
                        continue;
                    }
                    let mut cand: Vec<&str> = Vec::new();
                    cand.extend_from_slice(&ids[..start]);
                    cand.extend_from_slice(&ids[start + len..]);
                    for (offset, tok) in ids[start..start + len].iter().enumerate() {
                        cand.insert(dest + offset, tok);
                    }
                    let cost = oracle_cost(&cand, &["a", "b", "c"]);
                    if cost < best.0 {
                        best = (cost, start, len, dest);
                    }
                }
            }
        }
        assert_eq!(best, (0, 0, 1, 2));

        let (script, ter) = ter_align(&mt, &pe, &ShiftParams::default()).unwrap();
        assert_eq!(script.total_cost(), 1);
        assert_eq!(script.shift_count(), 1);
        assert_eq!(
            script.edits()[0],
            EditOp::Shift {
                start: 0,
                len: 1,
                destination: 2
            }
        );
        assert!((ter - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(script.replay(&mt, &pe).unwrap(), pe);
    }

    #[test]
    fn ter_without_useful_shift_equals_levenshtein() {
        assert_eq!(oracle_cost(&["a", "x"], &["a", "b", "c"]), 2);
        let (script, ter) = ter_align(&toks("a x"), &toks("a b c"), &ShiftParams::default())
            .unwrap();
        assert_eq!(script.total_cost(), 2);
        assert_eq!(script.shift_count(), 0);
        assert!((ter - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn shifts_disabled_fall_back_to_levenshtein() {
        let mt = toks("c a b");
        let pe = toks("a b c");
        let (script, _) = ter_align(&mt, &pe, &ShiftParams::disabled()).unwrap();
        assert_eq!(script.shift_count(), 0);
        assert_eq!(
            script.total_cost(),
            levenshtein_align(&mt, &pe).unwrap().total_cost()
        );
    }

    #[test]
    fn identity_script_yields_all_ok() {
        let script = levenshtein_align(&toks("a b c"), &toks("a b c")).unwrap();
        let tags = edits_to_tags(&script, 3).unwrap();
        assert_eq!(tag_str(&tags), "OK OK OK OK OK OK OK");
    }

    #[test]
    fn substitution_tags_word_bad() {
        let script = levenshtein_align(&toks("a x c"), &toks("a b c")).unwrap();
        let tags = edits_to_tags(&script, 3).unwrap();
        assert_eq!(tag_str(&tags), "OK OK OK BAD OK OK OK");
    }

    #[test]
    fn deletion_tags_gap_bad() {
        let script = levenshtein_align(&toks("a c"), &toks("a b c")).unwrap();
        let tags = edits_to_tags(&script, 2).unwrap();
        assert_eq!(tag_str(&tags), "OK OK BAD OK OK");
    }

    #[test]
    fn consecutive_deletions_collapse_into_one_gap() {
        let script = levenshtein_align(&toks("a b"), &toks("a x y z b")).unwrap();
        assert_eq!(script.total_cost(), 3);
        let tags = edits_to_tags(&script, 2).unwrap();
        assert_eq!(tag_str(&tags), "OK OK BAD OK OK");
    }

    #[test]
    fn trailing_deletion_lands_in_final_gap() {
        let script = levenshtein_align(&toks("a"), &toks("a b")).unwrap();
        let tags = edits_to_tags(&script, 1).unwrap();
        assert_eq!(tag_str(&tags), "OK OK BAD");
    }

    #[test]
    fn script_mismatch_is_detected() {
        let script = levenshtein_align(&toks("a b"), &toks("a b")).unwrap();
        assert!(matches!(
            edits_to_tags(&script, 3),
            Err(Error::ScriptMismatch { .. })
        ));
    }

    #[test]
    fn shifted_words_are_tagged_bad() {
        let (script, _) = ter_align(&toks("c a b"), &toks("a b c"), &ShiftParams::default())
            .unwrap();
        let tags = edits_to_tags(&script, 3).unwrap();
        // token "c" (MT position 0) moved; everything else aligned clean
        assert_eq!(tag_str(&tags), "OK BAD OK OK OK OK OK");
    }

    #[test]
    fn reference_tags_for_triplets() {
        let trip = |mt: &str, pe: &str| {
            TranslationTriplet::new(TokenSequence::empty(), toks(mt), toks(pe)).unwrap()
        };
        let params = ShiftParams::default();

        let all_ok = generate_reference_tags(&trip("a b", "a b"), &params).unwrap();
        assert!(all_ok.all_slots_ok());

        let one_sub = generate_reference_tags(&trip("a x c", "a b c"), &params).unwrap();
        let bad_words = (0..one_sub.arity())
            .filter(|&k| one_sub.word(k).is_bad())
            .count();
        assert_eq!(bad_words, 1);
        assert!((0..=one_sub.arity()).all(|j| one_sub.gap(j).is_ok()));

        let one_missing = generate_reference_tags(&trip("a c", "a b c"), &params).unwrap();
        let bad_gaps = (0..=one_missing.arity())
            .filter(|&j| one_missing.gap(j).is_bad())
            .count();
        assert_eq!(bad_gaps, 1);
        assert!((0..one_missing.arity()).all(|k| one_missing.word(k).is_ok()));
    }

    #[test]
    fn max_distance_limits_the_search() {
        let params = ShiftParams {
            enabled: true,
            max_span: 10,
            max_distance: 1,
        };
        // moving "c" to the end needs distance 2, so no shift applies
        let (script, _) = ter_align(&toks("c a b"), &toks("a b c"), &params).unwrap();
        assert_eq!(script.shift_count(), 0);
        assert_eq!(script.total_cost(), 2);
    }
}
