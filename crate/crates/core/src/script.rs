//! Edit scripts: the ordered list of operations that turns an MT segment
//! into its post-edited counterpart.

use crate::error::{Error, Result};
use crate::types::TokenSequence;

/// One edit in an alignment between an MT segment and its post-edit.
///
/// Index conventions:
/// - `mt_index` always refers to the *original* MT token order, even when
///   block shifts were applied before the final alignment.
/// - `pe_index` refers to the post-edited sequence.
/// - `Shift` coordinates refer to the working sequence at the moment the
///   shift is applied: a block of `len` tokens starting at `start` is
///   removed and reinserted so that it starts at index `destination` of the
///   remaining sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EditOp {
    /// MT token equals its aligned PE token.
    Match { mt_index: usize, pe_index: usize },
    /// MT token replaced by a different PE token.
    Substitution { mt_index: usize, pe_index: usize },
    /// Token present in MT but absent from PE.
    Insertion { mt_index: usize },
    /// Token present in PE but missing from MT.
    Deletion { pe_index: usize },
    /// Contiguous MT block moved to a new position.
    Shift {
        start: usize,
        len: usize,
        destination: usize,
    },
}

impl EditOp {
    /// Whether this op consumes one token of the (shifted) MT sequence.
    pub fn consumes_mt(&self) -> bool {
        matches!(
            self,
            EditOp::Match { .. } | EditOp::Substitution { .. } | EditOp::Insertion { .. }
        )
    }
}

/// Ordered edits aligning an MT segment to its post-edit: any shifts first
/// (in application order), then the monotone token-level alignment.
///
/// The total cost counts every non-match primitive once; each shift costs 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EditScript {
    edits: Vec<EditOp>,
    total_cost: usize,
}

impl EditScript {
    pub(crate) fn new(edits: Vec<EditOp>) -> Self {
        let total_cost = edits
            .iter()
            .filter(|e| !matches!(e, EditOp::Match { .. }))
            .count();
        EditScript { edits, total_cost }
    }

    pub fn edits(&self) -> &[EditOp] {
        &self.edits
    }

    pub fn total_cost(&self) -> usize {
        self.total_cost
    }

    pub fn shift_count(&self) -> usize {
        self.edits
            .iter()
            .filter(|e| matches!(e, EditOp::Shift { .. }))
            .count()
    }

    /// Number of MT tokens the alignment part of the script consumes.
    pub fn mt_tokens_consumed(&self) -> usize {
        self.edits.iter().filter(|e| e.consumes_mt()).count()
    }

    /// Reconstructs the working token order after all shifts, expressed as
    /// original MT indices, and flags which original tokens were moved.
    ///
    /// Fails with `ScriptMismatch` when a shift does not fit `mt_len` or a
    /// shift appears after alignment ops have started.
    pub fn shift_permutation(&self, mt_len: usize) -> Result<(Vec<usize>, Vec<bool>)> {
        let mut order: Vec<usize> = (0..mt_len).collect();
        let mut moved = vec![false; mt_len];
        let mut alignment_started = false;
        for edit in &self.edits {
            match *edit {
                EditOp::Shift {
                    start,
                    len,
                    destination,
                } => {
                    if alignment_started
                        || len == 0
                        || start + len > mt_len
                        || destination > mt_len - len
                    {
                        return Err(Error::ScriptMismatch {
                            expected: mt_len,
                            actual: start + len,
                        });
                    }
                    let block: Vec<usize> =
                        order.splice(start..start + len, std::iter::empty()).collect();
                    for &orig in &block {
                        moved[orig] = true;
                    }
                    let tail = order.split_off(destination);
                    order.extend(block);
                    order.extend(tail);
                }
                _ => alignment_started = true,
            }
        }
        Ok((order, moved))
    }

    /// Replays the script on `mt`, drawing replacement and missing tokens
    /// from `pe` by index, and returns the reconstructed sequence. Scripts
    /// produced by the aligners reproduce `pe` exactly.
    pub fn replay(&self, mt: &TokenSequence, pe: &TokenSequence) -> Result<TokenSequence> {
        let (order, _) = self.shift_permutation(mt.len())?;
        let mut out: Vec<String> = Vec::with_capacity(pe.len());
        let mut cursor = 0; // position in the shifted working sequence
        for edit in &self.edits {
            match *edit {
                EditOp::Shift { .. } => {}
                EditOp::Match { .. } => {
                    let orig = *order.get(cursor).ok_or(Error::ScriptMismatch {
                        expected: mt.len(),
                        actual: cursor + 1,
                    })?;
                    out.push(mt.tokens()[orig].clone());
                    cursor += 1;
                }
                EditOp::Substitution { pe_index, .. } | EditOp::Deletion { pe_index } => {
                    let token = pe.get(pe_index).ok_or(Error::ScriptMismatch {
                        expected: pe.len(),
                        actual: pe_index + 1,
                    })?;
                    out.push(token.to_owned());
                    if edit.consumes_mt() {
                        cursor += 1;
                    }
                }
                EditOp::Insertion { .. } => {
                    cursor += 1;
                }
            }
        }
        if cursor != mt.len() {
            return Err(Error::ScriptMismatch {
                expected: mt.len(),
                actual: cursor,
            });
        }
        TokenSequence::new(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> TokenSequence {
        TokenSequence::parse(s).unwrap()
    }

    #[test]
    fn cost_counts_non_matches_and_shifts() {
        let script = EditScript::new(vec![
            EditOp::Shift {
                start: 0,
                len: 1,
                destination: 2,
            },
            EditOp::Match {
                mt_index: 1,
                pe_index: 0,
            },
            EditOp::Substitution {
                mt_index: 2,
                pe_index: 1,
            },
            EditOp::Match {
                mt_index: 0,
                pe_index: 2,
            },
        ]);
        assert_eq!(script.total_cost(), 2);
        assert_eq!(script.shift_count(), 1);
        assert_eq!(script.mt_tokens_consumed(), 3);
    }

    #[test]
    fn shift_permutation_tracks_moved_tokens() {
        let script = EditScript::new(vec![EditOp::Shift {
            start: 0,
            len: 1,
            destination: 2,
        }]);
        let (order, moved) = script.shift_permutation(3).unwrap();
        assert_eq!(order, vec![1, 2, 0]);
        assert_eq!(moved, vec![true, false, false]);
    }

    #[test]
    fn shift_out_of_bounds_is_rejected() {
        let script = EditScript::new(vec![EditOp::Shift {
            start: 2,
            len: 2,
            destination: 0,
        }]);
        assert!(script.shift_permutation(3).is_err());
    }

    #[test]
    fn replay_reconstructs_pe() {
        // mt = [c a b], pe = [a b c]: shift "c" to the end, then match all.
        let script = EditScript::new(vec![
            EditOp::Shift {
                start: 0,
                len: 1,
                destination: 2,
            },
            EditOp::Match {
                mt_index: 1,
                pe_index: 0,
            },
            EditOp::Match {
                mt_index: 2,
                pe_index: 1,
            },
            EditOp::Match {
                mt_index: 0,
                pe_index: 2,
            },
        ]);
        let result = script.replay(&toks("c a b"), &toks("a b c")).unwrap();
        assert_eq!(result, toks("a b c"));
    }

    #[test]
    fn replay_detects_uncovered_mt() {
        let script = EditScript::new(vec![EditOp::Match {
            mt_index: 0,
            pe_index: 0,
        }]);
        assert!(script.replay(&toks("a b"), &toks("a")).is_err());
    }
}
