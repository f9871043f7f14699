//! Corpus-level evaluation: Matthews correlation and per-class P/R/F1, with
//! the target/MT/gap breakdown used for system comparison.
//!
//! Counts are pooled into a single confusion matrix over the whole corpus
//! (micro averaging) with BAD as the positive class.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::io::format_score;
use crate::scalar::Real;
use crate::types::{ConfusionCounts, Tag, TagSequence};

/// Which tag slots participate in the count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlotFilter {
    /// Every slot: words and gaps.
    All,
    /// Odd slots only (word tags).
    Words,
    /// Even slots only (gap tags).
    Gaps,
}

impl SlotFilter {
    fn selects(self, slot_index: usize) -> bool {
        match self {
            SlotFilter::All => true,
            SlotFilter::Words => slot_index % 2 == 1,
            SlotFilter::Gaps => slot_index % 2 == 0,
        }
    }
}

/// Pools confusion counts over all selected slots of the corpus.
pub fn confusion(
    pred: &[TagSequence],
    refs: &[TagSequence],
    filter: SlotFilter,
) -> Result<ConfusionCounts> {
    if pred.len() != refs.len() {
        return Err(Error::LengthMismatch {
            left: pred.len(),
            right: refs.len(),
        });
    }
    let mut counts = ConfusionCounts::default();
    for (p, r) in pred.iter().zip(refs) {
        if p.len() != r.len() {
            return Err(Error::ArityMismatch {
                expected: r.len(),
                actual: p.len(),
            });
        }
        for (i, (pt, rt)) in p.iter().zip(r.iter()).enumerate() {
            if filter.selects(i) {
                counts.record(*rt, *pt);
            }
        }
    }
    Ok(counts)
}

/// Matthews correlation coefficient.
///
/// Returns 0 when any factor of the denominator is zero (all predictions or
/// all references in one class). Computed in double precision; beyond 10^6
/// pooled slots the denominator product is evaluated as a sum of logs.
pub fn mcc<R: Real>(c: &ConfusionCounts) -> R {
    let tp = c.tpc as f64;
    let tn = c.tnc as f64;
    let fp = c.fpc as f64;
    let fn_ = c.fnc as f64;

    let numerator = tp * tn - fp * fn_;
    // Pair the factors so that swapping the classes permutes operands of
    // commutative ops only, keeping the result bit-identical.
    let f1 = tp + fp;
    let f2 = tp + fn_;
    let f3 = tn + fp;
    let f4 = tn + fn_;
    if f1 == 0.0 || f2 == 0.0 || f3 == 0.0 || f4 == 0.0 {
        return R::zero();
    }
    let value = if c.total() > 1_000_000 {
        let half_log_denominator = ((f1.ln() + f2.ln()) + (f3.ln() + f4.ln())) * 0.5;
        numerator * (-half_log_denominator).exp()
    } else {
        numerator / ((f1 * f2) * (f3 * f4)).sqrt()
    };
    R::from_f64(value).expect("mcc fits in the scalar type")
}

/// Precision, recall, and F1 for one class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PrfScores<R: Real = f64> {
    pub precision: R,
    pub recall: R,
    pub f1: R,
}

/// Precision/recall/F1 with `class` as the positive class; 0/0 ratios are
/// defined as 0.
pub fn prf<R: Real>(c: &ConfusionCounts, class: Tag) -> PrfScores<R> {
    let (tp, fp, fn_) = match class {
        Tag::Bad => (c.tpc as f64, c.fpc as f64, c.fnc as f64),
        Tag::Ok => (c.tnc as f64, c.fnc as f64, c.fpc as f64),
    };
    let precision = if tp + fp == 0.0 { 0.0 } else { tp / (tp + fp) };
    let recall = if tp + fn_ == 0.0 { 0.0 } else { tp / (tp + fn_) };
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    PrfScores {
        precision: R::from_f64(precision).expect("precision fits in the scalar type"),
        recall: R::from_f64(recall).expect("recall fits in the scalar type"),
        f1: R::from_f64(f1).expect("f1 fits in the scalar type"),
    }
}

/// The full evaluation table: MCC over all slots, word slots, and gap slots,
/// plus per-class P/R/F1 within the word and gap slot families.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BreakdownReport<R: Real = f64> {
    pub target_mcc: R,
    pub mt_mcc: R,
    pub gap_mcc: R,
    pub mt_bad: PrfScores<R>,
    pub mt_ok: PrfScores<R>,
    pub gap_bad: PrfScores<R>,
    pub gap_ok: PrfScores<R>,
}

/// Evaluates predictions against references and fills the breakdown table.
pub fn breakdown_report<R: Real>(
    pred: &[TagSequence],
    refs: &[TagSequence],
) -> Result<BreakdownReport<R>> {
    let all = confusion(pred, refs, SlotFilter::All)?;
    let words = confusion(pred, refs, SlotFilter::Words)?;
    let gaps = confusion(pred, refs, SlotFilter::Gaps)?;
    Ok(BreakdownReport {
        target_mcc: mcc(&all),
        mt_mcc: mcc(&words),
        gap_mcc: mcc(&gaps),
        mt_bad: prf(&words, Tag::Bad),
        mt_ok: prf(&words, Tag::Ok),
        gap_bad: prf(&gaps, Tag::Bad),
        gap_ok: prf(&gaps, Tag::Ok),
    })
}

impl<R: Real> BreakdownReport<R> {
    /// Machine-readable JSON rendering.
    pub fn to_json(&self) -> String
    where
        R: Serialize,
    {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl<R: Real> fmt::Display for BreakdownReport<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prf_line = |scores: &PrfScores<R>| {
            format!(
                "{} {} {}",
                format_score(scores.precision),
                format_score(scores.recall),
                format_score(scores.f1)
            )
        };
        writeln!(f, "target mcc:     {}", format_score(self.target_mcc))?;
        writeln!(f, "mt mcc:         {}", format_score(self.mt_mcc))?;
        writeln!(f, "mt BAD p/r/f1:  {}", prf_line(&self.mt_bad))?;
        writeln!(f, "mt OK p/r/f1:   {}", prf_line(&self.mt_ok))?;
        writeln!(f, "gap mcc:        {}", format_score(self.gap_mcc))?;
        writeln!(f, "gap BAD p/r/f1: {}", prf_line(&self.gap_bad))?;
        writeln!(f, "gap OK p/r/f1:  {}", prf_line(&self.gap_ok))?;
        Ok(())
    }
}
