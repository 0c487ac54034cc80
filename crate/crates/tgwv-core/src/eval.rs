//! Mask scoring against ground truth: confusion counts, recall,
//! precision, F-measure, and PSNR, per frame and aggregated.
//!
//! Empty-side conventions: recall is 1 when the truth has no foreground,
//! precision is 1 when the mask marks nothing, F is 0 when precision and
//! recall are both 0, and PSNR is infinite for a perfect mask. Aggregation
//! pools the confusion counts over all frames (micro-averaging) rather
//! than averaging the per-frame ratios.

use alloc::string::String;

use crate::error::{Error, Result};
use crate::frame::BinaryMask;
use crate::math;

/// Confusion counts and derived metrics for one frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameScore {
    /// Foreground pixels correctly marked.
    pub true_positives: u64,
    /// Background pixels incorrectly marked.
    pub false_positives: u64,
    /// Foreground pixels missed.
    pub false_negatives: u64,
    /// Background pixels correctly left alone.
    pub true_negatives: u64,
    /// `tp / (tp + fn)`; 1 when the truth is empty.
    pub recall: f64,
    /// `tp / (tp + fp)`; 1 when the mask is empty.
    pub precision: f64,
    /// Harmonic mean of precision and recall; 0 when both are 0.
    pub f_measure: f64,
    /// `10 * log10(pixels / (fp + fn))`; infinite when the mask is exact.
    pub psnr: f64,
}

fn ratio(numerator: u64, denominator: u64, when_empty: f64) -> f64 {
    if denominator == 0 {
        when_empty
    } else {
        numerator as f64 / denominator as f64
    }
}

fn derive_metrics(tp: u64, fp: u64, fn_: u64, tn: u64) -> (f64, f64, f64, f64) {
    let recall = ratio(tp, tp + fn_, 1.0);
    let precision = ratio(tp, tp + fp, 1.0);
    let f_measure = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    let pixels = tp + fp + fn_ + tn;
    let errors = fp + fn_;
    let psnr = if errors == 0 {
        f64::INFINITY
    } else {
        10.0 * math::log10(pixels as f64 / errors as f64)
    };
    (recall, precision, f_measure, psnr)
}

/// Scores one mask against its ground truth. Errors on a size mismatch.
pub fn score(mask: &BinaryMask, truth: &BinaryMask) -> Result<FrameScore> {
    if (mask.width(), mask.height()) != (truth.width(), truth.height()) {
        return Err(Error::DimensionMismatch {
            expected: (truth.width(), truth.height()),
            got: (mask.width(), mask.height()),
        });
    }
    let (mut tp, mut fp, mut fn_, mut tn) = (0u64, 0u64, 0u64, 0u64);
    for (&m, &t) in mask.data().iter().zip(truth.data()) {
        match (m, t) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, true) => fn_ += 1,
            (false, false) => tn += 1,
        }
    }
    let (recall, precision, f_measure, psnr) = derive_metrics(tp, fp, fn_, tn);
    Ok(FrameScore {
        true_positives: tp,
        false_positives: fp,
        false_negatives: fn_,
        true_negatives: tn,
        recall,
        precision,
        f_measure,
        psnr,
    })
}

/// Metrics pooled over a sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AggregateScore {
    /// Frames aggregated.
    pub frames: usize,
    /// Pooled true positives.
    pub true_positives: u64,
    /// Pooled false positives.
    pub false_positives: u64,
    /// Pooled false negatives.
    pub false_negatives: u64,
    /// Pooled true negatives.
    pub true_negatives: u64,
    /// Recall over the pooled counts.
    pub recall: f64,
    /// Precision over the pooled counts.
    pub precision: f64,
    /// F-measure over the pooled counts.
    pub f_measure: f64,
    /// Mean PSNR over frames with finite PSNR; infinite when every frame
    /// was exact.
    pub mean_psnr: f64,
    /// Frames whose mask was exact (infinite PSNR), excluded from the
    /// mean.
    pub infinite_psnr_frames: usize,
}

/// Pools per-frame scores. Errors when `scores` is empty.
pub fn aggregate(scores: &[FrameScore]) -> Result<AggregateScore> {
    if scores.is_empty() {
        return Err(Error::Invalid {
            message: String::from("cannot aggregate zero frames"),
        });
    }
    let (mut tp, mut fp, mut fn_, mut tn) = (0u64, 0u64, 0u64, 0u64);
    let mut psnr_sum = 0.0;
    let mut finite = 0usize;
    for s in scores {
        tp += s.true_positives;
        fp += s.false_positives;
        fn_ += s.false_negatives;
        tn += s.true_negatives;
        if s.psnr.is_finite() {
            psnr_sum += s.psnr;
            finite += 1;
        }
    }
    let (recall, precision, f_measure, _) = derive_metrics(tp, fp, fn_, tn);
    let mean_psnr = if finite == 0 { f64::INFINITY } else { psnr_sum / finite as f64 };
    Ok(AggregateScore {
        frames: scores.len(),
        true_positives: tp,
        false_positives: fp,
        false_negatives: fn_,
        true_negatives: tn,
        recall,
        precision,
        f_measure,
        mean_psnr,
        infinite_psnr_frames: scores.len() - finite,
    })
}

/// One line of a comparison table.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    /// Method name shown in the first column.
    pub label: String,
    /// Recall, shown to three decimals.
    pub recall: f64,
    /// Precision, shown to three decimals.
    pub precision: f64,
    /// F-measure, shown to three decimals.
    pub f_measure: f64,
    /// PSNR in dB, shown to three decimals ("inf" when infinite).
    pub psnr: f64,
}

/// Renders rows as an aligned text table with a header line. Columns:
/// method, recall, precision, F-measure, PSNR.
pub fn format_report(rows: &[ReportRow]) -> String {
    let label_width = rows
        .iter()
        .map(|r| r.label.len())
        .chain(core::iter::once("Method".len()))
        .max()
        .unwrap_or(6);
    let fmt3 = |v: f64| -> String {
        if v.is_infinite() {
            String::from("inf")
        } else {
            alloc::format!("{v:.3}")
        }
    };
    let mut out = String::new();
    out.push_str(&alloc::format!(
        "{:<label_width$}  {:>6}  {:>9}  {:>9}  {:>8}\n",
        "Method",
        "Recall",
        "Precision",
        "F-measure",
        "PSNR"
    ));
    for row in rows {
        out.push_str(&alloc::format!(
            "{:<label_width$}  {:>6}  {:>9}  {:>9}  {:>8}\n",
            row.label,
            fmt3(row.recall),
            fmt3(row.precision),
            fmt3(row.f_measure),
            fmt3(row.psnr)
        ));
    }
    out
}
