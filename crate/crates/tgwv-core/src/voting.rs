//! Weighted vote fusion and the final mask.
//!
//! Every band contributes two boolean vote planes (coefficient channel
//! and histogram channel). Each vote that fired adds its full weight,
//! `noise * translation * texture`, to the pixel's tally; the maximum
//! attainable tally adds the same product whether or not the vote fired.
//! A pixel becomes foreground when its tally strictly exceeds the
//! configured fraction of the attainable maximum, so pixels whose heavy,
//! trustworthy bands agree win even when many light bands abstain.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::frame::BinaryMask;
use crate::weights::WeightSet;

/// The two decision-channel vote planes of one band.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BandVotes {
    /// Votes from the coefficient-difference channel.
    pub coefficient: BinaryMask,
    /// Votes from the histogram-difference channel.
    pub histogram: BinaryMask,
}

/// Accumulated vote tally and its per-pixel attainable maximum.
#[derive(Debug, Clone, PartialEq)]
pub struct VoteMap {
    width: usize,
    height: usize,
    votes: Vec<f64>,
    max_votes: Vec<f64>,
}

impl VoteMap {
    /// Map width in pixels.
    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    /// Map height in pixels.
    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    /// Accumulated tally, row-major.
    #[inline]
    pub fn votes(&self) -> &[f64] {
        &self.votes
    }

    /// Attainable maximum tally, row-major.
    #[inline]
    pub fn max_votes(&self) -> &[f64] {
        &self.max_votes
    }

    /// Tally at (x, y).
    #[inline]
    pub fn vote(&self, x: usize, y: usize) -> f64 {
        self.votes[y * self.width + x]
    }

    /// Attainable maximum at (x, y).
    #[inline]
    pub fn max_vote(&self, x: usize, y: usize) -> f64 {
        self.max_votes[y * self.width + x]
    }
}

/// Tallies weighted votes across all band slots.
///
/// `votes[slot]` must align with the weight set's band slots. Errors if
/// the slot counts or any plane size disagree.
pub fn accumulate(votes: &[BandVotes], weights: &WeightSet) -> Result<VoteMap> {
    if votes.len() != weights.band_count() {
        return Err(Error::Invalid {
            message: alloc::format!(
                "{} vote plane pairs for {} band slots",
                votes.len(),
                weights.band_count()
            ),
        });
    }
    let (w, h) = (weights.width(), weights.height());
    for band in votes {
        for mask in [&band.coefficient, &band.histogram] {
            if (mask.width(), mask.height()) != (w, h) {
                return Err(Error::DimensionMismatch {
                    expected: (w, h),
                    got: (mask.width(), mask.height()),
                });
            }
        }
    }
    let pixels = w * h;
    let mut tally = alloc::vec![0.0f64; pixels];
    let mut max_tally = alloc::vec![0.0f64; pixels];
    for (slot, band) in votes.iter().enumerate() {
        let scale = weights.noise(slot) * weights.translation(slot);
        if scale == 0.0 {
            continue;
        }
        let coeff_weight = weights.texture_coefficient(slot).data();
        let hist_weight = weights.texture_histogram(slot).data();
        let coeff_votes = band.coefficient.data();
        let hist_votes = band.histogram.data();
        for p in 0..pixels {
            let wc = scale * coeff_weight[p];
            let wh = scale * hist_weight[p];
            if coeff_votes[p] {
                tally[p] += wc;
            }
            if hist_votes[p] {
                tally[p] += wh;
            }
            max_tally[p] += wc + wh;
        }
    }
    Ok(VoteMap { width: w, height: h, votes: tally, max_votes: max_tally })
}

/// Marks pixels whose tally strictly exceeds `fraction` of the attainable
/// maximum. A pixel with a zero maximum never fires. Panics if `fraction`
/// is outside (0, 1].
pub fn threshold(map: &VoteMap, fraction: f64) -> BinaryMask {
    assert!(
        fraction > 0.0 && fraction <= 1.0,
        "vote fraction must be in (0, 1], got {fraction}"
    );
    let flags = map
        .votes
        .iter()
        .zip(&map.max_votes)
        .map(|(&v, &m)| v > fraction * m)
        .collect();
    BinaryMask::new(map.width, map.height, flags).expect("map dimensions are nonzero")
}

/// Optional 3x3 majority (median) filter over the mask, with periodic
/// borders. Returns a clone when `enabled` is false.
pub fn postprocess(mask: &BinaryMask, enabled: bool) -> BinaryMask {
    if !enabled {
        return mask.clone();
    }
    let (w, h) = (mask.width(), mask.height());
    BinaryMask::from_fn(w, h, |x, y| {
        let mut hits = 0u32;
        for dy in [h - 1, 0, 1] {
            for dx in [w - 1, 0, 1] {
                if mask.get((x + dx) % w, (y + dy) % h) {
                    hits += 1;
                }
            }
        }
        hits >= 5
    })
}
