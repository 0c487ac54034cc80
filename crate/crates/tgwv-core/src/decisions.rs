//! Per-band change decisions.
//!
//! Every band keeps two independent decision channels: the absolute
//! wavelet coefficient difference between the current frame and the
//! background, and the texture difference (one minus the windowed LBP
//! histogram intersection). Each channel tracks a running mean and
//! variance of its difference at every pixel and votes foreground when
//! the incoming difference sits more than `k` spreads above the mean.
//!
//! Updates are gated: only pixels that vote background feed the running
//! statistics, so foreground evidence is never absorbed into the model.
//! The update rate starts at 1/(n+1) for the n-th absorbed sample and
//! settles at the configured learning rate, giving every pixel an honest
//! sample mean during warm-up instead of a slow crawl away from the
//! zero-initialized state.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::frame::{BinaryMask, Plane};
use crate::lbp::{histogram_intersection, LbpField};
use crate::math;

/// Smallest variance a decision channel can report. Keeps thresholds
/// nonzero on perfectly clean synthetic input.
pub const DECISION_VARIANCE_FLOOR: f64 = 1e-6;

/// Running mean/variance of one difference channel of one band.
#[derive(Debug, Clone, PartialEq)]
pub struct BandDecisionState {
    width: usize,
    height: usize,
    means: Vec<f64>,
    variances: Vec<f64>,
    /// Samples absorbed per pixel, saturating.
    updates: Vec<u32>,
}

impl BandDecisionState {
    /// Zeroed state for `width` x `height` difference planes. Panics on
    /// zero dimensions.
    pub fn new(width: usize, height: usize) -> Self {
        assert!(width > 0 && height > 0, "state dimensions must be nonzero");
        let pixels = width * height;
        BandDecisionState {
            width,
            height,
            means: alloc::vec![0.0; pixels],
            variances: alloc::vec![DECISION_VARIANCE_FLOOR; pixels],
            updates: alloc::vec![0u32; pixels],
        }
    }

    /// State width in pixels.
    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    /// State height in pixels.
    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    /// Running mean at (x, y).
    #[inline]
    pub fn mean(&self, x: usize, y: usize) -> f64 {
        self.means[y * self.width + x]
    }

    /// Running variance at (x, y).
    #[inline]
    pub fn variance(&self, x: usize, y: usize) -> f64 {
        self.variances[y * self.width + x]
    }

    /// Rebuilds state from raw arrays; lengths must match the dimensions,
    /// variances must be at least the floor.
    pub fn from_parts(
        width: usize,
        height: usize,
        means: Vec<f64>,
        variances: Vec<f64>,
        updates: Vec<u32>,
    ) -> Result<Self> {
        let pixels = width * height;
        if width == 0 || height == 0 {
            return Err(Error::Invalid {
                message: alloc::string::String::from("state dimensions must be nonzero"),
            });
        }
        if means.len() != pixels || variances.len() != pixels || updates.len() != pixels {
            return Err(Error::Invalid {
                message: alloc::string::String::from("state array lengths are inconsistent"),
            });
        }
        if variances.iter().any(|&v| v < DECISION_VARIANCE_FLOOR || !v.is_finite()) {
            return Err(Error::Invalid {
                message: alloc::string::String::from("state variance below the floor"),
            });
        }
        if means.iter().any(|&m| !m.is_finite()) {
            return Err(Error::Invalid {
                message: alloc::string::String::from("state mean is not finite"),
            });
        }
        Ok(BandDecisionState { width, height, means, variances, updates })
    }

    /// Raw state arrays as (means, variances, updates).
    pub fn parts(&self) -> (&[f64], &[f64], &[u32]) {
        (&self.means, &self.variances, &self.updates)
    }

    /// Scores one difference plane and absorbs its background pixels.
    ///
    /// A pixel votes foreground when `diff > mean + k * sqrt(variance)`
    /// (strictly; the boundary stays background). Pixels that vote
    /// background update their statistics at rate
    /// `max(1 / (updates + 1), learning_rate)`. With `force_background`
    /// set, every pixel votes background and updates, which is how warm-up
    /// frames prime the statistics.
    ///
    /// Panics if the plane size differs from the state, `k` is not
    /// positive, or `learning_rate` is outside (0, 1].
    pub fn vote(
        &mut self,
        diff: &Plane,
        k: f64,
        learning_rate: f64,
        force_background: bool,
    ) -> BinaryMask {
        assert_eq!(
            (diff.width(), diff.height()),
            (self.width, self.height),
            "difference plane size does not match the state"
        );
        assert!(k > 0.0 && k.is_finite(), "k must be positive");
        assert!(
            learning_rate > 0.0 && learning_rate <= 1.0,
            "learning rate must be in (0, 1]"
        );
        let mut flags = Vec::with_capacity(self.width * self.height);
        for (p, &d) in diff.data().iter().enumerate() {
            let threshold = self.means[p] + k * math::sqrt(self.variances[p]);
            let foreground = !force_background && d > threshold;
            if !foreground {
                let rate = (1.0 / (self.updates[p] as f64 + 1.0)).max(learning_rate);
                let delta = d - self.means[p];
                self.means[p] += rate * delta;
                self.variances[p] = ((1.0 - rate) * self.variances[p] + rate * delta * delta)
                    .max(DECISION_VARIANCE_FLOOR);
                self.updates[p] = self.updates[p].saturating_add(1);
            }
            flags.push(foreground);
        }
        BinaryMask::new(self.width, self.height, flags).expect("state dimensions are nonzero")
    }
}

/// Absolute coefficient difference `|current - background|`, pixelwise.
/// Errors on a dimension mismatch.
pub fn coefficient_difference(current: &Plane, background: &Plane) -> Result<Plane> {
    if (current.width(), current.height()) != (background.width(), background.height()) {
        return Err(Error::DimensionMismatch {
            expected: (background.width(), background.height()),
            got: (current.width(), current.height()),
        });
    }
    let data = current
        .data()
        .iter()
        .zip(background.data())
        .map(|(&c, &b)| math::abs(c - b))
        .collect();
    Plane::new(current.width(), current.height(), data)
}

/// Texture difference `1 - intersection` between two histogram fields,
/// pixelwise, clamped into [0, 1]. Errors on a dimension mismatch.
pub fn texture_difference(current: &LbpField, background: &LbpField) -> Result<Plane> {
    if (current.width(), current.height()) != (background.width(), background.height()) {
        return Err(Error::DimensionMismatch {
            expected: (background.width(), background.height()),
            got: (current.width(), current.height()),
        });
    }
    let (w, h) = (current.width(), current.height());
    let mut data = Vec::with_capacity(w * h);
    for y in 0..h {
        for x in 0..w {
            let overlap =
                histogram_intersection(current.histogram(x, y), background.histogram(x, y));
            data.push((1.0 - overlap).clamp(0.0, 1.0));
        }
    }
    Plane::new(w, h, data)
}
