//! Background estimation in the intensity domain.
//!
//! Two providers feed the detector: an adaptive per-pixel Gaussian mixture
//! in the spirit of the classic MOG background subtractors, and a frozen
//! median over an initial frame window for static cameras. Both output a
//! full background frame whose pixels the wavelet stage then decomposes.
//!
//! The mixture keeps at most `max_components` Gaussians per pixel, sorted
//! by weight. An incoming value updates the heaviest component it matches
//! (within `match_k` standard deviations); if nothing matches it replaces
//! the weakest component, or fills an empty slot. The heaviest component's
//! mean is the background estimate.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::frame::GrayFrame;
use crate::math;

/// Smallest allowed component variance, in squared intensity units.
/// Keeps the match test meaningful on perfectly static pixels.
pub const VARIANCE_FLOOR: f64 = 1e-4;

/// Largest allowed component variance. [0, 1] intensities cannot have a
/// variance above 0.25.
pub const VARIANCE_CEILING: f64 = 0.25;

/// Variance assigned to a freshly created component.
pub const INITIAL_VARIANCE: f64 = 1e-2;

/// Serializable state of a [`GmmBackground`]: plain arrays, one slot per
/// (pixel, component). Inactive slots (at and past the pixel's count) must
/// be zero-filled.
#[derive(Debug, Clone, PartialEq)]
pub struct GmmSnapshot {
    /// Model width in pixels.
    pub width: usize,
    /// Model height in pixels.
    pub height: usize,
    /// Maximum components per pixel.
    pub max_components: usize,
    /// Match gate in standard deviations.
    pub match_k: f64,
    /// Active component count per pixel.
    pub counts: Vec<u8>,
    /// Component weights, `pixel * max_components + slot`.
    pub weights: Vec<f64>,
    /// Component means, same layout.
    pub means: Vec<f64>,
    /// Component variances, same layout.
    pub variances: Vec<f64>,
}

/// Adaptive per-pixel Gaussian mixture background model.
#[derive(Debug, Clone, PartialEq)]
pub struct GmmBackground {
    width: usize,
    height: usize,
    max_components: usize,
    match_k: f64,
    counts: Vec<u8>,
    weights: Vec<f64>,
    means: Vec<f64>,
    variances: Vec<f64>,
}

impl GmmBackground {
    /// Gate width used when matching a value against a component.
    pub const DEFAULT_MATCH_K: f64 = 2.5;

    /// Empty model for `width` x `height` frames.
    ///
    /// Errors on zero dimensions, `max_components` outside 1..=255, or a
    /// non-positive `match_k`.
    pub fn new(width: usize, height: usize, max_components: usize, match_k: f64) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Invalid {
                message: alloc::format!(
                    "background model dimensions must be nonzero, got {width}x{height}"
                ),
            });
        }
        if !(1..=255).contains(&max_components) {
            return Err(Error::Invalid {
                message: alloc::format!(
                    "max_components must be in 1..=255, got {max_components}"
                ),
            });
        }
        if !(match_k > 0.0 && match_k.is_finite()) {
            return Err(Error::Invalid {
                message: alloc::format!("match_k must be positive, got {match_k}"),
            });
        }
        let pixels = width * height;
        let slots = pixels * max_components;
        Ok(GmmBackground {
            width,
            height,
            max_components,
            match_k,
            counts: alloc::vec![0u8; pixels],
            weights: alloc::vec![0.0; slots],
            means: alloc::vec![0.0; slots],
            variances: alloc::vec![0.0; slots],
        })
    }

    /// Model width in pixels.
    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    /// Model height in pixels.
    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    /// Absorbs one frame and returns the updated background estimate.
    ///
    /// Errors if the frame size differs from the model or the learning
    /// rate is outside (0, 1].
    pub fn update_and_extract(
        &mut self,
        frame: &GrayFrame,
        learning_rate: f64,
    ) -> Result<GrayFrame> {
        if (frame.width(), frame.height()) != (self.width, self.height) {
            return Err(Error::DimensionMismatch {
                expected: (self.width, self.height),
                got: (frame.width(), frame.height()),
            });
        }
        if !(learning_rate > 0.0 && learning_rate <= 1.0) {
            return Err(Error::Invalid {
                message: alloc::format!(
                    "learning rate must be in (0, 1], got {learning_rate}"
                ),
            });
        }
        let lr = learning_rate;
        let m = self.max_components;
        let mut background = Vec::with_capacity(self.width * self.height);
        for (p, &value) in frame.data().iter().enumerate() {
            let base = p * m;
            let n = self.counts[p] as usize;

            // Heaviest matching component wins.
            let mut matched = None;
            for slot in 0..n {
                let spread = math::sqrt(self.variances[base + slot]);
                if math::abs(value - self.means[base + slot]) <= self.match_k * spread {
                    matched = Some(slot);
                    break;
                }
            }

            match matched {
                Some(slot) => {
                    for s in 0..n {
                        let bump = if s == slot { lr } else { 0.0 };
                        self.weights[base + s] = (1.0 - lr) * self.weights[base + s] + bump;
                    }
                    let idx = base + slot;
                    let delta = value - self.means[idx];
                    self.means[idx] += lr * delta;
                    self.variances[idx] = ((1.0 - lr) * self.variances[idx]
                        + lr * delta * delta)
                        .clamp(VARIANCE_FLOOR, VARIANCE_CEILING);
                    // Only the matched weight grew; bubble it forward to
                    // restore descending order.
                    let mut s = slot;
                    while s > 0 && self.weights[base + s] > self.weights[base + s - 1] {
                        self.weights.swap(base + s, base + s - 1);
                        self.means.swap(base + s, base + s - 1);
                        self.variances.swap(base + s, base + s - 1);
                        s -= 1;
                    }
                }
                None => {
                    let slot = if n < m {
                        self.counts[p] += 1;
                        n
                    } else {
                        // Slots are weight-sorted, so the last is weakest.
                        m - 1
                    };
                    self.weights[base + slot] = if n == 0 { 1.0 } else { lr };
                    self.means[base + slot] = value;
                    self.variances[base + slot] = INITIAL_VARIANCE;

                    let active = self.counts[p] as usize;
                    let total: f64 = self.weights[base..base + active].iter().sum();
                    for s in 0..active {
                        self.weights[base + s] /= total;
                    }
                    // Renormalizing preserves the existing order, but the
                    // new component may outweigh its neighbors.
                    let mut s = slot;
                    while s > 0 && self.weights[base + s] > self.weights[base + s - 1] {
                        self.weights.swap(base + s, base + s - 1);
                        self.means.swap(base + s, base + s - 1);
                        self.variances.swap(base + s, base + s - 1);
                        s -= 1;
                    }
                }
            }

            background.push(self.means[base]);
        }
        GrayFrame::new(self.width, self.height, background)
    }

    /// Mean and variance of the dominant component at (x, y). Panics if
    /// the pixel has absorbed no frames yet.
    pub fn dominant(&self, x: usize, y: usize) -> (f64, f64) {
        let p = y * self.width + x;
        assert!(self.counts[p] > 0, "pixel ({x}, {y}) has no components yet");
        let base = p * self.max_components;
        (self.means[base], self.variances[base])
    }

    /// Copies the model into plain arrays.
    pub fn snapshot(&self) -> GmmSnapshot {
        GmmSnapshot {
            width: self.width,
            height: self.height,
            max_components: self.max_components,
            match_k: self.match_k,
            counts: self.counts.clone(),
            weights: self.weights.clone(),
            means: self.means.clone(),
            variances: self.variances.clone(),
        }
    }

    /// Rebuilds a model from a snapshot, validating every invariant the
    /// updater relies on: array lengths, value ranges, per-pixel weight
    /// normalization, and descending weight order.
    pub fn from_snapshot(snap: &GmmSnapshot) -> Result<Self> {
        let mut model = GmmBackground::new(
            snap.width,
            snap.height,
            snap.max_components,
            snap.match_k,
        )?;
        let pixels = snap.width * snap.height;
        let slots = pixels * snap.max_components;
        if snap.counts.len() != pixels
            || snap.weights.len() != slots
            || snap.means.len() != slots
            || snap.variances.len() != slots
        {
            return Err(Error::Invalid {
                message: alloc::string::String::from("snapshot array lengths are inconsistent"),
            });
        }
        for (p, &count) in snap.counts.iter().enumerate() {
            let n = count as usize;
            if n > snap.max_components {
                return Err(Error::Invalid {
                    message: alloc::format!("pixel {p} claims {n} components, max is {}",
                        snap.max_components),
                });
            }
            let base = p * snap.max_components;
            let mut weight_sum = 0.0;
            for s in 0..snap.max_components {
                let (w, mean, var) =
                    (snap.weights[base + s], snap.means[base + s], snap.variances[base + s]);
                if s >= n {
                    if w != 0.0 || mean != 0.0 || var != 0.0 {
                        return Err(Error::Invalid {
                            message: alloc::format!("pixel {p} slot {s} is inactive but nonzero"),
                        });
                    }
                    continue;
                }
                if !(w.is_finite() && (0.0..=1.0).contains(&w)) {
                    return Err(Error::Invalid {
                        message: alloc::format!("pixel {p} slot {s} weight {w} out of range"),
                    });
                }
                if !(mean.is_finite() && (0.0..=1.0).contains(&mean)) {
                    return Err(Error::Invalid {
                        message: alloc::format!("pixel {p} slot {s} mean {mean} out of range"),
                    });
                }
                if !(var.is_finite() && (VARIANCE_FLOOR..=VARIANCE_CEILING).contains(&var)) {
                    return Err(Error::Invalid {
                        message: alloc::format!("pixel {p} slot {s} variance {var} out of range"),
                    });
                }
                if s > 0 && snap.weights[base + s] > snap.weights[base + s - 1] {
                    return Err(Error::Invalid {
                        message: alloc::format!("pixel {p} weights are not sorted descending"),
                    });
                }
                weight_sum += w;
            }
            if n > 0 && math::abs(weight_sum - 1.0) > 1e-6 {
                return Err(Error::Invalid {
                    message: alloc::format!("pixel {p} weights sum to {weight_sum}, expected 1"),
                });
            }
        }
        model.counts.copy_from_slice(&snap.counts);
        model.weights.copy_from_slice(&snap.weights);
        model.means.copy_from_slice(&snap.means);
        model.variances.copy_from_slice(&snap.variances);
        Ok(model)
    }
}

/// Per-pixel median over a batch of frames: the background for a static
/// camera. Uses the mean-of-the-two-middle-values rule for even counts.
///
/// Errors if `frames` is empty or the sizes disagree.
pub fn static_background(frames: &[GrayFrame]) -> Result<GrayFrame> {
    let Some(first) = frames.first() else {
        return Err(Error::Invalid {
            message: alloc::string::String::from("static background needs at least one frame"),
        });
    };
    let (w, h) = (first.width(), first.height());
    for frame in frames {
        if (frame.width(), frame.height()) != (w, h) {
            return Err(Error::DimensionMismatch {
                expected: (w, h),
                got: (frame.width(), frame.height()),
            });
        }
    }
    let mut out = Vec::with_capacity(w * h);
    let mut column = Vec::with_capacity(frames.len());
    for i in 0..w * h {
        column.clear();
        column.extend(frames.iter().map(|f| f.data()[i]));
        out.push(math::median_in_place(&mut column));
    }
    GrayFrame::new(w, h, out)
}
