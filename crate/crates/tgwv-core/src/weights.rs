//! The three vote weights: noise reliability, translation stability, and
//! texture richness.
//!
//! Noise weights discount bands whose signal spread barely clears the
//! sensor noise. Translation weights discount deep levels, whose wide
//! equivalent filters smear a camera shift across many pixels; the weight
//! is the average of `alpha^d` over the level's support, with `d` the
//! Chebyshev distance from the support's anchor tap. Texture weights steer
//! each pixel's trust between the coefficient channel and the histogram
//! channel based on how textureless both windows look: flat windows make
//! histograms meaningless, so their weight moves onto the approximation
//! band's coefficient channel instead.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::frame::Plane;
use crate::math;
use crate::swt::{Band, WaveletPyramid};

/// How much to trust a band given its overall spread `sigma_band` and the
/// noise level `sigma_noise`: `(sigma_band - sigma_noise) / sigma_band`,
/// or 0 when the band does not rise above the noise. Always in [0, 1].
pub fn noise_weight(sigma_band: f64, sigma_noise: f64) -> f64 {
    debug_assert!(sigma_band >= 0.0 && sigma_noise >= 0.0);
    if sigma_band <= sigma_noise || sigma_band == 0.0 {
        0.0
    } else {
        (sigma_band - sigma_noise) / sigma_band
    }
}

/// Robust noise estimate from the finest diagonal band: median absolute
/// coefficient divided by 0.6745, the median absolute deviation of a unit
/// Gaussian. A noise-free frame gives 0.
pub fn estimate_noise_sigma(pyramid: &WaveletPyramid) -> f64 {
    let hh = pyramid.band(1, Band::Hh);
    let mut magnitudes: Vec<f64> = hh.data().iter().map(|&c| math::abs(c)).collect();
    math::median_in_place(&mut magnitudes) / 0.6745
}

/// Stability of a level under small camera translation: the average decay
/// `alpha^d` over the level's `2^level` square support, where `d` is the
/// Chebyshev distance from the anchor tap at `(2^level - 1) / 2` (integer
/// division) in both axes.
///
/// Always in (0, 1]. Panics if `level` is 0 or at least 32, or `alpha` is
/// outside (0, 1).
pub fn translation_weight(level: usize, alpha: f64) -> f64 {
    assert!(level >= 1, "decomposition levels are 1-based");
    assert!(level < 32, "support size overflows for level {level}");
    assert!(alpha > 0.0 && alpha < 1.0, "alpha must be in (0, 1), got {alpha}");
    let side = 1usize << level;
    let anchor = (side - 1) / 2;
    // Count support pixels per Chebyshev ring via box differences:
    // pixels within distance d along one axis, intersected with [0, side).
    let axis_within = |d: usize| -> usize { anchor.min(d) + (side - 1 - anchor).min(d) + 1 };
    let max_d = anchor.max(side - 1 - anchor);
    let mut sum = 0.0;
    let mut alpha_pow = 1.0; // alpha^0
    let mut prev_box = 0usize;
    for d in 0..=max_d {
        let axis = axis_within(d);
        let ring = axis * axis - prev_box;
        prev_box = axis * axis;
        sum += ring as f64 * alpha_pow;
        alpha_pow *= alpha;
    }
    sum / (side * side) as f64
}

/// Translation weights for levels `1..=levels`.
pub fn translation_weights(levels: usize, alpha: f64) -> Vec<f64> {
    (1..=levels).map(|level| translation_weight(level, alpha)).collect()
}

/// Per-pixel texture weights of one level, one plane per band in
/// [`Band::ALL`] order.
#[derive(Debug, Clone, PartialEq)]
pub struct TextureWeights {
    /// Weights for the coefficient-difference channel. Detail bands stay
    /// in [0, 1]; the approximation band absorbs what the others lose and
    /// can reach 8.
    pub coefficient: [Plane; 4],
    /// Weights for the histogram-difference channel, in [0, 1].
    pub histogram: [Plane; 4],
}

/// Builds both texture weight channels from the per-band flatness planes
/// of one level (in [`Band::ALL`] order, values in [0, 2]).
///
/// Flat windows lose histogram weight in every band via the ramp
/// `f(x) = clamp(x / 2, 0, 1)`; detail bands lose coefficient weight the
/// same way, and the approximation band's coefficient weight grows by
/// twice what the detail bands lost plus its own flatness ramp, keeping
/// camouflaged-but-flat regions detectable through raw intensity.
/// Errors if the four planes disagree in size.
pub fn texture_weights(flatness: &[Plane; 4]) -> Result<TextureWeights> {
    let (w, h) = (flatness[0].width(), flatness[0].height());
    for plane in flatness.iter() {
        if (plane.width(), plane.height()) != (w, h) {
            return Err(Error::DimensionMismatch {
                expected: (w, h),
                got: (plane.width(), plane.height()),
            });
        }
    }
    let ramp = |x: f64| (x / 2.0).clamp(0.0, 1.0);
    let pixels = w * h;
    let mut coefficient: [Vec<f64>; 4] = core::array::from_fn(|_| Vec::with_capacity(pixels));
    let mut histogram: [Vec<f64>; 4] = core::array::from_fn(|_| Vec::with_capacity(pixels));
    for p in 0..pixels {
        let f: [f64; 4] = core::array::from_fn(|b| ramp(flatness[b].data()[p]));
        for b in 0..4 {
            histogram[b].push(1.0 - f[b]);
        }
        // Band order is [LL, LH, HL, HH]: details are indices 1..4.
        coefficient[0].push(1.0 + 2.0 * (f[1] + f[2] + f[3]) + f[0]);
        for b in 1..4 {
            coefficient[b].push(1.0 - f[b]);
        }
    }
    let wrap = |data: Vec<f64>| Plane::new(w, h, data).expect("same shape as flatness");
    Ok(TextureWeights {
        coefficient: coefficient.map(wrap),
        histogram: histogram.map(wrap),
    })
}

/// Complete weight collection for one frame: everything the vote
/// accumulator needs, indexed by band slot `(level - 1) * 4 +
/// band.index()`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSet {
    levels: usize,
    width: usize,
    height: usize,
    noise: Vec<f64>,
    translation: Vec<f64>,
    texture_coefficient: Vec<Plane>,
    texture_histogram: Vec<Plane>,
}

impl WeightSet {
    /// Assembles a weight set from per-band noise weights (one per band
    /// slot), per-level translation weights, and per-level texture
    /// weights.
    ///
    /// Errors if any length disagrees with `levels`, any scalar weight is
    /// out of range, or the texture planes disagree in size.
    pub fn new(
        levels: usize,
        noise: Vec<f64>,
        translation: Vec<f64>,
        texture: Vec<TextureWeights>,
    ) -> Result<Self> {
        if levels == 0 {
            return Err(Error::Invalid {
                message: alloc::string::String::from("a weight set needs at least one level"),
            });
        }
        if noise.len() != levels * 4 || translation.len() != levels || texture.len() != levels {
            return Err(Error::Invalid {
                message: alloc::format!(
                    "weight set for {levels} level(s) got {} noise, {} translation, {} texture entries",
                    noise.len(),
                    translation.len(),
                    texture.len()
                ),
            });
        }
        if noise.iter().any(|&w| !w.is_finite() || !(0.0..=1.0).contains(&w)) {
            return Err(Error::Invalid {
                message: alloc::string::String::from("noise weights must lie in [0, 1]"),
            });
        }
        if translation.iter().any(|&w| !w.is_finite() || !(w > 0.0 && w <= 1.0)) {
            return Err(Error::Invalid {
                message: alloc::string::String::from("translation weights must lie in (0, 1]"),
            });
        }
        let (w, h) = (texture[0].coefficient[0].width(), texture[0].coefficient[0].height());
        for level in &texture {
            for plane in level.coefficient.iter().chain(level.histogram.iter()) {
                if (plane.width(), plane.height()) != (w, h) {
                    return Err(Error::DimensionMismatch {
                        expected: (w, h),
                        got: (plane.width(), plane.height()),
                    });
                }
            }
        }
        let mut texture_coefficient = Vec::with_capacity(levels * 4);
        let mut texture_histogram = Vec::with_capacity(levels * 4);
        for level in texture {
            texture_coefficient.extend(level.coefficient);
            texture_histogram.extend(level.histogram);
        }
        Ok(WeightSet {
            levels,
            width: w,
            height: h,
            noise,
            translation,
            texture_coefficient,
            texture_histogram,
        })
    }

    /// Number of band slots (`4 * levels`).
    #[inline]
    pub fn band_count(&self) -> usize {
        self.levels * 4
    }

    /// Plane width shared by all texture weights.
    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    /// Plane height shared by all texture weights.
    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    /// Noise weight of a band slot.
    #[inline]
    pub fn noise(&self, slot: usize) -> f64 {
        self.noise[slot]
    }

    /// Translation weight of a band slot (shared per level).
    #[inline]
    pub fn translation(&self, slot: usize) -> f64 {
        self.translation[slot / 4]
    }

    /// Coefficient-channel texture weights of a band slot.
    #[inline]
    pub fn texture_coefficient(&self, slot: usize) -> &Plane {
        &self.texture_coefficient[slot]
    }

    /// Histogram-channel texture weights of a band slot.
    #[inline]
    pub fn texture_histogram(&self, slot: usize) -> &Plane {
        &self.texture_histogram[slot]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::GrayFrame;
    use crate::swt::decompose;
    use alloc::vec;
    use proptest::prelude::*;

    #[test]
    fn noise_weight_worked_examples() {
        assert_eq!(noise_weight(0.04, 0.01), 0.75);
        assert_eq!(noise_weight(0.01, 0.04), 0.0);
        assert_eq!(noise_weight(0.0, 0.0), 0.0);
        assert_eq!(noise_weight(0.5, 0.0), 1.0);
        assert_eq!(noise_weight(0.03, 0.03), 0.0);
    }

    proptest! {
        #[test]
        fn noise_weight_is_bounded_and_monotone(
            sigma_band in 0.0f64..1.0,
            sigma_noise in 0.0f64..1.0,
            bump in 0.0f64..0.5,
        ) {
            let w = noise_weight(sigma_band, sigma_noise);
            prop_assert!((0.0..=1.0).contains(&w));
            // More band signal never lowers the weight.
            prop_assert!(noise_weight(sigma_band + bump, sigma_noise) >= w);
            // More noise never raises it.
            prop_assert!(noise_weight(sigma_band, sigma_noise + bump) <= w);
        }
    }

    #[test]
    fn translation_weight_level_one_by_hand() {
        // 2x2 support, anchor (0, 0): one pixel at distance 0, three at 1.
        let alpha = 0.85;
        let expect = (1.0 + 3.0 * alpha) / 4.0;
        assert!((translation_weight(1, alpha) - expect).abs() < 1e-15);
    }

    #[test]
    fn translation_weight_level_two_by_hand() {
        // 4x4 support, anchor (1, 1): rings of 1, 8, and 7 pixels.
        let alpha = 0.9;
        let expect = (1.0 + 8.0 * alpha + 7.0 * alpha * alpha) / 16.0;
        assert!((translation_weight(2, alpha) - expect).abs() < 1e-15);
        assert!((translation_weight(2, 0.95) - 0.93234375).abs() < 1e-12);
    }

    #[test]
    fn translation_weight_level_one_fixture() {
        assert!((translation_weight(1, 0.95) - 0.9625).abs() < 1e-12);
    }

    /// Brute-force enumeration of the support window.
    fn translation_weight_oracle(level: usize, alpha: f64) -> f64 {
        let side = 1usize << level;
        let anchor = ((side - 1) / 2) as isize;
        let mut sum = 0.0;
        for y in 0..side as isize {
            for x in 0..side as isize {
                let d = (x - anchor).abs().max((y - anchor).abs()) as i32;
                sum += alpha.powi(d);
            }
        }
        sum / (side * side) as f64
    }

    proptest! {
        #[test]
        fn translation_weight_matches_enumeration(
            level in 1usize..=7,
            alpha in 0.05f64..0.999,
        ) {
            let fast = translation_weight(level, alpha);
            let slow = translation_weight_oracle(level, alpha);
            prop_assert!((fast - slow).abs() < 1e-12, "level {level}: {fast} vs {slow}");
            prop_assert!(fast > 0.0 && fast <= 1.0);
        }

        #[test]
        fn translation_weight_decreases_with_level(alpha in 0.05f64..0.999) {
            let ws = translation_weights(6, alpha);
            for pair in ws.windows(2) {
                prop_assert!(pair[1] < pair[0], "weights {ws:?} not strictly decreasing");
            }
        }
    }

    #[test]
    fn noise_estimate_recovers_a_known_sigma() {
        // Deterministic "noise": mix64 bits mapped to roughly uniform
        // values do not make a Gaussian, so use the Gaussian source from
        // the scene generator for honest amplitudes.
        use crate::synth::GaussianSource;
        let sigma = 0.05;
        let mut gauss = GaussianSource::from_seed(7);
        let frame = GrayFrame::from_fn(64, 64, |_, _| {
            (0.5 + sigma * gauss.sample()).clamp(0.0, 1.0)
        })
        .unwrap();
        let pyramid = decompose(&frame, 1).unwrap();
        let estimate = estimate_noise_sigma(&pyramid);
        // The finest diagonal band of white noise has half the input
        // sigma: each coefficient is (a - b - c + d) / 4 over independent
        // samples, so its variance is 4 * sigma^2 / 16.
        let expect = sigma / 2.0;
        assert!(
            (estimate - expect).abs() < 0.1 * expect,
            "estimate {estimate} vs expected {expect}"
        );
    }

    #[test]
    fn noise_estimate_is_zero_for_clean_frames() {
        let frame = GrayFrame::constant(16, 16, 0.3).unwrap();
        let pyramid = decompose(&frame, 2).unwrap();
        assert_eq!(estimate_noise_sigma(&pyramid), 0.0);
    }

    fn constant_planes(values: [f64; 4]) -> [Plane; 4] {
        values.map(|v| Plane::new(2, 2, vec![v; 4]).unwrap())
    }

    #[test]
    fn texture_weights_mixed_fixture() {
        // Details fully flat (x = 2), approximation fully textured (x = 0):
        // details lose both channels entirely, the approximation's
        // coefficient weight becomes 1 + 2 * 3 = 7.
        let tw = texture_weights(&constant_planes([0.0, 2.0, 2.0, 2.0])).unwrap();
        assert_eq!(tw.coefficient[0].get(0, 0), 7.0);
        assert_eq!(tw.histogram[0].get(0, 0), 1.0);
        for b in 1..4 {
            assert_eq!(tw.coefficient[b].get(0, 0), 0.0);
            assert_eq!(tw.histogram[b].get(0, 0), 0.0);
        }
    }

    #[test]
    fn texture_weights_half_flat_fixture() {
        // x = 1 in the detail bands and x = 0 in the approximation:
        // f = 0.5 for details, so detail weights drop to 0.5 and the
        // approximation coefficient weight is 1 + 2 * 1.5 = 4.
        let tw = texture_weights(&constant_planes([0.0, 1.0, 1.0, 1.0])).unwrap();
        assert_eq!(tw.coefficient[0].get(0, 0), 4.0);
        for b in 1..4 {
            assert_eq!(tw.coefficient[b].get(0, 0), 0.5);
            assert_eq!(tw.histogram[b].get(0, 0), 0.5);
        }
    }

    #[test]
    fn texture_weights_fully_textured_fixture() {
        let tw = texture_weights(&constant_planes([0.0, 0.0, 0.0, 0.0])).unwrap();
        for b in 0..4 {
            assert_eq!(tw.coefficient[b].get(0, 0), 1.0);
            assert_eq!(tw.histogram[b].get(0, 0), 1.0);
        }
    }

    proptest! {
        #[test]
        fn texture_weights_ranges(
            x0 in 0.0f64..2.0,
            x1 in 0.0f64..2.0,
            x2 in 0.0f64..2.0,
            x3 in 0.0f64..2.0,
        ) {
            let tw = texture_weights(&constant_planes([x0, x1, x2, x3])).unwrap();
            let c0 = tw.coefficient[0].get(0, 0);
            prop_assert!((1.0..=8.0).contains(&c0));
            for b in 0..4 {
                prop_assert!((0.0..=1.0).contains(&tw.histogram[b].get(0, 0)));
                if b > 0 {
                    prop_assert!((0.0..=1.0).contains(&tw.coefficient[b].get(0, 0)));
                }
            }
        }
    }

    #[test]
    fn texture_weights_reject_mismatched_planes() {
        let mut planes = constant_planes([0.0; 4]);
        planes[2] = Plane::new(3, 2, vec![0.0; 6]).unwrap();
        assert!(texture_weights(&planes).is_err());
    }

    #[test]
    fn weight_set_indexing_and_validation() {
        let levels = 2;
        let noise = vec![0.5; 8];
        let translation = vec![0.9, 0.8];
        let texture = vec![
            texture_weights(&constant_planes([0.0; 4])).unwrap(),
            texture_weights(&constant_planes([1.0; 4])).unwrap(),
        ];
        let set = WeightSet::new(levels, noise, translation, texture).unwrap();
        assert_eq!(set.band_count(), 8);
        assert_eq!(set.translation(0), 0.9);
        assert_eq!(set.translation(3), 0.9);
        assert_eq!(set.translation(4), 0.8);
        assert_eq!(set.translation(7), 0.8);
        assert_eq!(set.noise(5), 0.5);
        // Level 2 has f = 0.5 everywhere: LL coefficient weight
        // 1 + 2 * (3 * 0.5) + 0.5 = 4.5.
        assert_eq!(set.texture_coefficient(4).get(0, 0), 4.5);
        assert_eq!(set.texture_histogram(5).get(0, 0), 0.5);

        let bad_noise = WeightSet::new(
            2,
            vec![1.5; 8],
            vec![0.9, 0.8],
            vec![
                texture_weights(&constant_planes([0.0; 4])).unwrap(),
                texture_weights(&constant_planes([0.0; 4])).unwrap(),
            ],
        );
        assert!(bad_noise.is_err());

        let bad_len = WeightSet::new(
            2,
            vec![0.5; 7],
            vec![0.9, 0.8],
            vec![
                texture_weights(&constant_planes([0.0; 4])).unwrap(),
                texture_weights(&constant_planes([0.0; 4])).unwrap(),
            ],
        );
        assert!(bad_len.is_err());
    }
}
