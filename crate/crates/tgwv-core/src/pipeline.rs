//! The frame-by-frame detector: background modeling, decomposition,
//! texture fields, per-band decisions, weighting, and vote fusion, in
//! that order. Also provides an intensity-only comparison detector that
//! shares the background model but skips every texture-aware stage.

use alloc::vec::Vec;

use crate::background::{static_background, GmmBackground, GmmSnapshot};
use crate::config::{DetectorConfig, NoiseSigma};
use crate::decisions::{coefficient_difference, BandDecisionState};
use crate::error::{Error, Result};
use crate::frame::{BinaryMask, GrayFrame, Plane};
use crate::lbp::{flatness_fraction, lbp_codes, windowed_intersection_difference, CodePlane};
use crate::math;
use crate::swt::{band_sigma, decompose, Band};
use crate::voting::{accumulate, postprocess, threshold, BandVotes, VoteMap};
use crate::weights::{
    estimate_noise_sigma, noise_weight, texture_weights, translation_weights, TextureWeights,
    WeightSet,
};

/// Which background provider feeds the detector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BackgroundMode {
    /// Adaptive per-pixel Gaussian mixture, updated every frame.
    Adaptive,
    /// Median of the first `burnin_frames` frames (at least one), frozen
    /// afterwards. Suited to strictly static cameras.
    StaticMedian,
}

/// Everything produced for one frame.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameResult {
    /// Final foreground mask.
    pub mask: BinaryMask,
    /// The vote tally behind the mask, for inspection and debugging.
    pub votes: VoteMap,
}

enum BackgroundProvider {
    Adaptive(GmmBackground),
    StaticMedian {
        window: Vec<GrayFrame>,
        target: usize,
        frozen: Option<GrayFrame>,
    },
}

/// Texture-guided weighted-vote foreground detector.
///
/// Feed frames in order with [`Detector::process_frame`]. The frame size
/// is fixed by the first frame; the decomposition depth is clamped to
/// `floor(log2(min(width, height)))` if the configured depth does not
/// fit. The first `burnin_frames` frames always produce an all-background
/// mask while the decision statistics warm up.
pub struct Detector {
    config: DetectorConfig,
    mode: BackgroundMode,
    size: Option<(usize, usize)>,
    levels_used: usize,
    frame_index: usize,
    background: Option<BackgroundProvider>,
    /// One state pair per band slot: [coefficient, histogram] channels.
    coefficient_states: Vec<BandDecisionState>,
    histogram_states: Vec<BandDecisionState>,
    translation: Vec<f64>,
}

impl Detector {
    /// A detector with the given configuration and background provider.
    /// Errors if the configuration fails validation.
    pub fn new(config: DetectorConfig, mode: BackgroundMode) -> Result<Self> {
        config.validate()?;
        Ok(Detector {
            config,
            mode,
            size: None,
            levels_used: 0,
            frame_index: 0,
            background: None,
            coefficient_states: Vec::new(),
            histogram_states: Vec::new(),
            translation: Vec::new(),
        })
    }

    /// The configuration this detector runs with.
    pub fn config(&self) -> &DetectorConfig {
        &self.config
    }

    /// Frames processed so far.
    pub fn frames_processed(&self) -> usize {
        self.frame_index
    }

    /// Decomposition depth actually in use: the configured depth, clamped
    /// so the frame fits. None before the first frame.
    pub fn levels_used(&self) -> Option<usize> {
        (self.levels_used > 0).then_some(self.levels_used)
    }

    fn initialize(&mut self, frame: &GrayFrame) -> Result<()> {
        let (w, h) = (frame.width(), frame.height());
        let fit = (w.min(h)).ilog2() as usize;
        if fit == 0 {
            return Err(Error::FrameTooSmall { width: w, height: h, levels: 1 });
        }
        let levels = self.config.levels.min(fit);
        let provider = match self.mode {
            BackgroundMode::Adaptive => BackgroundProvider::Adaptive(GmmBackground::new(
                w,
                h,
                self.config.max_gaussians,
                GmmBackground::DEFAULT_MATCH_K,
            )?),
            BackgroundMode::StaticMedian => BackgroundProvider::StaticMedian {
                window: Vec::new(),
                target: self.config.burnin_frames.max(1),
                frozen: None,
            },
        };
        let slots = levels * 4;
        self.size = Some((w, h));
        self.levels_used = levels;
        self.background = Some(provider);
        self.coefficient_states = (0..slots).map(|_| BandDecisionState::new(w, h)).collect();
        self.histogram_states = (0..slots).map(|_| BandDecisionState::new(w, h)).collect();
        self.translation = translation_weights(levels, self.config.ar_coefficient);
        Ok(())
    }

    fn background_frame(&mut self, frame: &GrayFrame) -> Result<GrayFrame> {
        let provider = self.background.as_mut().expect("initialized before use");
        match provider {
            BackgroundProvider::Adaptive(model) => {
                model.update_and_extract(frame, self.config.learning_rate)
            }
            BackgroundProvider::StaticMedian { window, target, frozen } => {
                if let Some(bg) = frozen {
                    return Ok(bg.clone());
                }
                window.push(frame.clone());
                let bg = static_background(window)?;
                if window.len() >= *target {
                    *frozen = Some(bg.clone());
                    window.clear();
                    window.shrink_to_fit();
                }
                Ok(bg)
            }
        }
    }

    /// Processes the next frame and returns its mask and vote map.
    ///
    /// Errors if the frame size changes mid-sequence or the frame is too
    /// small to decompose at all.
    pub fn process_frame(&mut self, frame: &GrayFrame) -> Result<FrameResult> {
        if self.size.is_none() {
            self.initialize(frame)?;
        }
        let (w, h) = self.size.expect("initialized above");
        if (frame.width(), frame.height()) != (w, h) {
            return Err(Error::DimensionMismatch {
                expected: (w, h),
                got: (frame.width(), frame.height()),
            });
        }
        let levels = self.levels_used;
        let warming_up = self.frame_index < self.config.burnin_frames;

        // Stage 1: background estimate in the intensity domain.
        let background = self.background_frame(frame)?;

        // Stage 2: decompose both images.
        let current_pyramid = decompose(frame, levels)?;
        let background_pyramid = decompose(&background, levels)?;

        // Stage 3: noise level, from the current frame's finest diagonal
        // band unless fixed.
        let sigma_noise = match self.config.noise_sigma {
            NoiseSigma::Auto => estimate_noise_sigma(&current_pyramid),
            NoiseSigma::Fixed(sigma) => sigma,
        };

        // Stages 4-6 per band: codes, differences, decisions, flatness.
        let radius = self.config.lbp_window_radius;
        let k = self.config.decision_k;
        let rate = self.config.learning_rate;
        let mut votes: Vec<BandVotes> = Vec::with_capacity(levels * 4);
        let mut noise_weights = Vec::with_capacity(levels * 4);
        let mut texture: Vec<TextureWeights> = Vec::with_capacity(levels);
        for level in 1..=levels {
            let mut flatness: Vec<Plane> = Vec::with_capacity(4);
            for band in Band::ALL {
                let slot = (level - 1) * 4 + band.index();
                let cur = current_pyramid.band(level, band);
                let bg = background_pyramid.band(level, band);

                let cur_codes: CodePlane = lbp_codes(cur)?;
                let bg_codes: CodePlane = lbp_codes(bg)?;

                let coeff_diff = coefficient_difference(cur, bg)?;
                let hist_diff = windowed_intersection_difference(&cur_codes, &bg_codes, radius)?;
                flatness.push(flatness_fraction(&bg_codes, &cur_codes, radius)?);

                let coeff_vote =
                    self.coefficient_states[slot].vote(&coeff_diff, k, rate, warming_up);
                let hist_vote = self.histogram_states[slot].vote(&hist_diff, k, rate, warming_up);
                votes.push(BandVotes { coefficient: coeff_vote, histogram: hist_vote });

                noise_weights.push(noise_weight(band_sigma(cur), sigma_noise));
            }
            let flatness: [Plane; 4] = flatness.try_into().expect("exactly four bands");
            texture.push(texture_weights(&flatness)?);
        }

        // Stage 7: fuse.
        let weights = WeightSet::new(levels, noise_weights, self.translation.clone(), texture)?;
        let map = accumulate(&votes, &weights)?;
        let mask = if warming_up {
            BinaryMask::all_background(w, h)
        } else {
            postprocess(
                &threshold(&map, self.config.vote_fraction),
                self.config.postprocess_median,
            )
        };

        self.frame_index += 1;
        Ok(FrameResult { mask, votes: map })
    }

    /// Snapshot of the adaptive background model, or None when running
    /// with the static provider or before the first frame.
    pub fn background_snapshot(&self) -> Option<GmmSnapshot> {
        match &self.background {
            Some(BackgroundProvider::Adaptive(model)) => Some(model.snapshot()),
            _ => None,
        }
    }

    /// Preloads the adaptive background model from a snapshot, fixing the
    /// frame size to the snapshot's. Only valid before the first frame
    /// and with the adaptive provider.
    pub fn set_background_snapshot(&mut self, snapshot: &GmmSnapshot) -> Result<()> {
        if self.frame_index > 0 || self.size.is_some() {
            return Err(Error::Invalid {
                message: alloc::string::String::from(
                    "background snapshots must be loaded before the first frame",
                ),
            });
        }
        if self.mode != BackgroundMode::Adaptive {
            return Err(Error::Invalid {
                message: alloc::string::String::from(
                    "background snapshots require the adaptive provider",
                ),
            });
        }
        let model = GmmBackground::from_snapshot(snapshot)?;
        // Run the usual initialization for the snapshot's size, then swap
        // the restored model in.
        let probe = GrayFrame::constant(snapshot.width, snapshot.height, 0.0)?;
        self.initialize(&probe)?;
        self.background = Some(BackgroundProvider::Adaptive(model));
        Ok(())
    }
}

/// Intensity-only comparison detector: the same adaptive background
/// model, scored per pixel as `|value - dominant mean| > k * dominant
/// stddev`, with the same burn-in convention and optional median
/// postprocessing. No wavelets, no texture, no voting.
pub struct BaselineDetector {
    config: DetectorConfig,
    model: Option<GmmBackground>,
    frame_index: usize,
}

impl BaselineDetector {
    /// A baseline detector with the given configuration. Errors if the
    /// configuration fails validation.
    pub fn new(config: DetectorConfig) -> Result<Self> {
        config.validate()?;
        Ok(BaselineDetector { config, model: None, frame_index: 0 })
    }

    /// Processes the next frame and returns its mask.
    ///
    /// Errors if the frame size changes mid-sequence.
    pub fn process_frame(&mut self, frame: &GrayFrame) -> Result<BinaryMask> {
        let (w, h) = (frame.width(), frame.height());
        if self.model.is_none() {
            self.model = Some(GmmBackground::new(
                w,
                h,
                self.config.max_gaussians,
                GmmBackground::DEFAULT_MATCH_K,
            )?);
        }
        let model = self.model.as_mut().expect("created above");
        if (model.width(), model.height()) != (w, h) {
            return Err(Error::DimensionMismatch {
                expected: (model.width(), model.height()),
                got: (w, h),
            });
        }
        model.update_and_extract(frame, self.config.learning_rate)?;
        let warming_up = self.frame_index < self.config.burnin_frames;
        let mask = if warming_up {
            BinaryMask::all_background(w, h)
        } else {
            let k = self.config.decision_k;
            let mask = BinaryMask::from_fn(w, h, |x, y| {
                let (mean, variance) = model.dominant(x, y);
                math::abs(frame.get(x, y) - mean) > k * math::sqrt(variance)
            });
            postprocess(&mask, self.config.postprocess_median)
        };
        self.frame_index += 1;
        Ok(mask)
    }
}
