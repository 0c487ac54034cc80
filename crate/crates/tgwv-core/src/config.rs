//! Detector configuration: tunable parameters, their defaults, and the
//! `key = value` loader.

use alloc::string::ToString;

use crate::error::{Error, Result};
use crate::kv;

/// Band-domain noise level: either estimated from each frame or fixed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseSigma {
    /// Estimate per frame from the finest diagonal band.
    Auto,
    /// Use this standard deviation as-is.
    Fixed(f64),
}

/// Every tunable the detector exposes. Construct with [`Default::default`]
/// or [`DetectorConfig::from_kv_text`] and adjust fields as needed; pass
/// the result through [`DetectorConfig::validate`] if fields were set by
/// hand.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectorConfig {
    /// Wavelet decomposition depth. Clamped at runtime so the frame still
    /// fits; see the detector for the clamping rule.
    pub levels: usize,
    /// Per-step decay of the translation weight, in (0, 1).
    pub ar_coefficient: f64,
    /// How many spreads above its running mean a difference must sit to
    /// vote foreground.
    pub decision_k: f64,
    /// Fraction of the maximum attainable weighted vote required to mark a
    /// pixel foreground, in (0, 1].
    pub vote_fraction: f64,
    /// Half-width of the square texture-histogram window.
    pub lbp_window_radius: usize,
    /// Band-domain noise level used by the noise weights.
    pub noise_sigma: NoiseSigma,
    /// Update rate for the background model and the decision statistics,
    /// in (0, 1].
    pub learning_rate: f64,
    /// Mixture components per pixel in the adaptive background model.
    pub max_gaussians: usize,
    /// Apply a 3x3 median filter to the final mask.
    pub postprocess_median: bool,
    /// Frames at the start of a sequence during which every decision is
    /// treated as background so the statistics warm up everywhere.
    pub burnin_frames: usize,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        DetectorConfig {
            levels: 7,
            ar_coefficient: 0.95,
            decision_k: 2.5,
            vote_fraction: 0.5,
            lbp_window_radius: 8,
            noise_sigma: NoiseSigma::Auto,
            learning_rate: 0.005,
            max_gaussians: 5,
            postprocess_median: false,
            burnin_frames: 30,
        }
    }
}

impl DetectorConfig {
    /// Parses a config from `key = value` text. Unset keys keep their
    /// defaults; unknown keys are errors. The parsed config is validated.
    pub fn from_kv_text(text: &str) -> Result<Self> {
        let mut cfg = DetectorConfig::default();
        for (key, value) in kv::parse(text)? {
            match key.as_str() {
                "levels" => cfg.levels = kv::parse_usize(&key, &value)?,
                "ar_coefficient" => cfg.ar_coefficient = kv::parse_f64(&key, &value)?,
                "decision_k" => cfg.decision_k = kv::parse_f64(&key, &value)?,
                "vote_fraction" => cfg.vote_fraction = kv::parse_f64(&key, &value)?,
                "lbp_window_radius" => {
                    cfg.lbp_window_radius = kv::parse_usize(&key, &value)?
                }
                "noise_sigma" => {
                    cfg.noise_sigma = if value == "auto" {
                        NoiseSigma::Auto
                    } else {
                        NoiseSigma::Fixed(kv::parse_f64(&key, &value)?)
                    }
                }
                "learning_rate" => cfg.learning_rate = kv::parse_f64(&key, &value)?,
                "max_gaussians" => cfg.max_gaussians = kv::parse_usize(&key, &value)?,
                "postprocess_median" => {
                    cfg.postprocess_median = kv::parse_bool(&key, &value)?
                }
                "burnin_frames" => cfg.burnin_frames = kv::parse_usize(&key, &value)?,
                _ => {
                    return Err(Error::Config {
                        key,
                        message: "unknown key".to_string(),
                    })
                }
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Checks every field against its documented range. The error names
    /// the offending key.
    pub fn validate(&self) -> Result<()> {
        fn bad(key: &str, message: alloc::string::String) -> Error {
            Error::Config { key: key.to_string(), message }
        }
        if self.levels < 1 {
            return Err(bad("levels", "must be at least 1".to_string()));
        }
        if !(self.ar_coefficient > 0.0 && self.ar_coefficient < 1.0) {
            return Err(bad(
                "ar_coefficient",
                alloc::format!("must be in (0, 1), got {}", self.ar_coefficient),
            ));
        }
        if !(self.decision_k > 0.0 && self.decision_k.is_finite()) {
            return Err(bad(
                "decision_k",
                alloc::format!("must be a positive number, got {}", self.decision_k),
            ));
        }
        if !(self.vote_fraction > 0.0 && self.vote_fraction <= 1.0) {
            return Err(bad(
                "vote_fraction",
                alloc::format!("must be in (0, 1], got {}", self.vote_fraction),
            ));
        }
        if self.lbp_window_radius < 1 {
            return Err(bad("lbp_window_radius", "must be at least 1".to_string()));
        }
        if let NoiseSigma::Fixed(sigma) = self.noise_sigma {
            if !(sigma >= 0.0 && sigma.is_finite()) {
                return Err(bad(
                    "noise_sigma",
                    alloc::format!("must be `auto` or a non-negative number, got {sigma}"),
                ));
            }
        }
        if !(self.learning_rate > 0.0 && self.learning_rate <= 1.0) {
            return Err(bad(
                "learning_rate",
                alloc::format!("must be in (0, 1], got {}", self.learning_rate),
            ));
        }
        if self.max_gaussians < 1 {
            return Err(bad("max_gaussians", "must be at least 1".to_string()));
        }
        if self.max_gaussians > 255 {
            return Err(bad("max_gaussians", "must be at most 255".to_string()));
        }
        Ok(())
    }
}
