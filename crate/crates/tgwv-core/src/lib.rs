//! Foreground detection for camouflaged scenes.
//!
//! Plain background subtraction fails when a moving object matches the
//! background's intensity. This crate detects such objects from their
//! *texture* instead, by fusing many weak per-band decisions:
//!
//! 1. maintain a background image (adaptive per-pixel Gaussian mixture,
//!    or a frozen median for static cameras);
//! 2. decompose both the background and the current frame with a
//!    stationary (undecimated) Haar wavelet transform, so every band
//!    keeps full resolution and shift invariance;
//! 3. describe local texture in every band with uniform local binary
//!    pattern histograms over sliding windows;
//! 4. in each band, vote per pixel on two channels: coefficient
//!    difference and histogram dissimilarity, each against running
//!    background statistics;
//! 5. fuse the votes with three families of weights: a noise discount
//!    per band, a spatial-correlation discount per level, and a
//!    texture-guided weight that shifts confidence toward the
//!    low-frequency band in flat regions;
//! 6. threshold the weighted vote against a fraction of its ceiling.
//!
//! The crate is `no_std`-compatible (with `alloc`); disable the default
//! `std` feature to use it in embedded contexts.
//!
//! # Quick start
//!
//! ```
//! use tgwv_core::{BackgroundMode, Detector, DetectorConfig, GrayFrame};
//!
//! let config = DetectorConfig { burnin_frames: 2, levels: 3, ..DetectorConfig::default() };
//! let mut detector = Detector::new(config, BackgroundMode::Adaptive).unwrap();
//! let frame = GrayFrame::constant(16, 16, 0.5).unwrap();
//! for _ in 0..3 {
//!     let result = detector.process_frame(&frame).unwrap();
//!     assert_eq!(result.mask.foreground_count(), 0);
//! }
//! ```

#![cfg_attr(not(feature = "std"), no_std)]
#![warn(missing_docs)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod background;
pub mod config;
pub mod decisions;
mod error;
pub mod eval;
pub mod frame;
mod kv;
pub mod lbp;
mod math;
pub mod pipeline;
pub mod swt;
pub mod synth;
pub mod voting;
pub mod weights;

pub use config::{DetectorConfig, NoiseSigma};
pub use error::{Error, Result};
pub use frame::{BinaryMask, GrayFrame, Plane};
pub use pipeline::{BackgroundMode, BaselineDetector, Detector, FrameResult};
