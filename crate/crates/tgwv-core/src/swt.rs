//! Stationary (undecimated, a trous) Haar wavelet decomposition.
//!
//! Nothing is downsampled: every band of every level keeps the full input
//! resolution, and deeper levels dilate the Haar pair instead of shrinking
//! the image. Level `l` places its second tap `2^(l-1)` pixels away and
//! filters the level `l-1` approximation; borders wrap periodically. The
//! combination makes the transform shift invariant, which is what lets
//! band statistics be compared pixel-by-pixel across frames.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::frame::{GrayFrame, Plane};
use crate::math;

/// The four band orientations within one pyramid level.
///
/// Names give the (row filter, column filter) pair: `Lh` is lowpass down
/// the columns and highpass across the rows, so it responds to intensity
/// steps along x.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Band {
    /// Lowpass in both axes; the level's approximation.
    Ll,
    /// Highpass across x, lowpass across y.
    Lh,
    /// Lowpass across x, highpass across y.
    Hl,
    /// Highpass in both axes.
    Hh,
}

impl Band {
    /// All bands in storage order.
    pub const ALL: [Band; 4] = [Band::Ll, Band::Lh, Band::Hl, Band::Hh];

    /// Position within [`Band::ALL`].
    #[inline]
    pub fn index(self) -> usize {
        match self {
            Band::Ll => 0,
            Band::Lh => 1,
            Band::Hl => 2,
            Band::Hh => 3,
        }
    }

    /// Conventional two-letter label.
    pub fn label(self) -> &'static str {
        match self {
            Band::Ll => "LL",
            Band::Lh => "LH",
            Band::Hl => "HL",
            Band::Hh => "HH",
        }
    }
}

/// Dilated Haar analysis pair for one decomposition level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SwtFilters {
    level: usize,
    step: usize,
}

impl SwtFilters {
    /// Filters for a 1-based `level`. Panics if `level` is 0 or at least 64.
    pub fn for_level(level: usize) -> Self {
        assert!(level >= 1, "decomposition levels are 1-based");
        assert!(level < 64, "tap offset 2^(level-1) overflows for level {level}");
        SwtFilters { level, step: 1usize << (level - 1) }
    }

    /// The level these filters belong to.
    #[inline]
    pub fn level(self) -> usize {
        self.level
    }

    /// Distance between the two taps.
    #[inline]
    pub fn step(self) -> usize {
        self.step
    }

    /// Averaging taps as (offset, coefficient); coefficients sum to 1.
    #[inline]
    pub fn lowpass(self) -> [(usize, f64); 2] {
        [(0, 0.5), (self.step, 0.5)]
    }

    /// Differencing taps as (offset, coefficient); coefficients sum to 0.
    #[inline]
    pub fn highpass(self) -> [(usize, f64); 2] {
        [(0, 0.5), (self.step, -0.5)]
    }
}

/// Full decomposition of one frame: four coefficient planes per level,
/// each at input resolution.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletPyramid {
    width: usize,
    height: usize,
    levels: usize,
    /// Per level in order [LL, LH, HL, HH].
    planes: Vec<Plane>,
}

impl WaveletPyramid {
    /// Decomposition depth.
    #[inline]
    pub fn levels(&self) -> usize {
        self.levels
    }

    /// Width of every plane.
    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    /// Height of every plane.
    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    /// Coefficient plane of `band` at 1-based `level`. Panics if the level
    /// is outside `1..=levels()`.
    pub fn band(&self, level: usize, band: Band) -> &Plane {
        assert!(
            (1..=self.levels).contains(&level),
            "level {level} outside 1..={}",
            self.levels
        );
        &self.planes[(level - 1) * 4 + band.index()]
    }
}

/// Applies a two-tap filter along x. Offsets wrap modulo the width.
fn filter_rows(src: &Plane, taps: [(usize, f64); 2]) -> Plane {
    let (w, h) = (src.width(), src.height());
    debug_assert!(taps.iter().all(|&(off, _)| off < w));
    let mut data = Vec::with_capacity(w * h);
    let src = src.data();
    for y in 0..h {
        let row = &src[y * w..(y + 1) * w];
        for x in 0..w {
            let mut acc = 0.0;
            for (off, c) in taps {
                let mut xx = x + off;
                if xx >= w {
                    xx -= w;
                }
                acc += c * row[xx];
            }
            data.push(acc);
        }
    }
    Plane::new(w, h, data).expect("same shape as source")
}

/// Applies a two-tap filter along y. Offsets wrap modulo the height.
fn filter_cols(src: &Plane, taps: [(usize, f64); 2]) -> Plane {
    let (w, h) = (src.width(), src.height());
    debug_assert!(taps.iter().all(|&(off, _)| off < h));
    let mut data = Vec::with_capacity(w * h);
    let src = src.data();
    for y in 0..h {
        let rows = taps.map(|(off, c)| {
            let mut yy = y + off;
            if yy >= h {
                yy -= h;
            }
            (&src[yy * w..(yy + 1) * w], c)
        });
        for x in 0..w {
            data.push(rows[0].1 * rows[0].0[x] + rows[1].1 * rows[1].0[x]);
        }
    }
    Plane::new(w, h, data).expect("same shape as source")
}

/// Decomposes `frame` into `levels` stationary Haar levels.
///
/// Errors if `levels` is 0 or either frame side is smaller than
/// `2^levels`.
pub fn decompose(frame: &GrayFrame, levels: usize) -> Result<WaveletPyramid> {
    if levels == 0 {
        return Err(Error::Invalid {
            message: alloc::string::String::from("decomposition needs at least one level"),
        });
    }
    let (w, h) = (frame.width(), frame.height());
    let min_side = 1usize
        .checked_shl(levels as u32)
        .filter(|&need| w >= need && h >= need);
    if min_side.is_none() {
        return Err(Error::FrameTooSmall { width: w, height: h, levels });
    }

    let mut planes = Vec::with_capacity(levels * 4);
    let mut approx = frame.plane().clone();
    for level in 1..=levels {
        let filters = SwtFilters::for_level(level);
        let low_y = filter_cols(&approx, filters.lowpass());
        let high_y = filter_cols(&approx, filters.highpass());
        let ll = filter_rows(&low_y, filters.lowpass());
        let lh = filter_rows(&low_y, filters.highpass());
        let hl = filter_rows(&high_y, filters.lowpass());
        let hh = filter_rows(&high_y, filters.highpass());
        approx = ll.clone();
        planes.push(ll);
        planes.push(lh);
        planes.push(hl);
        planes.push(hh);
    }
    Ok(WaveletPyramid { width: w, height: h, levels, planes })
}

/// Pixels covered by the level's equivalent filter: `(2^level)^2`.
/// Panics if `level` is 0 or at least 32.
pub fn support_size(level: usize) -> usize {
    assert!(level >= 1, "decomposition levels are 1-based");
    assert!(level < 32, "support size overflows for level {level}");
    let side = 1usize << level;
    side * side
}

/// Population standard deviation of a coefficient plane.
///
/// A plane whose samples are all identical returns exactly 0.
pub fn band_sigma(plane: &Plane) -> f64 {
    let data = plane.data();
    let first = data[0];
    if data.iter().all(|&v| v == first) {
        return 0.0;
    }
    let n = data.len() as f64;
    let mean = data.iter().sum::<f64>() / n;
    let var = data.iter().map(|&v| (v - mean) * (v - mean)).sum::<f64>() / n;
    math::sqrt(var.max(0.0))
}
