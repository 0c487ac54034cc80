//! Pixel containers: unconstrained planes, validated grayscale frames, and
//! boolean masks. All three store row-major data and index with (x, y)
//! where x grows rightward and y grows downward.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// A rectangular grid of `f64` samples with no range constraint. Wavelet
/// coefficients, weights, and difference fields all live in planes.
#[derive(Debug, Clone, PartialEq)]
pub struct Plane {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl Plane {
    /// Wraps row-major `data` as a `width` x `height` plane.
    ///
    /// Errors if either dimension is zero or `data.len() != width * height`.
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Invalid {
                message: alloc::format!("plane dimensions must be nonzero, got {width}x{height}"),
            });
        }
        if data.len() != width * height {
            return Err(Error::Invalid {
                message: alloc::format!(
                    "plane data has {} samples, expected {} for {width}x{height}",
                    data.len(),
                    width * height
                ),
            });
        }
        Ok(Plane { width, height, data })
    }

    /// All-zero plane. Panics if either dimension is zero.
    pub fn zeros(width: usize, height: usize) -> Self {
        Plane::new(width, height, alloc::vec![0.0; width * height])
            .expect("dimensions checked by caller")
    }

    /// Builds a plane by evaluating `f(x, y)` at every pixel.
    /// Panics if either dimension is zero.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Plane::new(width, height, data).expect("dimensions checked by caller")
    }

    /// Plane width in pixels.
    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    /// Plane height in pixels.
    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    /// Total number of samples.
    #[inline]
    pub fn pixel_count(&self) -> usize {
        self.data.len()
    }

    /// Row-major flat index of (x, y).
    #[inline]
    pub fn index(&self, x: usize, y: usize) -> usize {
        debug_assert!(x < self.width && y < self.height);
        y * self.width + x
    }

    /// Sample at (x, y). Panics out of bounds.
    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[self.index(x, y)]
    }

    /// Row-major sample slice.
    #[inline]
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    /// Mutable row-major sample slice.
    #[inline]
    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }
}

/// A grayscale frame: a plane whose samples are finite and within [0, 1].
/// The constructor enforces the range, so downstream stages can rely on it.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayFrame {
    plane: Plane,
}

impl GrayFrame {
    /// Validates row-major intensities and wraps them as a frame.
    ///
    /// Errors on bad dimensions or on any sample that is not finite or
    /// lies outside [0, 1].
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        let plane = Plane::new(width, height, data)?;
        for (i, &v) in plane.data().iter().enumerate() {
            if !v.is_finite() || !(0.0..=1.0).contains(&v) {
                return Err(Error::Invalid {
                    message: alloc::format!(
                        "frame intensity {v} at index {i} is outside [0, 1]"
                    ),
                });
            }
        }
        Ok(GrayFrame { plane })
    }

    /// Builds a frame by evaluating `f(x, y)` at every pixel, then
    /// validating the result.
    pub fn from_fn(
        width: usize,
        height: usize,
        f: impl FnMut(usize, usize) -> f64,
    ) -> Result<Self> {
        let plane = Plane::from_fn(width, height, f);
        GrayFrame::new(width, height, plane.data)
    }

    /// Frame filled with a single intensity.
    pub fn constant(width: usize, height: usize, value: f64) -> Result<Self> {
        GrayFrame::new(width, height, alloc::vec![value; width * height])
    }

    /// Frame width in pixels.
    #[inline]
    pub fn width(&self) -> usize {
        self.plane.width()
    }

    /// Frame height in pixels.
    #[inline]
    pub fn height(&self) -> usize {
        self.plane.height()
    }

    /// Total number of pixels.
    #[inline]
    pub fn pixel_count(&self) -> usize {
        self.plane.pixel_count()
    }

    /// Intensity at (x, y). Panics out of bounds.
    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.plane.get(x, y)
    }

    /// Row-major intensity slice.
    #[inline]
    pub fn data(&self) -> &[f64] {
        self.plane.data()
    }

    /// The underlying plane, for handing frames to plane-based operations.
    #[inline]
    pub fn plane(&self) -> &Plane {
        &self.plane
    }

    /// Consumes the frame and returns its plane.
    pub fn into_plane(self) -> Plane {
        self.plane
    }
}

/// A per-pixel boolean mask; `true` marks foreground.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMask {
    width: usize,
    height: usize,
    data: Vec<bool>,
}

impl BinaryMask {
    /// Wraps row-major flags as a `width` x `height` mask.
    ///
    /// Errors if either dimension is zero or the length does not match.
    pub fn new(width: usize, height: usize, data: Vec<bool>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Invalid {
                message: alloc::format!("mask dimensions must be nonzero, got {width}x{height}"),
            });
        }
        if data.len() != width * height {
            return Err(Error::Invalid {
                message: alloc::format!(
                    "mask data has {} flags, expected {} for {width}x{height}",
                    data.len(),
                    width * height
                ),
            });
        }
        Ok(BinaryMask { width, height, data })
    }

    /// Mask with every pixel marked background. Panics on zero dimensions.
    pub fn all_background(width: usize, height: usize) -> Self {
        BinaryMask::new(width, height, alloc::vec![false; width * height])
            .expect("dimensions checked by caller")
    }

    /// Builds a mask by evaluating `f(x, y)` at every pixel.
    /// Panics on zero dimensions.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        BinaryMask::new(width, height, data).expect("dimensions checked by caller")
    }

    /// Mask width in pixels.
    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    /// Mask height in pixels.
    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    /// Total number of pixels.
    #[inline]
    pub fn pixel_count(&self) -> usize {
        self.data.len()
    }

    /// Flag at (x, y). Panics out of bounds.
    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        debug_assert!(x < self.width && y < self.height);
        self.data[y * self.width + x]
    }

    /// Sets the flag at (x, y). Panics out of bounds.
    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: bool) {
        debug_assert!(x < self.width && y < self.height);
        self.data[y * self.width + x] = value;
    }

    /// Row-major flag slice.
    #[inline]
    pub fn data(&self) -> &[bool] {
        &self.data
    }

    /// Number of pixels marked foreground.
    pub fn foreground_count(&self) -> usize {
        self.data.iter().filter(|&&v| v).count()
    }
}
