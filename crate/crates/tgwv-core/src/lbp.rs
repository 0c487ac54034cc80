//! Uniform local binary patterns (8 neighbors, radius 1) and windowed
//! pattern histograms.
//!
//! Each pixel is encoded by comparing its eight immediate neighbors to it:
//! bit b is set when that neighbor is greater than or equal to the center,
//! starting east and moving clockwise (east, south-east, south, ...,
//! north-east). Codes whose circular bit string has at most two 0/1
//! transitions are "uniform"; the 58 uniform codes each get their own
//! histogram bin and everything else shares one catch-all bin. Because the
//! encoding only compares intensities, it is invariant to any strictly
//! increasing remap of the input, which is what makes histogram overlap a
//! texture signal rather than a brightness signal.
//!
//! Histograms are collected over square windows with periodic wrapping and
//! normalized by the window area. The sliding implementation keeps one
//! histogram per column and updates it as the window moves, so a full
//! field costs O(pixels * bins) regardless of the window size.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::frame::Plane;

/// Number of histogram bins: 58 uniform patterns plus one catch-all.
pub const BINS: usize = 59;

/// Bin shared by all non-uniform patterns.
pub const NON_UNIFORM_BIN: u8 = 58;

const fn transitions(code: u8) -> u32 {
    (code ^ code.rotate_right(1)).count_ones()
}

/// Raw code -> bin. Uniform codes are numbered in increasing raw-code
/// order, so 0x00 gets bin 0 and 0xFF gets bin 57.
const UNIFORM_BIN: [u8; 256] = {
    let mut table = [NON_UNIFORM_BIN; 256];
    let mut code = 0usize;
    let mut next = 0u8;
    while code < 256 {
        if transitions(code as u8) <= 2 {
            table[code] = next;
            next += 1;
        }
        code += 1;
    }
    table
};

/// Bin of the all-zeros pattern (strict local maximum).
pub const ALL_ZEROS_BIN: u8 = UNIFORM_BIN[0x00];

/// Bin of the all-ones pattern (weak local minimum, including flat areas).
pub const ALL_ONES_BIN: u8 = UNIFORM_BIN[0xFF];

/// Histogram bin for a raw 8-bit pattern.
#[inline]
pub fn uniform_bin(code: u8) -> u8 {
    UNIFORM_BIN[code as usize]
}

/// Per-pixel pattern bins of one plane.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodePlane {
    width: usize,
    height: usize,
    codes: Vec<u8>,
}

impl CodePlane {
    /// Wraps row-major bin ids. Errors on zero dimensions, a length
    /// mismatch, or any id outside `0..BINS`.
    pub fn new(width: usize, height: usize, codes: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 || codes.len() != width * height {
            return Err(Error::Invalid {
                message: alloc::format!(
                    "code plane {width}x{height} with {} entries is malformed",
                    codes.len()
                ),
            });
        }
        if let Some(&bad) = codes.iter().find(|&&c| c as usize >= BINS) {
            return Err(Error::Invalid {
                message: alloc::format!("bin id {bad} is outside 0..{BINS}"),
            });
        }
        Ok(CodePlane { width, height, codes })
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

    /// Row-major bin ids.
    #[inline]
    pub fn codes(&self) -> &[u8] {
        &self.codes
    }

    /// Bin id at (x, y). Panics out of bounds.
    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.codes[y * self.width + x]
    }
}

/// Computes the uniform-pattern bin of every pixel. Borders wrap
/// periodically; ties set the bit. Errors if the plane is smaller than
/// 3x3.
pub fn lbp_codes(plane: &Plane) -> Result<CodePlane> {
    let (w, h) = (plane.width(), plane.height());
    if w < 3 || h < 3 {
        return Err(Error::Invalid {
            message: alloc::format!("patterns need a plane of at least 3x3, got {w}x{h}"),
        });
    }
    let data = plane.data();
    let mut codes = Vec::with_capacity(w * h);
    for y in 0..h {
        let yu = (y + h - 1) % h;
        let yd = (y + 1) % h;
        for x in 0..w {
            let xl = (x + w - 1) % w;
            let xr = (x + 1) % w;
            let center = data[y * w + x];
            // Clockwise from east; bit index = position in this list.
            let neighbors = [
                data[y * w + xr],
                data[yd * w + xr],
                data[yd * w + x],
                data[yd * w + xl],
                data[y * w + xl],
                data[yu * w + xl],
                data[yu * w + x],
                data[yu * w + xr],
            ];
            let mut raw = 0u8;
            for (bit, &value) in neighbors.iter().enumerate() {
                if value >= center {
                    raw |= 1 << bit;
                }
            }
            codes.push(UNIFORM_BIN[raw as usize]);
        }
    }
    CodePlane::new(w, h, codes)
}

/// Per-pixel normalized histograms over square windows.
#[derive(Debug, Clone, PartialEq)]
pub struct LbpField {
    width: usize,
    height: usize,
    /// `BINS` values per pixel, row-major by pixel.
    histograms: Vec<f64>,
}

impl LbpField {
    /// Field width in pixels.
    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    /// Field height in pixels.
    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    /// Histogram of the window centered at (x, y); `BINS` values summing
    /// to 1.
    #[inline]
    pub fn histogram(&self, x: usize, y: usize) -> &[f64] {
        debug_assert!(x < self.width && y < self.height);
        let start = (y * self.width + x) * BINS;
        &self.histograms[start..start + BINS]
    }
}

/// Sliding periodic window counter over one or two bin planes.
///
/// Maintains a per-column bin count for the current row span plus the
/// window count itself. Drive it strictly in scan order: `begin_row(y)`
/// for y = 0, 1, ... and then `step_col(x)` for x = 0, 1, ... within the
/// row. Windows larger than the plane count wrapped pixels with
/// multiplicity, so the window total is always `side * side`.
struct WindowCounter<'a> {
    bins: &'a [u8],
    nbins: usize,
    width: usize,
    height: usize,
    radius: usize,
    /// Column-major counts: `cols[x * nbins + bin]`.
    cols: Vec<u32>,
    window: Vec<u32>,
}

impl<'a> WindowCounter<'a> {
    fn new(bins: &'a [u8], nbins: usize, width: usize, height: usize, radius: usize) -> Self {
        WindowCounter {
            bins,
            nbins,
            width,
            height,
            radius,
            cols: alloc::vec![0u32; width * nbins],
            window: alloc::vec![0u32; nbins],
        }
    }

    #[inline]
    fn wrap(v: isize, modulus: usize) -> usize {
        v.rem_euclid(modulus as isize) as usize
    }

    fn row_into_cols(&mut self, row: usize, add: bool) {
        let base = row * self.width;
        for x in 0..self.width {
            let bin = self.bins[base + x] as usize;
            let slot = &mut self.cols[x * self.nbins + bin];
            // Removals never underflow: only previously added rows leave.
            if add {
                *slot += 1;
            } else {
                *slot -= 1;
            }
        }
    }

    fn begin_row(&mut self, y: usize) {
        let r = self.radius as isize;
        if y == 0 {
            self.cols.iter_mut().for_each(|c| *c = 0);
            for dy in -r..=r {
                let row = Self::wrap(dy, self.height);
                self.row_into_cols(row, true);
            }
        } else {
            let entering = Self::wrap(y as isize + r, self.height);
            let leaving = Self::wrap(y as isize - 1 - r, self.height);
            self.row_into_cols(entering, true);
            self.row_into_cols(leaving, false);
        }
    }

    fn col_into_window(&mut self, col: usize, add: bool) {
        let base = col * self.nbins;
        for b in 0..self.nbins {
            if add {
                self.window[b] += self.cols[base + b];
            } else {
                self.window[b] -= self.cols[base + b];
            }
        }
    }

    /// Window counts for the pixel at (x, current row).
    fn step_col(&mut self, x: usize) -> &[u32] {
        let r = self.radius as isize;
        if x == 0 {
            self.window.iter_mut().for_each(|c| *c = 0);
            for dx in -r..=r {
                let col = Self::wrap(dx, self.width);
                self.col_into_window(col, true);
            }
        } else {
            let entering = Self::wrap(x as isize + r, self.width);
            let leaving = Self::wrap(x as isize - 1 - r, self.width);
            self.col_into_window(entering, true);
            self.col_into_window(leaving, false);
        }
        &self.window
    }
}

/// Collects the normalized pattern histogram of the square window of
/// half-width `radius` around every pixel. Windows wrap periodically.
/// Panics if `radius` is 0.
pub fn histogram_field(codes: &CodePlane, radius: usize) -> LbpField {
    assert!(radius >= 1, "histogram windows need radius >= 1");
    let (w, h) = (codes.width(), codes.height());
    let side = 2 * radius + 1;
    let area = (side * side) as f64;
    let mut histograms = Vec::with_capacity(w * h * BINS);
    let mut counter = WindowCounter::new(codes.codes(), BINS, w, h, radius);
    for y in 0..h {
        counter.begin_row(y);
        for x in 0..w {
            let window = counter.step_col(x);
            for &count in window.iter() {
                histograms.push(count as f64 / area);
            }
        }
    }
    LbpField { width: w, height: h, histograms }
}

/// Histogram intersection: the shared mass `sum(min(h1, h2))`, 1 for
/// identical histograms and 0 for disjoint ones. Panics if the lengths
/// differ.
pub fn histogram_intersection(h1: &[f64], h2: &[f64]) -> f64 {
    assert_eq!(h1.len(), h2.len(), "histograms must have equal length");
    h1.iter().zip(h2).map(|(&a, &b)| a.min(b)).sum()
}

/// Per-pixel `1 - intersection` of windowed histograms of two code
/// planes, computed without materializing either histogram field. Exactly
/// equal to pairing [`histogram_field`] with [`histogram_intersection`]
/// up to summation order. Errors on a dimension mismatch; panics if
/// `radius` is 0.
pub fn windowed_intersection_difference(
    a: &CodePlane,
    b: &CodePlane,
    radius: usize,
) -> Result<Plane> {
    assert!(radius >= 1, "histogram windows need radius >= 1");
    if (a.width(), a.height()) != (b.width(), b.height()) {
        return Err(Error::DimensionMismatch {
            expected: (a.width(), a.height()),
            got: (b.width(), b.height()),
        });
    }
    let (w, h) = (a.width(), a.height());
    let side = 2 * radius + 1;
    let area = (side * side) as f64;
    let mut out = Vec::with_capacity(w * h);
    let mut ca = WindowCounter::new(a.codes(), BINS, w, h, radius);
    let mut cb = WindowCounter::new(b.codes(), BINS, w, h, radius);
    for y in 0..h {
        ca.begin_row(y);
        cb.begin_row(y);
        for x in 0..w {
            ca.step_col(x);
            let wb = cb.step_col(x);
            let wa = &ca.window;
            let mut shared = 0u32;
            for bin in 0..BINS {
                shared += wa[bin].min(wb[bin]);
            }
            out.push(1.0 - shared as f64 / area);
        }
    }
    Plane::new(w, h, out)
}

/// Per-pixel fraction of "textureless" patterns across two code planes:
/// counts of the all-zeros, all-ones, and catch-all bins in each window,
/// summed over both planes and divided by the window area. Ranges over
/// [0, 2]. Errors on a dimension mismatch; panics if `radius` is 0.
pub fn flatness_fraction(a: &CodePlane, b: &CodePlane, radius: usize) -> Result<Plane> {
    assert!(radius >= 1, "histogram windows need radius >= 1");
    if (a.width(), a.height()) != (b.width(), b.height()) {
        return Err(Error::DimensionMismatch {
            expected: (a.width(), a.height()),
            got: (b.width(), b.height()),
        });
    }
    let flat_indicator = |codes: &CodePlane| -> Vec<u8> {
        codes
            .codes()
            .iter()
            .map(|&c| u8::from(c == ALL_ZEROS_BIN || c == ALL_ONES_BIN || c == NON_UNIFORM_BIN))
            .collect()
    };
    let ia = flat_indicator(a);
    let ib = flat_indicator(b);
    let (w, h) = (a.width(), a.height());
    let side = 2 * radius + 1;
    let area = (side * side) as f64;
    let mut out = Vec::with_capacity(w * h);
    let mut ca = WindowCounter::new(&ia, 2, w, h, radius);
    let mut cb = WindowCounter::new(&ib, 2, w, h, radius);
    for y in 0..h {
        ca.begin_row(y);
        cb.begin_row(y);
        for x in 0..w {
            ca.step_col(x);
            let wb = cb.step_col(x);
            let na = ca.window[1];
            let nb = wb[1];
            out.push((na + nb) as f64 / area);
        }
    }
    Plane::new(w, h, out)
}
