//! File formats: 8-bit PGM/PNG frames, binary masks as 0/255 PGM, and
//! the versioned background-model checkpoint.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use tgwv_core::background::GmmSnapshot;
use tgwv_core::frame::Plane;
use tgwv_core::{BinaryMask, GrayFrame};

/// Loads an 8-bit grayscale frame from a `.pgm` (binary P5) or `.png`
/// file, normalized to [0, 1]. Color PNGs are reduced to luma with
/// Rec. 601 weights; higher bit depths are rejected.
pub fn load_frame(path: &Path) -> Result<GrayFrame> {
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .map(|e| e.to_ascii_lowercase())
        .unwrap_or_default();
    match ext.as_str() {
        "pgm" => read_pgm(path),
        "png" => read_png(path),
        _ => bail!("{}: expected a .pgm or .png frame", path.display()),
    }
}

/// Writes a frame as binary 8-bit PGM, rounding each intensity to the
/// nearest of 256 levels. Loading the result recovers 8-bit data exactly.
pub fn save_frame(path: &Path, frame: &GrayFrame) -> Result<()> {
    let mut out = format!("P5\n{} {}\n255\n", frame.width(), frame.height()).into_bytes();
    out.extend(frame.data().iter().map(|&v| (v * 255.0).round() as u8));
    fs::write(path, out).with_context(|| format!("writing {}", path.display()))
}

/// Writes a mask as binary PGM with foreground 255 and background 0.
pub fn save_mask(path: &Path, mask: &BinaryMask) -> Result<()> {
    let mut out = format!("P5\n{} {}\n255\n", mask.width(), mask.height()).into_bytes();
    out.extend(mask.data().iter().map(|&fg| if fg { 255u8 } else { 0 }));
    fs::write(path, out).with_context(|| format!("writing {}", path.display()))
}

/// Loads a mask: any pixel above half intensity counts as foreground.
pub fn load_mask(path: &Path) -> Result<BinaryMask> {
    let frame = load_frame(path)?;
    let data = frame.data().iter().map(|&v| v > 0.5).collect();
    Ok(BinaryMask::new(frame.width(), frame.height(), data)?)
}

/// Writes a coefficient plane as PGM, affinely rescaled so the minimum
/// maps to 0 and the maximum to 255. For inspection only; a constant
/// plane comes out all zero.
pub fn save_plane_rescaled(path: &Path, plane: &Plane) -> Result<()> {
    let min = plane.data().iter().copied().fold(f64::INFINITY, f64::min);
    let max = plane.data().iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = max - min;
    let mut out = format!("P5\n{} {}\n255\n", plane.width(), plane.height()).into_bytes();
    out.extend(plane.data().iter().map(|&v| {
        if span > 0.0 {
            ((v - min) / span * 255.0).round() as u8
        } else {
            0
        }
    }));
    fs::write(path, out).with_context(|| format!("writing {}", path.display()))
}

/// All `.pgm`/`.png` files in a directory, sorted by file name. Errors
/// if the directory is unreadable or holds no frames.
pub fn list_frames(dir: &Path) -> Result<Vec<PathBuf>> {
    let entries = fs::read_dir(dir).with_context(|| format!("reading {}", dir.display()))?;
    let mut frames: Vec<PathBuf> = entries
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|path| {
            path.is_file()
                && matches!(
                    path.extension().and_then(|e| e.to_str()),
                    Some(ext) if ext.eq_ignore_ascii_case("pgm") || ext.eq_ignore_ascii_case("png")
                )
        })
        .collect();
    if frames.is_empty() {
        bail!("no .pgm or .png frames in {}", dir.display());
    }
    frames.sort_by_key(|path| path.file_name().map(|n| n.to_owned()));
    Ok(frames)
}

// ---------- PGM ----------

struct PgmReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> PgmReader<'a> {
    fn skip_separators(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else if b == b'#' {
                while let Some(&b) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if b == b'\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn token(&mut self) -> Option<&'a [u8]> {
        self.skip_separators();
        let start = self.pos;
        while let Some(&b) = self.bytes.get(self.pos) {
            if b.is_ascii_whitespace() || b == b'#' {
                break;
            }
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.bytes[start..self.pos])
    }

    fn number(&mut self) -> Option<usize> {
        let token = self.token()?;
        std::str::from_utf8(token).ok()?.parse().ok()
    }
}

fn read_pgm(path: &Path) -> Result<GrayFrame> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let mut reader = PgmReader { bytes: &bytes, pos: 0 };
    match reader.token() {
        Some(b"P5") => {}
        _ => bail!("{}: not a binary PGM (missing P5 magic)", path.display()),
    }
    let (width, height, maxval) = match (reader.number(), reader.number(), reader.number()) {
        (Some(w), Some(h), Some(m)) => (w, h, m),
        _ => bail!("{}: truncated or malformed PGM header", path.display()),
    };
    if width == 0 || height == 0 {
        bail!("{}: zero-sized image", path.display());
    }
    if !(1..=255).contains(&maxval) {
        bail!(
            "{}: unsupported bit depth (maxval {maxval}; only 8-bit data is read)",
            path.display()
        );
    }
    // Exactly one separator byte sits between the header and the data.
    match bytes.get(reader.pos) {
        Some(b) if b.is_ascii_whitespace() => reader.pos += 1,
        _ => bail!("{}: malformed PGM header end", path.display()),
    }
    let pixels = width
        .checked_mul(height)
        .with_context(|| format!("{}: image size overflows", path.display()))?;
    let data = &bytes[reader.pos..];
    if data.len() < pixels {
        bail!(
            "{}: truncated PGM data ({} of {pixels} bytes)",
            path.display(),
            data.len()
        );
    }
    let scale = maxval as f64;
    let values = data[..pixels].iter().map(|&b| b as f64 / scale).collect();
    Ok(GrayFrame::new(width, height, values)?)
}

// ---------- PNG ----------

fn read_png(path: &Path) -> Result<GrayFrame> {
    let img = image::open(path).with_context(|| format!("reading {}", path.display()))?;
    let rec601 = |r: u8, g: u8, b: u8| (0.299 * r as f64 + 0.587 * g as f64 + 0.114 * b as f64) / 255.0;
    let (width, height, values): (u32, u32, Vec<f64>) = match img {
        image::DynamicImage::ImageLuma8(gray) => {
            let (w, h) = (gray.width(), gray.height());
            (w, h, gray.into_raw().iter().map(|&v| v as f64 / 255.0).collect())
        }
        image::DynamicImage::ImageLumaA8(gray) => {
            let (w, h) = (gray.width(), gray.height());
            (w, h, gray.pixels().map(|p| p.0[0] as f64 / 255.0).collect())
        }
        image::DynamicImage::ImageRgb8(rgb) => {
            let (w, h) = (rgb.width(), rgb.height());
            (w, h, rgb.pixels().map(|p| rec601(p.0[0], p.0[1], p.0[2])).collect())
        }
        image::DynamicImage::ImageRgba8(rgba) => {
            let (w, h) = (rgba.width(), rgba.height());
            (w, h, rgba.pixels().map(|p| rec601(p.0[0], p.0[1], p.0[2])).collect())
        }
        _ => bail!(
            "{}: unsupported bit depth or color type (8-bit gray or color only)",
            path.display()
        ),
    };
    Ok(GrayFrame::new(width as usize, height as usize, values)?)
}

// ---------- background checkpoint ----------

/// Checkpoint layout, version 1: the magic line, then width, height, and
/// components-per-pixel as little-endian u32, the match gate as a
/// little-endian f64, the per-pixel component counts as bytes, and the
/// weight, mean, and variance arrays as little-endian f64 in
/// `pixel * max_components + slot` order.
const BACKGROUND_MAGIC: &[u8; 8] = b"TGWVBG1\n";

/// Saves an adaptive background model checkpoint.
pub fn save_background(path: &Path, snapshot: &GmmSnapshot) -> Result<()> {
    let pixels = snapshot.width * snapshot.height;
    let slots = pixels * snapshot.max_components;
    let mut out = Vec::with_capacity(8 + 12 + 8 + pixels + slots * 24);
    out.extend_from_slice(BACKGROUND_MAGIC);
    for value in [snapshot.width, snapshot.height, snapshot.max_components] {
        let value = u32::try_from(value).context("model too large for checkpoint format")?;
        out.extend_from_slice(&value.to_le_bytes());
    }
    out.extend_from_slice(&snapshot.match_k.to_le_bytes());
    out.extend_from_slice(&snapshot.counts);
    for array in [&snapshot.weights, &snapshot.means, &snapshot.variances] {
        for value in array.iter() {
            out.extend_from_slice(&value.to_le_bytes());
        }
    }
    fs::write(path, out).with_context(|| format!("writing {}", path.display()))
}

/// Loads a background checkpoint written by [`save_background`]. The
/// model invariants are re-checked when the snapshot is handed to the
/// detector, not here.
pub fn load_background(path: &Path) -> Result<GmmSnapshot> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let fail = |what: &str| format!("{}: {what}", path.display());
    if bytes.len() < 28 || &bytes[..8] != BACKGROUND_MAGIC {
        bail!(fail("not a background checkpoint (bad magic)"));
    }
    let u32_at = |pos: usize| {
        u32::from_le_bytes(bytes[pos..pos + 4].try_into().expect("4 bytes")) as usize
    };
    let width = u32_at(8);
    let height = u32_at(12);
    let max_components = u32_at(16);
    let match_k = f64::from_le_bytes(bytes[20..28].try_into().expect("8 bytes"));
    let pixels = width
        .checked_mul(height)
        .with_context(|| fail("size overflows"))?;
    let slots = pixels
        .checked_mul(max_components)
        .with_context(|| fail("size overflows"))?;
    let expected = 28usize
        .checked_add(pixels)
        .and_then(|n| slots.checked_mul(24).and_then(|s| n.checked_add(s)))
        .with_context(|| fail("size overflows"))?;
    if bytes.len() != expected {
        bail!(fail(&format!(
            "wrong length ({} bytes, expected {expected})",
            bytes.len()
        )));
    }
    let counts = bytes[28..28 + pixels].to_vec();
    let mut offset = 28 + pixels;
    let mut read_array = || {
        let mut values = Vec::with_capacity(slots);
        for _ in 0..slots {
            values.push(f64::from_le_bytes(
                bytes[offset..offset + 8].try_into().expect("8 bytes"),
            ));
            offset += 8;
        }
        values
    };
    let weights = read_array();
    let means = read_array();
    let variances = read_array();
    Ok(GmmSnapshot { width, height, max_components, match_k, counts, weights, means, variances })
}
