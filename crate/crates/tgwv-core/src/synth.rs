//! Seeded synthetic camouflage scenes with exact ground truth.
//!
//! A scenario describes a textured background, optional sensor noise, and
//! an optional moving object whose texture is deliberately similar to the
//! background (same mean level, different orientation or pattern), which
//! is what makes a scene "camouflaged". Every frame is a pure function of
//! the scenario and the frame index: frame noise is drawn from a stream
//! seeded per frame, so generation order never matters and regeneration
//! is bit-identical.

use alloc::string::String;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::frame::{BinaryMask, GrayFrame};
use crate::kv;
use crate::math;

/// Axis along which a grating varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// Stripes are vertical: intensity varies along x.
    Vertical,
    /// Stripes are horizontal: intensity varies along y.
    Horizontal,
}

/// Sinusoidal stripe texture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GratingSpec {
    /// Peak deviation from the base level.
    pub amplitude: f64,
    /// Stripe period in pixels.
    pub period: f64,
    /// Stripe direction.
    pub orientation: Orientation,
}

/// Background texture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BackgroundSpec {
    /// Flat at the base level.
    Constant,
    /// Sinusoidal stripes around the base level.
    Grating(GratingSpec),
    /// Seeded random tiles: one uniform draw per tile cell, tiled
    /// periodically. The same scenario seed always produces the same
    /// tiles.
    Tiles {
        /// Peak deviation from the base level.
        amplitude: f64,
        /// Tile cell size in pixels.
        tile_size: usize,
    },
}

/// Object silhouette.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObjectShape {
    /// Axis-aligned rectangle.
    Rectangle,
    /// Axis-aligned ellipse inscribed in the rectangle.
    Ellipse,
}

/// Texture painted inside the object, in object-local coordinates so it
/// moves with the object.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ObjectTexture {
    /// Flat at the base level: camouflage by intensity.
    Constant,
    /// Stripes around the base level: camouflage by matching statistics
    /// with a different structure.
    Grating(GratingSpec),
}

/// The moving foreground object.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectSpec {
    /// Silhouette shape.
    pub shape: ObjectShape,
    /// Bounding box width in pixels.
    pub width: usize,
    /// Bounding box height in pixels.
    pub height: usize,
    /// Top-left x at the entry frame.
    pub x: f64,
    /// Top-left y at the entry frame.
    pub y: f64,
    /// Horizontal speed in pixels per frame.
    pub dx: f64,
    /// Vertical speed in pixels per frame.
    pub dy: f64,
    /// First frame index (0-based) on which the object is present.
    pub enter_frame: usize,
    /// Texture inside the silhouette.
    pub texture: ObjectTexture,
}

/// A complete scene description.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    /// Frame width in pixels.
    pub width: usize,
    /// Frame height in pixels.
    pub height: usize,
    /// Number of frames.
    pub frames: usize,
    /// Master seed; every random draw derives from it.
    pub seed: u64,
    /// Standard deviation of per-pixel Gaussian sensor noise.
    pub noise_sigma: f64,
    /// Base intensity shared by background and object.
    pub level: f64,
    /// Background texture.
    pub background: BackgroundSpec,
    /// Foreground object, if any.
    pub object: Option<ObjectSpec>,
}

impl Scenario {
    /// Parses a scenario from `key = value` text and validates it.
    /// Unset keys keep their defaults; unknown keys are errors.
    pub fn from_kv_text(text: &str) -> Result<Self> {
        let mut width = 128usize;
        let mut height = 128usize;
        let mut frames = 100usize;
        let mut seed = 0u64;
        let mut noise_sigma = 0.0f64;
        let mut level = 0.5f64;
        let mut background_kind = String::from("constant");
        let mut background_amplitude = 0.1f64;
        let mut background_period = 8.0f64;
        let mut background_orientation = Orientation::Vertical;
        let mut tile_size = 8usize;
        let mut object_kind = String::from("none");
        let mut object_width = 32usize;
        let mut object_height = 32usize;
        let mut object_x = 0.0f64;
        let mut object_y = 0.0f64;
        let mut object_dx = 0.0f64;
        let mut object_dy = 0.0f64;
        let mut object_enter = 0usize;
        let mut object_texture = String::from("grating");
        let mut object_amplitude = 0.1f64;
        let mut object_period = 8.0f64;
        let mut object_orientation = Orientation::Horizontal;

        for (key, value) in kv::parse(text)? {
            match key.as_str() {
                "width" => width = kv::parse_usize(&key, &value)?,
                "height" => height = kv::parse_usize(&key, &value)?,
                "frames" => frames = kv::parse_usize(&key, &value)?,
                "seed" => seed = kv::parse_u64(&key, &value)?,
                "noise_sigma" => noise_sigma = kv::parse_f64(&key, &value)?,
                "level" => level = kv::parse_f64(&key, &value)?,
                "background" => background_kind = value,
                "background_amplitude" => {
                    background_amplitude = kv::parse_f64(&key, &value)?
                }
                "background_period" => background_period = kv::parse_f64(&key, &value)?,
                "background_orientation" => {
                    background_orientation = parse_orientation(&key, &value)?
                }
                "tile_size" => tile_size = kv::parse_usize(&key, &value)?,
                "object" => object_kind = value,
                "object_width" => object_width = kv::parse_usize(&key, &value)?,
                "object_height" => object_height = kv::parse_usize(&key, &value)?,
                "object_x" => object_x = kv::parse_f64(&key, &value)?,
                "object_y" => object_y = kv::parse_f64(&key, &value)?,
                "object_dx" => object_dx = kv::parse_f64(&key, &value)?,
                "object_dy" => object_dy = kv::parse_f64(&key, &value)?,
                "object_enter" => object_enter = kv::parse_usize(&key, &value)?,
                "object_texture" => object_texture = value,
                "object_amplitude" => object_amplitude = kv::parse_f64(&key, &value)?,
                "object_period" => object_period = kv::parse_f64(&key, &value)?,
                "object_orientation" => {
                    object_orientation = parse_orientation(&key, &value)?
                }
                _ => {
                    return Err(Error::Config {
                        key,
                        message: String::from("unknown key"),
                    })
                }
            }
        }

        let background = match background_kind.as_str() {
            "constant" => BackgroundSpec::Constant,
            "grating" => BackgroundSpec::Grating(GratingSpec {
                amplitude: background_amplitude,
                period: background_period,
                orientation: background_orientation,
            }),
            "tiles" => BackgroundSpec::Tiles {
                amplitude: background_amplitude,
                tile_size,
            },
            other => {
                return Err(Error::Config {
                    key: String::from("background"),
                    message: alloc::format!(
                        "expected `constant`, `grating`, or `tiles`, got `{other}`"
                    ),
                })
            }
        };

        let shape = match object_kind.as_str() {
            "none" => None,
            "rectangle" => Some(ObjectShape::Rectangle),
            "ellipse" => Some(ObjectShape::Ellipse),
            other => {
                return Err(Error::Config {
                    key: String::from("object"),
                    message: alloc::format!(
                        "expected `none`, `rectangle`, or `ellipse`, got `{other}`"
                    ),
                })
            }
        };
        let texture = match object_texture.as_str() {
            "constant" => ObjectTexture::Constant,
            "grating" => ObjectTexture::Grating(GratingSpec {
                amplitude: object_amplitude,
                period: object_period,
                orientation: object_orientation,
            }),
            other => {
                return Err(Error::Config {
                    key: String::from("object_texture"),
                    message: alloc::format!("expected `constant` or `grating`, got `{other}`"),
                })
            }
        };
        let object = shape.map(|shape| ObjectSpec {
            shape,
            width: object_width,
            height: object_height,
            x: object_x,
            y: object_y,
            dx: object_dx,
            dy: object_dy,
            enter_frame: object_enter,
            texture,
        });

        let scenario = Scenario {
            width,
            height,
            frames,
            seed,
            noise_sigma,
            level,
            background,
            object,
        };
        scenario.validate()?;
        Ok(scenario)
    }

    /// Checks ranges and, when an object is present, that it stays fully
    /// inside the frame on every frame it appears in.
    pub fn validate(&self) -> Result<()> {
        fn bad(key: &str, message: String) -> Error {
            Error::Config { key: String::from(key), message }
        }
        if self.width == 0 || self.height == 0 {
            return Err(bad("width", String::from("frame dimensions must be nonzero")));
        }
        if self.frames == 0 {
            return Err(bad("frames", String::from("need at least one frame")));
        }
        if !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite()) {
            return Err(bad(
                "noise_sigma",
                alloc::format!("must be non-negative, got {}", self.noise_sigma),
            ));
        }
        if !(0.0..=1.0).contains(&self.level) || !self.level.is_finite() {
            return Err(bad(
                "level",
                alloc::format!("must be in [0, 1], got {}", self.level),
            ));
        }
        let check_amplitude = |key: &str, amplitude: f64| -> Result<()> {
            if !(amplitude >= 0.0 && amplitude.is_finite()) {
                return Err(bad(key, alloc::format!("must be non-negative, got {amplitude}")));
            }
            if self.level - amplitude < 0.0 || self.level + amplitude > 1.0 {
                return Err(bad(
                    key,
                    alloc::format!(
                        "level {} with amplitude {amplitude} leaves [0, 1]",
                        self.level
                    ),
                ));
            }
            Ok(())
        };
        match self.background {
            BackgroundSpec::Constant => {}
            BackgroundSpec::Grating(g) => {
                check_amplitude("background_amplitude", g.amplitude)?;
                if !(g.period > 0.0 && g.period.is_finite()) {
                    return Err(bad(
                        "background_period",
                        alloc::format!("must be positive, got {}", g.period),
                    ));
                }
            }
            BackgroundSpec::Tiles { amplitude, tile_size } => {
                check_amplitude("background_amplitude", amplitude)?;
                if tile_size == 0 {
                    return Err(bad("tile_size", String::from("must be at least 1")));
                }
            }
        }
        if let Some(object) = &self.object {
            if object.width == 0 || object.height == 0 {
                return Err(bad(
                    "object_width",
                    String::from("object dimensions must be nonzero"),
                ));
            }
            if let ObjectTexture::Grating(g) = object.texture {
                check_amplitude("object_amplitude", g.amplitude)?;
                if !(g.period > 0.0 && g.period.is_finite()) {
                    return Err(bad(
                        "object_period",
                        alloc::format!("must be positive, got {}", g.period),
                    ));
                }
            }
            if object.enter_frame >= self.frames {
                return Err(bad(
                    "object_enter",
                    alloc::format!(
                        "entry frame {} is past the last frame {}",
                        object.enter_frame,
                        self.frames - 1
                    ),
                ));
            }
            for index in object.enter_frame..self.frames {
                let (x, y) = object_position(object, index);
                let fits = x >= 0.0
                    && y >= 0.0
                    && x + object.width as f64 <= self.width as f64
                    && y + object.height as f64 <= self.height as f64;
                if !fits {
                    return Err(bad(
                        "object_x",
                        alloc::format!(
                            "object leaves the {}x{} frame on frame {index}",
                            self.width,
                            self.height
                        ),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Noise-free frame `index` with its ground-truth mask.
    ///
    /// Errors if `index` is out of range.
    pub fn clean_frame(&self, index: usize) -> Result<(GrayFrame, BinaryMask)> {
        if index >= self.frames {
            return Err(Error::Invalid {
                message: alloc::format!(
                    "frame {index} out of range, scenario has {} frames",
                    self.frames
                ),
            });
        }
        let tiles = self.tile_pattern();
        let mut values = Vec::with_capacity(self.width * self.height);
        let mut flags = Vec::with_capacity(self.width * self.height);
        let placed = self.object.as_ref().filter(|o| index >= o.enter_frame);
        let origin = placed.map(|o| object_position(o, index));
        for py in 0..self.height {
            for px in 0..self.width {
                let (cx, cy) = (px as f64 + 0.5, py as f64 + 0.5);
                let inside = match (placed, origin) {
                    (Some(object), Some((ox, oy))) => covers(object, ox, oy, cx, cy),
                    _ => false,
                };
                let value = if inside {
                    let object = placed.expect("inside implies placed");
                    let (ox, oy) = origin.expect("inside implies origin");
                    match object.texture {
                        ObjectTexture::Constant => self.level,
                        ObjectTexture::Grating(g) => {
                            // Object-local coordinates: the texture rides
                            // along with the object.
                            self.level + grating_offset(&g, cx - ox, cy - oy)
                        }
                    }
                } else {
                    match self.background {
                        BackgroundSpec::Constant => self.level,
                        BackgroundSpec::Grating(g) => self.level + grating_offset(&g, cx, cy),
                        BackgroundSpec::Tiles { amplitude, tile_size } => {
                            let pattern = tiles.as_ref().expect("tiles imply a pattern");
                            let tx = (px / tile_size) % pattern.side;
                            let ty = (py / tile_size) % pattern.side;
                            self.level + amplitude * pattern.values[ty * pattern.side + tx]
                        }
                    }
                };
                values.push(value.clamp(0.0, 1.0));
                flags.push(inside);
            }
        }
        let frame = GrayFrame::new(self.width, self.height, values)?;
        let mask = BinaryMask::new(self.width, self.height, flags)?;
        Ok((frame, mask))
    }

    /// Frame `index` with sensor noise, plus its ground-truth mask.
    ///
    /// Errors if `index` is out of range.
    pub fn frame(&self, index: usize) -> Result<(GrayFrame, BinaryMask)> {
        let (clean, mask) = self.clean_frame(index)?;
        if self.noise_sigma == 0.0 {
            return Ok((clean, mask));
        }
        // Stream index + 1: stream 0 is reserved for the tile pattern.
        let mut gauss = GaussianSource::from_seed(derive_seed(self.seed, index as u64 + 1));
        let noisy: Vec<f64> = clean
            .data()
            .iter()
            .map(|&v| (v + self.noise_sigma * gauss.sample()).clamp(0.0, 1.0))
            .collect();
        let frame = GrayFrame::new(self.width, self.height, noisy)?;
        Ok((frame, mask))
    }

    /// All frames with their masks.
    pub fn generate(&self) -> Result<(Vec<GrayFrame>, Vec<BinaryMask>)> {
        let mut frames = Vec::with_capacity(self.frames);
        let mut masks = Vec::with_capacity(self.frames);
        for index in 0..self.frames {
            let (frame, mask) = self.frame(index)?;
            frames.push(frame);
            masks.push(mask);
        }
        Ok((frames, masks))
    }

    /// The seeded tile pattern, if the background uses tiles. Values are
    /// uniform in [-1, 1]; the pattern side is fixed so the pattern does
    /// not depend on the frame size.
    fn tile_pattern(&self) -> Option<TilePattern> {
        let BackgroundSpec::Tiles { tile_size, .. } = self.background else {
            return None;
        };
        // Cover the frame with one non-repeating pattern where possible.
        let side = (self.width.max(self.height)).div_ceil(tile_size).max(1);
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(self.seed, 0));
        let values = (0..side * side)
            .map(|_| uniform_unit(&mut rng) * 2.0 - 1.0)
            .collect();
        Some(TilePattern { side, values })
    }
}

struct TilePattern {
    side: usize,
    values: Vec<f64>,
}

fn parse_orientation(key: &str, value: &str) -> Result<Orientation> {
    match value {
        "vertical" => Ok(Orientation::Vertical),
        "horizontal" => Ok(Orientation::Horizontal),
        other => Err(Error::Config {
            key: String::from(key),
            message: alloc::format!("expected `vertical` or `horizontal`, got `{other}`"),
        }),
    }
}

/// Top-left corner of the object on `index` (which must be at or past the
/// entry frame).
fn object_position(object: &ObjectSpec, index: usize) -> (f64, f64) {
    let steps = (index - object.enter_frame) as f64;
    (object.x + steps * object.dx, object.y + steps * object.dy)
}

/// Whether the pixel center (cx, cy) falls inside the object placed at
/// (ox, oy).
fn covers(object: &ObjectSpec, ox: f64, oy: f64, cx: f64, cy: f64) -> bool {
    let (w, h) = (object.width as f64, object.height as f64);
    match object.shape {
        ObjectShape::Rectangle => cx >= ox && cx < ox + w && cy >= oy && cy < oy + h,
        ObjectShape::Ellipse => {
            let nx = (cx - (ox + w / 2.0)) / (w / 2.0);
            let ny = (cy - (oy + h / 2.0)) / (h / 2.0);
            nx * nx + ny * ny <= 1.0
        }
    }
}

fn grating_offset(g: &GratingSpec, x: f64, y: f64) -> f64 {
    let coord = match g.orientation {
        Orientation::Vertical => x,
        Orientation::Horizontal => y,
    };
    g.amplitude * math::sin(core::f64::consts::TAU * coord / g.period)
}

/// Stable per-stream seed derivation: stream 0 is the tile pattern,
/// stream i + 1 is frame i's noise.
fn derive_seed(seed: u64, stream: u64) -> u64 {
    math::mix64(seed ^ stream.wrapping_mul(0xA24B_AED4_963E_E407))
}

/// Uniform draw in [0, 1) from the top 53 bits.
fn uniform_unit(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Standard Gaussian sampler over a seeded ChaCha stream (Box-Muller,
/// both outputs used).
pub struct GaussianSource {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl GaussianSource {
    /// Sampler over a fresh stream for `seed`.
    pub fn from_seed(seed: u64) -> Self {
        GaussianSource { rng: ChaCha8Rng::seed_from_u64(seed), spare: None }
    }

    /// Next standard normal draw.
    pub fn sample(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        // u1 in (0, 1] keeps the log finite; u2 in [0, 1).
        let u1 = ((self.rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64);
        let u2 = uniform_unit(&mut self.rng);
        let radius = math::sqrt(-2.0 * math::ln(u1));
        let angle = core::f64::consts::TAU * u2;
        self.spare = Some(radius * math::sin(angle));
        radius * math::cos(angle)
    }
}
