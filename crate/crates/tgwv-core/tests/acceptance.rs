//! Exit checks for the detector, one test per numbered criterion. Each
//! test prints a single `criterion N (...): PASS|FAIL` line (visible with
//! `--nocapture`) and fails loudly on any violated bound. The oracles
//! here are written straight from the definitions and share no code with
//! the library internals.

use std::panic::{catch_unwind, resume_unwind, AssertUnwindSafe};
use std::time::Instant;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tgwv_core::eval::{aggregate, format_report, score, FrameScore, ReportRow};
use tgwv_core::frame::{BinaryMask, GrayFrame, Plane};
use tgwv_core::lbp::{histogram_field, lbp_codes, BINS, NON_UNIFORM_BIN};
use tgwv_core::swt::{decompose, Band};
use tgwv_core::synth::{
    BackgroundSpec, GratingSpec, ObjectShape, ObjectSpec, ObjectTexture, Orientation, Scenario,
};
use tgwv_core::voting::{accumulate, threshold, BandVotes};
use tgwv_core::weights::{
    noise_weight, texture_weights, translation_weight, translation_weights, TextureWeights,
    WeightSet,
};
use tgwv_core::{BackgroundMode, BaselineDetector, Detector, DetectorConfig};

fn criterion(number: u32, label: &str, body: impl FnOnce()) {
    let outcome = catch_unwind(AssertUnwindSafe(body));
    let verdict = if outcome.is_ok() { "PASS" } else { "FAIL" };
    println!("criterion {number} ({label}): {verdict}");
    if let Err(cause) = outcome {
        resume_unwind(cause);
    }
}

fn unit(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

fn random_frame(rng: &mut ChaCha8Rng, width: usize, height: usize) -> GrayFrame {
    GrayFrame::from_fn(width, height, |_, _| unit(rng)).expect("unit values are valid")
}

// ---------- criterion 1: wavelet decomposition vs direct convolution ----------

/// Sparse 1D filter taps at non-negative offsets.
type Taps = Vec<(usize, f64)>;

fn single_level_taps(level: usize, high: bool) -> Taps {
    let step = 1usize << (level - 1);
    vec![(0, 0.5), (step, if high { -0.5 } else { 0.5 })]
}

fn conv_taps(a: &Taps, b: &Taps) -> Taps {
    let mut out: Vec<(usize, f64)> = Vec::new();
    for &(pa, va) in a {
        for &(pb, vb) in b {
            let pos = pa + pb;
            match out.iter_mut().find(|(p, _)| *p == pos) {
                Some((_, v)) => *v += va * vb,
                None => out.push((pos, va * vb)),
            }
        }
    }
    out
}

fn lowpass_chain(level: usize) -> Taps {
    let mut taps = vec![(0usize, 1.0f64)];
    for l in 1..=level {
        taps = conv_taps(&taps, &single_level_taps(l, false));
    }
    taps
}

/// The x- and y-direction equivalent kernels of one band. The detail
/// direction uses the level's highpass after the lowpass chain of all
/// coarser levels; `Lh` differentiates along x, `Hl` along y.
fn band_kernels(level: usize, band: Band) -> (Taps, Taps) {
    let smooth = lowpass_chain(level);
    let prior = lowpass_chain(level - 1);
    let detail = conv_taps(&prior, &single_level_taps(level, true));
    match band {
        Band::Ll => (smooth.clone(), smooth),
        Band::Lh => (detail, smooth),
        Band::Hl => (smooth, detail),
        Band::Hh => (detail.clone(), detail),
    }
}

fn oracle_band(frame: &GrayFrame, level: usize, band: Band) -> Plane {
    let (kx, ky) = band_kernels(level, band);
    let (w, h) = (frame.width(), frame.height());
    Plane::from_fn(w, h, |x, y| {
        let mut sum = 0.0;
        for &(dx, vx) in &kx {
            for &(dy, vy) in &ky {
                sum += vx * vy * frame.get((x + dx) % w, (y + dy) % h);
            }
        }
        sum
    })
}

fn shift_plane(plane: &Plane, sx: usize, sy: usize) -> Plane {
    let (w, h) = (plane.width(), plane.height());
    Plane::from_fn(w, h, |x, y| plane.get((x + sx) % w, (y + sy) % h))
}

#[test]
fn criterion_1_swt_matches_direct_convolution_and_shifts() {
    criterion(1, "wavelet bands vs direct convolution, shift invariance", || {
        let start = Instant::now();
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        let sizes = [(8, 8), (16, 8), (8, 16), (12, 12), (16, 16)];
        for round in 0..20 {
            let (w, h) = sizes[round % sizes.len()];
            let frame = random_frame(&mut rng, w, h);
            let pyramid = decompose(&frame, 3).unwrap();
            for level in 1..=3 {
                for band in Band::ALL {
                    let got = pyramid.band(level, band);
                    let want = oracle_band(&frame, level, band);
                    let worst = got
                        .data()
                        .iter()
                        .zip(want.data())
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0f64, f64::max);
                    assert!(
                        worst <= 1e-12,
                        "level {level} {} band off by {worst}",
                        band.label()
                    );
                }
            }
        }

        for _ in 0..100 {
            let frame = random_frame(&mut rng, 16, 16);
            let sx = (rng.next_u64() % 16) as usize;
            let sy = (rng.next_u64() % 16) as usize;
            let shifted =
                GrayFrame::from_fn(16, 16, |x, y| frame.get((x + sx) % 16, (y + sy) % 16))
                    .unwrap();
            let base = decompose(&frame, 3).unwrap();
            let moved = decompose(&shifted, 3).unwrap();
            for level in 1..=3 {
                for band in Band::ALL {
                    let expect = shift_plane(base.band(level, band), sx, sy);
                    let got = moved.band(level, band);
                    let worst = got
                        .data()
                        .iter()
                        .zip(expect.data())
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0f64, f64::max);
                    assert!(
                        worst <= 1e-6,
                        "shift ({sx},{sy}) level {level} {} off by {worst}",
                        band.label()
                    );
                }
            }
        }
        assert!(
            start.elapsed().as_secs_f64() < 10.0,
            "wavelet checks took {:?}",
            start.elapsed()
        );
    });
}

// ---------- criterion 2: constant images ----------

#[test]
fn criterion_2_constant_images_have_null_details() {
    criterion(2, "constant image: zero details, exact approximation", || {
        for value in [0.0, 0.37, 1.0] {
            let frame = GrayFrame::constant(128, 128, value).unwrap();
            let pyramid = decompose(&frame, 7).unwrap();
            for level in 1..=7 {
                for band in [Band::Lh, Band::Hl, Band::Hh] {
                    let worst = pyramid
                        .band(level, band)
                        .data()
                        .iter()
                        .fold(0.0f64, |m, c| m.max(c.abs()));
                    assert!(
                        worst < 1e-9,
                        "level {level} {} reaches {worst} on constant {value}",
                        band.label()
                    );
                }
                assert!(
                    pyramid.band(level, Band::Ll).data().iter().all(|&c| c == value),
                    "level {level} approximation drifted from {value}"
                );
            }
        }
    });
}

// ---------- criterion 3: local binary patterns ----------

/// Neighbor offsets in bit order: E, SE, S, SW, W, NW, N, NE.
const NEIGHBORS: [(isize, isize); 8] =
    [(1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1)];

fn circular_transitions(code: u8) -> u32 {
    let mut count = 0;
    for bit in 0..8 {
        let a = (code >> bit) & 1;
        let b = (code >> ((bit + 1) % 8)) & 1;
        if a != b {
            count += 1;
        }
    }
    count
}

/// Bin numbering derived from scratch: uniform codes in increasing raw
/// order, then one shared bin for the rest.
fn oracle_bin(code: u8) -> u8 {
    if circular_transitions(code) > 2 {
        return NON_UNIFORM_BIN;
    }
    (0..code).filter(|&c| circular_transitions(c) <= 2).count() as u8
}

fn oracle_code(plane: &Plane, x: usize, y: usize) -> u8 {
    let (w, h) = (plane.width() as isize, plane.height() as isize);
    let center = plane.get(x, y);
    let mut code = 0u8;
    for (bit, (dx, dy)) in NEIGHBORS.iter().enumerate() {
        let nx = (x as isize + dx).rem_euclid(w) as usize;
        let ny = (y as isize + dy).rem_euclid(h) as usize;
        if plane.get(nx, ny) >= center {
            code |= 1 << bit;
        }
    }
    code
}

fn dyadic_plane(rng: &mut ChaCha8Rng, width: usize, height: usize) -> Plane {
    Plane::from_fn(width, height, |_, _| (rng.next_u64() % 256) as f64 / 256.0)
}

#[test]
fn criterion_3_lbp_matches_recount_oracles() {
    criterion(3, "LBP codes, windowed histograms, monotone invariance", || {
        let mut rng = ChaCha8Rng::seed_from_u64(303);
        let mut planes = Vec::new();
        for _ in 0..100 {
            planes.push(dyadic_plane(&mut rng, 16, 16));
        }

        for plane in &planes {
            let codes = lbp_codes(plane).unwrap();
            for y in 0..16 {
                for x in 0..16 {
                    let want = oracle_bin(oracle_code(plane, x, y));
                    assert_eq!(codes.get(x, y), want, "code bin at ({x},{y})");
                }
            }
        }

        // Windowed histograms, including a window wider than the plane
        // (wrap-around multiplicity).
        for plane in planes.iter().take(10) {
            let codes = lbp_codes(plane).unwrap();
            for radius in [1usize, 2, 8] {
                let field = histogram_field(&codes, radius);
                let side = 2 * radius + 1;
                let area = (side * side) as f64;
                for y in 0..16 {
                    for x in 0..16 {
                        let mut counts = [0u32; BINS];
                        for dy in -(radius as isize)..=radius as isize {
                            for dx in -(radius as isize)..=radius as isize {
                                let nx = (x as isize + dx).rem_euclid(16) as usize;
                                let ny = (y as isize + dy).rem_euclid(16) as usize;
                                counts[codes.get(nx, ny) as usize] += 1;
                            }
                        }
                        let got = field.histogram(x, y);
                        for bin in 0..BINS {
                            assert!(
                                got[bin] == counts[bin] as f64 / area,
                                "histogram bin {bin} at ({x},{y}) radius {radius}"
                            );
                        }
                    }
                }
            }
        }

        // Monotone remaps preserve every comparison, hence every code.
        // Scales are powers of two and offsets dyadic, so the remapped
        // values are exact and order is preserved bit for bit.
        for plane in planes.iter().take(25) {
            let codes = lbp_codes(plane).unwrap();
            for (scale, offset) in [(2.0, 0.125), (4.0, 0.0), (0.5, 0.5)] {
                let remapped = Plane::from_fn(16, 16, |x, y| scale * plane.get(x, y) + offset);
                let recoded = lbp_codes(&remapped).unwrap();
                assert_eq!(
                    codes.codes(),
                    recoded.codes(),
                    "codes changed under v -> {scale}v + {offset}"
                );
            }
        }
    });
}

// ---------- criterion 4: weight closed forms ----------

#[test]
fn criterion_4_weight_closed_forms() {
    criterion(4, "noise and translation weight closed forms", || {
        // 50 x 20 grid of (band sigma, noise sigma) pairs, including the
        // zero and fully clamped regions.
        for i in 0..50 {
            for j in 0..20 {
                let sigma_band = i as f64 * 0.002;
                let sigma_noise = j as f64 * 0.003;
                let want = if sigma_band <= 0.0 || sigma_band <= sigma_noise {
                    0.0
                } else {
                    (sigma_band - sigma_noise) / sigma_band
                };
                let got = noise_weight(sigma_band, sigma_noise);
                assert!(
                    (got - want).abs() <= 1e-12,
                    "noise weight ({sigma_band}, {sigma_noise}): {got} vs {want}"
                );
            }
        }

        // Brute-force window enumeration: every cell of the 2^l-wide
        // window contributes alpha^(Chebyshev distance to the anchor).
        for level in 1..=7usize {
            let side = 1usize << level;
            let anchor = (side - 1) / 2;
            for alpha in [0.5f64, 0.9, 0.95, 0.99] {
                let mut sum = 0.0;
                for y in 0..side {
                    for x in 0..side {
                        let d = x.abs_diff(anchor).max(y.abs_diff(anchor));
                        sum += alpha.powi(d as i32);
                    }
                }
                let want = sum / (side * side) as f64;
                let got = translation_weight(level, alpha);
                assert!(
                    (got - want).abs() <= 1e-12,
                    "translation weight level {level} alpha {alpha}: {got} vs {want}"
                );
            }
        }

        assert!((translation_weight(1, 0.95) - 0.9625).abs() <= 1e-12);
        assert!((translation_weight(2, 0.95) - 0.93234375).abs() <= 1e-12);
    });
}

// ---------- criterion 5: texture weight extremes ----------

#[test]
fn criterion_5_texture_weight_extremes() {
    criterion(5, "texture weights at the flat and textured extremes", || {
        let flat: [Plane; 4] = std::array::from_fn(|_| {
            Plane::new(4, 4, vec![2.0; 16]).unwrap()
        });
        let weights = texture_weights(&flat).unwrap();
        assert!(weights.coefficient[0].data().iter().all(|&v| v == 8.0));
        for band in 1..4 {
            assert!(weights.coefficient[band].data().iter().all(|&v| v == 0.0));
        }
        for band in 0..4 {
            assert!(weights.histogram[band].data().iter().all(|&v| v == 0.0));
        }

        let textured: [Plane; 4] = std::array::from_fn(|_| Plane::zeros(4, 4));
        let weights = texture_weights(&textured).unwrap();
        for band in 0..4 {
            assert!(weights.coefficient[band].data().iter().all(|&v| v == 1.0));
            assert!(weights.histogram[band].data().iter().all(|&v| v == 1.0));
        }
    });
}

// ---------- criterion 6: vote accumulation ----------

struct VoteInstance {
    levels: usize,
    width: usize,
    height: usize,
    noise: Vec<f64>,
    translation: Vec<f64>,
    texture: Vec<TextureWeights>,
    votes: Vec<BandVotes>,
}

fn random_vote_instance(rng: &mut ChaCha8Rng) -> VoteInstance {
    let levels = 1 + (rng.next_u64() % 3) as usize;
    let width = 2 + (rng.next_u64() % 4) as usize;
    let height = 2 + (rng.next_u64() % 4) as usize;
    let noise: Vec<f64> = (0..levels * 4).map(|_| unit(rng)).collect();
    let translation = translation_weights(levels, 0.05 + 0.9 * unit(rng));
    let texture: Vec<TextureWeights> = (0..levels)
        .map(|_| {
            let flatness: [Plane; 4] = std::array::from_fn(|_| {
                Plane::from_fn(width, height, |_, _| 2.0 * unit(rng))
            });
            texture_weights(&flatness).unwrap()
        })
        .collect();
    let votes: Vec<BandVotes> = (0..levels * 4)
        .map(|_| BandVotes {
            coefficient: BinaryMask::from_fn(width, height, |_, _| rng.next_u64().is_multiple_of(2)),
            histogram: BinaryMask::from_fn(width, height, |_, _| rng.next_u64().is_multiple_of(2)),
        })
        .collect();
    VoteInstance { levels, width, height, noise, translation, texture, votes }
}

impl VoteInstance {
    fn weight_set(&self) -> WeightSet {
        WeightSet::new(
            self.levels,
            self.noise.clone(),
            self.translation.clone(),
            self.texture.clone(),
        )
        .unwrap()
    }

    /// Scalar double loop straight from the fused-vote definition.
    fn oracle(&self) -> (Vec<f64>, Vec<f64>) {
        let pixels = self.width * self.height;
        let mut tally = vec![0.0; pixels];
        let mut ceiling = vec![0.0; pixels];
        for p in 0..pixels {
            for slot in 0..self.levels * 4 {
                let scale = self.noise[slot] * self.translation[slot / 4];
                if scale == 0.0 {
                    continue;
                }
                let level = slot / 4;
                let band = slot % 4;
                let wc = scale * self.texture[level].coefficient[band].data()[p];
                let wh = scale * self.texture[level].histogram[band].data()[p];
                if self.votes[slot].coefficient.data()[p] {
                    tally[p] += wc;
                }
                if self.votes[slot].histogram.data()[p] {
                    tally[p] += wh;
                }
                ceiling[p] += wc + wh;
            }
        }
        (tally, ceiling)
    }
}

#[test]
fn criterion_6_vote_accumulation_oracle_and_properties() {
    criterion(6, "vote fusion vs scalar oracle, monotone and scale-free", || {
        let mut rng = ChaCha8Rng::seed_from_u64(606);
        for round in 0..1000 {
            let mut instance = random_vote_instance(&mut rng);
            let map = accumulate(&instance.votes, &instance.weight_set()).unwrap();
            let (tally, ceiling) = instance.oracle();
            for p in 0..tally.len() {
                assert!(
                    (map.votes()[p] - tally[p]).abs() <= 1e-12,
                    "round {round}: tally at {p}"
                );
                assert!(
                    (map.max_votes()[p] - ceiling[p]).abs() <= 1e-12,
                    "round {round}: ceiling at {p}"
                );
            }

            if round % 10 != 0 {
                continue;
            }

            // Turning one background vote into a foreground vote never
            // lowers any tally and never moves the ceiling.
            let slot = (rng.next_u64() as usize) % (instance.levels * 4);
            let px = (rng.next_u64() as usize) % instance.width;
            let py = (rng.next_u64() as usize) % instance.height;
            instance.votes[slot].coefficient.set(px, py, true);
            let grown = accumulate(&instance.votes, &instance.weight_set()).unwrap();
            for p in 0..tally.len() {
                assert!(grown.votes()[p] >= map.votes()[p] - 1e-15);
                assert!((grown.max_votes()[p] - map.max_votes()[p]).abs() <= 1e-15);
            }

            // Scaling every band weight by a common factor scales tally
            // and ceiling together, so the thresholded mask is unchanged.
            let scaled = WeightSet::new(
                instance.levels,
                instance.noise.iter().map(|w| w * 0.25).collect(),
                instance.translation.clone(),
                instance.texture.clone(),
            )
            .unwrap();
            let scaled_map = accumulate(&instance.votes, &scaled).unwrap();
            for fraction in [0.3, 0.5, 0.9] {
                assert_eq!(
                    threshold(&grown, fraction),
                    threshold(&scaled_map, fraction),
                    "round {round}: mask changed under common scaling"
                );
            }
        }
    });
}

// ---------- criterion 7: end-to-end camouflage benchmark ----------

fn benchmark_scene() -> Scenario {
    Scenario {
        width: 192,
        height: 192,
        frames: 200,
        seed: 42,
        noise_sigma: 0.01,
        level: 0.5,
        background: BackgroundSpec::Grating(GratingSpec {
            amplitude: 0.02,
            period: 8.0,
            orientation: Orientation::Vertical,
        }),
        object: Some(ObjectSpec {
            shape: ObjectShape::Rectangle,
            width: 48,
            height: 48,
            x: 24.0,
            y: 72.0,
            dx: 0.5,
            dy: 0.0,
            enter_frame: 60,
            texture: ObjectTexture::Grating(GratingSpec {
                amplitude: 0.02,
                period: 8.0,
                orientation: Orientation::Horizontal,
            }),
        }),
    }
}

#[test]
fn criterion_7_camouflage_benchmark_beats_baseline() {
    criterion(7, "camouflaged-object benchmark vs intensity baseline", || {
        let start = Instant::now();
        let scene = benchmark_scene();
        scene.validate().unwrap();
        let config = DetectorConfig { levels: 4, ..DetectorConfig::default() };
        let burnin = config.burnin_frames;
        let entry = scene.object.as_ref().unwrap().enter_frame;

        let mut detector = Detector::new(config.clone(), BackgroundMode::Adaptive).unwrap();
        let mut baseline = BaselineDetector::new(config).unwrap();

        let mut tgwv_scores: Vec<FrameScore> = Vec::new();
        let mut base_scores: Vec<FrameScore> = Vec::new();
        let mut quiet_false_positives = 0u64;
        let mut quiet_pixels = 0u64;

        for index in 0..scene.frames {
            let (frame, truth) = scene.frame(index).unwrap();
            let result = detector.process_frame(&frame).unwrap();
            let base_mask = baseline.process_frame(&frame).unwrap();

            if index >= burnin && index < entry {
                quiet_false_positives += result.mask.foreground_count() as u64;
                quiet_pixels += result.mask.pixel_count() as u64;
            }
            if index >= entry {
                tgwv_scores.push(score(&result.mask, &truth).unwrap());
                base_scores.push(score(&base_mask, &truth).unwrap());
            }
        }

        let tgwv = aggregate(&tgwv_scores).unwrap();
        let base = aggregate(&base_scores).unwrap();
        let fp_rate = quiet_false_positives as f64 / quiet_pixels as f64;
        let elapsed = start.elapsed().as_secs_f64();
        println!(
            "criterion 7 detail: F {:.3} vs baseline F {:.3}, quiet fp rate {:.4}, {elapsed:.1}s",
            tgwv.f_measure, base.f_measure, fp_rate
        );

        assert!(
            tgwv.f_measure >= base.f_measure + 0.15,
            "F {:.3} does not beat baseline F {:.3} by 0.15",
            tgwv.f_measure,
            base.f_measure
        );
        assert!(fp_rate < 0.02, "quiet-frame false-positive rate {fp_rate}");
        assert!(elapsed < 120.0, "benchmark took {elapsed:.1}s");
    });
}

// ---------- criterion 8: static-scene sanity ----------

#[test]
fn criterion_8_static_scene_is_silent_for_both_providers() {
    criterion(8, "identical frames: silent masks, providers agree", || {
        let frame = GrayFrame::from_fn(64, 64, |x, y| {
            0.5 + 0.2 * ((x as f64 / 8.0).sin() + (y as f64 / 16.0).cos()) / 2.0
        })
        .unwrap();
        let config = DetectorConfig { levels: 4, ..DetectorConfig::default() };
        let burnin = config.burnin_frames;
        let mut adaptive = Detector::new(config.clone(), BackgroundMode::Adaptive).unwrap();
        let mut frozen = Detector::new(config, BackgroundMode::StaticMedian).unwrap();
        for index in 0..100 {
            let a = adaptive.process_frame(&frame).unwrap();
            let s = frozen.process_frame(&frame).unwrap();
            assert_eq!(a.mask, s.mask, "providers disagree on frame {index}");
            if index >= burnin {
                assert_eq!(
                    a.mask.foreground_count(),
                    0,
                    "foreground on identical frame {index}"
                );
            }
        }
    });
}

// ---------- criterion 10: evaluation fixtures ----------

#[test]
fn criterion_10_eval_fixtures_and_report_format() {
    criterion(10, "hand-computed metric fixtures, report layout", || {
        // Perfect nonempty match.
        let truth = BinaryMask::from_fn(100, 100, |x, y| x < 10 && y < 10);
        let perfect = score(&truth, &truth).unwrap();
        assert_eq!(perfect.recall, 1.0);
        assert_eq!(perfect.precision, 1.0);
        assert_eq!(perfect.f_measure, 1.0);
        assert!(perfect.psnr.is_infinite() && perfect.psnr > 0.0);

        // Empty mask against 100 foreground pixels out of 10000:
        // recall 0, precision 1 by convention, PSNR 10*log10(10000/100).
        let empty = BinaryMask::all_background(100, 100);
        let missed = score(&empty, &truth).unwrap();
        assert_eq!(missed.recall, 0.0);
        assert_eq!(missed.precision, 1.0);
        assert_eq!(missed.f_measure, 0.0);
        assert_eq!(missed.psnr, 20.0);

        // Complement mask: every pixel wrong, PSNR 10*log10(n/n) = 0.
        let complement = BinaryMask::from_fn(100, 100, |x, y| !truth.get(x, y));
        let inverted = score(&complement, &truth).unwrap();
        assert_eq!(inverted.recall, 0.0);
        assert_eq!(inverted.precision, 0.0);
        assert_eq!(inverted.f_measure, 0.0);
        assert_eq!(inverted.psnr, 0.0);

        // Micro-averaged pooling: counts (1,0,1) + (3,1,0) give 4/5 both.
        let a = FrameScore {
            true_positives: 1,
            false_positives: 0,
            false_negatives: 1,
            true_negatives: 2,
            recall: 0.5,
            precision: 1.0,
            f_measure: 2.0 / 3.0,
            psnr: 10.0 * (4.0f64 / 1.0).log10(),
        };
        let b = FrameScore {
            true_positives: 3,
            false_positives: 1,
            false_negatives: 0,
            true_negatives: 0,
            recall: 1.0,
            precision: 0.75,
            f_measure: 6.0 / 7.0,
            psnr: 10.0 * (4.0f64 / 1.0).log10(),
        };
        let pooled = aggregate(&[a, b]).unwrap();
        assert_eq!(pooled.recall, 0.8);
        assert_eq!(pooled.precision, 0.8);

        // Report layout against the frozen row (values quoted, not
        // computed).
        let report = format_report(&[ReportRow {
            label: "Proposed + MOG2".into(),
            recall: 0.984,
            precision: 0.876,
            f_measure: 0.926,
            psnr: 42.904,
        }]);
        let expected = "Method           Recall  Precision  F-measure      PSNR\n\
                        Proposed + MOG2   0.984      0.876      0.926    42.904\n";
        assert_eq!(report, expected);
    });
}
