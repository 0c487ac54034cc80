//! Command line for the camouflage-aware foreground detector.
//!
//! Subcommands: `detect` runs the detector over a frame directory,
//! `synth` renders a seeded test sequence with ground truth, `eval`
//! scores masks against truth, `calibrate` prints the weight tables for
//! a configuration, and `pyramid` dumps a wavelet decomposition for
//! inspection.

mod io;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use tgwv_core::eval::{aggregate, format_report, score, FrameScore, ReportRow};
use tgwv_core::swt::{band_sigma, decompose, Band};
use tgwv_core::synth::Scenario;
use tgwv_core::weights::{estimate_noise_sigma, noise_weight, translation_weights};
use tgwv_core::{BackgroundMode, Detector, DetectorConfig, GrayFrame, NoiseSigma};

#[derive(Parser)]
#[command(name = "tgwv", version, about = "Foreground detection for camouflaged scenes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Detect foreground in a directory of frames.
    Detect(DetectArgs),
    /// Render a synthetic camouflage sequence with ground truth.
    Synth(SynthArgs),
    /// Score detection masks against ground-truth masks.
    Eval(EvalArgs),
    /// Print the weight tables for a configuration.
    Calibrate(CalibrateArgs),
    /// Dump one frame's wavelet bands as rescaled images.
    Pyramid(PyramidArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Provider {
    /// Adaptive per-pixel Gaussian mixture.
    Gmm,
    /// Median of the warm-up frames, frozen afterwards.
    Static,
}

#[derive(Args)]
struct DetectArgs {
    /// Configuration file of `key = value` lines; defaults when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Directory of input frames (.pgm/.png), processed in name order.
    #[arg(long)]
    frames: PathBuf,
    /// Output directory for masks and summary.txt (created if needed).
    #[arg(long)]
    out: PathBuf,
    /// Also write votes/<frame>.pgm with each pixel's share of the
    /// attainable vote.
    #[arg(long)]
    dump_votes: bool,
    /// Background provider.
    #[arg(long, value_enum, default_value_t = Provider::Gmm)]
    background: Provider,
    /// Write the background model here after the last frame (gmm only).
    #[arg(long)]
    save_background: Option<PathBuf>,
    /// Preload the background model from a checkpoint (gmm only).
    #[arg(long)]
    load_background: Option<PathBuf>,
}

#[derive(Args)]
struct SynthArgs {
    /// Scenario file of `key = value` lines.
    #[arg(long)]
    scenario: PathBuf,
    /// Output directory; frames/ and truth/ are created inside.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EvalArgs {
    /// Directory of detection masks.
    #[arg(long)]
    masks: PathBuf,
    /// Directory of ground-truth masks with matching file stems.
    #[arg(long)]
    truth: PathBuf,
    /// Also write per-frame scores as CSV, aggregate row last.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct CalibrateArgs {
    /// Configuration file of `key = value` lines; defaults when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Sample frame for the per-band noise table.
    #[arg(long)]
    frame: Option<PathBuf>,
}

#[derive(Args)]
struct PyramidArgs {
    /// Frame to decompose.
    #[arg(long)]
    frame: PathBuf,
    /// Decomposition depth.
    #[arg(long, default_value_t = 3)]
    levels: usize,
    /// Output directory (created if needed).
    #[arg(long)]
    out: PathBuf,
}

fn main() {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Detect(args) => detect(args),
        Command::Synth(args) => synth(args),
        Command::Eval(args) => eval(args),
        Command::Calibrate(args) => calibrate(args),
        Command::Pyramid(args) => pyramid(args),
    };
    if let Err(error) = outcome {
        eprintln!("error: {error:#}");
        std::process::exit(1);
    }
}

fn load_config(path: Option<&Path>) -> Result<DetectorConfig> {
    match path {
        None => Ok(DetectorConfig::default()),
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            DetectorConfig::from_kv_text(&text)
                .with_context(|| format!("in config {}", path.display()))
        }
    }
}

fn file_stem(path: &Path) -> String {
    path.file_stem()
        .map(|stem| stem.to_string_lossy().into_owned())
        .unwrap_or_else(|| String::from("frame"))
}

fn detect(args: DetectArgs) -> Result<()> {
    let config = load_config(args.config.as_deref())?;
    let mode = match args.background {
        Provider::Gmm => BackgroundMode::Adaptive,
        Provider::Static => BackgroundMode::StaticMedian,
    };
    if mode != BackgroundMode::Adaptive
        && (args.save_background.is_some() || args.load_background.is_some())
    {
        bail!("background checkpoints require --background gmm");
    }
    let frames = io::list_frames(&args.frames)?;
    fs::create_dir_all(&args.out)
        .with_context(|| format!("creating {}", args.out.display()))?;
    let votes_dir = args.out.join("votes");
    if args.dump_votes {
        fs::create_dir_all(&votes_dir)
            .with_context(|| format!("creating {}", votes_dir.display()))?;
    }

    let mut detector = Detector::new(config, mode)?;
    if let Some(path) = &args.load_background {
        detector.set_background_snapshot(&io::load_background(path)?)?;
    }

    let mut summary = String::from("frame  foreground  fraction  mean_vote_share\n");
    for path in &frames {
        let frame = io::load_frame(path)?;
        let result = detector
            .process_frame(&frame)
            .with_context(|| format!("processing {}", path.display()))?;
        if detector.frames_processed() == 1 {
            let requested = detector.config().levels;
            if let Some(used) = detector.levels_used() {
                if used < requested {
                    eprintln!(
                        "warning: {requested} decomposition levels requested but \
                         {}x{} frames support only {used}; using {used}",
                        frame.width(),
                        frame.height()
                    );
                }
            }
        }
        let stem = file_stem(path);
        io::save_mask(&args.out.join(format!("{stem}.pgm")), &result.mask)?;

        let shares: Vec<f64> = result
            .votes
            .votes()
            .iter()
            .zip(result.votes.max_votes())
            .map(|(&v, &m)| if m > 0.0 { v / m } else { 0.0 })
            .collect();
        let mean_share = shares.iter().sum::<f64>() / shares.len() as f64;
        if args.dump_votes {
            let plane = GrayFrame::new(result.mask.width(), result.mask.height(), shares)?;
            io::save_frame(&votes_dir.join(format!("{stem}.pgm")), &plane)?;
        }
        let foreground = result.mask.foreground_count();
        let fraction = foreground as f64 / result.mask.pixel_count() as f64;
        writeln!(summary, "{stem}  {foreground}  {fraction:.6}  {mean_share:.6}")
            .expect("writing to a string cannot fail");
    }
    fs::write(args.out.join("summary.txt"), summary)
        .with_context(|| format!("writing {}", args.out.join("summary.txt").display()))?;

    if let Some(path) = &args.save_background {
        match detector.background_snapshot() {
            Some(snapshot) => io::save_background(path, &snapshot)?,
            None => bail!("no background model to save"),
        }
    }
    println!("wrote {} masks to {}", frames.len(), args.out.display());
    Ok(())
}

fn synth(args: SynthArgs) -> Result<()> {
    let text = fs::read_to_string(&args.scenario)
        .with_context(|| format!("reading {}", args.scenario.display()))?;
    let scenario = Scenario::from_kv_text(&text)
        .with_context(|| format!("in scenario {}", args.scenario.display()))?;
    let frames_dir = args.out.join("frames");
    let truth_dir = args.out.join("truth");
    for dir in [&frames_dir, &truth_dir] {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    for index in 0..scenario.frames {
        let (frame, truth) = scenario.frame(index)?;
        let name = format!("frame_{:06}.pgm", index + 1);
        io::save_frame(&frames_dir.join(&name), &frame)?;
        io::save_mask(&truth_dir.join(&name), &truth)?;
    }
    println!(
        "wrote {} frames to {} and ground truth to {}",
        scenario.frames,
        frames_dir.display(),
        truth_dir.display()
    );
    Ok(())
}

fn eval(args: EvalArgs) -> Result<()> {
    let by_stem = |dir: &Path| -> Result<BTreeMap<String, PathBuf>> {
        Ok(io::list_frames(dir)?
            .into_iter()
            .map(|path| (file_stem(&path), path))
            .collect())
    };
    let masks = by_stem(&args.masks)?;
    let truths = by_stem(&args.truth)?;
    for stem in truths.keys() {
        if !masks.contains_key(stem) {
            bail!("no mask for truth frame `{stem}` in {}", args.masks.display());
        }
    }
    for stem in masks.keys() {
        if !truths.contains_key(stem) {
            bail!("no truth for mask `{stem}` in {}", args.truth.display());
        }
    }

    let mut rows: Vec<(String, FrameScore)> = Vec::new();
    for (stem, mask_path) in &masks {
        let mask = io::load_mask(mask_path)?;
        let truth = io::load_mask(&truths[stem])?;
        let frame_score = score(&mask, &truth)
            .with_context(|| format!("scoring `{stem}`"))?;
        rows.push((stem.clone(), frame_score));
    }
    let scores: Vec<FrameScore> = rows.iter().map(|(_, s)| *s).collect();
    let total = aggregate(&scores)?;

    let label = args
        .masks
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| String::from("masks"));
    print!(
        "{}",
        format_report(&[ReportRow {
            label,
            recall: total.recall,
            precision: total.precision,
            f_measure: total.f_measure,
            psnr: total.mean_psnr,
        }])
    );
    println!(
        "frames: {}  exact-mask frames: {}",
        total.frames, total.infinite_psnr_frames
    );

    if let Some(path) = &args.csv {
        let fmt = |v: f64| {
            if v.is_infinite() {
                String::from("inf")
            } else {
                format!("{v:.6}")
            }
        };
        let mut csv = String::from("frame,tp,fp,fn,tn,recall,precision,f,psnr\n");
        for (stem, s) in &rows {
            writeln!(
                csv,
                "{stem},{},{},{},{},{},{},{},{}",
                s.true_positives,
                s.false_positives,
                s.false_negatives,
                s.true_negatives,
                fmt(s.recall),
                fmt(s.precision),
                fmt(s.f_measure),
                fmt(s.psnr)
            )
            .expect("writing to a string cannot fail");
        }
        writeln!(
            csv,
            "aggregate,{},{},{},{},{},{},{},{}",
            total.true_positives,
            total.false_positives,
            total.false_negatives,
            total.true_negatives,
            fmt(total.recall),
            fmt(total.precision),
            fmt(total.f_measure),
            fmt(total.mean_psnr)
        )
        .expect("writing to a string cannot fail");
        fs::write(path, csv).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn calibrate(args: CalibrateArgs) -> Result<()> {
    let config = load_config(args.config.as_deref())?;
    println!(
        "translation weights (ar_coefficient = {}):",
        config.ar_coefficient
    );
    println!("{:<6} {:>8} {:>10}", "level", "window", "weight");
    let weights = translation_weights(config.levels, config.ar_coefficient);
    for (index, weight) in weights.iter().enumerate() {
        let side = 1usize << (index + 1);
        println!("{:<6} {:>8} {:>10.6}", index + 1, format!("{side}x{side}"), weight);
    }

    let Some(path) = &args.frame else {
        return Ok(());
    };
    let frame = io::load_frame(path)?;
    let fit = (frame.width().min(frame.height())).ilog2() as usize;
    let levels = config.levels.min(fit.max(1));
    if levels < config.levels {
        eprintln!(
            "warning: {} decomposition levels requested but {}x{} frames support \
             only {levels}; using {levels}",
            config.levels,
            frame.width(),
            frame.height()
        );
    }
    let pyramid = decompose(&frame, levels)?;
    let sigma_noise = match config.noise_sigma {
        NoiseSigma::Auto => estimate_noise_sigma(&pyramid),
        NoiseSigma::Fixed(sigma) => sigma,
    };
    println!();
    println!(
        "noise weights for {} (noise sigma {:.6}, {levels} level(s)):",
        path.display(),
        sigma_noise
    );
    println!("{:<6} {:<5} {:>12} {:>10}", "level", "band", "band_sigma", "weight");
    for level in 1..=levels {
        for band in Band::ALL {
            let sigma = band_sigma(pyramid.band(level, band));
            println!(
                "{:<6} {:<5} {:>12.6} {:>10.6}",
                level,
                band.label(),
                sigma,
                noise_weight(sigma, sigma_noise)
            );
        }
    }
    Ok(())
}

fn pyramid(args: PyramidArgs) -> Result<()> {
    let frame = io::load_frame(&args.frame)?;
    let pyramid = decompose(&frame, args.levels)?;
    fs::create_dir_all(&args.out)
        .with_context(|| format!("creating {}", args.out.display()))?;
    let stem = file_stem(&args.frame);
    for level in 1..=args.levels {
        for band in Band::ALL {
            let name = format!("{stem}_l{level}_{}.pgm", band.label().to_ascii_lowercase());
            io::save_plane_rescaled(&args.out.join(name), pyramid.band(level, band))?;
        }
    }
    println!(
        "wrote {} band images to {}",
        4 * args.levels,
        args.out.display()
    );
    Ok(())
}
