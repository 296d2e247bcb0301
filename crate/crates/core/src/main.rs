use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use lester::contours::SimplifyParams;
use lester::maskio::Rgba;
use lester::pipeline::{run_pipeline, validate_inputs, EffectSettings, PipelineConfig};
use lester::tracker::DEFAULT_IOU_THRESHOLD;

#[derive(Parser)]
#[command(name = "lester", version, about = "Rotoscope-style animation frames from label masks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Render every frame to out_NNNN.png.
    Run(Opts),
    /// Check inputs without rendering; prints diagnostics.
    Validate(Opts),
}

#[derive(Args, Debug, Default)]
struct Opts {
    /// JSON config file; command-line flags take precedence over it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Directory of frame_NNNN.png label masks.
    #[arg(long)]
    masks: Option<PathBuf>,
    #[arg(long)]
    manifest: Option<PathBuf>,
    #[arg(long)]
    palette: Option<PathBuf>,
    #[arg(long)]
    landmarks: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Douglas-Peucker tolerance in pixels.
    #[arg(long)]
    tolerance: Option<f64>,
    /// Contours with area at or below this are dropped (px²).
    #[arg(long)]
    min_area: Option<f64>,
    #[arg(long)]
    iou_threshold: Option<f64>,
    #[arg(long)]
    shadow: bool,
    #[arg(long, allow_hyphen_values = true)]
    shadow_factor: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    shadow_dx: Option<i32>,
    #[arg(long)]
    features: bool,
    #[arg(long)]
    feature_thickness: Option<u32>,
    /// Feature stroke color as #RRGGBB or #RRGGBBAA.
    #[arg(long)]
    feature_color: Option<String>,
    /// Pixelation block size (4 when given without a value).
    #[arg(long, num_args = 0..=1, default_missing_value = "4")]
    pixelate: Option<u32>,
    /// Also write guide_NNNN.png id guides.
    #[arg(long)]
    guide: bool,
    /// Also write report.json.
    #[arg(long)]
    report: bool,
    /// Also write contours_NNNN.json.
    #[arg(long)]
    dump_contours: bool,
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Deserialize, Default, Debug)]
#[serde(default, deny_unknown_fields)]
struct ConfigFile {
    masks: Option<PathBuf>,
    manifest: Option<PathBuf>,
    palette: Option<PathBuf>,
    landmarks: Option<PathBuf>,
    out: Option<PathBuf>,
    tolerance: Option<f64>,
    min_area: Option<f64>,
    iou_threshold: Option<f64>,
    shadow: Option<bool>,
    shadow_factor: Option<f64>,
    shadow_dx: Option<i32>,
    features: Option<bool>,
    feature_thickness: Option<u32>,
    feature_color: Option<String>,
    pixelate: Option<u32>,
    guide: Option<bool>,
    report: Option<bool>,
    dump_contours: Option<bool>,
    threads: Option<usize>,
}

fn build_config(opts: Opts, need_out: bool) -> Result<PipelineConfig, String> {
    let file = match &opts.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            serde_json::from_str::<ConfigFile>(&text)
                .map_err(|e| format!("{}: {e}", path.display()))?
        }
        None => ConfigFile::default(),
    };
    let required = |flag: Option<PathBuf>, cfg: Option<PathBuf>, name: &str| {
        flag.or(cfg).ok_or_else(|| format!("missing --{name}"))
    };
    let masks = required(opts.masks, file.masks, "masks")?;
    let manifest = required(opts.manifest, file.manifest, "manifest")?;
    let palette = required(opts.palette, file.palette, "palette")?;
    let out = match opts.out.or(file.out) {
        Some(o) => o,
        None if need_out => return Err("missing --out".to_string()),
        None => PathBuf::from("."),
    };

    let defaults = EffectSettings::default();
    let feature_color = match opts.feature_color.or(file.feature_color) {
        Some(hex) => Rgba::from_hex(&hex).map_err(|e| e.to_string())?,
        None => defaults.feature_color,
    };
    let effects = EffectSettings {
        shadow: opts.shadow || file.shadow.unwrap_or(false),
        shadow_factor: opts.shadow_factor.or(file.shadow_factor),
        shadow_dx: opts.shadow_dx.or(file.shadow_dx),
        features: opts.features || file.features.unwrap_or(false),
        feature_color,
        feature_thickness: opts
            .feature_thickness
            .or(file.feature_thickness)
            .unwrap_or(defaults.feature_thickness),
        pixelate: opts.pixelate.or(file.pixelate).unwrap_or(defaults.pixelate),
    };
    let simplify_defaults = SimplifyParams::default();

    let mut cfg = PipelineConfig::new(masks, manifest, palette, out);
    cfg.landmarks = opts.landmarks.or(file.landmarks);
    cfg.simplify = SimplifyParams {
        min_area: opts
            .min_area
            .or(file.min_area)
            .unwrap_or(simplify_defaults.min_area),
        tolerance: opts
            .tolerance
            .or(file.tolerance)
            .unwrap_or(simplify_defaults.tolerance),
    };
    cfg.effects = effects;
    cfg.iou_threshold = opts
        .iou_threshold
        .or(file.iou_threshold)
        .unwrap_or(DEFAULT_IOU_THRESHOLD);
    cfg.emit_guide = opts.guide || file.guide.unwrap_or(false);
    cfg.emit_report = opts.report || file.report.unwrap_or(false);
    cfg.dump_contours = opts.dump_contours || file.dump_contours.unwrap_or(false);
    cfg.threads = opts.threads.or(file.threads).unwrap_or(1);
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Validate(opts) => {
            let cfg = match build_config(opts, false) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("lester: {e}");
                    return ExitCode::from(1);
                }
            };
            let diags = validate_inputs(&cfg);
            if diags.is_empty() {
                println!("ok");
                ExitCode::SUCCESS
            } else {
                for d in &diags {
                    println!("{d}");
                }
                ExitCode::from(1)
            }
        }
        Command::Run(opts) => {
            let cfg = match build_config(opts, true) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("lester: {e}");
                    return ExitCode::from(1);
                }
            };
            match run_pipeline(&cfg) {
                Ok(summary) => {
                    println!(
                        "wrote {} frame(s) to {}",
                        summary.frames,
                        cfg.out_dir.display()
                    );
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("lester: {e}");
                    ExitCode::from(e.exit_code() as u8)
                }
            }
        }
    }
}
