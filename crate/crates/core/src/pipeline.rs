//! End-to-end frame pipeline.
//!
//! Tracking runs first as one sequential pass over the whole clip. Every
//! frame is then split, simplified, rendered, finished and encoded on a
//! worker pool; finished frames are written strictly in index order, so a
//! failure leaves only complete frames that precede it.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::contours::{simplify_all, split_submasks, LabelContours, SimplifyParams};
use crate::effects::EffectConfig;
use crate::error::Error;
use crate::maskio::{
    self, encode_rgba_png, output_file_name, FrameSequence, LabelMask, LabelTable, LandmarkSet,
    Palette, Rgba, DEFAULT_FPS,
};
use crate::metrics::{consistency_report, ConsistencyReport};
use crate::render::{render_frame, render_id_guide, RenderPlan};
use crate::tracker::{relabel_sequence, DEFAULT_IOU_THRESHOLD};

/// Effect switches as configured. Shadow parameters left unset fall back to
/// the palette's.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EffectSettings {
    pub shadow: bool,
    pub shadow_factor: Option<f64>,
    pub shadow_dx: Option<i32>,
    pub features: bool,
    pub feature_color: Rgba,
    pub feature_thickness: u32,
    pub pixelate: u32,
}

impl Default for EffectSettings {
    fn default() -> Self {
        let d = EffectConfig::default();
        EffectSettings {
            shadow: d.shadow_enabled,
            shadow_factor: None,
            shadow_dx: None,
            features: d.features_enabled,
            feature_color: d.feature_color,
            feature_thickness: d.feature_thickness,
            pixelate: d.pixelate_factor,
        }
    }
}

impl EffectSettings {
    pub fn resolve(&self, palette: &Palette) -> EffectConfig {
        EffectConfig {
            shadow_enabled: self.shadow,
            shadow_factor: self.shadow_factor.unwrap_or(palette.shadow_factor),
            shadow_dx: self.shadow_dx.unwrap_or(palette.shadow_dx),
            features_enabled: self.features,
            feature_color: self.feature_color,
            feature_thickness: self.feature_thickness,
            pixelate_factor: self.pixelate,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub masks_dir: PathBuf,
    pub manifest: PathBuf,
    pub palette: PathBuf,
    pub landmarks: Option<PathBuf>,
    pub out_dir: PathBuf,
    pub simplify: SimplifyParams,
    pub effects: EffectSettings,
    pub iou_threshold: f64,
    pub emit_guide: bool,
    pub emit_report: bool,
    pub dump_contours: bool,
    pub threads: usize,
}

impl PipelineConfig {
    /// Config with default parameters for the given inputs.
    pub fn new(
        masks_dir: impl Into<PathBuf>,
        manifest: impl Into<PathBuf>,
        palette: impl Into<PathBuf>,
        out_dir: impl Into<PathBuf>,
    ) -> Self {
        PipelineConfig {
            masks_dir: masks_dir.into(),
            manifest: manifest.into(),
            palette: palette.into(),
            landmarks: None,
            out_dir: out_dir.into(),
            simplify: SimplifyParams::default(),
            effects: EffectSettings::default(),
            iou_threshold: DEFAULT_IOU_THRESHOLD,
            emit_guide: false,
            emit_report: false,
            dump_contours: false,
            threads: 1,
        }
    }
}

/// A non-fatal problem found by [`validate_inputs`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub frame: Option<usize>,
    pub message: String,
}

impl Diagnostic {
    fn new(message: impl Into<String>) -> Self {
        Diagnostic {
            frame: None,
            message: message.into(),
        }
    }

    fn frame(frame: usize, message: impl Into<String>) -> Self {
        Diagnostic {
            frame: Some(frame),
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error("input validation failed:\n{}", .0.iter().map(|d| format!("  {d}")).collect::<Vec<_>>().join("\n"))]
    Invalid(Vec<Diagnostic>),

    #[error("frame {frame}: {stage}: {source}")]
    Frame {
        frame: usize,
        stage: &'static str,
        #[source]
        source: Error,
    },

    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Error,
    },
}

impl PipelineError {
    /// Process exit code: 1 for invalid inputs, 2 for runtime failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Invalid(_) => 1,
            _ => 2,
        }
    }
}

struct Inputs {
    table: LabelTable,
    palette: Palette,
    landmarks: BTreeMap<usize, LandmarkSet>,
    seq: FrameSequence,
}

fn read(path: &Path) -> Result<Vec<u8>, Error> {
    fs::read(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

fn check_params(cfg: &PipelineConfig, diags: &mut Vec<Diagnostic>) {
    if let Err(e) = cfg.simplify.validate() {
        diags.push(Diagnostic::new(e.to_string()));
    }
    if !(cfg.iou_threshold > 0.0 && cfg.iou_threshold <= 1.0) {
        diags.push(Diagnostic::new(format!(
            "IoU threshold must be in (0, 1], got {}",
            cfg.iou_threshold
        )));
    }
    if cfg.threads == 0 {
        diags.push(Diagnostic::new("threads must be >= 1"));
    }
    // Unset shadow parameters come from the palette, which checks its own.
    if let Err(e) = cfg.effects.resolve(&Palette::default()).validate() {
        diags.push(Diagnostic::new(e.to_string()));
    }
}

fn load_frames(
    dir: &Path,
    table: Option<&LabelTable>,
    diags: &mut Vec<Diagnostic>,
) -> Option<Vec<LabelMask>> {
    let paths = match maskio::list_mask_frames(dir) {
        Ok(p) => p,
        Err(e) => {
            diags.push(Diagnostic::new(e.to_string()));
            return None;
        }
    };
    let mut frames: Vec<LabelMask> = Vec::with_capacity(paths.len());
    let mut ok = true;
    for (i, path) in paths.iter().enumerate() {
        let mask = match maskio::read_mask_png(path) {
            Ok(m) => m,
            Err(e) => {
                diags.push(Diagnostic::frame(i, format!("frame {i}: {e}")));
                ok = false;
                continue;
            }
        };
        if let Some(first) = frames.first() {
            if first.dimensions() != mask.dimensions() {
                diags.push(Diagnostic::frame(
                    i,
                    format!(
                        "frame {i}: dimensions {:?} differ from frame 0 {:?}",
                        mask.dimensions(),
                        first.dimensions()
                    ),
                ));
                ok = false;
                continue;
            }
        }
        if let Some(table) = table {
            for l in mask.present_labels() {
                if !table.contains(l) {
                    diags.push(Diagnostic::frame(i, format!("frame {i}: unknown label {l}")));
                    ok = false;
                }
            }
        }
        frames.push(mask);
    }
    ok.then_some(frames)
}

fn prepare(cfg: &PipelineConfig) -> (Vec<Diagnostic>, Option<Inputs>) {
    let mut diags = Vec::new();
    check_params(cfg, &mut diags);

    let table = match read(&cfg.manifest).and_then(|b| maskio::parse_manifest(&b)) {
        Ok(t) => Some(t),
        Err(e) => {
            diags.push(Diagnostic::new(format!("manifest: {e}")));
            None
        }
    };
    let palette = match read(&cfg.palette).and_then(|b| maskio::parse_palette(&b)) {
        Ok(p) => Some(p),
        Err(e) => {
            diags.push(Diagnostic::new(format!("palette: {e}")));
            None
        }
    };
    if let (Some(t), Some(p)) = (&table, &palette) {
        for id in p.missing_ids(t) {
            diags.push(Diagnostic::new(format!("palette: no color for label {id}")));
        }
    }
    let mut landmarks = BTreeMap::new();
    if let Some(path) = &cfg.landmarks {
        match read(path).and_then(|b| maskio::parse_landmarks_lenient(&b)) {
            Ok(parsed) => {
                landmarks = parsed.sets;
                diags.extend(
                    parsed
                        .issues
                        .into_iter()
                        .map(|(f, m)| Diagnostic::frame(f, format!("landmarks: {m}"))),
                );
            }
            Err(e) => diags.push(Diagnostic::new(format!("landmarks: {e}"))),
        }
    }

    let frames = load_frames(&cfg.masks_dir, table.as_ref(), &mut diags);
    if let Some(first) = frames.as_ref().and_then(|f| f.first()) {
        let min_dim = first.width().min(first.height());
        if cfg.effects.pixelate > min_dim {
            diags.push(Diagnostic::new(format!(
                "pixelate factor {} exceeds the smaller frame dimension {min_dim}",
                cfg.effects.pixelate
            )));
        }
    }

    if !diags.is_empty() {
        return (diags, None);
    }
    let (Some(table), Some(palette), Some(frames)) = (table, palette, frames) else {
        return (diags, None);
    };
    match FrameSequence::new(frames, DEFAULT_FPS) {
        Ok(seq) => (
            diags,
            Some(Inputs {
                table,
                palette,
                landmarks,
                seq,
            }),
        ),
        Err(e) => (vec![Diagnostic::new(e.to_string())], None),
    }
}

/// Dry-run check of every input and parameter. An empty list means
/// [`run_pipeline`] has what it needs.
pub fn validate_inputs(cfg: &PipelineConfig) -> Vec<Diagnostic> {
    prepare(cfg).0
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub frames: usize,
    pub report: Option<ConsistencyReport>,
}

struct FrameOutput {
    png: Vec<u8>,
    guide: Option<Vec<u8>>,
    contours_json: Option<Vec<u8>>,
    contours: Vec<LabelContours>,
}

#[derive(Serialize)]
struct DumpEntry<'a> {
    label_id: u8,
    role: crate::contours::Role,
    vertices: &'a [crate::contours::Point],
}

fn contours_json(layers: &[LabelContours]) -> Vec<u8> {
    let entries: Vec<DumpEntry<'_>> = layers
        .iter()
        .flat_map(|l| {
            l.contours.iter().map(move |c| DumpEntry {
                label_id: l.label_id,
                role: c.role,
                vertices: &c.vertices,
            })
        })
        .collect();
    serde_json::to_vec(&entries).expect("contour dump serializes")
}

/// Contours of one relabeled frame: split, dilate, trace, filter, simplify.
pub fn frame_contours(
    mask: &LabelMask,
    table: &LabelTable,
    params: &SimplifyParams,
) -> Vec<LabelContours> {
    simplify_all(&split_submasks(mask, table), params)
}

fn process_frame(
    index: usize,
    mask: &LabelMask,
    inputs: &Inputs,
    cfg: &PipelineConfig,
    effects: &EffectConfig,
) -> Result<FrameOutput, PipelineError> {
    let at = |stage: &'static str| move |source: Error| PipelineError::Frame {
        frame: index,
        stage,
        source,
    };
    let (w, h) = mask.dimensions();
    let layers = frame_contours(mask, &inputs.table, &cfg.simplify);
    let plan = RenderPlan {
        layers: &layers,
        palette: &inputs.palette,
    };
    let img = render_frame(&plan, w, h).map_err(at("render"))?;
    let img = effects
        .apply(img, inputs.landmarks.get(&index))
        .map_err(at("effects"))?;
    let png = encode_rgba_png(&img).map_err(at("encode"))?;
    let guide = if cfg.emit_guide {
        Some(encode_rgba_png(&render_id_guide(&plan, w, h)).map_err(at("guide"))?)
    } else {
        None
    };
    let contours_json = cfg.dump_contours.then(|| contours_json(&layers));
    Ok(FrameOutput {
        png,
        guide,
        contours_json,
        contours: if cfg.emit_report { layers } else { Vec::new() },
    })
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), Error> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, bytes).map_err(|e| Error::Io {
        path: tmp.clone(),
        source: e,
    })?;
    fs::rename(&tmp, path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

/// Runs the whole pipeline, writing `out_NNNN.png` (and optionally
/// `guide_NNNN.png`, `contours_NNNN.json`, `report.json`) into the output
/// directory. Output bytes do not depend on the thread count.
pub fn run_pipeline(cfg: &PipelineConfig) -> Result<RunSummary, PipelineError> {
    let (diags, inputs) = prepare(cfg);
    if !diags.is_empty() {
        return Err(PipelineError::Invalid(diags));
    }
    let mut inputs = inputs.expect("inputs present when there are no diagnostics");

    inputs.seq = relabel_sequence(&inputs.seq, cfg.iou_threshold).map_err(|source| {
        PipelineError::Stage {
            stage: "track",
            source,
        }
    })?;
    let effects = cfg.effects.resolve(&inputs.palette);

    fs::create_dir_all(&cfg.out_dir).map_err(|e| PipelineError::Stage {
        stage: "output",
        source: Error::Io {
            path: cfg.out_dir.clone(),
            source: e,
        },
    })?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads.max(1))
        .build()
        .map_err(|e| PipelineError::Stage {
            stage: "threads",
            source: Error::InvalidParameter(e.to_string()),
        })?;

    let frames = inputs.seq.frames();
    let chunk = cfg.threads.max(1) * 4;
    let mut all_contours = Vec::new();
    for start in (0..frames.len()).step_by(chunk) {
        let end = (start + chunk).min(frames.len());
        let outputs: Vec<Result<FrameOutput, PipelineError>> = pool.install(|| {
            (start..end)
                .into_par_iter()
                .map(|i| process_frame(i, &frames[i], &inputs, cfg, &effects))
                .collect()
        });
        for (i, out) in (start..end).zip(outputs) {
            let out = out?;
            let write = |name: String, bytes: &[u8]| {
                write_atomic(&cfg.out_dir.join(name), bytes).map_err(|source| {
                    PipelineError::Frame {
                        frame: i,
                        stage: "write",
                        source,
                    }
                })
            };
            write(output_file_name(i), &out.png)?;
            if let Some(g) = &out.guide {
                write(format!("guide_{i:04}.png"), g)?;
            }
            if let Some(j) = &out.contours_json {
                write(format!("contours_{i:04}.json"), j)?;
            }
            if cfg.emit_report {
                all_contours.push(out.contours);
            }
        }
    }

    let report = cfg.emit_report.then(|| consistency_report(&inputs.seq, &all_contours));
    if let Some(r) = &report {
        let mut bytes = serde_json::to_vec_pretty(r).expect("report serializes");
        bytes.push(b'\n');
        write_atomic(&cfg.out_dir.join("report.json"), &bytes).map_err(|source| {
            PipelineError::Stage {
                stage: "report",
                source,
            }
        })?;
    }

    Ok(RunSummary {
        frames: frames.len(),
        report,
    })
}
