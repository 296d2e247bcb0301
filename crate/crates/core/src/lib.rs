//! Retro rotoscope frames from per-frame segmentation label masks.
//!
//! The pipeline makes label ids temporally consistent ([`tracker`]),
//! reduces every label region to a few flat polygons ([`contours`]), paints
//! them with a palette ([`render`]), applies optional shadow, facial
//! features and pixelation ([`effects`]), and writes transparent RGBA PNG
//! frames ([`maskio`]). [`pipeline`] ties the stages together and
//! [`metrics`] reports objective consistency measures.

pub mod contours;
pub mod effects;
pub mod error;
pub mod maskio;
pub mod metrics;
pub mod pipeline;
pub mod render;
pub mod tracker;

pub use contours::{
    can_simplify, contour_area, dilate, simplify_all, simplify_dp, split_submasks,
    trace_contours, Bitmap, Contour, LabelContours, Point, Role, SimplifyParams, SubMask,
};
pub use effects::{apply_shadow, draw_facial_features, pixelate, EffectConfig};
pub use error::{Error, Result};
pub use maskio::{
    load_landmarks, load_mask_sequence, parse_manifest, parse_palette, write_frame_png,
    FrameSequence, LabelMask, LabelTable, LandmarkSet, Palette, Rgba,
};
pub use metrics::{label_flip_count, mean_vertex_count, ConsistencyReport};
pub use pipeline::{run_pipeline, validate_inputs, Diagnostic, PipelineConfig, PipelineError};
pub use render::{fill_layer, render_frame, render_id_guide, RasterRgba, RenderPlan};
pub use tracker::{iou, match_labels, relabel_sequence, LabelMapping};
