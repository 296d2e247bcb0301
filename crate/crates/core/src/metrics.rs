//! Objective consistency measures written to `report.json`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::contours::LabelContours;
use crate::maskio::FrameSequence;
use crate::tracker::Overlap;

/// IoU below which a label is considered to have left its previous region,
/// and above which another label is considered to have taken it over.
pub const FLIP_IOU: f64 = 0.5;

pub const REPORT_NOTE: &str = "Computable proxies only: label flips and region IoU stand in for \
temporal consistency, mean vertex count for shape simplicity. These are not opinion scores.";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrameIou {
    pub frame: usize,
    /// IoU of each label's region with its own region in the previous frame.
    pub labels: BTreeMap<u8, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConsistencyReport {
    pub note: &'static str,
    pub frames: usize,
    pub label_flip_count: usize,
    pub mean_region_iou: f64,
    pub mean_vertex_count: f64,
    pub per_frame: Vec<FrameIou>,
}

/// Counts identity swaps: a label whose region overlaps its own previous
/// region with IoU below 0.5 while overlapping another label's previous
/// region with IoU above 0.5.
pub fn label_flip_count(seq: &FrameSequence) -> usize {
    seq.frames()
        .windows(2)
        .map(|pair| {
            let ov = Overlap::new(&pair[0], &pair[1]).expect("sequence frames share dimensions");
            let prev_labels = pair[0].present_labels();
            pair[1]
                .present_labels()
                .into_iter()
                .filter(|&l| {
                    ov.iou(l, l) < FLIP_IOU
                        && prev_labels.iter().any(|&m| m != l && ov.iou(m, l) > FLIP_IOU)
                })
                .count()
        })
        .sum()
}

/// Per-frame IoU of each label present in frame `i >= 1` with its region in
/// frame `i - 1` (0 if it was absent there).
pub fn region_ious(seq: &FrameSequence) -> Vec<FrameIou> {
    seq.frames()
        .windows(2)
        .enumerate()
        .map(|(i, pair)| {
            let ov = Overlap::new(&pair[0], &pair[1]).expect("sequence frames share dimensions");
            FrameIou {
                frame: i + 1,
                labels: pair[1]
                    .present_labels()
                    .into_iter()
                    .map(|l| (l, ov.iou(l, l)))
                    .collect(),
            }
        })
        .collect()
}

/// Average vertex count over every contour of every frame; 0 when there are
/// none.
pub fn mean_vertex_count<'a, I>(frames: I) -> f64
where
    I: IntoIterator<Item = &'a [LabelContours]>,
{
    let (mut total, mut count) = (0usize, 0usize);
    for frame in frames {
        for layer in frame {
            for c in &layer.contours {
                total += c.vertices.len();
                count += 1;
            }
        }
    }
    if count == 0 {
        0.0
    } else {
        total as f64 / count as f64
    }
}

/// Builds the full report for a relabeled sequence and its contours.
pub fn consistency_report(seq: &FrameSequence, contours: &[Vec<LabelContours>]) -> ConsistencyReport {
    let per_frame = region_ious(seq);
    let all: Vec<f64> = per_frame
        .iter()
        .flat_map(|f| f.labels.values().copied())
        .collect();
    let mean_region_iou = if all.is_empty() {
        0.0
    } else {
        all.iter().sum::<f64>() / all.len() as f64
    };
    ConsistencyReport {
        note: REPORT_NOTE,
        frames: seq.len(),
        label_flip_count: label_flip_count(seq),
        mean_region_iou,
        mean_vertex_count: mean_vertex_count(contours.iter().map(Vec::as_slice)),
        per_frame,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contours::{Contour, Point, Role};
    use crate::maskio::LabelMask;
    use crate::tracker::relabel_sequence;

    fn two_halves(swapped: bool) -> LabelMask {
        LabelMask::from_fn(10, 10, |x, _| match (x < 5, swapped) {
            (true, false) | (false, true) => 1,
            _ => 2,
        })
    }

    #[test]
    fn static_sequence_has_no_flips() {
        let seq = FrameSequence::new(vec![two_halves(false); 5], 24.0).unwrap();
        assert_eq!(label_flip_count(&seq), 0);
    }

    #[test]
    fn hard_swap_counts_two_and_tracker_repairs_it() {
        let frames = (0..6).map(|i| two_halves(i >= 3)).collect();
        let seq = FrameSequence::new(frames, 24.0).unwrap();
        assert_eq!(label_flip_count(&seq), 2);
        let fixed = relabel_sequence(&seq, 0.3).unwrap();
        assert_eq!(label_flip_count(&fixed), 0);
    }

    #[test]
    fn vertex_means() {
        let tri = LabelContours {
            label_id: 1,
            contours: vec![Contour::new(
                vec![Point::new(0, 0), Point::new(4, 0), Point::new(0, 3)],
                Role::Outer,
                None,
            )],
        };
        let frames = [vec![tri.clone()], vec![tri]];
        assert_eq!(mean_vertex_count(frames.iter().map(Vec::as_slice)), 3.0);
        let empty: Vec<Vec<LabelContours>> = Vec::new();
        assert_eq!(mean_vertex_count(empty.iter().map(Vec::as_slice)), 0.0);
    }

    #[test]
    fn report_for_background_clip() {
        let seq = FrameSequence::new(vec![LabelMask::empty(4, 4); 3], 24.0).unwrap();
        let r = consistency_report(&seq, &[vec![], vec![], vec![]]);
        assert_eq!(r.frames, 3);
        assert_eq!(r.label_flip_count, 0);
        assert_eq!(r.mean_vertex_count, 0.0);
        assert_eq!(r.per_frame.len(), 2);
    }
}
