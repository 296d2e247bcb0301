//! Temporally consistent label ids.
//!
//! Each frame's labels are matched against the previous (already relabeled)
//! frame by region overlap. All label pairs are ranked by IoU, highest
//! first, ties going to the smaller previous id and then the smaller current
//! id, and pairs at or above the threshold are accepted greedily while both
//! sides are still free. Current labels left unmatched receive the lowest id
//! never allocated so far.

use std::collections::{BTreeMap, BTreeSet};

use crate::contours::Bitmap;
use crate::error::{Error, Result};
use crate::maskio::{FrameSequence, LabelMask};

pub const DEFAULT_IOU_THRESHOLD: f64 = 0.3;

/// How one frame's incoming ids map onto canonical ids.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LabelMapping {
    pub frame_index: usize,
    pub mapping: BTreeMap<u8, u8>,
    /// Canonical ids first allocated in this frame.
    pub fresh: BTreeSet<u8>,
}

impl LabelMapping {
    fn lut(&self) -> [u8; 256] {
        let mut lut = [0u8; 256];
        for (&from, &to) in &self.mapping {
            lut[from as usize] = to;
        }
        lut
    }
}

/// Intersection over union of two binary masks; 0 when both are empty.
pub fn iou(a: &Bitmap, b: &Bitmap) -> Result<f64> {
    if a.dimensions() != b.dimensions() {
        return Err(Error::Dimension {
            expected: a.dimensions(),
            actual: b.dimensions(),
        });
    }
    let (mut inter, mut union) = (0u64, 0u64);
    for (&x, &y) in a.bits().iter().zip(b.bits()) {
        inter += (x && y) as u64;
        union += (x || y) as u64;
    }
    Ok(if union == 0 {
        0.0
    } else {
        inter as f64 / union as f64
    })
}

/// Pixel co-occurrence between two label masks of equal size.
pub(crate) struct Overlap {
    counts: Vec<u32>,
    pub area_prev: [u64; 256],
    pub area_curr: [u64; 256],
}

impl Overlap {
    pub fn new(prev: &LabelMask, curr: &LabelMask) -> Result<Self> {
        if prev.dimensions() != curr.dimensions() {
            return Err(Error::Dimension {
                expected: prev.dimensions(),
                actual: curr.dimensions(),
            });
        }
        let mut counts = vec![0u32; 256 * 256];
        let mut area_prev = [0u64; 256];
        let mut area_curr = [0u64; 256];
        for (&p, &c) in prev.labels().iter().zip(curr.labels()) {
            counts[p as usize * 256 + c as usize] += 1;
            area_prev[p as usize] += 1;
            area_curr[c as usize] += 1;
        }
        Ok(Overlap {
            counts,
            area_prev,
            area_curr,
        })
    }

    pub fn intersection(&self, prev: u8, curr: u8) -> u64 {
        self.counts[prev as usize * 256 + curr as usize] as u64
    }

    /// (intersection, union) of previous-frame label `prev` and current-frame
    /// label `curr`.
    pub fn ratio(&self, prev: u8, curr: u8) -> (u64, u64) {
        let inter = self.intersection(prev, curr);
        let union = self.area_prev[prev as usize] + self.area_curr[curr as usize] - inter;
        (inter, union)
    }

    pub fn iou(&self, prev: u8, curr: u8) -> f64 {
        match self.ratio(prev, curr) {
            (_, 0) => 0.0,
            (i, u) => i as f64 / u as f64,
        }
    }
}

fn check_threshold(threshold: f64) -> Result<()> {
    if threshold > 0.0 && threshold <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "IoU threshold must be in (0, 1], got {threshold}"
        )))
    }
}

fn match_with(
    prev: &LabelMask,
    curr: &LabelMask,
    threshold: f64,
    allocated: &mut [bool; 256],
    frame_index: usize,
) -> Result<LabelMapping> {
    let overlap = Overlap::new(prev, curr)?;

    let mut pairs: Vec<(u64, u64, u8, u8)> = Vec::new();
    for p in 1..=255u8 {
        if overlap.area_prev[p as usize] == 0 {
            continue;
        }
        for c in 1..=255u8 {
            if overlap.area_curr[c as usize] == 0 {
                continue;
            }
            let (inter, union) = overlap.ratio(p, c);
            if inter > 0 && inter as f64 / union as f64 >= threshold {
                pairs.push((inter, union, p, c));
            }
        }
    }
    pairs.sort_by(|a, b| {
        // a.iou > b.iou  <=>  a.inter * b.union > b.inter * a.union
        let lhs = a.0 as u128 * b.1 as u128;
        let rhs = b.0 as u128 * a.1 as u128;
        rhs.cmp(&lhs)
            .then(a.2.cmp(&b.2))
            .then(a.3.cmp(&b.3))
    });

    let mut out = LabelMapping {
        frame_index,
        ..LabelMapping::default()
    };
    let mut prev_used = [false; 256];
    for (_, _, p, c) in pairs {
        if prev_used[p as usize] || out.mapping.contains_key(&c) {
            continue;
        }
        prev_used[p as usize] = true;
        out.mapping.insert(c, p);
    }

    for c in curr.present_labels() {
        if out.mapping.contains_key(&c) {
            continue;
        }
        let id = (1..=255u8)
            .find(|&id| !allocated[id as usize])
            .ok_or(Error::IdSpaceExhausted)?;
        allocated[id as usize] = true;
        out.mapping.insert(c, id);
        out.fresh.insert(id);
    }
    Ok(out)
}

/// Matches `curr`'s labels onto `prev`'s. Fresh ids avoid every id present
/// in `prev`.
pub fn match_labels(prev: &LabelMask, curr: &LabelMask, threshold: f64) -> Result<LabelMapping> {
    check_threshold(threshold)?;
    let mut allocated = [false; 256];
    for l in prev.present_labels() {
        allocated[l as usize] = true;
    }
    match_with(prev, curr, threshold, &mut allocated, 1)
}

/// Relabels every frame after the first against its relabeled predecessor,
/// returning the new sequence and the mapping used for each later frame.
pub fn relabel_sequence_with_mappings(
    seq: &FrameSequence,
    threshold: f64,
) -> Result<(FrameSequence, Vec<LabelMapping>)> {
    check_threshold(threshold)?;
    let frames = seq.frames();
    let mut allocated = [false; 256];
    for l in frames[0].present_labels() {
        allocated[l as usize] = true;
    }
    let mut out: Vec<LabelMask> = Vec::with_capacity(frames.len());
    let mut mappings = Vec::with_capacity(frames.len().saturating_sub(1));
    out.push(frames[0].clone());
    for (i, curr) in frames.iter().enumerate().skip(1) {
        let mapping = match_with(&out[i - 1], curr, threshold, &mut allocated, i)?;
        let lut = mapping.lut();
        out.push(curr.map_labels(|l| lut[l as usize]));
        mappings.push(mapping);
    }
    Ok((FrameSequence::new(out, seq.fps)?, mappings))
}

/// Relabels a sequence so each object keeps one id across frames. Frame 0
/// passes through unchanged.
pub fn relabel_sequence(seq: &FrameSequence, threshold: f64) -> Result<FrameSequence> {
    relabel_sequence_with_mappings(seq, threshold).map(|(s, _)| s)
}
