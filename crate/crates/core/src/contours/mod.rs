//! Contour extraction and simplification.
//!
//! A frame's label mask is split into one binary submask per label. Each
//! submask is dilated with a 4x4 box, its region borders are traced with
//! their outer/hole hierarchy, borders enclosing no more than `min_area`
//! are dropped, and the survivors are reduced with Douglas-Peucker. When
//! simplification would destroy a border (fewer than three vertices or zero
//! area) the dilated border is kept as is.
//!
//! Traced vertices lie on pixel corners: pixel `(x, y)` covers the square
//! `[x, x+1] x [y, y+1]`, so a traced border runs along the cracks between
//! foreground and background pixels and its shoelace area equals the
//! number of pixels it encloses.

mod dilate;
mod dp;
mod trace;

use serde::Serialize;

use crate::maskio::{LabelMask, LabelTable};

pub use dilate::dilate;
pub use dp::{simplify_chain_indices, simplify_closed_indices, simplify_dp};
pub use trace::trace_contours;

/// Binary grid, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bitmap {
    width: u32,
    height: u32,
    bits: Vec<bool>,
}

impl Bitmap {
    pub fn new(width: u32, height: u32) -> Self {
        Bitmap {
            width,
            height,
            bits: vec![false; width as usize * height as usize],
        }
    }

    pub fn from_fn(width: u32, height: u32, mut f: impl FnMut(u32, u32) -> bool) -> Self {
        let mut bits = Vec::with_capacity(width as usize * height as usize);
        for y in 0..height {
            for x in 0..width {
                bits.push(f(x, y));
            }
        }
        Bitmap {
            width,
            height,
            bits,
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn dimensions(&self) -> (u32, u32) {
        (self.width, self.height)
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, x: u32, y: u32) -> bool {
        self.bits[y as usize * self.width as usize + x as usize]
    }

    /// Like [`get`](Self::get), but anything outside the grid reads as unset.
    pub fn get_signed(&self, x: i64, y: i64) -> bool {
        x >= 0
            && y >= 0
            && (x as u64) < self.width as u64
            && (y as u64) < self.height as u64
            && self.bits[y as usize * self.width as usize + x as usize]
    }

    pub fn set(&mut self, x: u32, y: u32, value: bool) {
        self.bits[y as usize * self.width as usize + x as usize] = value;
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    /// Pixels of `mask` equal to `label`.
    pub fn from_label(mask: &LabelMask, label: u8) -> Self {
        Bitmap {
            width: mask.width(),
            height: mask.height(),
            bits: mask.labels().iter().map(|&l| l == label).collect(),
        }
    }
}

/// All pixels of one label within a frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubMask {
    pub label_id: u8,
    pub bitmap: Bitmap,
}

/// Integer lattice point (pixel corner).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: i32,
    pub y: i32,
}

impl Point {
    pub const fn new(x: i32, y: i32) -> Self {
        Point { x, y }
    }
}

impl Serialize for Point {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.x, self.y].serialize(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Outer,
    Hole,
}

/// Closed polyline; the last vertex connects back to the first.
///
/// Outer borders have positive signed shoelace area and holes negative
/// (counter-clockwise and clockwise respectively with the y axis pointing
/// up). `parent` indexes the enclosing border in the same list: for a hole
/// this is the outer border of its region, for an outer border the hole it
/// sits in, if any.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Contour {
    pub vertices: Vec<Point>,
    pub role: Role,
    pub parent: Option<usize>,
}

impl Contour {
    pub fn new(vertices: Vec<Point>, role: Role, parent: Option<usize>) -> Self {
        Contour {
            vertices,
            role,
            parent,
        }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// Minimum area and Douglas-Peucker tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, serde::Deserialize)]
pub struct SimplifyParams {
    /// Contours with area at or below this (px²) are dropped.
    pub min_area: f64,
    /// Douglas-Peucker tolerance in pixels.
    pub tolerance: f64,
}

pub const DEFAULT_MIN_AREA: f64 = 16.0;
pub const DEFAULT_TOLERANCE: f64 = 2.0;

impl Default for SimplifyParams {
    fn default() -> Self {
        SimplifyParams {
            min_area: DEFAULT_MIN_AREA,
            tolerance: DEFAULT_TOLERANCE,
        }
    }
}

impl SimplifyParams {
    pub fn validate(&self) -> crate::Result<()> {
        if !(self.min_area >= 0.0 && self.min_area.is_finite()) {
            return Err(crate::Error::InvalidParameter(format!(
                "minimum area must be >= 0, got {}",
                self.min_area
            )));
        }
        if !(self.tolerance >= 0.0 && self.tolerance.is_finite()) {
            return Err(crate::Error::InvalidParameter(format!(
                "tolerance must be >= 0, got {}",
                self.tolerance
            )));
        }
        Ok(())
    }
}

/// Simplified contours of one label.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct LabelContours {
    pub label_id: u8,
    pub contours: Vec<Contour>,
}

/// One submask per nonzero label present in `mask`, in z-order.
pub fn split_submasks(mask: &LabelMask, table: &LabelTable) -> Vec<SubMask> {
    let mut present = mask.present_labels();
    table.z_sort(&mut present);
    let mut slot = [usize::MAX; 256];
    let mut out: Vec<SubMask> = present
        .iter()
        .enumerate()
        .map(|(i, &label_id)| {
            slot[label_id as usize] = i;
            SubMask {
                label_id,
                bitmap: Bitmap::new(mask.width(), mask.height()),
            }
        })
        .collect();
    for (i, &l) in mask.labels().iter().enumerate() {
        if l != 0 {
            out[slot[l as usize]].bitmap.bits[i] = true;
        }
    }
    out
}

/// Twice the signed shoelace area. Exact for integer vertices.
pub fn signed_area2(vertices: &[Point]) -> i64 {
    if vertices.len() < 3 {
        return 0;
    }
    let n = vertices.len();
    (0..n)
        .map(|i| {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            a.x as i64 * b.y as i64 - b.x as i64 * a.y as i64
        })
        .sum()
}

/// Absolute shoelace area; 0 for fewer than three vertices.
pub fn contour_area(c: &Contour) -> f64 {
    signed_area2(&c.vertices).unsigned_abs() as f64 / 2.0
}

/// Whether Douglas-Peucker at tolerance `t` leaves a usable polygon: at
/// least three vertices and nonzero area.
pub fn can_simplify(c: &Contour, t: f64) -> bool {
    if c.vertices.len() < 3 {
        return false;
    }
    let s = simplify_dp(c, t);
    s.vertices.len() >= 3 && signed_area2(&s.vertices) != 0
}

/// Dilate, trace, filter by area and simplify one submask.
pub fn simplify_submask(sub: &SubMask, params: &SimplifyParams) -> LabelContours {
    let dilated = dilate(sub);
    let traced = trace_contours(&dilated.bitmap);

    let mut new_index = vec![None; traced.len()];
    let mut kept = Vec::new();
    for (j, c) in traced.iter().enumerate() {
        if contour_area(c) > params.min_area {
            new_index[j] = Some(kept.len());
            kept.push(j);
        }
    }

    let contours = kept
        .into_iter()
        .map(|j| {
            let dilated_contour = &traced[j];
            let parent = dilated_contour.parent.and_then(|p| new_index[p]);
            let vertices = if can_simplify(dilated_contour, params.tolerance) {
                simplify_dp(dilated_contour, params.tolerance).vertices
            } else {
                dilated_contour.vertices.clone()
            };
            Contour::new(vertices, dilated_contour.role, parent)
        })
        .collect();

    LabelContours {
        label_id: sub.label_id,
        contours,
    }
}

/// Runs [`simplify_submask`] over every submask, preserving order.
pub fn simplify_all(submasks: &[SubMask], params: &SimplifyParams) -> Vec<LabelContours> {
    submasks
        .iter()
        .map(|s| simplify_submask(s, params))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maskio::LabelEntry;

    fn table(ids: &[u8]) -> LabelTable {
        LabelTable::new(
            ids.iter()
                .map(|&id| LabelEntry {
                    id,
                    name: format!("l{id}"),
                })
                .collect(),
        )
        .unwrap()
    }

    fn poly(pts: &[(i32, i32)]) -> Contour {
        Contour::new(
            pts.iter().map(|&(x, y)| Point::new(x, y)).collect(),
            Role::Outer,
            None,
        )
    }

    #[test]
    fn area_examples() {
        assert_eq!(contour_area(&poly(&[(0, 0), (10, 0), (10, 10), (0, 10)])), 100.0);
        assert_eq!(contour_area(&poly(&[(0, 0), (4, 0), (0, 3)])), 6.0);
        assert_eq!(contour_area(&poly(&[(0, 0), (4, 0)])), 0.0);
    }

    #[test]
    fn split_partitions_foreground() {
        let mask = LabelMask::from_fn(8, 8, |x, y| match (x < 4, y < 4) {
            (true, true) => 2,
            (false, false) => 1,
            _ => 0,
        });
        let subs = split_submasks(&mask, &table(&[2, 1]));
        assert_eq!(subs.len(), 2);
        assert_eq!(subs[0].label_id, 2);
        assert_eq!(subs[1].label_id, 1);
        for (i, &l) in mask.labels().iter().enumerate() {
            let hits = subs.iter().filter(|s| s.bitmap.bits()[i]).count();
            assert_eq!(hits, usize::from(l != 0));
        }
    }

    #[test]
    fn split_empty_and_disconnected() {
        assert!(split_submasks(&LabelMask::empty(5, 5), &table(&[1])).is_empty());
        let mask = LabelMask::from_fn(9, 3, |x, _| if x == 1 || x == 7 { 3 } else { 0 });
        let subs = split_submasks(&mask, &table(&[3]));
        assert_eq!(subs.len(), 1);
        assert_eq!(subs[0].bitmap.count(), 6);
    }

    #[test]
    fn tiny_blob_dropped_by_area() {
        // A single pixel dilates to a 4x4 block: area 16.
        let bm = Bitmap::from_fn(10, 10, |x, y| x == 5 && y == 5);
        let sub = SubMask {
            label_id: 1,
            bitmap: bm,
        };
        let p = SimplifyParams {
            min_area: 16.0,
            tolerance: 1.0,
        };
        assert!(simplify_submask(&sub, &p).contours.is_empty());
        let p = SimplifyParams {
            min_area: 15.0,
            tolerance: 1.0,
        };
        assert_eq!(simplify_submask(&sub, &p).contours.len(), 1);
    }

    #[test]
    fn micro_contour_kept_unsimplified() {
        let sub = SubMask {
            label_id: 1,
            bitmap: Bitmap::from_fn(10, 10, |x, y| x == 5 && y == 5),
        };
        let p = SimplifyParams {
            min_area: 0.0,
            tolerance: 5.0,
        };
        let dilated = trace_contours(&dilate(&sub).bitmap);
        assert_eq!(dilated.len(), 1);
        assert!(!can_simplify(&dilated[0], 5.0));
        let out = simplify_submask(&sub, &p);
        assert_eq!(out.contours, dilated);
    }

    #[test]
    fn can_simplify_examples() {
        // 3-pixel row traced as a ring collapses at t = 5.
        let row = Bitmap::from_fn(5, 3, |x, y| y == 1 && (1..4).contains(&x));
        let ring = &trace_contours(&row)[0];
        assert!(!can_simplify(ring, 5.0));
        assert!(can_simplify(ring, 0.0));
        assert!(can_simplify(ring, 0.25));

        // Large square with one-pixel bumps along its edges.
        let noisy = Bitmap::from_fn(40, 40, |x, y| {
            let inside = (5..35).contains(&x) && (5..35).contains(&y);
            let bump = (y == 4 && x % 3 == 0 && (5..35).contains(&x))
                || (x == 35 && y % 4 == 1 && (5..35).contains(&y));
            inside || bump
        });
        let outer = &trace_contours(&noisy)[0];
        assert!(can_simplify(outer, 2.0));
        assert!(simplify_dp(outer, 2.0).len() < outer.len());
    }

    #[test]
    fn holes_survive_simplification_with_parent() {
        let ring = Bitmap::from_fn(40, 40, |x, y| {
            let outer = (4..36).contains(&x) && (4..36).contains(&y);
            let hole = (14..26).contains(&x) && (14..26).contains(&y);
            outer && !hole
        });
        let out = simplify_submask(
            &SubMask {
                label_id: 4,
                bitmap: ring,
            },
            &SimplifyParams::default(),
        );
        assert_eq!(out.contours.len(), 2);
        assert_eq!(out.contours[0].role, Role::Outer);
        assert_eq!(out.contours[1].role, Role::Hole);
        assert_eq!(out.contours[1].parent, Some(0));
        // Squares simplify to their four corners.
        assert_eq!(out.contours[0].len(), 4);
        assert_eq!(out.contours[1].len(), 4);
    }
}
