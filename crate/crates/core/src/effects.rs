//! Finishing passes applied after rendering, in this order: shadow, facial
//! features, pixelation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maskio::{LandmarkSet, Rgba, DEFAULT_SHADOW_DX, DEFAULT_SHADOW_FACTOR};
use crate::render::RasterRgba;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectConfig {
    pub shadow_enabled: bool,
    pub shadow_factor: f64,
    pub shadow_dx: i32,
    pub features_enabled: bool,
    pub feature_color: Rgba,
    pub feature_thickness: u32,
    /// 1 disables pixelation.
    pub pixelate_factor: u32,
}

pub const DEFAULT_FEATURE_THICKNESS: u32 = 2;
pub const DEFAULT_PIXELATE_FACTOR: u32 = 4;

impl Default for EffectConfig {
    fn default() -> Self {
        EffectConfig {
            shadow_enabled: false,
            shadow_factor: DEFAULT_SHADOW_FACTOR,
            shadow_dx: DEFAULT_SHADOW_DX,
            features_enabled: false,
            feature_color: Rgba::BLACK,
            feature_thickness: DEFAULT_FEATURE_THICKNESS,
            pixelate_factor: 1,
        }
    }
}

impl Serialize for Rgba {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let [r, g, b, a] = self.0;
        format!("#{r:02X}{g:02X}{b:02X}{a:02X}").serialize(s)
    }
}

impl<'de> Deserialize<'de> for Rgba {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Rgba::from_hex(&s).map_err(serde::de::Error::custom)
    }
}

impl EffectConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.shadow_factor) {
            return Err(Error::InvalidParameter(format!(
                "shadow factor must be in 0..1, got {}",
                self.shadow_factor
            )));
        }
        if self.feature_thickness == 0 {
            return Err(Error::InvalidParameter(
                "feature thickness must be >= 1".to_string(),
            ));
        }
        if self.pixelate_factor == 0 {
            return Err(Error::InvalidParameter(
                "pixelate factor must be >= 1".to_string(),
            ));
        }
        Ok(())
    }

    /// Applies the enabled effects in order. `landmarks` is the current
    /// frame's face, if one was detected.
    pub fn apply(&self, img: RasterRgba, landmarks: Option<&LandmarkSet>) -> Result<RasterRgba> {
        let mut img = img;
        if self.shadow_enabled {
            img = apply_shadow(&img, self.shadow_factor, self.shadow_dx);
        }
        if self.features_enabled {
            if let Some(lm) = landmarks {
                img = draw_facial_features(&img, lm, self.feature_color, self.feature_thickness);
            }
        }
        if self.pixelate_factor > 1 {
            img = pixelate(&img, self.pixelate_factor)?;
        }
        Ok(img)
    }
}

/// Composites `img` over a darkened copy of itself shifted `dx` pixels
/// horizontally. Wherever `img` has nonzero alpha it wins unchanged.
pub fn apply_shadow(img: &RasterRgba, factor: f64, dx: i32) -> RasterRgba {
    let (w, h) = (img.width(), img.height());
    let scale = |c: u8| (c as f64 * factor).round().clamp(0.0, 255.0) as u8;
    RasterRgba::from_fn(w, h, |x, y| {
        let orig = img.get(x, y);
        if orig.alpha() > 0 {
            return orig;
        }
        let sx = x as i64 - dx as i64;
        if sx < 0 || sx >= w as i64 {
            return orig;
        }
        let src = img.get(sx as u32, y);
        if src.alpha() == 0 {
            return orig;
        }
        let [r, g, b, a] = src.0;
        Rgba([scale(r), scale(g), scale(b), a])
    })
}

/// Landmark index runs drawn as polylines, and whether each closes.
pub const FEATURE_STROKES: [(std::ops::RangeInclusive<usize>, bool); 6] = [
    (17..=21, false), // right brow
    (22..=26, false), // left brow
    (27..=35, false), // nose bridge and base
    (36..=41, true),  // right eye
    (42..=47, true),  // left eye
    (48..=59, true),  // outer lip
];

/// Segments (as landmark index pairs) making up the schematic face.
pub fn feature_segments() -> Vec<(usize, usize)> {
    let mut segs = Vec::new();
    for (range, closed) in FEATURE_STROKES {
        let (start, end) = (*range.start(), *range.end());
        for i in start..end {
            segs.push((i, i + 1));
        }
        if closed {
            segs.push((end, start));
        }
    }
    segs
}

fn round_coord(v: f64) -> i64 {
    // Finite by LandmarkSet's invariant; the clamp keeps later arithmetic in range.
    v.round().clamp(-(1i64 << 28) as f64, (1i64 << 28) as f64) as i64
}

/// Pixels of the Bresenham line from `a` to `b` that fall inside
/// `0..w` x `0..h`. Traversal is clipped analytically so far-away endpoints
/// cost nothing.
pub fn bresenham_clipped(a: (i64, i64), b: (i64, i64), w: i64, h: i64, mut plot: impl FnMut(i64, i64)) {
    let (dx, dy) = ((b.0 - a.0).abs(), (b.1 - a.1).abs());
    let (sx, sy) = ((b.0 - a.0).signum(), (b.1 - a.1).signum());
    // Major axis steps every pixel; the minor offset after i steps is
    // round-half-down(i * minor / major).
    let (major, minor, swap) = if dx >= dy { (dx, dy, false) } else { (dy, dx, true) };
    let at = |i: i64| -> (i64, i64) {
        let k = if major == 0 {
            0
        } else {
            (2 * i * minor + major - 1).div_euclid(2 * major)
        };
        if swap {
            (a.0 + sx * k, a.1 + sy * i)
        } else {
            (a.0 + sx * i, a.1 + sy * k)
        }
    };
    // Restrict i to steps whose major coordinate is on-screen.
    let (origin, step, limit) = if swap { (a.1, sy, h) } else { (a.0, sx, w) };
    let (mut lo, mut hi) = (0, major);
    if step > 0 {
        lo = lo.max(-origin);
        hi = hi.min(limit - 1 - origin);
    } else if step < 0 {
        lo = lo.max(origin - (limit - 1));
        hi = hi.min(origin);
    } else if !(0..limit).contains(&origin) {
        return;
    }
    for i in lo..=hi {
        let (x, y) = at(i);
        if (0..w).contains(&x) && (0..h).contains(&y) {
            plot(x, y);
        }
    }
}

/// Offsets of a square brush of side `thickness`.
pub fn brush_offsets(thickness: u32) -> impl Iterator<Item = (i64, i64)> {
    let t = thickness.max(1) as i64;
    let lo = -((t - 1) / 2);
    (lo..lo + t).flat_map(move |oy| (lo..lo + t).map(move |ox| (ox, oy)))
}

/// Set of pixels the facial-feature strokes cover, as a row-major mask: the
/// on-screen Bresenham pixels of every segment, dilated by the brush.
pub fn feature_stroke_mask(lm: &LandmarkSet, w: u32, h: u32, thickness: u32) -> Vec<bool> {
    let (wi, hi) = (w as i64, h as i64);
    let pts = lm.points();
    let p = |i: usize| (round_coord(pts[i][0]), round_coord(pts[i][1]));
    let mut centers = vec![false; w as usize * h as usize];
    for (i, j) in feature_segments() {
        bresenham_clipped(p(i), p(j), wi, hi, |x, y| centers[(y * wi + x) as usize] = true);
    }
    if thickness <= 1 {
        return centers;
    }
    let mut out = vec![false; centers.len()];
    for y in 0..hi {
        for x in 0..wi {
            if !centers[(y * wi + x) as usize] {
                continue;
            }
            for (ox, oy) in brush_offsets(thickness) {
                let (bx, by) = (x + ox, y + oy);
                if (0..wi).contains(&bx) && (0..hi).contains(&by) {
                    out[(by * wi + bx) as usize] = true;
                }
            }
        }
    }
    out
}

/// Draws brows, nose, eyes and outer lip from iBUG-68 landmarks with a
/// square brush. The jaw line is not drawn.
pub fn draw_facial_features(
    img: &RasterRgba,
    lm: &LandmarkSet,
    color: Rgba,
    thickness: u32,
) -> RasterRgba {
    let (w, h) = (img.width(), img.height());
    let mask = feature_stroke_mask(lm, w, h, thickness);
    let mut out = img.clone();
    for y in 0..h {
        for x in 0..w {
            if mask[y as usize * w as usize + x as usize] {
                out.set(x, y, color);
            }
        }
    }
    out
}

/// Bilinear downscale by `factor` followed by nearest-neighbor upscale back
/// to the original size. Blocks are aligned to multiples of `factor`.
pub fn pixelate(img: &RasterRgba, factor: u32) -> Result<RasterRgba> {
    let (w, h) = (img.width(), img.height());
    if factor == 0 || factor > w.min(h) {
        return Err(Error::InvalidParameter(format!(
            "pixelate factor {factor} must be in 1..={}",
            w.min(h)
        )));
    }
    if factor == 1 {
        return Ok(img.clone());
    }
    let sw = w.div_ceil(factor);
    let sh = h.div_ceil(factor);
    let f = factor as f64;

    // Sample position of small pixel i in source pixel coordinates.
    let taps = |i: u32, len: u32| -> (u32, u32, f64) {
        let pos = ((i as f64 + 0.5) * f - 0.5).clamp(0.0, (len - 1) as f64);
        let i0 = pos.floor() as u32;
        let i1 = (i0 + 1).min(len - 1);
        (i0, i1, pos - i0 as f64)
    };

    let small = RasterRgba::from_fn(sw, sh, |sx, sy| {
        let (x0, x1, fx) = taps(sx, w);
        let (y0, y1, fy) = taps(sy, h);
        let (p00, p10) = (img.get(x0, y0).0, img.get(x1, y0).0);
        let (p01, p11) = (img.get(x0, y1).0, img.get(x1, y1).0);
        let mut out = [0u8; 4];
        for c in 0..4 {
            let top = p00[c] as f64 * (1.0 - fx) + p10[c] as f64 * fx;
            let bottom = p01[c] as f64 * (1.0 - fx) + p11[c] as f64 * fx;
            out[c] = (top * (1.0 - fy) + bottom * fy).round().clamp(0.0, 255.0) as u8;
        }
        Rgba(out)
    });

    Ok(RasterRgba::from_fn(w, h, |x, y| {
        small.get(x / factor, y / factor)
    }))
}
