//! Flat-color rasterization of simplified contours.
//!
//! Polygons are filled with the even-odd rule, sampling each pixel at its
//! center `(x + 0.5, y + 0.5)`. Crossing positions are computed in exact
//! integer arithmetic, so the result does not depend on float rounding.

mod font;

use crate::contours::{signed_area2, Bitmap, Contour, LabelContours};
use crate::error::{Error, Result};
use crate::maskio::{Palette, Rgba};

pub use font::{glyph_bit, text_pixels, GLYPH_HEIGHT, GLYPH_WIDTH};

/// Row-major 8-bit RGBA image.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RasterRgba {
    width: u32,
    height: u32,
    pixels: Vec<u8>,
}

impl RasterRgba {
    /// Fully transparent image.
    pub fn new(width: u32, height: u32) -> Self {
        RasterRgba {
            width,
            height,
            pixels: vec![0; width as usize * height as usize * 4],
        }
    }

    pub fn filled(width: u32, height: u32, color: Rgba) -> Self {
        let mut img = RasterRgba::new(width, height);
        for px in img.pixels.chunks_exact_mut(4) {
            px.copy_from_slice(&color.0);
        }
        img
    }

    pub fn from_bytes(width: u32, height: u32, pixels: Vec<u8>) -> Result<Self> {
        if pixels.len() != width as usize * height as usize * 4 {
            return Err(Error::InvalidParameter(format!(
                "{} bytes do not make a {width}x{height} RGBA image",
                pixels.len()
            )));
        }
        Ok(RasterRgba {
            width,
            height,
            pixels,
        })
    }

    pub fn from_fn(width: u32, height: u32, mut f: impl FnMut(u32, u32) -> Rgba) -> Self {
        let mut img = RasterRgba::new(width, height);
        for y in 0..height {
            for x in 0..width {
                img.set(x, y, f(x, y));
            }
        }
        img
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.pixels
    }

    fn offset(&self, x: u32, y: u32) -> usize {
        (y as usize * self.width as usize + x as usize) * 4
    }

    pub fn get(&self, x: u32, y: u32) -> Rgba {
        let o = self.offset(x, y);
        Rgba([
            self.pixels[o],
            self.pixels[o + 1],
            self.pixels[o + 2],
            self.pixels[o + 3],
        ])
    }

    pub fn set(&mut self, x: u32, y: u32, c: Rgba) {
        let o = self.offset(x, y);
        self.pixels[o..o + 4].copy_from_slice(&c.0);
    }

    fn fill_span(&mut self, y: u32, x0: u32, x1: u32, c: Rgba) {
        let start = self.offset(x0, y);
        let end = self.offset(x1, y);
        for px in self.pixels[start..end].chunks_exact_mut(4) {
            px.copy_from_slice(&c.0);
        }
    }
}

/// Calls `span(y, x0, x1)` for every run of pixels `x0..x1` on row `y` whose
/// centers are inside `contours` under the even-odd rule. Contours with
/// fewer than three vertices are ignored.
pub fn even_odd_spans(
    contours: &[Contour],
    width: u32,
    height: u32,
    mut span: impl FnMut(u32, u32, u32),
) {
    let h = height as i64;
    let w = width as i64;
    let mut rows: Vec<Vec<i64>> = vec![Vec::new(); height as usize];
    for c in contours.iter().filter(|c| c.vertices.len() >= 3) {
        let n = c.vertices.len();
        for i in 0..n {
            let a = c.vertices[i];
            let b = c.vertices[(i + 1) % n];
            let (x0, y0, x1, y1) = (a.x as i64, a.y as i64, b.x as i64, b.y as i64);
            if y0 == y1 {
                continue;
            }
            let (dx, dy) = (x1 - x0, y1 - y0);
            let lo = y0.min(y1).max(0);
            let hi = y0.max(y1).min(h);
            for y in lo..hi {
                // Twice the crossing abscissa is num / den.
                let mut num = 2 * x0 * dy + (2 * y + 1 - 2 * y0) * dx;
                let mut den = dy;
                if den < 0 {
                    num = -num;
                    den = -den;
                }
                // First pixel whose center is at or right of the crossing.
                rows[y as usize].push(ceil_div(num - den, 2 * den));
            }
        }
    }
    for (y, xs) in rows.iter_mut().enumerate() {
        xs.sort_unstable();
        for pair in xs.chunks_exact(2) {
            let x0 = pair[0].clamp(0, w);
            let x1 = pair[1].clamp(0, w);
            if x0 < x1 {
                span(y as u32, x0 as u32, x1 as u32);
            }
        }
    }
}

fn ceil_div(a: i64, b: i64) -> i64 {
    -((-a).div_euclid(b))
}

/// Even-odd coverage of `contours` as a bitmap.
pub fn coverage(contours: &[Contour], width: u32, height: u32) -> Bitmap {
    let mut bm = Bitmap::new(width, height);
    even_odd_spans(contours, width, height, |y, x0, x1| {
        for x in x0..x1 {
            bm.set(x, y, true);
        }
    });
    bm
}

/// Paints `color` over every pixel whose center is inside `contours`
/// (even-odd), leaving all other pixels untouched.
pub fn fill_layer(contours: &[Contour], color: Rgba, target: &mut RasterRgba) {
    let (w, h) = (target.width, target.height);
    even_odd_spans(contours, w, h, |y, x0, x1| target.fill_span(y, x0, x1, color));
}

/// Layers in back-to-front order and the palette that colors them.
#[derive(Debug, Clone, Copy)]
pub struct RenderPlan<'a> {
    pub layers: &'a [LabelContours],
    pub palette: &'a Palette,
}

/// Paints every layer back to front onto a transparent canvas.
pub fn render_frame(plan: &RenderPlan<'_>, width: u32, height: u32) -> Result<RasterRgba> {
    let colors = plan
        .layers
        .iter()
        .map(|l| plan.palette.color(l.label_id).ok_or(Error::MissingColor(l.label_id)))
        .collect::<Result<Vec<_>>>()?;
    let mut img = RasterRgba::new(width, height);
    for (layer, color) in plan.layers.iter().zip(colors) {
        fill_layer(&layer.contours, color, &mut img);
    }
    Ok(img)
}

/// Distinct, fairly bright debug color for the `index`-th layer.
pub fn guide_color(index: usize) -> Rgba {
    const GOLDEN: f64 = 0.618_033_988_749_895;
    let hue = (0.11 + index as f64 * GOLDEN).fract();
    let sat = if (index / 12).is_multiple_of(2) { 0.55 } else { 0.8 };
    hsv(hue, sat, 0.95)
}

fn hsv(h: f64, s: f64, v: f64) -> Rgba {
    let h6 = h * 6.0;
    let sector = h6.floor() as i32 % 6;
    let f = h6 - h6.floor();
    let p = v * (1.0 - s);
    let q = v * (1.0 - s * f);
    let t = v * (1.0 - s * (1.0 - f));
    let (r, g, b) = match sector {
        0 => (v, t, p),
        1 => (q, v, p),
        2 => (p, v, t),
        3 => (p, q, v),
        4 => (t, p, v),
        _ => (v, p, q),
    };
    let c = |x: f64| (x * 255.0).round() as u8;
    Rgba::rgb(c(r), c(g), c(b))
}

/// Area-weighted centroid of a polygon; the vertex mean if its area is 0.
pub fn centroid(c: &Contour) -> Option<(f64, f64)> {
    let v = &c.vertices;
    if v.is_empty() {
        return None;
    }
    let a2 = signed_area2(v);
    if a2 == 0 {
        let n = v.len() as f64;
        let sx: f64 = v.iter().map(|p| p.x as f64).sum();
        let sy: f64 = v.iter().map(|p| p.y as f64).sum();
        return Some((sx / n, sy / n));
    }
    let n = v.len();
    let (mut cx, mut cy) = (0i128, 0i128);
    for i in 0..n {
        let (p, q) = (v[i], v[(i + 1) % n]);
        let cross = p.x as i128 * q.y as i128 - q.x as i128 * p.y as i128;
        cx += (p.x as i128 + q.x as i128) * cross;
        cy += (p.y as i128 + q.y as i128) * cross;
    }
    let d = 3.0 * a2 as f64;
    Some((cx as f64 / d, cy as f64 / d))
}

/// Where a label's numeral goes: the pixel containing the centroid of its
/// largest contour if that pixel belongs to the label's own coverage,
/// otherwise the covered pixel whose center is nearest the centroid (first
/// in raster order on ties).
pub fn label_anchor(contours: &[Contour], own: &Bitmap) -> Option<(u32, u32)> {
    let largest = contours
        .iter()
        .filter(|c| c.vertices.len() >= 3)
        .fold(None::<&Contour>, |best, c| match best {
            Some(b) if signed_area2(&b.vertices).abs() >= signed_area2(&c.vertices).abs() => {
                Some(b)
            }
            _ => Some(c),
        })?;
    let (cx, cy) = centroid(largest)?;
    let (fx, fy) = (cx.floor(), cy.floor());
    if fx >= 0.0 && fy >= 0.0 && fx < own.width() as f64 && fy < own.height() as f64 {
        let (x, y) = (fx as u32, fy as u32);
        if own.get(x, y) {
            return Some((x, y));
        }
    }
    let mut best: Option<((u32, u32), f64)> = None;
    for y in 0..own.height() {
        for x in 0..own.width() {
            if !own.get(x, y) {
                continue;
            }
            let dx = x as f64 + 0.5 - cx;
            let dy = y as f64 + 0.5 - cy;
            let d = dx * dx + dy * dy;
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some(((x, y), d));
            }
        }
    }
    best.map(|(p, _)| p)
}

/// Debug guide: each layer in its own auto-assigned color with the label id
/// printed at its anchor (see [`label_anchor`]).
pub fn render_id_guide(plan: &RenderPlan<'_>, width: u32, height: u32) -> RasterRgba {
    let mut img = RasterRgba::new(width, height);
    let mut anchors = Vec::with_capacity(plan.layers.len());
    for (i, layer) in plan.layers.iter().enumerate() {
        fill_layer(&layer.contours, guide_color(i), &mut img);
        let own = coverage(&layer.contours, width, height);
        anchors.push((layer.label_id, label_anchor(&layer.contours, &own)));
    }
    for (label, anchor) in anchors {
        if let Some((ax, ay)) = anchor {
            draw_number(&mut img, label as u32, ax, ay, Rgba::BLACK);
        }
    }
    img
}

/// Draws `value` centered on pixel (`cx`, `cy`), clipped to the image.
pub fn draw_number(img: &mut RasterRgba, value: u32, cx: u32, cy: u32, color: Rgba) {
    let (ink, w, h) = text_pixels(value);
    let left = cx as i64 - w / 2;
    let top = cy as i64 - h / 2;
    for (dx, dy) in ink {
        let (x, y) = (left + dx, top + dy);
        if x >= 0 && y >= 0 && x < img.width as i64 && y < img.height as i64 {
            img.set(x as u32, y as u32, color);
        }
    }
}
