//! Input and output formats.
//!
//! Masks are 8-bit single-channel (grayscale or indexed) PNG files named
//! `frame_0000.png`, `frame_0001.png`, ... whose pixel value is the label id,
//! 0 being background. The manifest (`manifest.json`) lists labels in
//! back-to-front drawing order, the palette (`palette.json`) maps ids to
//! colors, and `landmarks.json` carries 68 facial landmarks per frame.
//! Rendered frames are written as 8-bit RGBA PNG with fixed encoder settings
//! so identical rasters always produce identical files.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::{BufReader, Cursor};
use std::path::{Path, PathBuf};

use serde_json::Value;

use crate::error::{Error, Result};
use crate::render::RasterRgba;

/// Number of points in an iBUG-68 landmark set.
pub const LANDMARK_COUNT: usize = 68;

/// Per-frame grid of label ids, row-major, 0 = background.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabelMask {
    width: u32,
    height: u32,
    labels: Vec<u8>,
}

impl LabelMask {
    pub fn new(width: u32, height: u32, labels: Vec<u8>) -> Result<Self> {
        if labels.len() != width as usize * height as usize {
            return Err(Error::InvalidParameter(format!(
                "label grid has {} entries, expected {}x{}",
                labels.len(),
                width,
                height
            )));
        }
        Ok(LabelMask {
            width,
            height,
            labels,
        })
    }

    /// All-background mask.
    pub fn empty(width: u32, height: u32) -> Self {
        LabelMask {
            width,
            height,
            labels: vec![0; width as usize * height as usize],
        }
    }

    pub fn from_fn(width: u32, height: u32, mut f: impl FnMut(u32, u32) -> u8) -> Self {
        let mut labels = Vec::with_capacity(width as usize * height as usize);
        for y in 0..height {
            for x in 0..width {
                labels.push(f(x, y));
            }
        }
        LabelMask {
            width,
            height,
            labels,
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

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn labels_mut(&mut self) -> &mut [u8] {
        &mut self.labels
    }

    pub fn get(&self, x: u32, y: u32) -> u8 {
        self.labels[y as usize * self.width as usize + x as usize]
    }

    pub fn set(&mut self, x: u32, y: u32, label: u8) {
        self.labels[y as usize * self.width as usize + x as usize] = label;
    }

    /// Distinct nonzero labels present, ascending.
    pub fn present_labels(&self) -> Vec<u8> {
        let mut seen = [false; 256];
        for &l in &self.labels {
            seen[l as usize] = true;
        }
        (1..=255u8).filter(|&l| seen[l as usize]).collect()
    }

    /// Applies `f` to every label id. Background is passed through `f` too.
    pub fn map_labels(&self, f: impl Fn(u8) -> u8) -> LabelMask {
        LabelMask {
            width: self.width,
            height: self.height,
            labels: self.labels.iter().map(|&l| f(l)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelEntry {
    pub id: u8,
    pub name: String,
}

/// Label id to name table. Entry order is the render z-order, back to front.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabelTable {
    entries: Vec<LabelEntry>,
}

impl LabelTable {
    pub fn new(entries: Vec<LabelEntry>) -> Result<Self> {
        let mut ids = BTreeSet::new();
        let mut names = BTreeSet::new();
        for e in &entries {
            if e.id == 0 {
                return Err(Error::Parse(
                    "label id 0 is reserved for background".to_string(),
                ));
            }
            if !ids.insert(e.id) {
                return Err(Error::Parse(format!("duplicate label id {}", e.id)));
            }
            if !names.insert(e.name.as_str()) {
                return Err(Error::Parse(format!("duplicate label name {:?}", e.name)));
            }
        }
        Ok(LabelTable { entries })
    }

    pub fn entries(&self) -> &[LabelEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, id: u8) -> bool {
        self.entries.iter().any(|e| e.id == id)
    }

    pub fn name(&self, id: u8) -> Option<&str> {
        self.entries
            .iter()
            .find(|e| e.id == id)
            .map(|e| e.name.as_str())
    }

    pub fn ids(&self) -> impl Iterator<Item = u8> + '_ {
        self.entries.iter().map(|e| e.id)
    }

    /// Sorts `labels` into z-order: manifest order first, then ids missing
    /// from the manifest in ascending order.
    pub fn z_sort(&self, labels: &mut [u8]) {
        let mut rank = [usize::MAX; 256];
        for (i, e) in self.entries.iter().enumerate() {
            rank[e.id as usize] = i;
        }
        labels.sort_by_key(|&l| (rank[l as usize], l));
    }
}

/// Straight (non-premultiplied) 8-bit RGBA color.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rgba(pub [u8; 4]);

impl Rgba {
    pub const TRANSPARENT: Rgba = Rgba([0, 0, 0, 0]);
    pub const BLACK: Rgba = Rgba([0, 0, 0, 255]);

    pub const fn rgb(r: u8, g: u8, b: u8) -> Self {
        Rgba([r, g, b, 255])
    }

    pub fn alpha(self) -> u8 {
        self.0[3]
    }

    /// Parses `#RRGGBB` (alpha 255) or `#RRGGBBAA`.
    pub fn from_hex(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("malformed color {s:?}, expected #RRGGBB"));
        let hex = s.strip_prefix('#').ok_or_else(bad)?;
        if !(hex.len() == 6 || hex.len() == 8) || !hex.bytes().all(|b| b.is_ascii_hexdigit()) {
            return Err(bad());
        }
        let byte = |i: usize| u8::from_str_radix(&hex[i..i + 2], 16).map_err(|_| bad());
        let a = if hex.len() == 8 { byte(6)? } else { 255 };
        Ok(Rgba([byte(0)?, byte(2)?, byte(4)?, a]))
    }
}

pub const DEFAULT_SHADOW_FACTOR: f64 = 0.5;
pub const DEFAULT_SHADOW_DX: i32 = 8;

/// Label id to color map plus shadow parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Palette {
    pub colors: BTreeMap<u8, Rgba>,
    pub shadow_factor: f64,
    pub shadow_dx: i32,
}

impl Default for Palette {
    fn default() -> Self {
        Palette {
            colors: BTreeMap::new(),
            shadow_factor: DEFAULT_SHADOW_FACTOR,
            shadow_dx: DEFAULT_SHADOW_DX,
        }
    }
}

impl Palette {
    pub fn color(&self, id: u8) -> Option<Rgba> {
        self.colors.get(&id).copied()
    }

    /// Manifest ids without a palette color.
    pub fn missing_ids(&self, table: &LabelTable) -> Vec<u8> {
        table
            .ids()
            .filter(|id| !self.colors.contains_key(id))
            .collect()
    }
}

/// 68 facial landmarks in iBUG ordering, pixel coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct LandmarkSet {
    points: Box<[[f64; 2]; LANDMARK_COUNT]>,
}

impl LandmarkSet {
    pub fn new(points: &[[f64; 2]]) -> Result<Self> {
        if points.len() != LANDMARK_COUNT {
            return Err(Error::Validation(format!(
                "expected {LANDMARK_COUNT} landmarks, got {}",
                points.len()
            )));
        }
        if points.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::Validation(
                "landmark coordinates must be finite".to_string(),
            ));
        }
        let mut arr = Box::new([[0.0; 2]; LANDMARK_COUNT]);
        arr.copy_from_slice(points);
        Ok(LandmarkSet { points: arr })
    }

    pub fn points(&self) -> &[[f64; 2]; LANDMARK_COUNT] {
        &self.points
    }
}

/// Ordered masks of one clip, all sharing dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameSequence {
    frames: Vec<LabelMask>,
    pub fps: f64,
}

pub const DEFAULT_FPS: f64 = 24.0;

impl FrameSequence {
    pub fn new(frames: Vec<LabelMask>, fps: f64) -> Result<Self> {
        let first = frames
            .first()
            .ok_or_else(|| Error::Sequence("sequence has no frames".to_string()))?;
        let dims = first.dimensions();
        if let Some(bad) = frames.iter().find(|f| f.dimensions() != dims) {
            return Err(Error::Dimension {
                expected: dims,
                actual: bad.dimensions(),
            });
        }
        Ok(FrameSequence { frames, fps })
    }

    pub fn frames(&self) -> &[LabelMask] {
        &self.frames
    }

    pub fn into_frames(self) -> Vec<LabelMask> {
        self.frames
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn dimensions(&self) -> (u32, u32) {
        self.frames[0].dimensions()
    }
}

pub fn mask_file_name(index: usize) -> String {
    format!("frame_{index:04}.png")
}

pub fn output_file_name(index: usize) -> String {
    format!("out_{index:04}.png")
}

fn parse_frame_index(name: &str) -> Option<usize> {
    let digits = name.strip_prefix("frame_")?.strip_suffix(".png")?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

/// Lists `frame_NNNN.png` files in `dir` in index order, checking that the
/// numbering is consecutive from 0.
pub fn list_mask_frames(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut found = BTreeMap::new();
    for entry in fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let entry = entry.map_err(|e| Error::io(dir, e))?;
        let name = entry.file_name();
        if let Some(idx) = name.to_str().and_then(parse_frame_index) {
            if let Some(prev) = found.insert(idx, entry.path()) {
                return Err(Error::Sequence(format!(
                    "frame index {idx} appears twice ({} and {})",
                    prev.display(),
                    entry.path().display()
                )));
            }
        }
    }
    if found.is_empty() {
        return Err(Error::Sequence(format!(
            "{}: no frame_NNNN.png files",
            dir.display()
        )));
    }
    for (expected, &idx) in found.keys().enumerate() {
        if idx != expected {
            return Err(Error::Sequence(format!(
                "missing {}",
                mask_file_name(expected).trim_end_matches(".png")
            )));
        }
    }
    Ok(found.into_values().collect())
}

/// Decodes an 8-bit grayscale or indexed PNG into a label grid. For indexed
/// images the palette index is the label id.
pub fn decode_mask_png(bytes: &[u8], path: &Path) -> Result<LabelMask> {
    let decoder = png::Decoder::new(Cursor::new(bytes));
    let mut reader = decoder.read_info().map_err(|source| Error::PngDecode {
        path: path.to_path_buf(),
        source,
    })?;
    let (color, depth) = reader.output_color_type();
    if depth != png::BitDepth::Eight
        || !matches!(color, png::ColorType::Grayscale | png::ColorType::Indexed)
    {
        return Err(Error::UnsupportedFormat {
            path: path.to_path_buf(),
            detail: format!("{color:?} at {depth:?}"),
        });
    }
    let size = reader
        .output_buffer_size()
        .ok_or_else(|| Error::UnsupportedFormat {
            path: path.to_path_buf(),
            detail: "image too large".to_string(),
        })?;
    let mut buf = vec![0; size];
    let info = reader
        .next_frame(&mut buf)
        .map_err(|source| Error::PngDecode {
            path: path.to_path_buf(),
            source,
        })?;
    let (w, h) = (info.width, info.height);
    let mut labels = Vec::with_capacity(w as usize * h as usize);
    for row in buf.chunks(info.line_size).take(h as usize) {
        labels.extend_from_slice(&row[..w as usize]);
    }
    LabelMask::new(w, h, labels)
}

pub fn read_mask_png(path: &Path) -> Result<LabelMask> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_mask_png(&bytes, path)
}

/// Checks that every label present in `mask` is in `table`.
pub fn check_mask_labels(mask: &LabelMask, table: &LabelTable, frame: usize) -> Result<()> {
    match mask.present_labels().into_iter().find(|&l| !table.contains(l)) {
        Some(l) => Err(Error::Validation(format!("frame {frame}: unknown label {l}"))),
        None => Ok(()),
    }
}

/// Loads `frame_NNNN.png` masks from `dir` and validates their ids against
/// the manifest.
pub fn load_mask_sequence(dir: &Path, manifest: &LabelTable) -> Result<FrameSequence> {
    let paths = list_mask_frames(dir)?;
    let mut frames: Vec<LabelMask> = Vec::with_capacity(paths.len());
    for (i, path) in paths.iter().enumerate() {
        let mask = read_mask_png(path)?;
        if let Some(first) = frames.first() {
            if first.dimensions() != mask.dimensions() {
                return Err(Error::Dimension {
                    expected: first.dimensions(),
                    actual: mask.dimensions(),
                });
            }
        }
        check_mask_labels(&mask, manifest, i)?;
        frames.push(mask);
    }
    FrameSequence::new(frames, DEFAULT_FPS)
}

pub fn encode_mask_png(mask: &LabelMask) -> Result<Vec<u8>> {
    encode_png(
        mask.width,
        mask.height,
        png::ColorType::Grayscale,
        &mask.labels,
    )
}

pub fn write_mask_png(mask: &LabelMask, path: &Path) -> Result<()> {
    let bytes = encode_mask_png(mask)?;
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

/// Writes every frame of `seq` into `dir` as `frame_NNNN.png`.
pub fn write_mask_sequence(seq: &FrameSequence, dir: &Path) -> Result<()> {
    for (i, mask) in seq.frames().iter().enumerate() {
        write_mask_png(mask, &dir.join(mask_file_name(i)))?;
    }
    Ok(())
}

fn encode_png(width: u32, height: u32, color: png::ColorType, data: &[u8]) -> Result<Vec<u8>> {
    if width == 0 || height == 0 {
        return Err(Error::InvalidParameter(format!(
            "cannot encode a {width}x{height} image"
        )));
    }
    let mut out = Vec::new();
    {
        let mut encoder = png::Encoder::new(&mut out, width, height);
        encoder.set_color(color);
        encoder.set_depth(png::BitDepth::Eight);
        encoder.set_compression(png::Compression::Balanced);
        encoder.set_filter(png::Filter::Paeth);
        let mut writer = encoder.write_header()?;
        writer.write_image_data(data)?;
        writer.finish()?;
    }
    Ok(out)
}

/// Encodes an RGBA raster as an 8-bit RGBA PNG. Output bytes depend only on
/// the raster contents.
pub fn encode_rgba_png(image: &RasterRgba) -> Result<Vec<u8>> {
    encode_png(
        image.width(),
        image.height(),
        png::ColorType::Rgba,
        image.as_bytes(),
    )
}

pub fn write_frame_png(image: &RasterRgba, path: &Path) -> Result<()> {
    let bytes = encode_rgba_png(image)?;
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

/// Reads an 8-bit RGBA PNG back into a raster.
pub fn read_rgba_png(path: &Path) -> Result<RasterRgba> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let decoder = png::Decoder::new(BufReader::new(file));
    let mut reader = decoder.read_info().map_err(|source| Error::PngDecode {
        path: path.to_path_buf(),
        source,
    })?;
    let (color, depth) = reader.output_color_type();
    if color != png::ColorType::Rgba || depth != png::BitDepth::Eight {
        return Err(Error::UnsupportedFormat {
            path: path.to_path_buf(),
            detail: format!("{color:?} at {depth:?}, expected 8-bit RGBA"),
        });
    }
    let mut buf = vec![0; reader.output_buffer_size().unwrap_or(0)];
    let info = reader
        .next_frame(&mut buf)
        .map_err(|source| Error::PngDecode {
            path: path.to_path_buf(),
            source,
        })?;
    let row_bytes = info.width as usize * 4;
    let mut pixels = Vec::with_capacity(row_bytes * info.height as usize);
    for row in buf.chunks(info.line_size).take(info.height as usize) {
        pixels.extend_from_slice(&row[..row_bytes]);
    }
    RasterRgba::from_bytes(info.width, info.height, pixels)
}

fn parse_json(text: &[u8]) -> Result<Value> {
    let s = std::str::from_utf8(text).map_err(|e| Error::Parse(format!("invalid UTF-8: {e}")))?;
    serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
}

/// Parses a manifest: a JSON array of `{"id": int, "name": string}` whose
/// order becomes the z-order.
pub fn parse_manifest(text: &[u8]) -> Result<LabelTable> {
    let value = parse_json(text)?;
    let items = value
        .as_array()
        .ok_or_else(|| Error::Parse("manifest must be a JSON array".to_string()))?;
    let mut entries = Vec::with_capacity(items.len());
    for (i, item) in items.iter().enumerate() {
        let id = item
            .get("id")
            .and_then(Value::as_i64)
            .ok_or_else(|| Error::Parse(format!("manifest entry {i}: missing integer \"id\"")))?;
        if !(1..=255).contains(&id) {
            return Err(Error::Parse(format!(
                "manifest entry {i}: id {id} outside 1..255"
            )));
        }
        let name = item
            .get("name")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Parse(format!("manifest entry {i}: missing string \"name\"")))?;
        entries.push(LabelEntry {
            id: id as u8,
            name: name.to_string(),
        });
    }
    LabelTable::new(entries)
}

/// Parses a palette: `{"<id>": "#RRGGBB", ..., "shadow": {"factor": f, "dx": i}}`.
pub fn parse_palette(text: &[u8]) -> Result<Palette> {
    let value = parse_json(text)?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Parse("palette must be a JSON object".to_string()))?;
    let mut palette = Palette::default();
    for (key, v) in obj {
        if key == "shadow" {
            let shadow = v
                .as_object()
                .ok_or_else(|| Error::Parse("\"shadow\" must be an object".to_string()))?;
            if let Some(f) = shadow.get("factor") {
                let f = f
                    .as_f64()
                    .filter(|f| (0.0..=1.0).contains(f))
                    .ok_or_else(|| Error::Parse("shadow factor must be a number in 0..1".into()))?;
                palette.shadow_factor = f;
            }
            if let Some(dx) = shadow.get("dx") {
                let dx = dx
                    .as_i64()
                    .and_then(|d| i32::try_from(d).ok())
                    .ok_or_else(|| Error::Parse("shadow dx must be an integer".into()))?;
                palette.shadow_dx = dx;
            }
            continue;
        }
        let id: u8 = key
            .parse()
            .ok()
            .filter(|&id| id != 0)
            .ok_or_else(|| Error::Parse(format!("palette key {key:?} is not a label id 1..255")))?;
        let hex = v
            .as_str()
            .ok_or_else(|| Error::Parse(format!("palette entry {key}: expected a hex string")))?;
        palette.colors.insert(id, Rgba::from_hex(hex)?);
    }
    Ok(palette)
}

/// Landmark file contents with per-frame problems collected rather than
/// raised. Frames with problems are left out of `sets`.
#[derive(Debug, Default)]
pub struct LandmarkParse {
    pub sets: BTreeMap<usize, LandmarkSet>,
    /// (frame, message) pairs, in frame order.
    pub issues: Vec<(usize, String)>,
}

/// Parses `landmarks.json`, collecting per-frame problems. Only a
/// malformed document is an error.
pub fn parse_landmarks_lenient(text: &[u8]) -> Result<LandmarkParse> {
    let value = parse_json(text)?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Parse("landmarks must be a JSON object".to_string()))?;
    let mut frames: Vec<(usize, &Value)> = Vec::with_capacity(obj.len());
    for (key, v) in obj {
        let frame = key
            .parse::<usize>()
            .map_err(|_| Error::Parse(format!("landmark key {key:?} is not a frame index")))?;
        frames.push((frame, v));
    }
    frames.sort_by_key(|&(f, _)| f);

    let mut out = LandmarkParse::default();
    for (frame, v) in frames {
        match parse_landmark_points(v).and_then(|pts| LandmarkSet::new(&pts)) {
            Ok(set) => {
                out.sets.insert(frame, set);
            }
            Err(e) => out.issues.push((frame, format!("frame {frame}: {e}"))),
        }
    }
    Ok(out)
}

fn parse_landmark_points(v: &Value) -> Result<Vec<[f64; 2]>> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Validation("expected an array of [x, y] pairs".to_string()))?;
    arr.iter()
        .map(|p| match p.as_array().map(Vec::as_slice) {
            Some([x, y]) => match (x.as_f64(), y.as_f64()) {
                (Some(x), Some(y)) => Ok([x, y]),
                _ => Err(Error::Validation("landmark coordinates must be numbers".into())),
            },
            _ => Err(Error::Validation("each landmark must be an [x, y] pair".into())),
        })
        .collect()
}

/// Parses `landmarks.json` into a frame-index map. Any malformed frame is an
/// error naming that frame.
pub fn load_landmarks(text: &[u8]) -> Result<BTreeMap<usize, LandmarkSet>> {
    let parsed = parse_landmarks_lenient(text)?;
    match parsed.issues.into_iter().next() {
        Some((_, issue)) => Err(Error::Validation(issue)),
        None => Ok(parsed.sets),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(n: usize) -> String {
        let v: Vec<String> = (0..n).map(|i| format!("[{i},{}]", i + 2)).collect();
        format!("[{}]", v.join(","))
    }

    #[test]
    fn manifest_keeps_order() {
        let t = parse_manifest(br#"[{"id":1,"name":"hair"},{"id":2,"name":"skin"}]"#).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.entries()[0].name, "hair");
        assert_eq!(t.entries()[1].name, "skin");
        let mut ls = [2, 9, 1];
        t.z_sort(&mut ls);
        assert_eq!(ls, [1, 2, 9]);
    }

    #[test]
    fn manifest_rejects_bad_ids() {
        assert!(parse_manifest(br#"[{"id":1,"name":"a"},{"id":1,"name":"b"}]"#).is_err());
        assert!(parse_manifest(br#"[{"id":1,"name":"a"},{"id":2,"name":"a"}]"#).is_err());
        assert!(parse_manifest(br#"[{"id":0,"name":"bg"}]"#).is_err());
        assert!(parse_manifest(br#"[{"id":256,"name":"x"}]"#).is_err());
        assert!(parse_manifest(br#"{"id":1}"#).is_err());
    }

    #[test]
    fn palette_hex_and_shadow() {
        let p = parse_palette(br##"{"1":"#20B060"}"##).unwrap();
        assert_eq!(p.color(1), Some(Rgba([32, 176, 96, 255])));
        assert_eq!(p.shadow_factor, 0.5);
        assert_eq!(p.shadow_dx, 8);

        let p = parse_palette(br##"{"1":"#20B060","shadow":{"factor":0.6,"dx":-4}}"##).unwrap();
        assert_eq!(p.shadow_factor, 0.6);
        assert_eq!(p.shadow_dx, -4);

        assert!(parse_palette(br##"{"1":"#XYZ"}"##).is_err());
        assert!(parse_palette(br##"{"1":"20B060"}"##).is_err());
        assert!(parse_palette(br##"{"0":"#20B060"}"##).is_err());
        assert_eq!(
            parse_palette(br##"{"3":"#01020380"}"##).unwrap().color(3),
            Some(Rgba([1, 2, 3, 128]))
        );
    }

    #[test]
    fn landmarks_parse() {
        let text = format!("{{\"0\": {}}}", pairs(68));
        let m = load_landmarks(text.as_bytes()).unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(m[&0].points()[5], [5.0, 7.0]);

        assert!(load_landmarks(b"{}").unwrap().is_empty());

        let text = format!("{{\"0\": {}}}", pairs(67));
        let err = load_landmarks(text.as_bytes()).unwrap_err();
        assert_eq!(err.to_string(), "frame 0: expected 68 landmarks, got 67");
    }

    #[test]
    fn frame_index_parsing() {
        assert_eq!(parse_frame_index("frame_0000.png"), Some(0));
        assert_eq!(parse_frame_index("frame_0123.png"), Some(123));
        assert_eq!(parse_frame_index("frame_.png"), None);
        assert_eq!(parse_frame_index("frame_0001.jpg"), None);
        assert_eq!(parse_frame_index("out_0001.png"), None);
    }

    #[test]
    fn zero_sized_png_rejected() {
        let img = RasterRgba::new(0, 0);
        assert!(encode_rgba_png(&img).is_err());
    }
}
