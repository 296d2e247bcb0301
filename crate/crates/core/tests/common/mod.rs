#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};

use lester::contours::Bitmap;
use lester::maskio::{write_mask_png, LabelMask};
use rand::Rng;

/// Random binary mask mixing salt noise with filled rectangles and discs.
pub fn random_bitmap(rng: &mut impl Rng, w: u32, h: u32) -> Bitmap {
    let mut bm = Bitmap::new(w, h);
    let density: f64 = rng.gen_range(0.0..0.6);
    for y in 0..h {
        for x in 0..w {
            if rng.gen_bool(density * 0.5) {
                bm.set(x, y, true);
            }
        }
    }
    for _ in 0..rng.gen_range(0..6) {
        let (x0, y0) = (rng.gen_range(0..w), rng.gen_range(0..h));
        let (rw, rh) = (rng.gen_range(1..=w / 2), rng.gen_range(1..=h / 2));
        let value = rng.gen_bool(0.7);
        if rng.gen_bool(0.5) {
            for y in y0..(y0 + rh).min(h) {
                for x in x0..(x0 + rw).min(w) {
                    bm.set(x, y, value);
                }
            }
        } else {
            let r = (rw.min(rh) as i64).max(1);
            for y in 0..h {
                for x in 0..w {
                    let (dx, dy) = (x as i64 - x0 as i64, y as i64 - y0 as i64);
                    if dx * dx + dy * dy <= r * r {
                        bm.set(x, y, value);
                    }
                }
            }
        }
    }
    bm
}

pub fn disc(cx: f64, cy: f64, r: f64) -> impl Fn(u32, u32) -> bool {
    move |x, y| {
        let (dx, dy) = (x as f64 + 0.5 - cx, y as f64 + 0.5 - cy);
        dx * dx + dy * dy <= r * r
    }
}

pub fn rect(x0: u32, y0: u32, x1: u32, y1: u32) -> impl Fn(u32, u32) -> bool {
    move |x, y| (x0..x1).contains(&x) && (y0..y1).contains(&y)
}

/// A three-part figure (body, head, eye) drifting right by `t` pixels,
/// labeled with ids `[body, head, eye]`.
pub fn figure_frame(w: u32, h: u32, t: u32, ids: [u8; 3]) -> LabelMask {
    let body = rect(20 + t, 50, 52 + t, 90);
    let head = disc(36.0 + t as f64, 32.0, 16.0);
    let eye = disc(40.0 + t as f64, 28.0, 4.0);
    LabelMask::from_fn(w, h, |x, y| {
        if eye(x, y) {
            ids[2]
        } else if head(x, y) {
            ids[1]
        } else if body(x, y) {
            ids[0]
        } else {
            0
        }
    })
}

pub const MANIFEST: &str =
    r#"[{"id": 1, "name": "body"}, {"id": 2, "name": "head"}, {"id": 3, "name": "eye"}]"#;
pub const PALETTE: &str = r##"{"1": "#3060C0", "2": "#F0C8A0", "3": "#202020"}"##;

pub struct Clip {
    pub dir: tempfile::TempDir,
}

impl Clip {
    /// Writes masks, manifest and palette for `frames` into a fresh temp dir.
    pub fn new(frames: &[LabelMask], manifest: &str, palette: &str) -> Clip {
        let dir = tempfile::tempdir().unwrap();
        let masks = dir.path().join("masks");
        fs::create_dir_all(&masks).unwrap();
        for (i, f) in frames.iter().enumerate() {
            write_mask_png(f, &masks.join(format!("frame_{i:04}.png"))).unwrap();
        }
        fs::write(dir.path().join("manifest.json"), manifest).unwrap();
        fs::write(dir.path().join("palette.json"), palette).unwrap();
        Clip { dir }
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    pub fn masks(&self) -> PathBuf {
        self.path("masks")
    }

    pub fn manifest(&self) -> PathBuf {
        self.path("manifest.json")
    }

    pub fn palette(&self) -> PathBuf {
        self.path("palette.json")
    }

    pub fn write(&self, name: &str, contents: &str) -> PathBuf {
        let p = self.path(name);
        fs::write(&p, contents).unwrap();
        p
    }
}

/// JSON for a landmark file with the given per-frame point counts.
pub fn landmarks_json(frames: &[(usize, Vec<[f64; 2]>)]) -> String {
    let body: Vec<String> = frames
        .iter()
        .map(|(i, pts)| {
            let pts: Vec<String> = pts.iter().map(|p| format!("[{}, {}]", p[0], p[1])).collect();
            format!("\"{i}\": [{}]", pts.join(", "))
        })
        .collect();
    format!("{{{}}}", body.join(", "))
}

/// A plausible face layout for landmarks on the figure head.
pub fn face_landmarks(cx: f64, cy: f64) -> Vec<[f64; 2]> {
    (0..68)
        .map(|i| {
            let a = i as f64 * 0.37;
            let r = 4.0 + (i % 7) as f64 * 1.5;
            [cx + r * a.cos(), cy + r * a.sin()]
        })
        .collect()
}

pub fn png_files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "png"))
        .map(|p| {
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                fs::read(&p).unwrap(),
            )
        })
        .collect();
    out.sort();
    out
}
