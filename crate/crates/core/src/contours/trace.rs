//! Border following with outer/hole hierarchy.
//!
//! Follows the raster-scan scheme of Suzuki and Abe: the image is scanned
//! row by row, the first untraced transition between background and
//! foreground starts a new border, and the last border crossed on the
//! current row decides the new border's parent. Foreground is 8-connected
//! and background 4-connected.
//!
//! Borders are walked along pixel cracks rather than through pixel centers,
//! keeping the foreground on the left of the walk direction (with y up).
//! Each vertical crack records which border owns it, which is how the
//! scan recognises borders that have already been traced.

use super::{Bitmap, Contour, Point, Role};

/// Traces every outer and hole border of `sub` in raster discovery order.
pub fn trace_contours(sub: &Bitmap) -> Vec<Contour> {
    let w = sub.width() as i64;
    let h = sub.height() as i64;
    let stride = (w + 1) as usize;
    // Owner of the vertical crack left of pixel (x, y), 1-based; 0 = untraced.
    let mut owner = vec![0u32; stride * h as usize];
    let mut contours: Vec<Contour> = Vec::new();

    for y in 0..h {
        let mut last: Option<usize> = None;
        let mut prev = false;
        for x in 0..=w {
            let cur = x < w && sub.get(x as u32, y as u32);
            if cur != prev {
                let o = owner[y as usize * stride + x as usize];
                if o != 0 {
                    last = Some(o as usize - 1);
                } else {
                    let role = if cur { Role::Outer } else { Role::Hole };
                    let parent = last.and_then(|b| {
                        match (role, contours[b].role) {
                            (Role::Outer, Role::Outer) | (Role::Hole, Role::Hole) => {
                                contours[b].parent
                            }
                            _ => Some(b),
                        }
                    });
                    let index = contours.len();
                    let vertices = follow(sub, x, y, role, index as u32 + 1, &mut owner);
                    contours.push(Contour::new(vertices, role, parent));
                    last = Some(index);
                }
            }
            prev = cur;
        }
    }
    contours
}

type Dir = (i64, i64);

fn follow(sub: &Bitmap, x: i64, y: i64, role: Role, id: u32, owner: &mut [u32]) -> Vec<Point> {
    let stride = sub.width() as usize + 1;
    let start = (x, y);
    // Outer borders start at the top-left corner of their first pixel heading
    // right; holes start at the top-left corner of their first pixel heading
    // down along the crack shared with the foreground pixel to its left.
    let first: Dir = match role {
        Role::Outer => (1, 0),
        Role::Hole => (0, 1),
    };

    let mut vertices = Vec::new();
    let mut pos = start;
    let mut dir = first;
    loop {
        vertices.push(Point::new(pos.0 as i32, pos.1 as i32));
        if dir.0 == 0 {
            let row = pos.1.min(pos.1 + dir.1);
            owner[row as usize * stride + pos.0 as usize] = id;
        }
        pos = (pos.0 + dir.0, pos.1 + dir.1);
        let next = turn(sub, pos, dir);
        if pos == start && next == first {
            break;
        }
        dir = next;
    }
    vertices
}

/// Next direction at corner `at` after arriving along `dir`.
fn turn(sub: &Bitmap, at: (i64, i64), dir: Dir) -> Dir {
    let left: Dir = (-dir.1, dir.0);
    let right: Dir = (dir.1, -dir.0);
    let ahead_left = pixel_at(sub, at, dir, left);
    let ahead_right = pixel_at(sub, at, dir, right);
    if ahead_right {
        // Also covers the diagonal case (ahead-left clear): foreground pixels
        // touching at a corner belong to the same region.
        right
    } else if ahead_left {
        dir
    } else {
        left
    }
}

/// The pixel adjacent to corner `at` that lies forward along `dir` and to
/// the `side`.
fn pixel_at(sub: &Bitmap, at: (i64, i64), dir: Dir, side: Dir) -> bool {
    let px = (2 * at.0 + dir.0 + side.0 - 1) / 2;
    let py = (2 * at.1 + dir.1 + side.1 - 1) / 2;
    sub.get_signed(px, py)
}
