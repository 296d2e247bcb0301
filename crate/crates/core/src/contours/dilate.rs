use super::{Bitmap, SubMask};

// 4x4 box anchored at element (1, 1): output (x, y) is set when any input
// pixel in x-2..=x+1, y-2..=y+1 is set.
const BEFORE: usize = 2;
const AFTER: usize = 1;

/// Dilates a submask with an all-ones 4x4 structuring element. Pixels
/// outside the frame count as unset.
pub fn dilate(sub: &SubMask) -> SubMask {
    SubMask {
        label_id: sub.label_id,
        bitmap: dilate_bitmap(&sub.bitmap),
    }
}

pub(crate) fn dilate_bitmap(src: &Bitmap) -> Bitmap {
    let (w, h) = (src.width() as usize, src.height() as usize);
    let mut rows = vec![false; w * h];
    let mut prefix = vec![0u32; w.max(h) + 1];

    for y in 0..h {
        let line = &src.bits()[y * w..(y + 1) * w];
        window_any(line.iter().copied(), w, &mut prefix, |x, v| rows[y * w + x] = v);
    }

    let mut out = Bitmap::new(src.width(), src.height());
    for x in 0..w {
        let column = (0..h).map(|y| rows[y * w + x]);
        window_any(column, h, &mut prefix, |y, v| out.bits[y * w + x] = v);
    }
    out
}

fn window_any(
    line: impl Iterator<Item = bool>,
    len: usize,
    prefix: &mut [u32],
    mut put: impl FnMut(usize, bool),
) {
    prefix[0] = 0;
    for (i, b) in line.enumerate() {
        prefix[i + 1] = prefix[i] + b as u32;
    }
    for i in 0..len {
        let lo = i.saturating_sub(BEFORE);
        let hi = (i + AFTER + 1).min(len);
        put(i, prefix[hi] > prefix[lo]);
    }
}
