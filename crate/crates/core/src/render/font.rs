//! 5x7 bitmap digits for the id guide.

pub const GLYPH_WIDTH: i64 = 5;
pub const GLYPH_HEIGHT: i64 = 7;

// One byte per row, the low five bits left to right (bit 4 = leftmost).
const DIGITS: [[u8; 7]; 10] = [
    [0x0E, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0E],
    [0x04, 0x0C, 0x04, 0x04, 0x04, 0x04, 0x0E],
    [0x0E, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1F],
    [0x1F, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0E],
    [0x02, 0x06, 0x0A, 0x12, 0x1F, 0x02, 0x02],
    [0x1F, 0x10, 0x1E, 0x01, 0x01, 0x11, 0x0E],
    [0x06, 0x08, 0x10, 0x1E, 0x11, 0x11, 0x0E],
    [0x1F, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08],
    [0x0E, 0x11, 0x11, 0x0E, 0x11, 0x11, 0x0E],
    [0x0E, 0x11, 0x11, 0x0F, 0x01, 0x02, 0x0C],
];

/// Whether pixel (`col`, `row`) of `digit`'s glyph is inked.
pub fn glyph_bit(digit: u8, col: i64, row: i64) -> bool {
    if !(0..GLYPH_WIDTH).contains(&col) || !(0..GLYPH_HEIGHT).contains(&row) {
        return false;
    }
    DIGITS[digit as usize][row as usize] >> (GLYPH_WIDTH - 1 - col) & 1 == 1
}

/// Inked pixel offsets of `value` written in decimal, relative to the
/// top-left of the text block, with one blank column between digits.
pub fn text_pixels(value: u32) -> (Vec<(i64, i64)>, i64, i64) {
    let digits: Vec<u8> = value.to_string().bytes().map(|b| b - b'0').collect();
    let width = digits.len() as i64 * (GLYPH_WIDTH + 1) - 1;
    let mut px = Vec::new();
    for (i, &d) in digits.iter().enumerate() {
        let x0 = i as i64 * (GLYPH_WIDTH + 1);
        for row in 0..GLYPH_HEIGHT {
            for col in 0..GLYPH_WIDTH {
                if glyph_bit(d, col, row) {
                    px.push((x0 + col, row));
                }
            }
        }
    }
    (px, width, GLYPH_HEIGHT)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn glyphs_are_distinct_and_nonempty() {
        for a in 0..10u8 {
            let ink = |d| {
                (0..7)
                    .flat_map(|r| (0..5).map(move |c| (c, r)))
                    .filter(|&(c, r)| glyph_bit(d, c, r))
                    .collect::<Vec<_>>()
            };
            assert!(!ink(a).is_empty());
            for b in a + 1..10 {
                assert_ne!(ink(a), ink(b), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn two_digit_text_width() {
        let (_, w, h) = text_pixels(12);
        assert_eq!((w, h), (11, 7));
    }
}
