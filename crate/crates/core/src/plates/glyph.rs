//! 5x7 blocky digit font.

const ROWS: usize = 7;
const COLS: usize = 5;

#[rustfmt::skip]
const DIGITS: [[u8; ROWS]; 10] = [
    [0b01110, 0b10001, 0b10011, 0b10101, 0b11001, 0b10001, 0b01110],
    [0b00100, 0b01100, 0b00100, 0b00100, 0b00100, 0b00100, 0b01110],
    [0b01110, 0b10001, 0b00001, 0b00010, 0b00100, 0b01000, 0b11111],
    [0b11111, 0b00010, 0b00100, 0b00010, 0b00001, 0b10001, 0b01110],
    [0b00010, 0b00110, 0b01010, 0b10010, 0b11111, 0b00010, 0b00010],
    [0b11111, 0b10000, 0b11110, 0b00001, 0b00001, 0b10001, 0b01110],
    [0b00110, 0b01000, 0b10000, 0b11110, 0b10001, 0b10001, 0b01110],
    [0b11111, 0b00001, 0b00010, 0b00100, 0b01000, 0b01000, 0b01000],
    [0b01110, 0b10001, 0b10001, 0b01110, 0b10001, 0b10001, 0b01110],
    [0b01110, 0b10001, 0b10001, 0b01111, 0b00001, 0b00010, 0b01100],
];

/// A digit scaled into a box centered on the plate.
#[derive(Debug, Clone, Copy)]
pub struct Glyph {
    digit: u8,
    left: f64,
    top: f64,
    cell: f64,
}

impl Glyph {
    /// Fits the glyph so its height is `height` px, centered at (`cx`, `cy`).
    pub fn centered(digit: u8, cx: f64, cy: f64, height: f64) -> Self {
        assert!(digit < 10, "digit out of range");
        let cell = height / ROWS as f64;
        Glyph {
            digit,
            left: cx - cell * COLS as f64 / 2.0,
            top: cy - height / 2.0,
            cell,
        }
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        let cx = (x - self.left) / self.cell;
        let cy = (y - self.top) / self.cell;
        if cx < 0.0 || cy < 0.0 {
            return false;
        }
        let (col, row) = (cx as usize, cy as usize);
        if col >= COLS || row >= ROWS {
            return false;
        }
        DIGITS[self.digit as usize][row] & (1 << (COLS - 1 - col)) != 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_has_a_stem() {
        let g = Glyph::centered(1, 35.0, 35.0, 70.0);
        // cell = 10, left = 10, top = 0; the stem is column 2
        assert!(g.contains(35.0, 35.0));
        assert!(!g.contains(15.0, 35.0));
        assert!(!g.contains(-1.0, 35.0));
        assert!(!g.contains(35.0, 75.0));
    }

    #[test]
    fn every_digit_has_ink() {
        for rows in DIGITS {
            assert!(rows.iter().any(|&r| r != 0));
            assert!(rows.iter().all(|&r| r < 32));
        }
    }
}
