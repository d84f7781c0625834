//! Fixed-size RGB frame buffer and the small drawing kit the renderers use.

use std::fmt;

use serde::{Deserialize, Serialize};

pub const FRAME_HEIGHT: usize = 210;
pub const FRAME_WIDTH: usize = 160;
pub const FRAME_CHANNELS: usize = 3;
pub const FRAME_BYTES: usize = FRAME_HEIGHT * FRAME_WIDTH * FRAME_CHANNELS;

pub type Rgb = [u8; 3];

pub const BLACK: Rgb = [0, 0, 0];

/// Inclusive pixel rectangle, `rows top..=bottom`, `cols left..=right`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rect {
    pub top: usize,
    pub bottom: usize,
    pub left: usize,
    pub right: usize,
}

impl Rect {
    pub const fn new(top: usize, bottom: usize, left: usize, right: usize) -> Self {
        Self { top, bottom, left, right }
    }

    /// Full-width band of rows.
    pub const fn rows(top: usize, bottom: usize) -> Self {
        Self::new(top, bottom, 0, FRAME_WIDTH - 1)
    }

    /// Full-height band of columns.
    pub const fn cols(left: usize, right: usize) -> Self {
        Self::new(0, FRAME_HEIGHT - 1, left, right)
    }

    pub const fn full() -> Self {
        Self::new(0, FRAME_HEIGHT - 1, 0, FRAME_WIDTH - 1)
    }

    #[inline]
    pub fn contains(&self, row: usize, col: usize) -> bool {
        (self.top..=self.bottom).contains(&row) && (self.left..=self.right).contains(&col)
    }

    pub fn area(&self) -> usize {
        (self.bottom - self.top + 1) * (self.right - self.left + 1)
    }

    pub fn within_frame(&self) -> bool {
        self.top <= self.bottom && self.left <= self.right && self.bottom < FRAME_HEIGHT && self.right < FRAME_WIDTH
    }
}

/// A 210×160 RGB image, row-major, 3 bytes per pixel.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Frame {
    pixels: Vec<u8>,
}

impl Default for Frame {
    fn default() -> Self {
        Self::black()
    }
}

impl fmt::Debug for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lit = self.pixels.chunks_exact(3).filter(|p| p != &BLACK).count();
        write!(f, "Frame({FRAME_HEIGHT}x{FRAME_WIDTH}, {lit} non-black)")
    }
}

impl Frame {
    pub fn black() -> Self {
        Self { pixels: vec![0; FRAME_BYTES] }
    }

    pub fn filled(color: Rgb) -> Self {
        Self { pixels: color.repeat(FRAME_HEIGHT * FRAME_WIDTH) }
    }

    /// Wrap a raw buffer. Returns `None` unless it is exactly `FRAME_BYTES` long.
    pub fn from_bytes(pixels: Vec<u8>) -> Option<Self> {
        (pixels.len() == FRAME_BYTES).then_some(Self { pixels })
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.pixels
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.pixels
    }

    #[inline]
    fn offset(row: usize, col: usize) -> usize {
        (row * FRAME_WIDTH + col) * FRAME_CHANNELS
    }

    #[inline]
    pub fn pixel(&self, row: usize, col: usize) -> Rgb {
        let o = Self::offset(row, col);
        [self.pixels[o], self.pixels[o + 1], self.pixels[o + 2]]
    }

    #[inline]
    pub fn set_pixel(&mut self, row: usize, col: usize, color: Rgb) {
        let o = Self::offset(row, col);
        self.pixels[o..o + 3].copy_from_slice(&color);
    }

    #[inline]
    pub fn is_black(&self, row: usize, col: usize) -> bool {
        self.pixel(row, col) == BLACK
    }

    /// Fill a rectangle, clipped to the frame.
    pub fn fill_rect(&mut self, rect: Rect, color: Rgb) {
        if rect.top >= FRAME_HEIGHT || rect.left >= FRAME_WIDTH {
            return;
        }
        let bottom = rect.bottom.min(FRAME_HEIGHT - 1);
        let right = rect.right.min(FRAME_WIDTH - 1);
        for row in rect.top..=bottom {
            let start = Self::offset(row, rect.left);
            let end = Self::offset(row, right) + 3;
            for px in self.pixels[start..end].chunks_exact_mut(3) {
                px.copy_from_slice(&color);
            }
        }
    }

    /// Count of non-black pixels inside `rect`.
    pub fn lit_in(&self, rect: Rect) -> usize {
        let mut n = 0;
        for row in rect.top..=rect.bottom {
            for col in rect.left..=rect.right {
                n += usize::from(!self.is_black(row, col));
            }
        }
        n
    }

    /// Coordinates `(row, col)` where `self` and `other` differ.
    pub fn differing_pixels(&self, other: &Frame) -> Vec<(usize, usize)> {
        self.pixels
            .chunks_exact(3)
            .zip(other.pixels.chunks_exact(3))
            .enumerate()
            .filter(|(_, (a, b))| a != b)
            .map(|(i, _)| (i / FRAME_WIDTH, i % FRAME_WIDTH))
            .collect()
    }

    /// Channel-wise maximum of two frames.
    pub fn channel_max(&self, other: &Frame) -> Frame {
        Frame { pixels: self.pixels.iter().zip(&other.pixels).map(|(a, b)| *a.max(b)).collect() }
    }

    /// Binary portable pixmap (P6) encoding.
    pub fn to_ppm(&self) -> Vec<u8> {
        let header = format!("P6\n{FRAME_WIDTH} {FRAME_HEIGHT}\n255\n");
        let mut out = Vec::with_capacity(header.len() + FRAME_BYTES);
        out.extend_from_slice(header.as_bytes());
        out.extend_from_slice(&self.pixels);
        out
    }

    /// RGBA copy with opaque alpha, the layout a canvas `ImageData` expects.
    pub fn to_rgba(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(FRAME_HEIGHT * FRAME_WIDTH * 4);
        for px in self.pixels.chunks_exact(3) {
            out.extend_from_slice(px);
            out.push(255);
        }
        out
    }
}

/// Glyph width and height before scaling.
pub const GLYPH_WIDTH: usize = 4;
pub const GLYPH_HEIGHT: usize = 7;
/// Scale factor the renderers draw text at.
pub const TEXT_SCALE: usize = 2;
/// Horizontal distance between consecutive glyph origins, scaled.
pub const GLYPH_ADVANCE: usize = GLYPH_WIDTH * TEXT_SCALE + 2;

/// 4×7 bitmaps, most significant of the low four bits is the leftmost pixel.
pub fn glyph(ch: char) -> Option<[u8; GLYPH_HEIGHT]> {
    Some(match ch {
        '0' => [0b0110, 0b1001, 0b1001, 0b1001, 0b1001, 0b1001, 0b0110],
        '1' => [0b0010, 0b0110, 0b0010, 0b0010, 0b0010, 0b0010, 0b0111],
        '2' => [0b0110, 0b1001, 0b0001, 0b0010, 0b0100, 0b1000, 0b1111],
        '3' => [0b1110, 0b0001, 0b0001, 0b0110, 0b0001, 0b0001, 0b1110],
        '4' => [0b1001, 0b1001, 0b1001, 0b1111, 0b0001, 0b0001, 0b0001],
        '5' => [0b1111, 0b1000, 0b1110, 0b0001, 0b0001, 0b1001, 0b0110],
        '6' => [0b0110, 0b1000, 0b1000, 0b1110, 0b1001, 0b1001, 0b0110],
        '7' => [0b1111, 0b0001, 0b0010, 0b0010, 0b0100, 0b0100, 0b0100],
        '8' => [0b0110, 0b1001, 0b1001, 0b0110, 0b1001, 0b1001, 0b0110],
        '9' => [0b0110, 0b1001, 0b1001, 0b0111, 0b0001, 0b0001, 0b0110],
        ':' => [0b0000, 0b0110, 0b0110, 0b0000, 0b0110, 0b0110, 0b0000],
        _ => return None,
    })
}

/// Draw `text` with its top-left corner at `(top, left)`. Unknown characters
/// (including spaces) advance the cursor without drawing.
pub fn draw_text(frame: &mut Frame, text: &str, top: usize, left: usize, color: Rgb) {
    for (i, ch) in text.chars().enumerate() {
        let Some(bits) = glyph(ch) else { continue };
        let origin = left + i * GLYPH_ADVANCE;
        for (gy, row_bits) in bits.iter().enumerate() {
            for gx in 0..GLYPH_WIDTH {
                if row_bits & (1 << (GLYPH_WIDTH - 1 - gx)) != 0 {
                    let r = top + gy * TEXT_SCALE;
                    let c = origin + gx * TEXT_SCALE;
                    frame.fill_rect(Rect::new(r, r + TEXT_SCALE - 1, c, c + TEXT_SCALE - 1), color);
                }
            }
        }
    }
}
