//! Minimal raster canvas over an RGB buffer with Bresenham lines and the
//! built-in bitmap font. PNG encoding carries no timestamps or ancillary
//! metadata, so identical draws produce identical bytes.

use image::codecs::png::PngEncoder;
use image::{ExtendedColorType, ImageEncoder, Rgb, RgbImage};

use super::font::{glyph, GLYPH_ADVANCE, GLYPH_HEIGHT, GLYPH_WIDTH};

pub type Color = Rgb<u8>;

pub const WHITE: Color = Rgb([255, 255, 255]);
pub const BLACK: Color = Rgb([0, 0, 0]);
pub const GRID_GRAY: Color = Rgb([200, 200, 200]);
/// Reserved "no data" color, distinct from any colormap output.
pub const MISSING_DATA: Color = Rgb([235, 235, 235]);

pub struct Canvas {
    img: RgbImage,
}

impl Canvas {
    pub fn new(width: u32, height: u32, background: Color) -> Self {
        let mut img = RgbImage::new(width, height);
        for p in img.pixels_mut() {
            *p = background;
        }
        Self { img }
    }

    pub fn width(&self) -> u32 {
        self.img.width()
    }

    pub fn height(&self) -> u32 {
        self.img.height()
    }

    pub fn set(&mut self, x: i64, y: i64, color: Color) {
        if x >= 0 && y >= 0 && (x as u32) < self.img.width() && (y as u32) < self.img.height() {
            self.img.put_pixel(x as u32, y as u32, color);
        }
    }

    pub fn pixel(&self, x: u32, y: u32) -> Color {
        *self.img.get_pixel(x, y)
    }

    /// Fill [x0, x1) x [y0, y1), clipped to the canvas.
    pub fn fill_rect(&mut self, x0: i64, y0: i64, x1: i64, y1: i64, color: Color) {
        let xs = x0.max(0);
        let ys = y0.max(0);
        let xe = x1.min(self.img.width() as i64);
        let ye = y1.min(self.img.height() as i64);
        for y in ys..ye {
            for x in xs..xe {
                self.img.put_pixel(x as u32, y as u32, color);
            }
        }
    }

    pub fn line(&mut self, x0: i64, y0: i64, x1: i64, y1: i64, color: Color) {
        let (mut x, mut y) = (x0, y0);
        let dx = (x1 - x0).abs();
        let dy = -(y1 - y0).abs();
        let sx = if x0 < x1 { 1 } else { -1 };
        let sy = if y0 < y1 { 1 } else { -1 };
        let mut err = dx + dy;
        loop {
            self.set(x, y, color);
            if x == x1 && y == y1 {
                break;
            }
            let e2 = 2 * err;
            if e2 >= dy {
                err += dy;
                x += sx;
            }
            if e2 <= dx {
                err += dx;
                y += sy;
            }
        }
    }

    /// Draw text with its top-left corner at (x, y).
    pub fn text(&mut self, x: i64, y: i64, s: &str, color: Color, scale: u32) {
        let scale = scale.max(1) as i64;
        let mut cursor = x;
        for c in s.chars() {
            let rows = glyph(c);
            for (row, bits) in rows.iter().enumerate() {
                for col in 0..GLYPH_WIDTH {
                    if bits & (1 << (GLYPH_WIDTH - 1 - col)) != 0 {
                        let px = cursor + col as i64 * scale;
                        let py = y + row as i64 * scale;
                        self.fill_rect(px, py, px + scale, py + scale, color);
                    }
                }
            }
            cursor += GLYPH_ADVANCE as i64 * scale;
        }
    }

    pub fn text_width(s: &str, scale: u32) -> i64 {
        s.chars().count() as i64 * GLYPH_ADVANCE as i64 * scale.max(1) as i64
    }

    pub fn text_height(scale: u32) -> i64 {
        GLYPH_HEIGHT as i64 * scale.max(1) as i64
    }

    pub fn to_png(&self) -> Vec<u8> {
        let mut out = Vec::new();
        PngEncoder::new(&mut out)
            .write_image(
                self.img.as_raw(),
                self.img.width(),
                self.img.height(),
                ExtendedColorType::Rgb8,
            )
            .expect("png encoding of an in-memory buffer");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn png_encoding_is_deterministic() {
        let draw = || {
            let mut c = Canvas::new(64, 48, WHITE);
            c.line(0, 0, 63, 47, BLACK);
            c.text(2, 2, "AB 12", BLACK, 1);
            c.to_png()
        };
        assert_eq!(draw(), draw());
    }

    #[test]
    fn dimensions_match() {
        let c = Canvas::new(123, 45, WHITE);
        assert_eq!(c.width(), 123);
        assert_eq!(c.height(), 45);
        let png = c.to_png();
        let decoded = image::load_from_memory(&png).unwrap();
        assert_eq!(decoded.width(), 123);
        assert_eq!(decoded.height(), 45);
    }

    #[test]
    fn text_marks_pixels() {
        let mut c = Canvas::new(32, 16, WHITE);
        c.text(0, 0, "1", BLACK, 1);
        let dark = (0..32)
            .flat_map(|x| (0..16).map(move |y| (x, y)))
            .filter(|&(x, y)| c.pixel(x, y) == BLACK)
            .count();
        assert!(dark > 0);
    }
}
