use serde::{Deserialize, Serialize};

use super::canvas::Color;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ColorMap {
    /// Perceptually monotone dark-purple-to-yellow ramp.
    Viridis,
    Grayscale,
}

// Viridis control points, linearly interpolated.
const VIRIDIS: [(f64, [f64; 3]); 5] = [
    (0.00, [68.0, 1.0, 84.0]),
    (0.25, [59.0, 82.0, 139.0]),
    (0.50, [33.0, 145.0, 140.0]),
    (0.75, [94.0, 201.0, 98.0]),
    (1.00, [253.0, 231.0, 37.0]),
];

impl ColorMap {
    /// Map t in [0, 1] to a color; out-of-range values are clamped.
    pub fn color(self, t: f64) -> Color {
        let t = t.clamp(0.0, 1.0);
        match self {
            ColorMap::Grayscale => {
                let v = (t * 255.0).round() as u8;
                image::Rgb([v, v, v])
            }
            ColorMap::Viridis => {
                for window in VIRIDIS.windows(2) {
                    let (t0, c0) = window[0];
                    let (t1, c1) = window[1];
                    if t <= t1 {
                        let f = (t - t0) / (t1 - t0);
                        let mix = |a: f64, b: f64| (a + f * (b - a)).round() as u8;
                        return image::Rgb([
                            mix(c0[0], c1[0]),
                            mix(c0[1], c1[1]),
                            mix(c0[2], c1[2]),
                        ]);
                    }
                }
                image::Rgb([253, 231, 37])
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints() {
        assert_eq!(ColorMap::Viridis.color(0.0), image::Rgb([68, 1, 84]));
        assert_eq!(ColorMap::Viridis.color(1.0), image::Rgb([253, 231, 37]));
        assert_eq!(ColorMap::Grayscale.color(0.0), image::Rgb([0, 0, 0]));
        assert_eq!(ColorMap::Grayscale.color(1.0), image::Rgb([255, 255, 255]));
    }

    #[test]
    fn luminance_monotone() {
        let lum = |c: Color| 0.299 * c[0] as f64 + 0.587 * c[1] as f64 + 0.114 * c[2] as f64;
        let mut prev = -1.0;
        for i in 0..=100 {
            let l = lum(ColorMap::Viridis.color(i as f64 / 100.0));
            assert!(l >= prev - 1.0, "luminance dipped at {i}");
            prev = l;
        }
    }
}
