//! Tonal centroid features: 6-d projection of chroma onto the circles of
//! fifths, minor thirds and major thirds.

use crate::mat::Mat;

/// Projection matrix row weights: fifths and minor thirds at radius 1,
/// major thirds at radius 0.5.
fn transform_column(p: usize) -> [f64; 6] {
    let p = p as f64;
    let fifths = 7.0 * std::f64::consts::PI * p / 6.0;
    let minor = 3.0 * std::f64::consts::PI * p / 2.0;
    let major = 2.0 * std::f64::consts::PI * p / 3.0;
    [
        fifths.sin(),
        fifths.cos(),
        minor.sin(),
        minor.cos(),
        0.5 * major.sin(),
        0.5 * major.cos(),
    ]
}

/// Tonnetz matrix (6 x frames) from a chroma matrix (12 x frames). Each
/// chroma column is L1-normalized first; all-zero columns map to zero.
pub fn tonnetz(chroma: &Mat) -> Mat {
    assert_eq!(chroma.rows, 12, "chroma must have 12 pitch classes");
    let mut out = Mat::zeros(6, chroma.cols);
    for t in 0..chroma.cols {
        let norm: f64 = (0..12).map(|p| chroma.get(p, t).abs()).sum();
        if norm == 0.0 {
            continue;
        }
        for p in 0..12 {
            let c = chroma.get(p, t) / norm;
            if c == 0.0 {
                continue;
            }
            let col = transform_column(p);
            for (d, &w) in col.iter().enumerate() {
                let v = out.get(d, t) + w * c;
                out.set(d, t, v);
            }
        }
    }
    out
}
