//! Deterministic SVG line plot of sweep results.

use std::collections::BTreeMap;

use crate::error::MetricError;
use crate::eval::sweep::{mean_curves, SweepPoint};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 30.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 60.0;

const PALETTE: [&str; 4] = ["#1f6fb2", "#d1495b", "#3a9a5c", "#8d6cab"];

/// Render one polyline per arm (mean AUROC over seeds against labelled
/// count). Identical input produces byte-identical SVG.
pub fn render_line_plot(points: &[SweepPoint]) -> Result<String, MetricError> {
    if points.is_empty() {
        return Err(MetricError::EmptyInput);
    }
    let curves = mean_curves(points);

    let mut arms: Vec<String> = curves.keys().map(|(arm, _)| arm.clone()).collect();
    arms.sort();
    arms.dedup();

    let xs: Vec<usize> = curves.keys().map(|&(_, c)| c).collect();
    let ys: Vec<f64> = curves.values().copied().collect();
    let (x_min, x_max) = (*xs.iter().min().unwrap(), *xs.iter().max().unwrap());
    let y_min = ys.iter().cloned().fold(f64::INFINITY, f64::min);
    let y_max = ys.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let (y_min, y_max) = if (y_max - y_min).abs() < 1e-12 { (y_min - 0.05, y_max + 0.05) } else { (y_min, y_max) };

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let x_of = |c: usize| {
        let t = if x_max == x_min { 0.5 } else { (c - x_min) as f64 / (x_max - x_min) as f64 };
        MARGIN_LEFT + t * plot_w
    };
    let y_of = |v: f64| {
        let t = (v - y_min) / (y_max - y_min);
        MARGIN_TOP + (1.0 - t) * plot_h
    };

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    // Axes.
    let x0 = MARGIN_LEFT;
    let y0 = HEIGHT - MARGIN_BOTTOM;
    svg.push_str(&format!(
        "<line x1=\"{x0:.2}\" y1=\"{y0:.2}\" x2=\"{:.2}\" y2=\"{y0:.2}\" stroke=\"black\"/>\n",
        WIDTH - MARGIN_RIGHT
    ));
    svg.push_str(&format!(
        "<line x1=\"{x0:.2}\" y1=\"{y0:.2}\" x2=\"{x0:.2}\" y2=\"{MARGIN_TOP:.2}\" stroke=\"black\"/>\n"
    ));
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-size=\"14\">labelled samples</text>\n",
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 15.0
    ));
    svg.push_str(&format!(
        "<text x=\"18\" y=\"{:.2}\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 18 {:.2})\">AUROC</text>\n",
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0
    ));
    // Range ticks.
    svg.push_str(&format!(
        "<text x=\"{x0:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-size=\"12\">{x_min}</text>\n",
        y0 + 18.0
    ));
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-size=\"12\">{x_max}</text>\n",
        WIDTH - MARGIN_RIGHT,
        y0 + 18.0
    ));
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\" font-size=\"12\">{y_min:.3}</text>\n",
        x0 - 6.0,
        y0 + 4.0
    ));
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\" font-size=\"12\">{y_max:.3}</text>\n",
        x0 - 6.0,
        MARGIN_TOP + 4.0
    ));

    for (i, arm) in arms.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let series: BTreeMap<usize, f64> = curves
            .iter()
            .filter(|((a, _), _)| a == arm)
            .map(|(&(_, c), &v)| (c, v))
            .collect();
        let coords: Vec<String> =
            series.iter().map(|(&c, &v)| format!("{:.2},{:.2}", x_of(c), y_of(v))).collect();
        svg.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"2\" points=\"{}\"/>\n",
            coords.join(" ")
        ));
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" fill=\"{color}\">{arm}</text>\n",
            WIDTH - MARGIN_RIGHT - 110.0,
            MARGIN_TOP + 16.0 * (i as f64 + 1.0)
        ));
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_points() -> Vec<SweepPoint> {
        let mut points = Vec::new();
        for &(arm, offset) in &[("ssl", 0.1), ("supervised", 0.0)] {
            for &count in &[4usize, 8, 16] {
                points.push(SweepPoint {
                    labelled_count: count,
                    seed: 1,
                    arm: arm.to_string(),
                    auroc: 0.6 + offset + count as f64 * 0.01,
                });
            }
        }
        points
    }

    #[test]
    fn one_polyline_per_arm() {
        let svg = render_line_plot(&sample_points()).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("labelled samples"));
        assert!(svg.contains("AUROC"));
    }

    #[test]
    fn byte_identical_for_identical_input() {
        let a = render_line_plot(&sample_points()).unwrap();
        let b = render_line_plot(&sample_points()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn axis_range_covers_value_range() {
        let svg = render_line_plot(&sample_points()).unwrap();
        assert!(svg.contains(">4<"), "x min tick");
        assert!(svg.contains(">16<"), "x max tick");
        assert!(svg.contains("0.640"), "y min tick (supervised at count 4)");
        assert!(svg.contains("0.860"), "y max tick (ssl at count 16)");
    }

    #[test]
    fn empty_input_rejected() {
        assert!(render_line_plot(&[]).is_err());
    }
}
