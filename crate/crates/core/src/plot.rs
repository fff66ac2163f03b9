//! Rasterized SVG rendering of plane regions.

use std::fmt::Write;

use num_complex::Complex64;

use crate::inclusion::{BoundingBox, Region};

const CANVAS: f64 = 800.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"];

/// A square view containing `bbox`, so the plot keeps the aspect ratio.
fn square(bbox: BoundingBox) -> BoundingBox {
    let cx = 0.5 * (bbox.re_min + bbox.re_max);
    let cy = 0.5 * (bbox.im_min + bbox.im_max);
    let half = 0.5 * (bbox.re_max - bbox.re_min).max(bbox.im_max - bbox.im_min).max(1e-9);
    BoundingBox {
        re_min: cx - half,
        re_max: cx + half,
        im_min: cy - half,
        im_max: cy + half,
    }
}

/// Draws each `(label, region)` as a semi-transparent layer on an 800x800
/// canvas, sampling a `grid x grid` lattice of cell centers. `points` are
/// marked with small crosses.
pub fn render_svg(layers: &[(&str, &Region)], points: &[Complex64], grid: usize) -> String {
    let grid = grid.max(1);
    let bbox = layers
        .iter()
        .filter_map(|(_, r)| r.bounding_box())
        .chain(points.iter().map(|z| BoundingBox {
            re_min: z.re,
            re_max: z.re,
            im_min: z.im,
            im_max: z.im,
        }))
        .reduce(|a, b| BoundingBox {
            re_min: a.re_min.min(b.re_min),
            re_max: a.re_max.max(b.re_max),
            im_min: a.im_min.min(b.im_min),
            im_max: a.im_max.max(b.im_max),
        })
        .unwrap_or(BoundingBox {
            re_min: -1.0,
            re_max: 1.0,
            im_min: -1.0,
            im_max: 1.0,
        });
    let view = square(bbox.inflate(0.1));
    let span = view.re_max - view.re_min;
    let cell = CANVAS / grid as f64;
    let to_x = |re: f64| (re - view.re_min) / span * CANVAS;
    let to_y = |im: f64| (view.im_max - im) / span * CANVAS;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="800" height="800" viewBox="0 0 800 800">"#
    );
    let _ = writeln!(svg, r#"<rect width="800" height="800" fill="white"/>"#);

    for (layer, (label, region)) in layers.iter().enumerate() {
        let color = PALETTE[layer % PALETTE.len()];
        let _ = writeln!(
            svg,
            r#"<g id="{label}" fill="{color}" fill-opacity="0.35" shape-rendering="crispEdges">"#
        );
        for row in 0..grid {
            let im = view.im_max - (row as f64 + 0.5) / grid as f64 * span;
            let mut col = 0;
            while col < grid {
                let inside = |c: usize| {
                    let re = view.re_min + (c as f64 + 0.5) / grid as f64 * span;
                    region.contains(Complex64::new(re, im))
                };
                if !inside(col) {
                    col += 1;
                    continue;
                }
                let start = col;
                while col < grid && inside(col) {
                    col += 1;
                }
                let _ = writeln!(
                    svg,
                    r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}"/>"#,
                    start as f64 * cell,
                    row as f64 * cell,
                    (col - start) as f64 * cell,
                    cell
                );
            }
        }
        let _ = writeln!(svg, "</g>");
    }

    let _ = writeln!(svg, r##"<g stroke="#444" stroke-width="1">"##);
    if view.im_min <= 0.0 && view.im_max >= 0.0 {
        let y = to_y(0.0);
        let _ = writeln!(svg, r#"<line x1="0" y1="{y:.3}" x2="800" y2="{y:.3}"/>"#);
    }
    if view.re_min <= 0.0 && view.re_max >= 0.0 {
        let x = to_x(0.0);
        let _ = writeln!(svg, r#"<line x1="{x:.3}" y1="0" x2="{x:.3}" y2="800"/>"#);
    }
    for z in points {
        let (x, y) = (to_x(z.re), to_y(z.im));
        let _ = writeln!(
            svg,
            r#"<path d="M{:.3} {:.3}L{:.3} {:.3}M{:.3} {:.3}L{:.3} {:.3}" stroke="black" stroke-width="2"/>"#,
            x - 5.0,
            y - 5.0,
            x + 5.0,
            y + 5.0,
            x - 5.0,
            y + 5.0,
            x + 5.0,
            y - 5.0
        );
    }
    let _ = writeln!(svg, "</g>");

    let _ = writeln!(svg, r#"<g font-family="sans-serif" font-size="14">"#);
    let legend_h = 24.0 * layers.len() as f64 + 36.0;
    let _ = writeln!(
        svg,
        r##"<rect x="10" y="10" width="260" height="{legend_h}" fill="white" fill-opacity="0.85" stroke="#999"/>"##
    );
    for (layer, (label, _)) in layers.iter().enumerate() {
        let y = 20.0 + 24.0 * layer as f64;
        let color = PALETTE[layer % PALETTE.len()];
        let _ = writeln!(
            svg,
            r#"<rect x="20" y="{y}" width="16" height="16" fill="{color}" fill-opacity="0.6"/><text x="44" y="{}">{label}</text>"#,
            y + 13.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="20" y="{}">re [{:.3}, {:.3}]  im [{:.3}, {:.3}]</text>"#,
        20.0 + 24.0 * layers.len() as f64 + 13.0,
        view.re_min,
        view.re_max,
        view.im_min,
        view.im_max
    );
    let _ = writeln!(svg, "</g>\n</svg>");
    svg
}
