//! Minimal static SVG rendering: line plots and a shaded contour map.

use std::fmt::Write;

const W: f64 = 640.0;
const H: f64 = 420.0;
const PAD: f64 = 50.0;

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        PAD + (x - self.x0) / (self.x1 - self.x0) * (W - 2.0 * PAD)
    }

    fn py(&self, y: f64) -> f64 {
        H - PAD - (y - self.y0) / (self.y1 - self.y0) * (H - 2.0 * PAD)
    }
}

fn header(svg: &mut String, title: &str) {
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(svg, r#"<text x="{}" y="20" text-anchor="middle">{title}</text>"#, W / 2.0);
}

fn axes(svg: &mut String, f: &Frame, xlabel: &str, ylabel: &str) {
    let _ = writeln!(
        svg,
        r#"<rect x="{PAD}" y="{PAD}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        W - 2.0 * PAD,
        H - 2.0 * PAD
    );
    for k in 0..=4 {
        let x = f.x0 + (f.x1 - f.x0) * k as f64 / 4.0;
        let y = f.y0 + (f.y1 - f.y0) * k as f64 / 4.0;
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{x:.3}</text>"#,
            f.px(x),
            H - PAD + 16.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{y:.3}</text>"#,
            PAD - 4.0,
            f.py(y) + 4.0
        );
    }
    let _ = writeln!(svg, r#"<text x="{}" y="{}" text-anchor="middle">{xlabel}</text>"#, W / 2.0, H - 10.0);
    let _ = writeln!(
        svg,
        r#"<text x="14" y="{}" text-anchor="middle" transform="rotate(-90 14 {})">{ylabel}</text>"#,
        H / 2.0,
        H / 2.0
    );
}

pub fn line_plot(points: &[(f64, f64)], title: &str, xlabel: &str, ylabel: &str) -> String {
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, 0.0_f64, f64::NEG_INFINITY);
    for &(x, y) in points {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !(x1 > x0) {
        x1 = x0 + 1.0;
    }
    if !(y1 > y0) {
        y1 = y0 + 1.0;
    }
    let frame = Frame { x0, x1, y0, y1 };
    let mut svg = String::new();
    header(&mut svg, title);
    axes(&mut svg, &frame, xlabel, ylabel);
    let path: Vec<String> = points
        .iter()
        .map(|&(x, y)| format!("{:.2},{:.2}", frame.px(x), frame.py(y)))
        .collect();
    let _ = writeln!(
        svg,
        r#"<polyline fill="none" stroke="steelblue" stroke-width="1.5" points="{}"/>"#,
        path.join(" ")
    );
    svg.push_str("</svg>\n");
    svg
}

/// Shaded cells plus iso-lines at `levels` fractions of the maximum.
/// `values[i * ys.len() + j]` is the value at `(xs[i], ys[j])`.
pub fn contour_map(xs: &[f64], ys: &[f64], values: &[f64], title: &str, xlabel: &str, ylabel: &str) -> String {
    let (nx, ny) = (xs.len(), ys.len());
    let frame = Frame {
        x0: xs[0],
        x1: xs[nx - 1],
        y0: ys[0],
        y1: ys[ny - 1],
    };
    let vmax = values.iter().copied().fold(0.0_f64, f64::max).max(f64::MIN_POSITIVE);
    let at = |i: usize, j: usize| values[i * ny + j];

    let mut svg = String::new();
    header(&mut svg, title);
    // Shade on a coarsened lattice to keep the file small.
    let stride = (nx.max(ny) / 120).max(1);
    for i in (0..nx - 1).step_by(stride) {
        for j in (0..ny - 1).step_by(stride) {
            let i1 = (i + stride).min(nx - 1);
            let j1 = (j + stride).min(ny - 1);
            let v = (at(i, j) / vmax).clamp(0.0, 1.0);
            let shade = (255.0 * (1.0 - 0.85 * v)) as u8;
            let (xa, xb) = (frame.px(xs[i]), frame.px(xs[i1]));
            let (ya, yb) = (frame.py(ys[j1]), frame.py(ys[j]));
            let _ = writeln!(
                svg,
                r#"<rect x="{xa:.2}" y="{ya:.2}" width="{:.2}" height="{:.2}" fill="rgb({shade},{shade},255)"/>"#,
                xb - xa + 0.5,
                yb - ya + 0.5
            );
        }
    }
    for level in (1..10).map(|k| vmax * k as f64 / 10.0) {
        let mut d = String::new();
        for i in 0..nx - 1 {
            for j in 0..ny - 1 {
                let corners = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)];
                let mut hits = Vec::with_capacity(4);
                for e in 0..4 {
                    let (a, b) = (corners[e], corners[(e + 1) % 4]);
                    let (va, vb) = (at(a.0, a.1) - level, at(b.0, b.1) - level);
                    if (va < 0.0) != (vb < 0.0) {
                        let r = va / (va - vb);
                        let x = xs[a.0] + r * (xs[b.0] - xs[a.0]);
                        let y = ys[a.1] + r * (ys[b.1] - ys[a.1]);
                        hits.push((frame.px(x), frame.py(y)));
                    }
                }
                for pair in hits.chunks_exact(2) {
                    let _ = write!(
                        d,
                        "M{:.2} {:.2}L{:.2} {:.2}",
                        pair[0].0, pair[0].1, pair[1].0, pair[1].1
                    );
                }
            }
        }
        let _ = writeln!(svg, r#"<path d="{d}" fill="none" stroke="navy" stroke-width="0.8"/>"#);
    }
    axes(&mut svg, &frame, xlabel, ylabel);
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_plot_is_wellformed() {
        let s = line_plot(&[(0.0, 0.0), (1.0, 2.0)], "t", "x", "y");
        assert!(s.starts_with("<svg") && s.trim_end().ends_with("</svg>"));
        assert!(s.contains("<polyline"));
    }

    #[test]
    fn contour_of_cone_has_paths() {
        let xs: Vec<f64> = (0..21).map(|i| i as f64 / 10.0 - 1.0).collect();
        let mut v = Vec::new();
        for &x in &xs {
            for &y in &xs {
                v.push((1.0 - (x * x + y * y).sqrt()).max(0.0));
            }
        }
        let s = contour_map(&xs, &xs, &v, "cone", "x", "y");
        assert!(s.matches("<path d=\"M").count() >= 5);
    }
}
