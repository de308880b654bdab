//! Minimal self-contained SVG charts: scatter points, polylines, bars,
//! reference lines and a tile grid. Coordinates are written with two
//! decimals so output is byte-stable.

use std::fmt::Write as _;

const WIDTH: f64 = 560.0;
const HEIGHT: f64 = 400.0;
const LEFT: f64 = 64.0;
const RIGHT: f64 = 16.0;
const TOP: f64 = 36.0;
const BOTTOM: f64 = 48.0;

#[derive(Debug, Clone)]
pub enum Layer {
    Points(Vec<(f64, f64)>),
    Line { points: Vec<(f64, f64)>, dashed: bool },
    HLine { y: f64, dashed: bool },
    /// Vertical stems from y = 0, as in an ACF plot.
    Stems(Vec<(f64, f64)>),
}

#[derive(Debug, Clone)]
pub struct Chart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub layers: Vec<Layer>,
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn header(out: &mut String, title: &str) {
    let _ = write!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\" font-size=\"12\">\n\
         <rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n\
         <text x=\"{:.2}\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
        WIDTH / 2.0,
        esc(title)
    );
}

/// Axis range padded by 5%, widened when degenerate.
fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for v in values.filter(|v| v.is_finite()) {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if !lo.is_finite() {
        return (-1.0, 1.0);
    }
    if hi - lo <= f64::EPSILON * lo.abs().max(1.0) {
        return (lo - 1.0, hi + 1.0);
    }
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

fn tick_label(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-3..1e5).contains(&a) {
        format!("{v:.2e}")
    } else {
        format!("{v:.3}")
    }
}

impl Chart {
    pub fn new(title: impl Into<String>, x_label: impl Into<String>, y_label: impl Into<String>) -> Self {
        Chart {
            title: title.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            layers: Vec::new(),
        }
    }

    pub fn layer(mut self, layer: Layer) -> Self {
        self.layers.push(layer);
        self
    }

    pub fn render(&self) -> String {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for layer in &self.layers {
            match layer {
                Layer::Points(p) | Layer::Line { points: p, .. } => {
                    xs.extend(p.iter().map(|q| q.0));
                    ys.extend(p.iter().map(|q| q.1));
                }
                Layer::Stems(p) => {
                    xs.extend(p.iter().map(|q| q.0));
                    ys.extend(p.iter().map(|q| q.1));
                    ys.push(0.0);
                }
                Layer::HLine { y, .. } => ys.push(*y),
            }
        }
        let (x0, x1) = range(xs.into_iter());
        let (y0, y1) = range(ys.into_iter());
        let plot_w = WIDTH - LEFT - RIGHT;
        let plot_h = HEIGHT - TOP - BOTTOM;
        let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * plot_w;
        let sy = |y: f64| TOP + (y1 - y) / (y1 - y0) * plot_h;

        let mut out = String::new();
        header(&mut out, &self.title);
        let _ = writeln!(
            out,
            "<rect x=\"{LEFT:.2}\" y=\"{TOP:.2}\" width=\"{plot_w:.2}\" height=\"{plot_h:.2}\" fill=\"none\" stroke=\"black\"/>"
        );
        for i in 0..=4 {
            let fx = x0 + (x1 - x0) * i as f64 / 4.0;
            let fy = y0 + (y1 - y0) * i as f64 / 4.0;
            let _ = writeln!(
                out,
                "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{}</text>",
                sx(fx),
                TOP + plot_h + 16.0,
                tick_label(fx)
            );
            let _ = writeln!(
                out,
                "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{}</text>",
                LEFT - 4.0,
                sy(fy) + 4.0,
                tick_label(fy)
            );
        }
        let _ = writeln!(
            out,
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{}</text>",
            LEFT + plot_w / 2.0,
            HEIGHT - 10.0,
            esc(&self.x_label)
        );
        let _ = writeln!(
            out,
            "<text x=\"14\" y=\"{:.2}\" text-anchor=\"middle\" transform=\"rotate(-90 14 {:.2})\">{}</text>",
            TOP + plot_h / 2.0,
            TOP + plot_h / 2.0,
            esc(&self.y_label)
        );

        for layer in &self.layers {
            match layer {
                Layer::Points(points) => {
                    for &(x, y) in points.iter().filter(|p| p.0.is_finite() && p.1.is_finite()) {
                        let _ = writeln!(
                            out,
                            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2.5\" fill=\"steelblue\"/>",
                            sx(x),
                            sy(y)
                        );
                    }
                }
                Layer::Line { points, dashed } => {
                    let coords: Vec<String> = points
                        .iter()
                        .filter(|p| p.0.is_finite() && p.1.is_finite())
                        .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
                        .collect();
                    let _ = writeln!(
                        out,
                        "<polyline points=\"{}\" fill=\"none\" stroke=\"firebrick\"{}/>",
                        coords.join(" "),
                        if *dashed { " stroke-dasharray=\"5,4\"" } else { "" }
                    );
                }
                Layer::HLine { y, dashed } => {
                    let _ = writeln!(
                        out,
                        "<line x1=\"{LEFT:.2}\" y1=\"{0:.2}\" x2=\"{1:.2}\" y2=\"{0:.2}\" stroke=\"blue\"{2}/>",
                        sy(*y),
                        LEFT + plot_w,
                        if *dashed { " stroke-dasharray=\"4,4\"" } else { "" }
                    );
                }
                Layer::Stems(points) => {
                    for &(x, y) in points {
                        let _ = writeln!(
                            out,
                            "<line x1=\"{0:.2}\" y1=\"{1:.2}\" x2=\"{0:.2}\" y2=\"{2:.2}\" stroke=\"black\" stroke-width=\"2\"/>",
                            sx(x),
                            sy(0.0),
                            sy(y)
                        );
                    }
                }
            }
        }
        out.push_str("</svg>\n");
        out
    }
}

/// Horizontal bar chart of labelled values with an optional dashed
/// threshold.
pub fn bar_chart(title: &str, bars: &[(String, f64)], threshold: Option<f64>) -> String {
    let max = bars
        .iter()
        .map(|b| b.1)
        .chain(threshold)
        .filter(|v| v.is_finite())
        .fold(0.0, f64::max);
    let max = if max > 0.0 { max * 1.05 } else { 1.0 };
    let plot_w = WIDTH - 120.0 - RIGHT;
    let row_h = ((HEIGHT - TOP - BOTTOM) / bars.len().max(1) as f64).min(40.0);
    let sx = |v: f64| 120.0 + v.clamp(0.0, max) / max * plot_w;

    let mut out = String::new();
    header(&mut out, title);
    for (i, (label, value)) in bars.iter().enumerate() {
        let y = TOP + i as f64 * row_h;
        let _ = writeln!(
            out,
            "<rect x=\"120.00\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"steelblue\"/>",
            y + 4.0,
            sx(*value) - 120.0,
            row_h - 8.0
        );
        let _ = writeln!(
            out,
            "<text x=\"114\" y=\"{:.2}\" text-anchor=\"end\">{}</text>",
            y + row_h / 2.0 + 4.0,
            esc(label)
        );
        let _ = writeln!(
            out,
            "<text x=\"{:.2}\" y=\"{:.2}\">{}</text>",
            sx(*value) + 4.0,
            y + row_h / 2.0 + 4.0,
            tick_label(*value)
        );
    }
    if let Some(t) = threshold {
        let _ = writeln!(
            out,
            "<line x1=\"{0:.2}\" y1=\"{1:.2}\" x2=\"{0:.2}\" y2=\"{2:.2}\" stroke=\"firebrick\" stroke-dasharray=\"5,4\"/>",
            sx(t),
            TOP,
            TOP + row_h * bars.len() as f64
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Correlation tiles shaded by r, with an X over non-significant cells.
pub fn correlation_grid(title: &str, names: &[String], r: &[Vec<f64>], significant: &[Vec<bool>]) -> String {
    let k = names.len().max(1);
    let cell = ((HEIGHT - TOP - BOTTOM).min(WIDTH - 120.0)) / k as f64;
    let mut out = String::new();
    header(&mut out, title);
    for i in 0..names.len() {
        let _ = writeln!(
            out,
            "<text x=\"114\" y=\"{:.2}\" text-anchor=\"end\">{}</text>",
            TOP + (i as f64 + 0.5) * cell + 4.0,
            esc(&names[i])
        );
        let _ = writeln!(
            out,
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{}</text>",
            120.0 + (i as f64 + 0.5) * cell,
            TOP + k as f64 * cell + 16.0,
            esc(&names[i])
        );
        for j in 0..names.len() {
            let v = r[i][j];
            let (x, y) = (120.0 + j as f64 * cell, TOP + i as f64 * cell);
            let shade = (255.0 * (1.0 - v.abs())).round() as u8;
            let fill = if v >= 0.0 {
                format!("rgb({shade},{shade},255)")
            } else {
                format!("rgb(255,{shade},{shade})")
            };
            let _ = writeln!(
                out,
                "<rect x=\"{x:.2}\" y=\"{y:.2}\" width=\"{cell:.2}\" height=\"{cell:.2}\" fill=\"{fill}\" stroke=\"white\"/>"
            );
            let _ = writeln!(
                out,
                "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-size=\"10\">{v:.2}</text>",
                x + cell / 2.0,
                y + cell / 2.0 + 4.0
            );
            if !significant[i][j] {
                let _ = writeln!(
                    out,
                    "<path d=\"M{:.2},{:.2} L{:.2},{:.2} M{:.2},{:.2} L{:.2},{:.2}\" stroke=\"black\"/>",
                    x + 4.0,
                    y + 4.0,
                    x + cell - 4.0,
                    y + cell - 4.0,
                    x + cell - 4.0,
                    y + 4.0,
                    x + 4.0,
                    y + cell - 4.0
                );
            }
        }
    }
    out.push_str("</svg>\n");
    out
}
