//! Plot data and standalone SVG charts.
//!
//! Kernel density estimates here are for figures only; no trust value is
//! derived from them.

use std::fmt::Write as _;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 150.0;
const MARGIN_TOP: f64 = 50.0;
const MARGIN_BOTTOM: f64 = 60.0;

const PALETTE: [&str; 6] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
];

/// Used when all samples coincide.
const MIN_BANDWIDTH: f64 = 1e-4;

/// Gaussian-kernel bandwidth `σ·n^(−1/5)`.
pub fn scott_bandwidth(values: &[f64]) -> f64 {
    let n = values.len();
    if n < 2 {
        return MIN_BANDWIDTH;
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (var.sqrt() * (n as f64).powf(-0.2)).max(MIN_BANDWIDTH)
}

/// Evaluates a Gaussian KDE of `values` on `points` evenly spaced abscissae
/// spanning the samples plus four bandwidths either side.
pub fn kernel_density(values: &[f64], points: usize) -> Vec<(f64, f64)> {
    if values.is_empty() || points == 0 {
        return Vec::new();
    }
    let h = scott_bandwidth(values);
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min) - 4.0 * h;
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max) + 4.0 * h;
    let norm = 1.0 / (values.len() as f64 * h * (2.0 * std::f64::consts::PI).sqrt());
    let step = if points > 1 {
        (hi - lo) / (points - 1) as f64
    } else {
        0.0
    };
    (0..points)
        .map(|i| {
            let x = lo + step * i as f64;
            let density = values
                .iter()
                .map(|v| (-0.5 * ((x - v) / h).powi(2)).exp())
                .sum::<f64>()
                * norm;
            (x, density)
        })
        .collect()
}

/// Width of the x-range where the curve is at least `fraction` of its peak.
pub fn support_width(curve: &[(f64, f64)], fraction: f64) -> f64 {
    let peak = curve.iter().map(|p| p.1).fold(0.0, f64::max);
    let above: Vec<f64> = curve
        .iter()
        .filter(|p| p.1 >= fraction * peak)
        .map(|p| p.0)
        .collect();
    match (above.first(), above.last()) {
        (Some(a), Some(b)) => b - a,
        _ => 0.0,
    }
}

/// A named polyline.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

impl Series {
    pub fn new(name: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Self {
            name: name.into(),
            points,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct ChartOptions {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    /// Shade the area under each series.
    pub fill: bool,
    /// Fix the y-range instead of fitting it to the data.
    pub y_range: Option<(f64, f64)>,
    /// Dashed vertical markers `(x, label)`.
    pub markers: Vec<(f64, String)>,
    /// Shaded x-interval `(from, to, label)`.
    pub band: Option<(f64, f64, String)>,
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if (hi - lo).abs() < 1e-12 {
        return (lo - 0.5, hi + 0.5);
    }
    (lo, hi)
}

/// Renders a static line chart (no scripts, no external resources).
pub fn line_chart_svg(series: &[Series], opts: &ChartOptions) -> String {
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let all = || series.iter().flat_map(|s| s.points.iter());
    let (x_min, x_max) = range(all().map(|p| p.0));
    let (y_min, y_max) = opts.y_range.unwrap_or_else(|| {
        let (lo, hi) = range(all().map(|p| p.1));
        (lo.min(0.0), hi + 0.05 * (hi - lo.min(0.0)))
    });
    let sx = |x: f64| MARGIN_LEFT + (x - x_min) / (x_max - x_min) * plot_w;
    let sy = |y: f64| MARGIN_TOP + plot_h - (y - y_min) / (y_max - y_min) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="28" text-anchor="middle" font-size="18">{}</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        escape(&opts.title)
    );

    if let Some((from, to, label)) = &opts.band {
        let (a, b) = (sx(from.max(x_min)), sx(to.min(x_max)));
        let _ = writeln!(
            svg,
            r##"<rect x="{a:.2}" y="{MARGIN_TOP}" width="{:.2}" height="{plot_h}" fill="#bbbbbb" fill-opacity="0.3"><title>{}</title></rect>"##,
            (b - a).max(0.0),
            escape(label)
        );
    }

    // grid and ticks
    for i in 0..=5 {
        let t = i as f64 / 5.0;
        let (xv, yv) = (x_min + t * (x_max - x_min), y_min + t * (y_max - y_min));
        let (x, y) = (sx(xv), sy(yv));
        let _ = writeln!(
            svg,
            r##"<line x1="{MARGIN_LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#e5e5e5"/>"##,
            MARGIN_LEFT + plot_w
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end" font-size="11">{}</text>"#,
            MARGIN_LEFT - 6.0,
            y + 4.0,
            format_tick(yv)
        );
        let _ = writeln!(
            svg,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle" font-size="11">{}</text>"#,
            MARGIN_TOP + plot_h + 18.0,
            format_tick(xv)
        );
    }
    let _ = writeln!(
        svg,
        r##"<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="#333333"/>"##
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="13">{}</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 15.0,
        escape(&opts.x_label)
    );
    let _ = writeln!(
        svg,
        r#"<text x="18" y="{:.1}" text-anchor="middle" font-size="13" transform="rotate(-90 18 {:.1})">{}</text>"#,
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0,
        escape(&opts.y_label)
    );

    for (x, label) in &opts.markers {
        let px = sx(*x);
        let _ = writeln!(
            svg,
            r##"<line x1="{px:.2}" y1="{MARGIN_TOP}" x2="{px:.2}" y2="{:.2}" stroke="#d62728" stroke-dasharray="5,4"><title>{}</title></line>"##,
            MARGIN_TOP + plot_h,
            escape(label)
        );
    }

    for (i, s) in series.iter().enumerate() {
        if s.points.is_empty() {
            continue;
        }
        let color = PALETTE[i % PALETTE.len()];
        let path: Vec<String> = s
            .points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        if opts.fill {
            let first = s.points.first().map(|p| sx(p.0)).unwrap_or(MARGIN_LEFT);
            let last = s.points.last().map(|p| sx(p.0)).unwrap_or(MARGIN_LEFT);
            let base = sy(y_min.max(0.0));
            let _ = writeln!(
                svg,
                r#"<polygon points="{first:.2},{base:.2} {} {last:.2},{base:.2}" fill="{color}" fill-opacity="0.25" stroke="none"/>"#,
                path.join(" ")
            );
        }
        let _ = writeln!(
            svg,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
            path.join(" ")
        );
        let ly = MARGIN_TOP + 10.0 + 20.0 * i as f64;
        let lx = MARGIN_LEFT + plot_w + 15.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{color}" stroke-width="3"/>"#,
            lx + 20.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-size="12">{}</text>"#,
            lx + 26.0,
            ly + 4.0,
            escape(&s.name)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn format_tick(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-3..1e4).contains(&a) {
        format!("{v:.2e}")
    } else if a >= 100.0 {
        format!("{v:.0}")
    } else {
        let s = format!("{v:.4}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        if s == "-0" {
            "0".into()
        } else {
            s.to_string()
        }
    }
}

/// Wide CSV with a shared x column; series must share abscissae.
pub fn series_to_csv(x_name: &str, series: &[Series]) -> String {
    let mut out = String::from(x_name);
    for s in series {
        out.push(',');
        out.push_str(&s.name);
    }
    out.push('\n');
    let rows = series.iter().map(|s| s.points.len()).max().unwrap_or(0);
    for i in 0..rows {
        let x = series
            .iter()
            .find_map(|s| s.points.get(i))
            .map(|p| p.0)
            .unwrap_or(f64::NAN);
        let _ = write!(out, "{x}");
        for s in series {
            match s.points.get(i) {
                Some(p) => {
                    let _ = write!(out, ",{}", p.1);
                }
                None => out.push(','),
            }
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kde_integrates_to_one() {
        let values = [0.019, 0.019, 0.192, 0.192, 0.192, 0.385];
        let curve = kernel_density(&values, 2000);
        let dx = curve[1].0 - curve[0].0;
        let area: f64 = curve.iter().map(|p| p.1 * dx).sum();
        assert!((area - 1.0).abs() < 1e-3, "area {area}");
    }

    #[test]
    fn kde_degenerate_samples() {
        let curve = kernel_density(&[0.25; 4], 101);
        assert_eq!(curve.len(), 101);
        assert!(curve.iter().all(|p| p.1.is_finite()));
        assert!(kernel_density(&[], 10).is_empty());
    }

    #[test]
    fn support_width_of_triangle() {
        let curve = vec![(0.0, 0.0), (1.0, 1.0), (2.0, 2.0), (3.0, 1.0), (4.0, 0.0)];
        assert_eq!(support_width(&curve, 0.5), 2.0);
    }

    #[test]
    fn svg_is_static_and_escaped() {
        let s = vec![Series::new("b<d", vec![(0.0, 0.1), (1.0, 0.9)])];
        let svg = line_chart_svg(
            &s,
            &ChartOptions {
                title: "A & B".into(),
                fill: true,
                markers: vec![(0.5, "mid".into())],
                band: Some((0.2, 0.4, "zone".into())),
                ..Default::default()
            },
        );
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert!(!svg.contains("<script"));
        assert!(svg.contains("A &amp; B"));
        assert!(svg.contains("b&lt;d"));
        assert!(svg.contains("<polyline"));
        assert!(svg.contains("<polygon"));
    }

    #[test]
    fn csv_layout() {
        let s = vec![
            Series::new("belief", vec![(0.0, 0.5), (1.0, 0.6)]),
            Series::new("disbelief", vec![(0.0, 0.1), (1.0, 0.0)]),
        ];
        assert_eq!(
            series_to_csv("eta", &s),
            "eta,belief,disbelief\n0,0.5,0.1\n1,0.6,0\n"
        );
    }
}
