//! CSV and SVG writers for [`SweepTable`].

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::figures::{OutputFormat, SweepTable};

/// `x,series1,series2,...` header, one row per grid point, every value with
/// 17 significant digits, LF line endings.
pub fn to_csv(table: &SweepTable) -> String {
    let mut out = String::new();
    out.push_str(&table.x_name);
    for s in &table.series {
        out.push(',');
        out.push_str(&s.name);
    }
    out.push('\n');
    for (i, x) in table.x_values.iter().enumerate() {
        write!(out, "{x:.16e}").unwrap();
        for s in &table.series {
            write!(out, ",{:.16e}", s.values[i]).unwrap();
        }
        out.push('\n');
    }
    out
}

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 200.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 60.0;
const COLORS: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Self-contained line plot, one `<polyline>` per series.
pub fn to_svg(table: &SweepTable) -> String {
    let tx = |x: f64| if table.x_log { x.log10() } else { x };
    let xs: Vec<f64> = table.x_values.iter().map(|&x| tx(x)).collect();
    let (x_lo, x_hi) = span(xs.iter().copied());
    let (y_lo, y_hi) = span(table.series.iter().flat_map(|s| s.values.iter().copied()));
    let (y_lo, y_hi) = pad(y_lo, y_hi);
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let px = |x: f64| MARGIN_LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w;
    let py = |y: f64| MARGIN_TOP + (1.0 - (y - y_lo) / (y_hi - y_lo)) * plot_h;

    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(
        out,
        r#"<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    )
    .unwrap();

    for i in 0..=4 {
        let x = x_lo + (x_hi - x_lo) * i as f64 / 4.0;
        let label = if table.x_log {
            format!("1e{x:.2}")
        } else {
            format!("{x:.3}")
        };
        let (cx, base) = (px(x), MARGIN_TOP + plot_h);
        writeln!(
            out,
            r#"<line x1="{cx:.2}" y1="{base}" x2="{cx:.2}" y2="{:.2}" stroke="black"/>"#,
            base + 5.0
        )
        .unwrap();
        writeln!(
            out,
            r#"<text x="{cx:.2}" y="{:.2}" text-anchor="middle">{label}</text>"#,
            base + 20.0
        )
        .unwrap();

        let y = y_lo + (y_hi - y_lo) * i as f64 / 4.0;
        let cy = py(y);
        writeln!(
            out,
            r#"<line x1="{:.2}" y1="{cy:.2}" x2="{MARGIN_LEFT}" y2="{cy:.2}" stroke="black"/>"#,
            MARGIN_LEFT - 5.0
        )
        .unwrap();
        writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{y:.4}</text>"#,
            MARGIN_LEFT - 8.0,
            cy + 4.0
        )
        .unwrap();
    }
    let x_label = if table.x_log {
        format!("{} (log scale)", table.x_name)
    } else {
        table.x_name.clone()
    };
    writeln!(
        out,
        r#"<text class="x-label" x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 15.0,
        escape(&x_label)
    )
    .unwrap();
    writeln!(
        out,
        r#"<text class="y-label" x="20" y="{:.2}" text-anchor="middle" transform="rotate(-90 20 {:.2})">value</text>"#,
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0
    )
    .unwrap();

    for (k, s) in table.series.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let points: Vec<String> = xs
            .iter()
            .zip(&s.values)
            .map(|(&x, &y)| format!("{:.3},{:.3}", px(x), py(y)))
            .collect();
        writeln!(
            out,
            r#"<polyline data-series="{}" fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            escape(&s.name),
            points.join(" ")
        )
        .unwrap();
        let ly = MARGIN_TOP + 15.0 + 18.0 * k as f64;
        let lx = WIDTH - MARGIN_RIGHT + 10.0;
        writeln!(
            out,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#,
            lx + 20.0
        )
        .unwrap();
        let text = if s.label.is_empty() {
            &s.name
        } else {
            &s.label
        };
        writeln!(
            out,
            r#"<text x="{}" y="{}">{}</text>"#,
            lx + 26.0,
            ly + 4.0,
            escape(text)
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}

fn span(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        });
    if lo.is_finite() {
        (lo, hi)
    } else {
        (0.0, 1.0)
    }
}

fn pad(lo: f64, hi: f64) -> (f64, f64) {
    let d = hi - lo;
    if d <= 1e-12 * lo.abs().max(1.0) {
        (
            lo - 0.5e-3 * lo.abs().max(1.0),
            hi + 0.5e-3 * hi.abs().max(1.0),
        )
    } else {
        (lo - 0.05 * d, hi + 0.05 * d)
    }
}

pub fn render(table: &SweepTable, format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => to_csv(table),
        OutputFormat::Svg => to_svg(table),
    }
}

/// Write `table` to `path` in `format`.
pub fn emit(table: &SweepTable, format: OutputFormat, path: &Path) -> Result<()> {
    std::fs::write(path, render(table, format)).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}
