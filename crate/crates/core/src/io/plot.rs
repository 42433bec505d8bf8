//! Minimal SVG line chart of a curve table.

use std::fmt::Write as _;

use super::curves::CurveTable;
use crate::error::{Error, Result};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 48.0;

/// `x = i / (N − 1)`, `y = r(i)`, both axes fixed to `[0, 1]`. Truth is
/// drawn solid, prediction dashed.
pub fn render_svg(table: &CurveTable) -> Result<String> {
    if table.is_empty() {
        return Err(Error::Format("cannot plot an empty curve".into()));
    }
    let pw = WIDTH - 2.0 * MARGIN;
    let ph = HEIGHT - 2.0 * MARGIN;
    let sx = |x: f64| MARGIN + x * pw;
    let sy = |y: f64| HEIGHT - MARGIN - y.clamp(0.0, 1.0) * ph;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<g stroke="black" stroke-width="1"><line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/><line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/></g>"#,
        sx(0.0), sy(0.0), sx(1.0), sy(0.0), sx(0.0), sy(0.0), sx(0.0), sy(1.0)
    );
    let _ = writeln!(s, r#"<g font-family="sans-serif" font-size="12">"#);
    for t in [0.0, 0.5, 1.0] {
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{t}</text><text x="{:.2}" y="{:.2}" text-anchor="end">{t}</text>"#,
            sx(t),
            sy(0.0) + 16.0,
            sx(0.0) - 6.0,
            sy(t) + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">i/(N-1)</text><text x="12" y="{:.2}" text-anchor="middle" transform="rotate(-90 12 {:.2})">r(i)</text></g>"#,
        WIDTH / 2.0,
        HEIGHT - 10.0,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );
    let n = table.len();
    let series = [
        (&table.truth, "#1f77b4", "", "r_true"),
        (&table.pred, "#d62728", r#" stroke-dasharray="6 4""#, "r_pred"),
    ];
    for (values, color, dash, label) in series {
        let Some(values) = values else { continue };
        let mut points = String::new();
        for (i, &v) in values.iter().enumerate() {
            let x = if n > 1 { i as f64 / (n - 1) as f64 } else { 0.0 };
            if !points.is_empty() {
                points.push(' ');
            }
            let _ = write!(points, "{:.2},{:.2}", sx(x), sy(v));
        }
        let _ = writeln!(
            s,
            r#"<polyline class="{label}" fill="none" stroke="{color}" stroke-width="1.5"{dash} points="{points}"/>"#
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}
