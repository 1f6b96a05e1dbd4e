use std::fmt::Write as _;
use std::path::Path;

use monsterlab::fit::least_squares;

use crate::error::CliError;

pub struct PlotLabels<'a> {
    pub title: &'a str,
    pub x: &'a str,
    pub y: &'a str,
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 64.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Scatter plot with the least-squares line and its slope. Returns the SVG
/// text and the fitted slope.
pub fn render(rows: &[(f64, f64)], labels: &PlotLabels) -> Result<(String, f64), CliError> {
    if rows.len() < 2 {
        return Err(CliError::Usage(format!("a plot needs at least 2 points, got {}", rows.len())));
    }
    if rows.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(CliError::Usage("plot points must be finite".into()));
    }
    let xs: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let fit = least_squares(&xs, &ys)
        .ok_or_else(|| CliError::Usage("plot points need at least two distinct x values".into()))?;

    let range = |v: &[f64]| {
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if hi > lo {
            (lo, hi)
        } else {
            (lo - 0.5, hi + 0.5)
        }
    };
    let (x0, x1) = range(&xs);
    let line_ys = [fit.intercept + fit.slope * x0, fit.intercept + fit.slope * x1];
    let (y0, y1) = range(&[ys.as_slice(), &line_ys].concat());
    let px = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let py = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(
        s,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(labels.title)
    )
    .unwrap();
    writeln!(
        s,
        r#"<path d="M{m},{top} V{b} H{r}" fill="none" stroke="black"/>"#,
        m = MARGIN,
        top = MARGIN,
        b = HEIGHT - MARGIN,
        r = WIDTH - MARGIN
    )
    .unwrap();
    for (x, anchor) in [(x0, "start"), (x1, "end")] {
        writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="{anchor}">{x:.3}</text>"#,
            px(x),
            HEIGHT - MARGIN + 16.0
        )
        .unwrap();
    }
    for y in [y0, y1] {
        writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{y:.3}</text>"#,
            MARGIN - 6.0,
            py(y) + 4.0
        )
        .unwrap();
    }
    writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 20.0,
        escape(labels.x)
    )
    .unwrap();
    writeln!(
        s,
        r#"<text x="18" y="{y}" text-anchor="middle" transform="rotate(-90 18 {y})">{}</text>"#,
        escape(labels.y),
        y = HEIGHT / 2.0
    )
    .unwrap();
    writeln!(
        s,
        r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="firebrick" stroke-width="1.5"/>"#,
        px(x0),
        py(line_ys[0]),
        px(x1),
        py(line_ys[1])
    )
    .unwrap();
    for &(x, y) in rows {
        writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="steelblue"/>"#, px(x), py(y)).unwrap();
    }
    writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" fill="firebrick">slope = {:.3}</text>"#,
        MARGIN + 12.0,
        MARGIN + 16.0,
        fit.slope
    )
    .unwrap();
    s.push_str("</svg>\n");
    Ok((s, fit.slope))
}

/// Write the plot to `path`; returns the fitted slope.
pub fn emit_plot(rows: &[(f64, f64)], labels: &PlotLabels, path: &Path) -> Result<f64, CliError> {
    let (svg, slope) = render(rows, labels)?;
    std::fs::write(path, svg).map_err(|e| CliError::io(path, e))?;
    Ok(slope)
}
