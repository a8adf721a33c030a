//! Self-contained SVG line charts.

use std::fmt::Write;

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 600.0;

const LEFT: f64 = 80.0;
const RIGHT: f64 = 190.0;
const TOP: f64 = 50.0;
const BOTTOM: f64 = 60.0;

/// Errors below this are drawn at the floor of the log axis.
pub const ERROR_FLOOR: f64 = 1e-17;

const PALETTE: [&str; 8] = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"];

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone)]
pub struct LineChart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Rounds coordinates to 0.01 px so output is stable and compact.
fn px(v: f64) -> String {
    let r = (v * 100.0).round() / 100.0;
    if r == r.trunc() {
        format!("{}", r as i64)
    } else {
        format!("{r}")
    }
}

impl LineChart {
    /// `log10(max(err, ERROR_FLOOR))` against n, one series per scheme.
    pub fn log_error(title: &str, curves: &[(String, Vec<f64>)]) -> Self {
        let series = curves
            .iter()
            .map(|(label, errs)| Series {
                label: label.clone(),
                points: errs.iter().enumerate().map(|(n, e)| (n as f64, e.max(ERROR_FLOOR).log10())).collect(),
            })
            .collect();
        LineChart { title: title.into(), x_label: "n".into(), y_label: "log10 |x_n - p|".into(), series }
    }

    fn bounds(&self) -> (f64, f64, f64, f64) {
        let pts = self.series.iter().flat_map(|s| s.points.iter());
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for &(x, y) in pts {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        if !x0.is_finite() {
            return (0.0, 1.0, 0.0, 1.0);
        }
        let (y0, y1) = (y0.floor(), y1.ceil());
        (x0, if x1 > x0 { x1 } else { x0 + 1.0 }, y0, if y1 > y0 { y1 } else { y0 + 1.0 })
    }

    pub fn render(&self) -> String {
        let (x0, x1, y0, y1) = self.bounds();
        let pw = WIDTH - LEFT - RIGHT;
        let ph = HEIGHT - TOP - BOTTOM;
        let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
        let sy = |y: f64| TOP + (y1 - y) / (y1 - y0) * ph;

        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {w} {h}" width="{w}" height="{h}" font-family="sans-serif" font-size="12">"#,
            w = WIDTH,
            h = HEIGHT
        );
        let _ = writeln!(s, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{}" y="28" text-anchor="middle" font-size="16">{}</text>"#,
            px(LEFT + pw / 2.0),
            escape(&self.title)
        );

        // y ticks at integer values, thinned to at most ~10 labels
        let span = (y1 - y0) as i64;
        let ystep = (span / 10).max(1);
        let mut y = y0 as i64;
        while y as f64 <= y1 {
            let py = px(sy(y as f64));
            let _ = writeln!(
                s,
                r##"<line x1="{}" y1="{py}" x2="{}" y2="{py}" stroke="#dddddd"/>"##,
                px(LEFT),
                px(LEFT + pw)
            );
            let _ = writeln!(s, r#"<text x="{}" y="{py}" text-anchor="end" dy="4">{y}</text>"#, px(LEFT - 8.0));
            y += ystep;
        }
        let xspan = (x1 - x0).ceil() as i64;
        let xstep = (xspan / 10).max(1);
        let mut x = x0.ceil() as i64;
        while x as f64 <= x1 {
            let pxv = px(sx(x as f64));
            let _ = writeln!(s, r#"<text x="{pxv}" y="{}" text-anchor="middle">{x}</text>"#, px(TOP + ph + 18.0));
            x += xstep;
        }
        let _ = writeln!(
            s,
            r#"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="black"/>"#,
            px(LEFT),
            px(TOP),
            px(pw),
            px(ph)
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            px(LEFT + pw / 2.0),
            px(HEIGHT - 15.0),
            escape(&self.x_label)
        );
        let _ = writeln!(
            s,
            r#"<text x="20" y="{cy}" text-anchor="middle" transform="rotate(-90 20 {cy})">{}</text>"#,
            escape(&self.y_label),
            cy = px(TOP + ph / 2.0)
        );

        for (i, series) in self.series.iter().enumerate() {
            let color = PALETTE[i % PALETTE.len()];
            let pts: Vec<String> = series.points.iter().map(|&(x, y)| format!("{},{}", px(sx(x)), px(sy(y)))).collect();
            let _ =
                writeln!(s, r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#, pts.join(" "));
            let ly = TOP + 10.0 + 22.0 * i as f64;
            let lx = LEFT + pw + 15.0;
            let _ = writeln!(
                s,
                r#"<line x1="{}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#,
                px(lx),
                px(lx + 25.0)
            );
            let _ = writeln!(s, r#"<text x="{}" y="{ly}" dy="4">{}</text>"#, px(lx + 32.0), escape(&series.label));
        }
        s.push_str("</svg>\n");
        s
    }
}
