//! Minimal SVG rendering of result tables: line plots and heatmaps.
//! CSV is the data contract; these are previews.

use std::fmt::Write as _;

use crate::table::{PlotHint, ResultTable};

const W: f64 = 640.0;
const H: f64 = 420.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 130.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 50.0;

const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"];

/// Renders a table according to its plot hint; `None` when there is nothing to draw.
pub fn render(table: &ResultTable, title: &str) -> Option<String> {
    match table.plot {
        PlotHint::None => None,
        PlotHint::Lines { x } => lines(table, x, title),
        PlotHint::Heatmap { x, y, value } => heatmap_long(table, x, y, value, title),
        PlotHint::Grid => grid(table, title),
    }
}

struct Frame {
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x.0) / span(self.x) * (W - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        H - BOTTOM - (y - self.y.0) / span(self.y) * (H - TOP - BOTTOM)
    }
}

fn span((lo, hi): (f64, f64)) -> f64 {
    if hi > lo {
        hi - lo
    } else {
        1.0
    }
}

fn bounds(values: impl Iterator<Item = f64>) -> Option<(f64, f64)> {
    values.filter(|v| v.is_finite()).fold(None, |acc, v| match acc {
        None => Some((v, v)),
        Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
    })
}

fn header(out: &mut String, title: &str, frame: &Frame, xlabel: &str, ylabel: &str) {
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#).unwrap();
    writeln!(out, r#"<text x="{}" y="18" text-anchor="middle">{}</text>"#, W / 2.0, escape(title)).unwrap();
    let (x0, x1, y0, y1) = (LEFT, W - RIGHT, TOP, H - BOTTOM);
    writeln!(out, r#"<rect x="{x0}" y="{y0}" width="{}" height="{}" fill="none" stroke="black"/>"#, x1 - x0, y1 - y0)
        .unwrap();
    for i in 0..=4 {
        let f = i as f64 / 4.0;
        let xv = frame.x.0 + f * span(frame.x);
        let yv = frame.y.0 + f * span(frame.y);
        let (px, py) = (frame.px(xv), frame.py(yv));
        writeln!(out, r#"<text x="{px:.1}" y="{:.1}" text-anchor="middle">{}</text>"#, y1 + 16.0, tick(xv)).unwrap();
        writeln!(out, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#, x0 - 6.0, py + 4.0, tick(yv)).unwrap();
    }
    writeln!(out, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#, (x0 + x1) / 2.0, H - 10.0, escape(xlabel))
        .unwrap();
    writeln!(
        out,
        r#"<text x="16" y="{:.1}" text-anchor="middle" transform="rotate(-90 16 {:.1})">{}</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0,
        escape(ylabel)
    )
    .unwrap();
}

fn tick(v: f64) -> String {
    if v != 0.0 && (v.abs() >= 1e4 || v.abs() < 1e-2) {
        format!("{v:.1e}")
    } else {
        format!("{v:.2}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn lines(table: &ResultTable, x: usize, title: &str) -> Option<String> {
    let xs: Vec<f64> = table.rows.iter().map(|r| r[x].as_f64()).collect::<Option<_>>()?;
    let series: Vec<(usize, Vec<f64>)> = (0..table.columns.len())
        .filter(|&c| c != x)
        .filter_map(|c| Some((c, table.rows.iter().map(|r| r[c].as_f64()).collect::<Option<Vec<_>>>()?)))
        .collect();
    let frame = Frame {
        x: bounds(xs.iter().copied())?,
        y: bounds(series.iter().flat_map(|(_, v)| v.iter().copied()))?,
    };
    let mut out = String::new();
    let ylabel = if series.len() == 1 { table.columns[series[0].0].as_str() } else { table.observable.as_str() };
    header(&mut out, title, &frame, &table.columns[x], ylabel);
    for (n, (c, ys)) in series.iter().enumerate() {
        let color = PALETTE[n % PALETTE.len()];
        // Break the polyline at non-finite points (the inf sentinel).
        let mut runs: Vec<Vec<(f64, f64)>> = vec![Vec::new()];
        for (xv, yv) in xs.iter().zip(ys) {
            if yv.is_finite() {
                runs.last_mut().unwrap().push((frame.px(*xv), frame.py(*yv)));
            } else if !runs.last().unwrap().is_empty() {
                runs.push(Vec::new());
            }
        }
        for run in runs.iter().filter(|r| !r.is_empty()) {
            let pts: Vec<String> = run.iter().map(|(a, b)| format!("{a:.2},{b:.2}")).collect();
            writeln!(out, r#"<polyline fill="none" stroke="{color}" stroke-width="1.2" points="{}"/>"#, pts.join(" "))
                .unwrap();
        }
        let ly = TOP + 14.0 + 16.0 * n as f64;
        writeln!(out, r#"<line x1="{}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#, W - RIGHT + 8.0, W - RIGHT + 24.0)
            .unwrap();
        writeln!(out, r#"<text x="{}" y="{}">{}</text>"#, W - RIGHT + 28.0, ly + 4.0, escape(&table.columns[*c])).unwrap();
    }
    out.push_str("</svg>\n");
    Some(out)
}

/// Piecewise-linear blue-to-yellow ramp.
fn color(f: f64) -> String {
    const STOPS: [(f64, [f64; 3]); 4] =
        [(0.0, [68.0, 1.0, 84.0]), (0.33, [49.0, 104.0, 142.0]), (0.66, [53.0, 183.0, 121.0]), (1.0, [253.0, 231.0, 37.0])];
    let f = if f.is_finite() { f.clamp(0.0, 1.0) } else { 1.0 };
    let i = STOPS.windows(2).position(|w| f <= w[1].0).unwrap_or(STOPS.len() - 2);
    let ((a, ca), (b, cb)) = (STOPS[i], STOPS[i + 1]);
    let t = (f - a) / (b - a);
    let c: Vec<u8> = (0..3).map(|k| (ca[k] + t * (cb[k] - ca[k])).round() as u8).collect();
    format!("#{:02x}{:02x}{:02x}", c[0], c[1], c[2])
}

fn cells(
    title: &str,
    xs: &[f64],
    ys: &[f64],
    values: &[(usize, usize, f64)],
    labels: (&str, &str, &str),
) -> Option<String> {
    let frame = Frame { x: bounds(xs.iter().copied())?, y: bounds(ys.iter().copied())? };
    let (vlo, vhi) = bounds(values.iter().map(|v| v.2)).unwrap_or((0.0, 1.0));
    let mut out = String::new();
    header(&mut out, title, &frame, labels.0, labels.1);
    let cw = (W - LEFT - RIGHT) / xs.len() as f64;
    let ch = (H - TOP - BOTTOM) / ys.len() as f64;
    for &(i, j, v) in values {
        let x = LEFT + cw * i as f64;
        let y = H - BOTTOM - ch * (j + 1) as f64;
        let fill = color((v - vlo) / span((vlo, vhi)));
        writeln!(out, r#"<rect x="{x:.2}" y="{y:.2}" width="{:.2}" height="{:.2}" fill="{fill}"/>"#, cw + 0.05, ch + 0.05)
            .unwrap();
    }
    let bar_x = W - RIGHT + 20.0;
    for n in 0..50 {
        let f = n as f64 / 49.0;
        let y = H - BOTTOM - f * (H - TOP - BOTTOM);
        writeln!(out, r#"<rect x="{bar_x}" y="{:.2}" width="14" height="{:.2}" fill="{}"/>"#, y - (H - TOP - BOTTOM) / 50.0, (H - TOP - BOTTOM) / 49.0, color(f))
            .unwrap();
    }
    writeln!(out, r#"<text x="{}" y="{}">{}</text>"#, bar_x + 18.0, TOP + 8.0, tick(vhi)).unwrap();
    writeln!(out, r#"<text x="{}" y="{}">{}</text>"#, bar_x + 18.0, H - BOTTOM, tick(vlo)).unwrap();
    writeln!(out, r#"<text x="{}" y="{}">{}</text>"#, bar_x, TOP - 8.0, escape(labels.2)).unwrap();
    out.push_str("</svg>\n");
    Some(out)
}

fn sorted_unique(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

fn heatmap_long(table: &ResultTable, x: usize, y: usize, value: usize, title: &str) -> Option<String> {
    let get = |c: usize| table.rows.iter().map(|r| r[c].as_f64()).collect::<Option<Vec<f64>>>();
    let (xv, yv, vv) = (get(x)?, get(y)?, get(value)?);
    let xs = sorted_unique(xv.clone());
    let ys = sorted_unique(yv.clone());
    let find = |axis: &[f64], v: f64| axis.binary_search_by(|a| a.total_cmp(&v)).ok();
    let values: Vec<(usize, usize, f64)> = (0..vv.len())
        .filter_map(|r| Some((find(&xs, xv[r])?, find(&ys, yv[r])?, vv[r])))
        .collect();
    cells(title, &xs, &ys, &values, (&table.columns[x], &table.columns[y], &table.columns[value]))
}

fn grid(table: &ResultTable, title: &str) -> Option<String> {
    let ts: Vec<f64> = table.rows.iter().map(|r| r[0].as_f64()).collect::<Option<_>>()?;
    let sites: Vec<f64> = (0..table.columns.len() - 1).map(|i| i as f64).collect();
    let mut values = Vec::new();
    for (j, row) in table.rows.iter().enumerate() {
        for (i, cell) in row[1..].iter().enumerate() {
            values.push((i, j, cell.as_f64()?));
        }
    }
    cells(title, &sites, &ts, &values, ("site", &table.columns[0], &table.observable))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::Cell;

    #[test]
    fn renders_each_hint() {
        let mut t = ResultTable::with_columns("rate", &["t", "a", "b"], PlotHint::Lines { x: 0 });
        for i in 0..5u64 {
            let inf = if i == 2 { f64::INFINITY } else { i as f64 };
            t.push(vec![Cell::Int(i as i64), (i as f64).into(), inf.into()]).unwrap();
        }
        let svg = render(&t, "loschmidt").unwrap();
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
        assert_eq!(svg.matches("<polyline").count(), 3);

        t.plot = PlotHint::Grid;
        assert_eq!(render(&t, "grid").unwrap().matches("<rect").count(), 2 + 10 + 50);

        let mut h = ResultTable::with_columns("q0", &["j", "b", "q0"], PlotHint::Heatmap { x: 0, y: 1, value: 2 });
        for j in 0..3 {
            for b in 0..2 {
                h.push(vec![(j as f64).into(), (b as f64).into(), ((j * b) as f64).into()]).unwrap();
            }
        }
        assert_eq!(render(&h, "map").unwrap().matches("<rect").count(), 2 + 6 + 50);
        h.plot = PlotHint::None;
        assert!(render(&h, "none").is_none());
    }

    #[test]
    fn ramp_endpoints() {
        assert_eq!(color(0.0), "#440154");
        assert_eq!(color(1.0), "#fde725");
        assert_eq!(color(f64::NAN), "#fde725");
    }
}
