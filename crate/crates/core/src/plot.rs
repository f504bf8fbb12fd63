//! Plain SVG charts: silhouette against `k` and verdict counts per mode.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::selection::{SelectionReport, SweepCell, Verdict};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 50.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
];

fn series_label(c: &SweepCell) -> String {
    let mut s = match c.sax {
        Some(p) => format!("w={} a={} l={}", p.window, p.alphabet, p.word_length),
        None => "raw".to_string(),
    };
    if let Some(f) = c.filter {
        let _ = write!(s, " f=[{}, {}]", f.min_freq, f.max_freq);
    }
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// One polyline per parameter combination (vertices at each swept `k`), with
/// the best cell circled.
pub fn silhouette_svg(report: &SelectionReport) -> String {
    let mut lines: BTreeMap<String, Vec<(usize, f64)>> = BTreeMap::new();
    for c in &report.cells {
        lines.entry(series_label(c)).or_default().push((c.k, c.silhouette));
    }
    let k_lo = report.cells.iter().map(|c| c.k).min().unwrap_or(2) as f64;
    let k_hi = report.cells.iter().map(|c| c.k).max().unwrap_or(2) as f64;
    let x = |k: f64| {
        if k_hi > k_lo {
            MARGIN + (k - k_lo) / (k_hi - k_lo) * (WIDTH - 2.0 * MARGIN)
        } else {
            WIDTH / 2.0
        }
    };
    let y = |s: f64| HEIGHT - MARGIN - (s + 1.0) / 2.0 * (HEIGHT - 2.0 * MARGIN);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="20" text-anchor="middle" font-size="14">{} ({}): silhouette by number of clusters</text>"#,
        WIDTH / 2.0,
        escape(&report.dataset),
        report.mode
    );
    axes(&mut svg, &x, &y, k_lo as usize, k_hi as usize);
    for (i, (label, mut pts)) in lines.into_iter().enumerate() {
        pts.sort_by_key(|p| p.0);
        let colour = PALETTE[i % PALETTE.len()];
        let coords: Vec<String> = pts
            .iter()
            .map(|&(k, s)| format!("{:.2},{:.2}", x(k as f64), y(s)))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline class="series" fill="none" stroke="{colour}" stroke-width="1.5" points="{}"><title>{}</title></polyline>"#,
            coords.join(" "),
            escape(&label)
        );
    }
    let b = &report.best;
    let _ = writeln!(
        svg,
        r#"<circle class="best" cx="{:.2}" cy="{:.2}" r="6" fill="none" stroke="black" stroke-width="2"><title>best: k={} silhouette={:.4} {}</title></circle>"#,
        x(b.k as f64),
        y(b.silhouette),
        b.k,
        b.silhouette,
        escape(&series_label(b))
    );
    svg.push_str("</svg>\n");
    svg
}

fn axes(svg: &mut String, x: &dyn Fn(f64) -> f64, y: &dyn Fn(f64) -> f64, k_lo: usize, k_hi: usize) {
    let (x0, x1) = (MARGIN, WIDTH - MARGIN);
    let (y0, y1) = (HEIGHT - MARGIN, MARGIN);
    let _ = writeln!(svg, r#"<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>"#);
    let _ = writeln!(svg, r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>"#);
    for k in k_lo..=k_hi {
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{}" text-anchor="middle" font-size="11">{k}</text>"#,
            x(k as f64),
            y0 + 16.0
        );
    }
    for s in [-1.0, -0.5, 0.0, 0.5, 1.0] {
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{:.2}" text-anchor="end" font-size="11">{s}</text>"#,
            x0 - 6.0,
            y(s) + 4.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle" font-size="12">k</text>"#,
        WIDTH / 2.0,
        HEIGHT - 10.0
    );
}

/// Grouped bars of Correct/Close/Wrong counts, one group per labelled run.
pub fn comparison_svg(groups: &[(String, Vec<Verdict>)]) -> String {
    let kinds = [Verdict::Correct, Verdict::Close, Verdict::Wrong];
    let colours = ["#2ca02c", "#ff7f0e", "#d62728"];
    let counts: Vec<[usize; 3]> = groups
        .iter()
        .map(|(_, v)| kinds.map(|k| v.iter().filter(|&&x| x == k).count()))
        .collect();
    let top = counts.iter().flatten().copied().max().unwrap_or(0).max(1) as f64;
    let group_w = (WIDTH - 2.0 * MARGIN) / groups.len().max(1) as f64;
    let bar_w = group_w / 4.0;
    let h = |c: usize| c as f64 / top * (HEIGHT - 2.0 * MARGIN);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="20" text-anchor="middle" font-size="14">Comparing results</text>"#,
        WIDTH / 2.0
    );
    let base = HEIGHT - MARGIN;
    let _ = writeln!(
        svg,
        r#"<line x1="{MARGIN}" y1="{base}" x2="{}" y2="{base}" stroke="black"/>"#,
        WIDTH - MARGIN
    );
    for (g, ((label, _), c)) in groups.iter().zip(&counts).enumerate() {
        let gx = MARGIN + g as f64 * group_w + bar_w / 2.0;
        for (b, &n) in c.iter().enumerate() {
            let bx = gx + b as f64 * bar_w;
            let _ = writeln!(
                svg,
                r#"<rect class="{}" x="{bx:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{}"><title>{} {}: {n}</title></rect>"#,
                kinds[b].as_str().to_lowercase(),
                base - h(n),
                bar_w * 0.9,
                h(n),
                colours[b],
                escape(label),
                kinds[b]
            );
        }
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{}" text-anchor="middle" font-size="12">{}</text>"#,
            gx + 1.5 * bar_w,
            base + 16.0,
            escape(label)
        );
    }
    for (b, kind) in kinds.iter().enumerate() {
        let ly = MARGIN + 16.0 * b as f64;
        let _ = writeln!(
            svg,
            r#"<rect x="{}" y="{ly}" width="10" height="10" fill="{}"/><text x="{}" y="{}" font-size="11">{kind}</text>"#,
            WIDTH - MARGIN - 70.0,
            colours[b],
            WIDTH - MARGIN - 55.0,
            ly + 9.0
        );
    }
    svg.push_str("</svg>\n");
    svg
}
