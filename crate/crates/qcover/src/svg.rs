//! Minimal SVG histograms with a fixed 50-bin layout.

use std::fmt::Write;

pub const BINS: usize = 50;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 360.0;
const MARGIN: f64 = 48.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

/// Bin counts over `[lo, hi]`; values outside are clamped into the end bins.
pub fn bin_counts(values: &[f64], lo: f64, hi: f64) -> [usize; BINS] {
    let mut counts = [0usize; BINS];
    let width = (hi - lo) / BINS as f64;
    for &v in values.iter().filter(|v| v.is_finite()) {
        let b = ((v - lo) / width).floor();
        let b = if b < 0.0 { 0 } else { (b as usize).min(BINS - 1) };
        counts[b] += 1;
    }
    counts
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Overlaid step histograms, one per series, normalized to densities.
pub fn histogram(title: &str, series: &[(&str, &[f64])], lo: f64, hi: f64) -> String {
    let densities: Vec<Vec<f64>> = series
        .iter()
        .map(|(_, v)| {
            let total = v.len().max(1) as f64;
            let bin_w = (hi - lo) / BINS as f64;
            bin_counts(v, lo, hi)
                .iter()
                .map(|&c| c as f64 / (total * bin_w))
                .collect()
        })
        .collect();
    let peak = densities
        .iter()
        .flatten()
        .copied()
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let plot_w = WIDTH - 2.0 * MARGIN;
    let plot_h = HEIGHT - 2.0 * MARGIN;
    let x = |i: usize| MARGIN + plot_w * i as f64 / BINS as f64;
    let y = |d: f64| HEIGHT - MARGIN - plot_h * d / peak;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="20" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    let _ = writeln!(
        s,
        r#"<path d="M{m} {top} V{base} H{right}" stroke="black" fill="none"/>"#,
        m = MARGIN,
        top = MARGIN,
        base = HEIGHT - MARGIN,
        right = WIDTH - MARGIN
    );
    for (i, label) in [lo, (lo + hi) / 2.0, hi].iter().enumerate() {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            MARGIN + plot_w * i as f64 / 2.0,
            HEIGHT - MARGIN + 16.0,
            label
        );
    }
    for (k, ((name, _), dens)) in series.iter().zip(&densities).enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let mut d = format!("M{} {}", x(0), y(0.0));
        for (i, &v) in dens.iter().enumerate() {
            let _ = write!(d, " V{:.2} H{:.2}", y(v), x(i + 1));
        }
        let _ = write!(d, " V{:.2}", y(0.0));
        let _ = writeln!(s, r#"<path d="{d}" stroke="{color}" fill="none" stroke-width="1.5"/>"#);
        let ly = MARGIN + 16.0 * k as f64;
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{ly}" fill="{color}">{}</text>"#,
            WIDTH - MARGIN - 80.0,
            escape(name)
        );
    }
    s.push_str("</svg>\n");
    s
}
