use std::fmt::Write;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN: f64 = 50.0;
const BINS: usize = 60;
const CURVE_POINTS: usize = 200;

/// Histogram of `samples` with a CDF overlay, as a fixed 800x600 SVG 1.1
/// document. Bars are scaled to the tallest bin, the curve to `[0, 1]`.
pub fn histogram_svg(samples: &[f64], cdf: &dyn Fn(f64) -> f64, title: &str) -> String {
    let finite: Vec<f64> = samples.iter().copied().filter(|v| v.is_finite()).collect();
    let (mut lo, mut hi) = finite
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    if finite.is_empty() {
        (lo, hi) = (-1.0, 1.0);
    }
    if hi - lo < 1e-12 {
        lo -= 0.5;
        hi += 0.5;
    }
    let width = (hi - lo) / BINS as f64;
    let mut counts = [0usize; BINS];
    for v in &finite {
        let b = (((v - lo) / width) as usize).min(BINS - 1);
        counts[b] += 1;
    }
    let tallest = counts.iter().copied().max().unwrap_or(0).max(1) as f64;
    let plot_w = WIDTH - 2.0 * MARGIN;
    let plot_h = HEIGHT - 2.0 * MARGIN;
    let x_of = |t: f64| MARGIN + (t - lo) / (hi - lo) * plot_w;
    let y_of = |frac: f64| HEIGHT - MARGIN - frac * plot_h;

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{MARGIN}" y="30" font-family="sans-serif" font-size="16">{}</text>"#, escape(title));
    let _ = writeln!(s, r##"<g fill="#7aa6d6" stroke="#3b6ea5" stroke-width="0.5">"##);
    for (k, &c) in counts.iter().enumerate() {
        let x0 = x_of(lo + k as f64 * width);
        let h = c as f64 / tallest * plot_h;
        let _ = writeln!(
            s,
            r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}"/>"#,
            x0,
            HEIGHT - MARGIN - h,
            plot_w / BINS as f64,
            h
        );
    }
    let _ = writeln!(s, "</g>");
    let mut points = String::new();
    for k in 0..=CURVE_POINTS {
        let t = lo + (hi - lo) * k as f64 / CURVE_POINTS as f64;
        let f = cdf(t);
        if f.is_finite() {
            let _ = write!(points, "{:.3},{:.3} ", x_of(t), y_of(f.clamp(0.0, 1.0)));
        }
    }
    let _ = writeln!(s, r##"<polyline fill="none" stroke="#c0392b" stroke-width="2" points="{}"/>"##, points.trim_end());
    let _ = writeln!(
        s,
        r#"<line x1="{MARGIN}" y1="{0}" x2="{1}" y2="{0}" stroke="black"/>"#,
        HEIGHT - MARGIN,
        WIDTH - MARGIN
    );
    let _ = writeln!(
        s,
        r#"<text x="{MARGIN}" y="{:.0}" font-family="sans-serif" font-size="12">{}</text>"#,
        HEIGHT - MARGIN + 20.0,
        crate::export::fmt_real(lo)
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.0}" y="{:.0}" font-family="sans-serif" font-size="12" text-anchor="end">{}</text>"#,
        WIDTH - MARGIN,
        HEIGHT - MARGIN + 20.0,
        crate::export::fmt_real(hi)
    );
    let _ = writeln!(s, "</svg>");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn svg_is_deterministic_and_well_formed() {
        let xs: Vec<f64> = (0..500).map(|i| ((i * 37) % 101) as f64 / 10.0).collect();
        let a = histogram_svg(&xs, &|t| (t / 10.0).clamp(0.0, 1.0), "a < b");
        let b = histogram_svg(&xs, &|t| (t / 10.0).clamp(0.0, 1.0), "a < b");
        assert_eq!(a, b);
        assert!(a.contains(r#"width="800""#) && a.contains(r#"height="600""#));
        assert!(a.contains("a &lt; b"));
        assert_eq!(a.matches("<rect").count(), BINS + 1);
        assert!(a.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn degenerate_samples_still_render() {
        let s = histogram_svg(&[0.0; 10], &|t| if t >= 0.0 { 1.0 } else { 0.0 }, "point mass");
        assert!(s.contains("<polyline"));
    }
}
