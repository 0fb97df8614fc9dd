//! Static SVG figures: correlation boxplots, per-imbalance panels, the
//! imbalance-ratio boxplot and a mean-rank critical-difference chart.

use std::fmt::Write as _;

use clustval::harness::{stratum_label, BenchmarkReport, FiveNumber};

const FONT: &str = "font-family=\"sans-serif\" font-size=\"11\"";

/// Box statistics with Tukey whiskers (1.5 IQR) and the points beyond them.
struct BoxStats {
    five: FiveNumber,
    low: f64,
    high: f64,
    outliers: Vec<f64>,
}

impl BoxStats {
    fn of(values: &[f64]) -> Option<Self> {
        let five = FiveNumber::of(values)?;
        let iqr = five.q3 - five.q1;
        let (lo_fence, hi_fence) = (five.q1 - 1.5 * iqr, five.q3 + 1.5 * iqr);
        let inside = values.iter().copied().filter(|v| (lo_fence..=hi_fence).contains(v));
        let low = inside.clone().fold(f64::INFINITY, f64::min);
        let high = inside.fold(f64::NEG_INFINITY, f64::max);
        let mut outliers: Vec<f64> = values.iter().copied().filter(|v| !(lo_fence..=hi_fence).contains(v)).collect();
        outliers.sort_by(f64::total_cmp);
        Some(Self {
            five,
            low,
            high,
            outliers,
        })
    }
}

struct Svg {
    body: String,
    width: f64,
    height: f64,
}

impl Svg {
    fn new(width: f64, height: f64) -> Self {
        Self {
            body: String::new(),
            width,
            height,
        }
    }

    fn line(&mut self, x1: f64, y1: f64, x2: f64, y2: f64, style: &str) {
        let _ = writeln!(
            self.body,
            "<line x1=\"{x1:.2}\" y1=\"{y1:.2}\" x2=\"{x2:.2}\" y2=\"{y2:.2}\" {style}/>"
        );
    }

    fn rect(&mut self, x: f64, y: f64, w: f64, h: f64, style: &str) {
        let _ = writeln!(
            self.body,
            "<rect x=\"{x:.2}\" y=\"{y:.2}\" width=\"{w:.2}\" height=\"{h:.2}\" {style}/>"
        );
    }

    fn circle(&mut self, x: f64, y: f64, r: f64, style: &str) {
        let _ = writeln!(self.body, "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"{r}\" {style}/>");
    }

    fn text(&mut self, x: f64, y: f64, anchor: &str, extra: &str, content: &str) {
        let _ = writeln!(
            self.body,
            "<text x=\"{x:.2}\" y=\"{y:.2}\" text-anchor=\"{anchor}\" {FONT} {extra}>{}</text>",
            escape(content)
        );
    }

    fn finish(self) -> String {
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n\
             <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{}</svg>\n",
            self.body,
            w = self.width,
            h = self.height
        )
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Vertical box plots sharing one y axis, drawn into `[x0, x0 + w] x [y0, y0 + h]`.
fn boxplot_panel(
    svg: &mut Svg,
    (x0, y0, w, h): (f64, f64, f64, f64),
    groups: &[(String, Vec<f64>)],
    (ymin, ymax): (f64, f64),
    title: &str,
) {
    let y_of = |v: f64| y0 + h - (v - ymin) / (ymax - ymin) * h;
    svg.rect(x0, y0, w, h, "fill=\"none\" stroke=\"#444\"");
    svg.text(x0 + w / 2.0, y0 - 6.0, "middle", "font-weight=\"bold\"", title);
    let ticks = 4;
    for t in 0..=ticks {
        let v = ymin + (ymax - ymin) * t as f64 / ticks as f64;
        let y = y_of(v);
        svg.line(x0, y, x0 + w, y, "stroke=\"#ddd\"");
        svg.text(x0 - 4.0, y + 4.0, "end", "", &format!("{v:.2}"));
    }
    if ymin < 0.0 && ymax > 0.0 {
        svg.line(x0, y_of(0.0), x0 + w, y_of(0.0), "stroke=\"#999\" stroke-dasharray=\"3,3\"");
    }
    let slot = w / groups.len().max(1) as f64;
    for (i, (label, values)) in groups.iter().enumerate() {
        let cx = x0 + slot * (i as f64 + 0.5);
        let half = slot * 0.3;
        let label_y = y0 + h + 14.0;
        svg.text(cx, label_y, "end", &format!("transform=\"rotate(-45 {cx:.2} {label_y:.2})\""), label);
        let Some(b) = BoxStats::of(values) else {
            continue;
        };
        let stroke = "stroke=\"#222\"";
        svg.line(cx, y_of(b.low), cx, y_of(b.five.q1), stroke);
        svg.line(cx, y_of(b.five.q3), cx, y_of(b.high), stroke);
        svg.line(cx - half / 2.0, y_of(b.low), cx + half / 2.0, y_of(b.low), stroke);
        svg.line(cx - half / 2.0, y_of(b.high), cx + half / 2.0, y_of(b.high), stroke);
        svg.rect(
            cx - half,
            y_of(b.five.q3),
            2.0 * half,
            (y_of(b.five.q1) - y_of(b.five.q3)).max(0.5),
            "fill=\"#9ecae1\" stroke=\"#222\"",
        );
        svg.line(cx - half, y_of(b.five.median), cx + half, y_of(b.five.median), "stroke=\"#222\" stroke-width=\"2\"");
        for &o in &b.outliers {
            svg.circle(cx, y_of(o), 2.0, "fill=\"none\" stroke=\"#222\"");
        }
    }
}

fn padded_range(values: impl Iterator<Item = f64>, floor: Option<(f64, f64)>) -> (f64, f64) {
    let (mut lo, mut hi) = floor.unwrap_or((f64::INFINITY, f64::NEG_INFINITY));
    for v in values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if !lo.is_finite() || !hi.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-9 {
        return (lo - 0.5, hi + 0.5);
    }
    (lo, hi)
}

fn column(report: &BenchmarkReport, j: usize, pct: Option<u32>) -> Vec<f64> {
    report
        .datasets
        .iter()
        .filter(|d| pct.is_none() || d.imbalance_pct == pct)
        .filter_map(|d| d.correlations[j])
        .collect()
}

/// Correlation with ARI per index over all datasets, ordered by median.
pub fn correlation_boxplot(report: &BenchmarkReport) -> String {
    let mut groups: Vec<(String, Vec<f64>)> = report
        .cvis
        .iter()
        .enumerate()
        .map(|(j, c)| (c.id().to_string(), column(report, j, None)))
        .collect();
    let median = |v: &Vec<f64>| FiveNumber::of(v).map_or(f64::NEG_INFINITY, |f| f.median);
    groups.sort_by(|a, b| median(&b.1).total_cmp(&median(&a.1)));
    let range = padded_range(groups.iter().flat_map(|g| g.1.iter().copied()), Some((-1.0, 1.0)));
    let width = 80.0 + 55.0 * groups.len() as f64;
    let mut svg = Svg::new(width, 380.0);
    boxplot_panel(
        &mut svg,
        (60.0, 30.0, width - 80.0, 260.0),
        &groups,
        range,
        "Correlation with ARI",
    );
    svg.finish()
}

/// One panel per index with a box per imbalance stratum.
pub fn imbalance_boxplots(report: &BenchmarkReport) -> Option<String> {
    let mut levels: Vec<u32> = report.datasets.iter().filter_map(|d| d.imbalance_pct).collect();
    levels.sort_unstable();
    levels.dedup();
    if levels.is_empty() {
        return None;
    }
    let cols = 4;
    let rows = report.cvis.len().div_ceil(cols);
    let (pw, ph) = (40.0 + 34.0 * levels.len() as f64, 170.0);
    let mut svg = Svg::new(30.0 + cols as f64 * (pw + 50.0), 20.0 + rows as f64 * (ph + 70.0));
    for (j, cvi) in report.cvis.iter().enumerate() {
        let groups: Vec<(String, Vec<f64>)> = levels
            .iter()
            .map(|&p| (stratum_label(p), column(report, j, Some(p))))
            .collect();
        let (r, c) = (j / cols, j % cols);
        let x0 = 50.0 + c as f64 * (pw + 50.0);
        let y0 = 30.0 + r as f64 * (ph + 70.0);
        boxplot_panel(&mut svg, (x0, y0, pw, ph), &groups, (-1.0, 1.0), cvi.id());
    }
    Some(svg.finish())
}

/// Largest over smallest cluster size, overall and per imbalance stratum.
pub fn imbalance_ratio_boxplot(report: &BenchmarkReport) -> String {
    let mut groups = vec![(
        "all".to_string(),
        report.datasets.iter().map(|d| d.imbalance_ratio).collect::<Vec<_>>(),
    )];
    let mut levels: Vec<u32> = report.datasets.iter().filter_map(|d| d.imbalance_pct).collect();
    levels.sort_unstable();
    levels.dedup();
    for p in levels {
        let ratios = report
            .datasets
            .iter()
            .filter(|d| d.imbalance_pct == Some(p))
            .map(|d| d.imbalance_ratio)
            .collect();
        groups.push((stratum_label(p), ratios));
    }
    let (lo, hi) = padded_range(groups.iter().flat_map(|g| g.1.iter().copied()), None);
    let width = 100.0 + 50.0 * groups.len() as f64;
    let mut svg = Svg::new(width, 330.0);
    boxplot_panel(
        &mut svg,
        (60.0, 30.0, width - 80.0, 240.0),
        &groups,
        (lo.min(1.0), hi.max(lo + 1.0)),
        "Cluster size imbalance ratio",
    );
    svg.finish()
}

/// Mean rank per index (lower is better) with a bar of half the critical
/// difference on each side: non-overlapping bars differ significantly.
pub fn critical_difference_chart(report: &BenchmarkReport) -> Option<String> {
    let f = report.friedman.as_ref()?;
    let mut order: Vec<usize> = (0..report.cvis.len()).collect();
    order.sort_by(|&a, &b| f.mean_ranks[a].total_cmp(&f.mean_ranks[b]));
    let c = report.cvis.len() as f64;
    let half = f.critical_difference / 2.0;
    let (xmin, xmax) = ((1.0 - half).min(1.0), (c + half).max(c));
    let (x0, w, y0, step) = (130.0, 420.0, 40.0, 24.0);
    let x_of = |v: f64| x0 + (v - xmin) / (xmax - xmin) * w;
    let height = y0 + step * c + 50.0;
    let mut svg = Svg::new(x0 + w + 30.0, height);
    svg.text(
        x0 + w / 2.0,
        18.0,
        "middle",
        "font-weight=\"bold\"",
        &format!(
            "Mean rank (CD = {:.3}, alpha = {}, N = {})",
            f.critical_difference,
            f.alpha,
            f.n_datasets()
        ),
    );
    let axis_y = y0 + step * c;
    svg.line(x0, axis_y, x0 + w, axis_y, "stroke=\"#444\"");
    for r in 1..=report.cvis.len() {
        let x = x_of(r as f64);
        svg.line(x, y0 - 8.0, x, axis_y, "stroke=\"#eee\"");
        svg.text(x, axis_y + 14.0, "middle", "", &r.to_string());
    }
    for (row, &j) in order.iter().enumerate() {
        let y = y0 + step * row as f64 + step / 2.0;
        let m = f.mean_ranks[j];
        svg.rect(x_of(m - half), y - 4.0, x_of(m + half) - x_of(m - half), 8.0, "fill=\"#ccc\"");
        svg.circle(x_of(m), y, 4.0, "fill=\"#222\"");
        svg.text(x0 - 8.0, y + 4.0, "end", "", &format!("{} ({m:.2})", report.cvis[j].id()));
    }
    Some(svg.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tukey_whiskers() {
        let b = BoxStats::of(&[1.0, 2.0, 3.0, 4.0, 100.0]).unwrap();
        assert_eq!(b.outliers, vec![100.0]);
        assert_eq!((b.low, b.high), (1.0, 4.0));
    }

    #[test]
    fn svg_text_is_escaped() {
        let mut svg = Svg::new(10.0, 10.0);
        svg.text(0.0, 0.0, "start", "", "a<b & c");
        let out = svg.finish();
        assert!(out.contains("a&lt;b &amp; c"));
        assert!(out.starts_with("<svg"));
    }
}
