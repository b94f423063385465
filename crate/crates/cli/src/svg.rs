//! SVG pictures of planar probing runs.
//!
//! Each probe is drawn as its support line, clipped to the view and labelled
//! with its call number. The final outer polygon, the certified vertices and,
//! when known, the hidden polygon are drawn on top. Output depends only on the
//! inputs, so identical runs render byte-identical files.

use crate::trace::{to_points, TraceFile};
use polyprobe::geometry::{convex_hull_2d, Point};
use polyprobe::scalar::to_f64;
use std::fmt::Write;

const SIZE: f64 = 640.0;
const MARGIN: f64 = 32.0;

struct View {
    min: (f64, f64),
    max: (f64, f64),
}

impl View {
    fn around(points: &[(f64, f64)]) -> Self {
        let mut min = (f64::INFINITY, f64::INFINITY);
        let mut max = (f64::NEG_INFINITY, f64::NEG_INFINITY);
        for &(x, y) in points {
            min = (min.0.min(x), min.1.min(y));
            max = (max.0.max(x), max.1.max(y));
        }
        if points.is_empty() {
            min = (0.0, 0.0);
            max = (0.0, 0.0);
        }
        // Square view with some padding; a single point still gets an area.
        let span = (max.0 - min.0).max(max.1 - min.1).max(2.0);
        let pad = span * 0.15;
        let c = ((min.0 + max.0) / 2.0, (min.1 + max.1) / 2.0);
        let half = span / 2.0 + pad;
        View {
            min: (c.0 - half, c.1 - half),
            max: (c.0 + half, c.1 + half),
        }
    }

    fn to_screen(&self, (x, y): (f64, f64)) -> (f64, f64) {
        let scale = (SIZE - 2.0 * MARGIN) / (self.max.0 - self.min.0);
        (
            MARGIN + (x - self.min.0) * scale,
            SIZE - MARGIN - (y - self.min.1) * scale,
        )
    }

    /// The part of `{p : d·p = value}` inside the view.
    fn clip(&self, d: (f64, f64), value: f64) -> Option<((f64, f64), (f64, f64))> {
        let mut hits: Vec<(f64, f64)> = Vec::new();
        let eps = 1e-9 * (self.max.0 - self.min.0);
        if d.1 != 0.0 {
            for x in [self.min.0, self.max.0] {
                let y = (value - d.0 * x) / d.1;
                if y >= self.min.1 - eps && y <= self.max.1 + eps {
                    hits.push((x, y));
                }
            }
        }
        if d.0 != 0.0 {
            for y in [self.min.1, self.max.1] {
                let x = (value - d.1 * y) / d.0;
                if x >= self.min.0 - eps && x <= self.max.0 + eps {
                    hits.push((x, y));
                }
            }
        }
        let mut best: Option<((f64, f64), (f64, f64))> = None;
        let mut best_len = -1.0;
        for (i, a) in hits.iter().enumerate() {
            for b in &hits[i..] {
                let len = (a.0 - b.0).hypot(a.1 - b.1);
                if len > best_len {
                    best_len = len;
                    best = Some((*a, *b));
                }
            }
        }
        best
    }
}

fn xy(p: &Point) -> (f64, f64) {
    (to_f64(&p[0]), to_f64(&p[1]))
}

fn polygon_path(view: &View, pts: &[Point]) -> String {
    let mut path = String::new();
    for (i, p) in pts.iter().enumerate() {
        let (x, y) = view.to_screen(xy(p));
        let _ = write!(path, "{}{x:.2},{y:.2}", if i == 0 { "M" } else { " L" });
    }
    path.push_str(" Z");
    path
}

/// Renders a planar trace. `hidden` adds the true polygon for comparison.
pub fn render(trace: &TraceFile, hidden: Option<&[Point]>) -> Result<String, String> {
    if trace.dimension != 2 {
        return Err(format!(
            "only planar traces can be rendered; this trace lives in R^{}",
            trace.dimension
        ));
    }
    let mut world: Vec<(f64, f64)> = Vec::new();
    for r in &trace.records {
        world.extend(to_points(&r.outer_vertices).iter().map(xy));
        world.extend(to_points(&r.confirmed_vertices).iter().map(xy));
    }
    let found = to_points(&trace.vertices);
    world.extend(found.iter().map(xy));
    if let Some(h) = hidden {
        world.extend(h.iter().map(xy));
    }
    let view = View::around(&world);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    svg.push_str(
        "<style>.probe{stroke:#4a6fa5;stroke-width:1}.label{font:11px sans-serif;fill:#4a6fa5}\
         .outer{fill:#dfe8f5;fill-opacity:0.5;stroke:#1b3a66;stroke-width:1.5}\
         .hidden{fill:none;stroke:#c0392b;stroke-width:2;stroke-dasharray:6 3}\
         .confirmed{fill:#1b3a66}</style>\n",
    );
    let _ = writeln!(svg, r##"<rect width="{SIZE}" height="{SIZE}" fill="#ffffff"/>"##);

    if let Some(last) = trace.records.iter().rev().find(|r| !r.outer_vertices.is_empty()) {
        let outer = convex_hull_2d(&to_points(&last.outer_vertices));
        let _ = writeln!(svg, r#"<path class="outer" d="{}"/>"#, polygon_path(&view, outer.vertices()));
    }
    if let Some(h) = hidden {
        let hull = convex_hull_2d(h);
        let _ = writeln!(svg, r#"<path class="hidden" d="{}"/>"#, polygon_path(&view, hull.vertices()));
    }

    for r in &trace.records {
        let d = (to_f64(&r.direction[0].0), to_f64(&r.direction[1].0));
        let value = to_f64(&r.value.0);
        let (a, b) = view.clip(d, value).unwrap_or_else(|| {
            // The line misses the view entirely only if the trace is corrupt;
            // still emit a zero-length line so numbering stays aligned.
            let p = view.min;
            (p, p)
        });
        let (sa, sb) = (view.to_screen(a), view.to_screen(b));
        let _ = writeln!(
            svg,
            r#"<line class="probe" data-call="{}" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/>"#,
            r.index, sa.0, sa.1, sb.0, sb.1
        );
        // Spread labels along their lines so concurrent lines stay readable.
        let t = 0.15 + 0.7 * ((r.index as f64 * 0.618_033_988_75).fract());
        let (lx, ly) = (sa.0 + t * (sb.0 - sa.0), sa.1 + t * (sb.1 - sa.1));
        let _ = writeln!(
            svg,
            r#"<text class="label" x="{lx:.2}" y="{:.2}">{}</text>"#,
            ly - 3.0,
            r.index
        );
    }

    for p in &found {
        let (x, y) = view.to_screen(xy(p));
        let _ = writeln!(svg, r#"<circle class="confirmed" cx="{x:.2}" cy="{y:.2}" r="4"/>"#);
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use polyprobe::oracle::VertexListOracle;
    use polyprobe::reconstruct::{reconstruct_2d, InitializationScheme, VertexBudget};

    fn trace_of(pts: &[[i64; 2]], budget: VertexBudget) -> (TraceFile, Vec<Point>) {
        let pts: Vec<Point> = pts.iter().map(|p| Point::from_ints(p)).collect();
        let report = reconstruct_2d(
            VertexListOracle::new(pts.clone()).unwrap(),
            budget,
            InitializationScheme::StandardTriangle,
        )
        .unwrap();
        (TraceFile::from_report(&report), pts)
    }

    #[test]
    fn one_line_per_call() {
        let (trace, pts) = trace_of(&[[0, 0], [4, 0], [1, 3]], VertexBudget::Infinite);
        let svg = render(&trace, Some(&pts)).unwrap();
        assert_eq!(svg.matches(r#"<line class="probe""#).count(), trace.oracle_calls);
        assert!(svg.contains(r#"class="hidden""#));
    }

    #[test]
    fn singleton_draws_three_lines() {
        let (trace, _) = trace_of(&[[3, 4]], VertexBudget::Infinite);
        let svg = render(&trace, None).unwrap();
        assert_eq!(svg.matches(r#"<line class="probe""#).count(), 3);
    }

    #[test]
    fn rejects_non_planar_traces() {
        let mut trace = trace_of(&[[3, 4]], VertexBudget::Infinite).0;
        trace.dimension = 3;
        assert!(render(&trace, None).unwrap_err().contains("planar"));
    }
}
