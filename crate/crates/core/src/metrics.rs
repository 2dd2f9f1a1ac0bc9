//! Layout quality metrics and result aggregation.
//!
//! Hull efficiency is the convex-hull area of all cell corners over the
//! area of their axis-aligned bounding box (1 for a perfectly rectangular
//! footprint). Perimeter efficiency is the hull perimeter over the total
//! occupied cell area; lower means a more compact layout per unit area.

use crate::geometry::{AxisRect, Point};
use crate::layout::Layout;
use crate::metaheuristics::RunTrace;

/// Metrics of one layout.
#[derive(Debug, Clone)]
pub struct MetricsRecord {
    pub objective: f64,
    pub perimeter_efficiency: f64,
    pub hull_efficiency: f64,
    pub bounding_box: AxisRect,
    pub hull_area: f64,
    pub occupied_area: f64,
}

/// Convex hull by monotone chain; returns counterclockwise vertices with
/// collinear interior points excluded.
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort_by(|a, b| a.x.partial_cmp(&b.x).unwrap().then(a.y.partial_cmp(&b.y).unwrap()));
    pts.dedup_by(|a, b| a.x == b.x && a.y == b.y);
    let n = pts.len();
    if n <= 2 {
        return pts;
    }

    let cross = |o: &Point, a: &Point, b: &Point| -> f64 {
        (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
    };

    let mut lower: Vec<Point> = Vec::with_capacity(n);
    for p in &pts {
        while lower.len() >= 2 && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(*p);
    }
    let mut upper: Vec<Point> = Vec::with_capacity(n);
    for p in pts.iter().rev() {
        while upper.len() >= 2 && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(*p);
    }

    // Each chain ends where the other starts; drop the duplicates.
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Shoelace area of a simple polygon given as an ordered vertex list.
pub fn polygon_area(polygon: &[Point]) -> f64 {
    if polygon.len() < 3 {
        return 0.0;
    }
    let mut twice = 0.0;
    for i in 0..polygon.len() {
        let a = polygon[i];
        let b = polygon[(i + 1) % polygon.len()];
        twice += a.x * b.y - b.x * a.y;
    }
    0.5 * twice.abs()
}

/// Closed-tour length around an ordered vertex list.
pub fn polygon_perimeter(polygon: &[Point]) -> f64 {
    if polygon.len() < 2 {
        return 0.0;
    }
    let mut total = 0.0;
    for i in 0..polygon.len() {
        total += polygon[i].distance(&polygon[(i + 1) % polygon.len()]);
    }
    total
}

fn all_corners(layout: &Layout) -> Vec<Point> {
    (0..layout.len())
        .flat_map(|c| layout.nodes(c).corners)
        .collect()
}

/// Convex-hull area of all corners over the bounding-box area.
pub fn hull_efficiency(layout: &Layout) -> f64 {
    let corners = all_corners(layout);
    let hull = convex_hull(&corners);
    let bbox = layout.bounding_box().expect("non-empty layout");
    polygon_area(&hull) / (bbox.width() * bbox.height())
}

/// Convex-hull perimeter of all corners over the total occupied cell area.
pub fn perimeter_efficiency(layout: &Layout) -> f64 {
    let corners = all_corners(layout);
    let hull = convex_hull(&corners);
    let occupied: f64 = layout.specs.iter().map(|c| c.area()).sum();
    polygon_perimeter(&hull) / occupied
}

/// Full metrics record for a layout with a known objective value.
pub fn layout_metrics(layout: &Layout, objective: f64) -> MetricsRecord {
    MetricsRecord {
        objective,
        perimeter_efficiency: perimeter_efficiency(layout),
        hull_efficiency: hull_efficiency(layout),
        bounding_box: layout.bounding_box().expect("non-empty layout"),
        hull_area: polygon_area(&convex_hull(&all_corners(layout))),
        occupied_area: layout.specs.iter().map(|c| c.area()).sum(),
    }
}

/// One row of the results table: best objective per run, aggregated.
#[derive(Debug, Clone)]
pub struct SummaryRow {
    pub instance: String,
    pub algo: String,
    pub mean_best: f64,
    pub min_best: f64,
    pub mean_gen_time_ms: f64,
}

/// Format a float the way the results tables do: integers without a
/// fractional part, everything else with up to six digits.
pub fn fmt_compact(x: f64) -> String {
    if x == x.trunc() && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        let s = format!("{x:.6}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

impl SummaryRow {
    /// The `mean (min)` presentation used when reporting repeated runs.
    pub fn mean_min(&self) -> String {
        format!("{} ({})", fmt_compact(self.mean_best), fmt_compact(self.min_best))
    }
}

/// Aggregate repeated runs into a summary row.
pub fn summarize(instance: &str, algo: &str, traces: &[RunTrace]) -> SummaryRow {
    assert!(!traces.is_empty(), "summarize needs at least one trace");
    let bests: Vec<f64> = traces.iter().map(|t| t.best_fitness).collect();
    let mean_best = bests.iter().sum::<f64>() / bests.len() as f64;
    let min_best = bests.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    let mean_gen_time_ms = traces
        .iter()
        .map(|t| t.mean_generation_ms())
        .sum::<f64>()
        / traces.len() as f64;
    SummaryRow {
        instance: instance.to_string(),
        algo: algo.to_string(),
        mean_best,
        min_best,
        mean_gen_time_ms,
    }
}
