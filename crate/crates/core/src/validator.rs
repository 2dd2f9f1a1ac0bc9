//! Independent feasibility oracle.
//!
//! The checks here re-derive layout feasibility from the constraint algebra
//! of the underlying optimization model rather than reusing the layout
//! module's predicates: half extents come from 0/1 pose indicators, node
//! coordinates from the indicator equations, and path crossings from the
//! parametric line-intersection conditions. The two routes must classify
//! identically; the validator exists to catch either side drifting.

use std::fmt;

use crate::geometry::{geom_eps, Point, Segment};
use crate::layout::{CellNodes, DoorSide, Layout};

/// Which constraint family a violation belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintFamily {
    NonOverlap,
    NodeCoordinates,
}

/// One detected violation, with its magnitude in length units.
#[derive(Debug, Clone)]
pub struct Violation {
    pub family: ConstraintFamily,
    /// Offending cell pair for overlaps, `(cell, cell)` self-pair for node
    /// coordinate faults.
    pub cells: (usize, usize),
    pub magnitude: f64,
    pub detail: String,
}

/// All violations found by one check.
#[derive(Debug, Clone, Default)]
pub struct ViolationReport {
    pub violations: Vec<Violation>,
}

impl ViolationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.violations.len()
    }
}

impl fmt::Display for ViolationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return writeln!(f, "no violations");
        }
        for v in &self.violations {
            let family = match v.family {
                ConstraintFamily::NonOverlap => "non-overlap",
                ConstraintFamily::NodeCoordinates => "node-coordinates",
            };
            writeln!(
                f,
                "{family}: cells ({}, {}), magnitude {:.6}: {}",
                v.cells.0, v.cells.1, v.magnitude, v.detail
            )?;
        }
        Ok(())
    }
}

/// Pose indicators: `lambda[q]` is 1 when the door faces side `q` (below,
/// right, above, left), and `z = lambda[1] + lambda[3]` marks the vertical
/// pose.
fn lambda(side: DoorSide) -> [f64; 4] {
    let mut l = [0.0; 4];
    let q = match side {
        DoorSide::Below => 0,
        DoorSide::Right => 1,
        DoorSide::Above => 2,
        DoorSide::Left => 3,
    };
    l[q] = 1.0;
    l
}

fn indicator_half_extents(s: f64, t: f64, side: DoorSide) -> (f64, f64) {
    let l = lambda(side);
    let z = l[1] + l[3];
    let hw = 0.5 * ((1.0 - z) * t + z * s);
    let hh = 0.5 * ((1.0 - z) * s + z * t);
    (hw, hh)
}

/// Per-pair separation check: cells must be separated along at least one
/// axis by the sum of their half extents (minus `tol`). The violation
/// magnitude is the smaller axis penetration.
pub fn check_non_overlap(layout: &Layout, tol: f64) -> ViolationReport {
    let mut report = ViolationReport::default();
    let n = layout.len();
    for i in 0..n {
        for j in (i + 1)..n {
            let (hwi, hhi) = indicator_half_extents(
                layout.specs[i].s,
                layout.specs[i].t,
                layout.placements[i].door_side,
            );
            let (hwj, hhj) = indicator_half_extents(
                layout.specs[j].s,
                layout.specs[j].t,
                layout.placements[j].door_side,
            );
            let dx = (layout.placements[i].center_x - layout.placements[j].center_x).abs();
            let dy = (layout.placements[i].center_y - layout.placements[j].center_y).abs();
            let pen_x = (hwi + hwj - tol) - dx;
            let pen_y = (hhi + hhj - tol) - dy;
            if pen_x > 0.0 && pen_y > 0.0 {
                report.violations.push(Violation {
                    family: ConstraintFamily::NonOverlap,
                    cells: (i, j),
                    magnitude: pen_x.min(pen_y),
                    detail: format!("axis penetration x={pen_x:.6}, y={pen_y:.6}"),
                });
            }
        }
    }
    report
}

/// Recompute every node coordinate from the indicator equations.
fn indicator_nodes(layout: &Layout, cell: usize) -> CellNodes {
    let spec = &layout.specs[cell];
    let place = &layout.placements[cell];
    let l = lambda(place.door_side);
    let z = l[1] + l[3];
    let (a, b) = (place.center_x, place.center_y);
    let half_w = 0.5 * (1.0 - z) * spec.t + 0.5 * z * spec.s;
    let half_h = 0.5 * (1.0 - z) * spec.s + 0.5 * z * spec.t;
    let x_left = a - half_w;
    let x_right = a + half_w;
    let y_top = b + half_h;
    let y_bottom = b - half_h;
    let door = Point::new(
        a + (l[1] - l[3]) * spec.s * 0.5,
        b + (l[2] - l[0]) * spec.s * 0.5,
    );
    CellNodes {
        corners: [
            Point::new(x_left, y_top),
            Point::new(x_right, y_top),
            Point::new(x_right, y_bottom),
            Point::new(x_left, y_bottom),
        ],
        door,
    }
}

/// Compare externally supplied node coordinates against the indicator
/// equations, within `1e-12` relative to instance coordinates.
pub fn check_node_coordinates_against(layout: &Layout, nodes: &[CellNodes]) -> ViolationReport {
    let mut report = ViolationReport::default();
    for cell in 0..layout.len() {
        let expected = indicator_nodes(layout, cell);
        let got = &nodes[cell];
        let scale = layout.placements[cell]
            .center_x
            .abs()
            .max(layout.placements[cell].center_y.abs())
            .max(layout.specs[cell].s)
            .max(layout.specs[cell].t)
            .max(1.0);
        let tol = 1e-12 * scale;
        let mut worst = 0.0f64;
        let mut which = "";
        for k in 0..4 {
            let dev = (expected.corners[k].x - got.corners[k].x)
                .abs()
                .max((expected.corners[k].y - got.corners[k].y).abs());
            if dev > worst {
                worst = dev;
                which = "corner";
            }
        }
        let door_dev = (expected.door.x - got.door.x)
            .abs()
            .max((expected.door.y - got.door.y).abs());
        if door_dev > worst {
            worst = door_dev;
            which = "door";
        }
        if worst > tol {
            report.violations.push(Violation {
                family: ConstraintFamily::NodeCoordinates,
                cells: (cell, cell),
                magnitude: worst,
                detail: format!("{which} deviates from indicator equations"),
            });
        }
    }
    report
}

/// Check the layout's own node computation against the indicator equations.
pub fn check_node_coordinates(layout: &Layout) -> ViolationReport {
    let nodes: Vec<CellNodes> = (0..layout.len()).map(|c| layout.nodes(c)).collect();
    check_node_coordinates_against(layout, &nodes)
}

/// Parametric crossing test for one segment against one cell edge.
///
/// The crossing point is written as a convex combination along the segment
/// (parameter `gamma` against the edge's fixed coordinate) and along the
/// edge (parameter `delta`); the segment crosses the edge iff both
/// parameters lie strictly inside (0, 1). Tolerances are the geometric
/// epsilon converted into parameter units, so endpoint grazing does not
/// count. A segment parallel to the edge never crosses it transversally
/// (collinear corridor travel is legal), so it reports no crossing.
fn parametric_edge_crossing(seg: &Segment, fixed: f64, lo: f64, hi: f64, vertical: bool) -> bool {
    let (pa, pb) = if vertical {
        (seg.a.x, seg.b.x)
    } else {
        (seg.a.y, seg.b.y)
    };
    let span = pa - pb;
    let scale = pa.abs().max(pb.abs()).max(fixed.abs()).max(hi.abs());
    let eps_len = geom_eps(scale);
    if span.abs() <= eps_len {
        return false;
    }
    let gamma = (fixed - pb) / span;
    let eps_gamma = eps_len / span.abs();
    if gamma <= eps_gamma || gamma >= 1.0 - eps_gamma {
        return false;
    }
    let (qa, qb) = if vertical {
        (seg.a.y, seg.b.y)
    } else {
        (seg.a.x, seg.b.x)
    };
    let cross = gamma * qa + (1.0 - gamma) * qb;
    let edge_span = hi - lo;
    let delta = (cross - lo) / edge_span;
    let eps_delta = eps_len / edge_span.abs();
    delta > eps_delta && delta < 1.0 - eps_delta
}

/// Would any crossing penalty activate for this segment?
///
/// Evaluates the parametric crossing conditions for all four edges of every
/// cell. A segment whose endpoint sits strictly inside a cell crosses no
/// edge transversally yet cannot be travelled, so interior endpoints also
/// activate the penalty; that keeps this test aligned with the buffered
/// interior-crossing predicate for arbitrary probe segments, not just
/// segments between boundary nodes.
pub fn check_crossing_penalties(layout: &Layout, seg: &Segment) -> bool {
    for cell in 0..layout.len() {
        let nodes = indicator_nodes(layout, cell);
        let [c1, c2, c3, c4] = nodes.corners;

        // r=1: right edge (c2-c3); r=3: left edge (c1-c4).
        if parametric_edge_crossing(seg, c2.x, c3.y, c2.y, true)
            || parametric_edge_crossing(seg, c1.x, c4.y, c1.y, true)
        {
            return true;
        }
        // r=2: bottom edge (c4-c3); r=4: top edge (c1-c2).
        if parametric_edge_crossing(seg, c3.y, c4.x, c3.x, false)
            || parametric_edge_crossing(seg, c1.y, c1.x, c2.x, false)
        {
            return true;
        }

        let rect = layout.rect(cell);
        let eps = geom_eps(rect.max_corner.x.abs().max(rect.max_corner.y.abs()));
        if crate::geometry::point_strictly_inside(seg.a, &rect, eps)
            || crate::geometry::point_strictly_inside(seg.b, &rect, eps)
        {
            return true;
        }
    }
    false
}
