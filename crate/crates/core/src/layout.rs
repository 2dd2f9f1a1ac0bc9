//! Cells, orientations, placements and the overlap predicate.
//!
//! A cell is a rectangle with side length `s` perpendicular to the door edge
//! and door edge length `t`. In the default pose the door edge is the bottom
//! edge; the cell may be rotated by 90° steps, which moves the door to the
//! right, top or left side. Corners are indexed 1..4 clockwise from the
//! upper-left, and the door is node 5, always the midpoint of its edge.

use serde::{Deserialize, Serialize};

use crate::geometry::{AxisRect, Point};

/// Immutable cell dimensions: `s` is the edge perpendicular to the door
/// edge, `t` the door-bearing edge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RectangleSpec {
    pub id: usize,
    pub s: f64,
    pub t: f64,
}

impl RectangleSpec {
    pub fn new(id: usize, s: f64, t: f64) -> Self {
        debug_assert!(s > 0.0 && t > 0.0 && s.is_finite() && t.is_finite());
        RectangleSpec { id, s, t }
    }

    pub fn area(&self) -> f64 {
        self.s * self.t
    }
}

/// Which side of the centroid the door faces. `Below` is the default pose;
/// each step of the enum is a further 90° counterclockwise rotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DoorSide {
    Below,
    Right,
    Above,
    Left,
}

impl DoorSide {
    pub const ALL: [DoorSide; 4] = [
        DoorSide::Below,
        DoorSide::Right,
        DoorSide::Above,
        DoorSide::Left,
    ];

    /// Quarter turns counterclockwise from the default pose.
    pub fn from_quarter_turns(turns: usize) -> Self {
        Self::ALL[turns % 4]
    }

    /// True when the door faces left or right, i.e. the cell stands in the
    /// "vertical" pose where `s` runs horizontally.
    pub fn is_vertical(&self) -> bool {
        matches!(self, DoorSide::Right | DoorSide::Left)
    }

    pub fn rotated_ccw(&self) -> Self {
        match self {
            DoorSide::Below => DoorSide::Right,
            DoorSide::Right => DoorSide::Above,
            DoorSide::Above => DoorSide::Left,
            DoorSide::Left => DoorSide::Below,
        }
    }
}

/// Center position and orientation of one cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Placement {
    pub center_x: f64,
    pub center_y: f64,
    pub door_side: DoorSide,
}

impl Placement {
    pub fn new(center_x: f64, center_y: f64, door_side: DoorSide) -> Self {
        Placement {
            center_x,
            center_y,
            door_side,
        }
    }

    pub fn center(&self) -> Point {
        Point::new(self.center_x, self.center_y)
    }
}

/// The five key points of a placed cell: corners indexed 1..4 clockwise from
/// the upper-left, plus the door at the midpoint of the door-side edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellNodes {
    pub corners: [Point; 4],
    pub door: Point,
}

impl CellNodes {
    pub fn bounding_rect(&self) -> AxisRect {
        AxisRect::new(self.corners[3], self.corners[1])
    }
}

/// `(half_width, half_height)` of the cell footprint for a given pose:
/// `(t/2, s/2)` when the door faces up or down, `(s/2, t/2)` otherwise.
pub fn half_extents(spec: &RectangleSpec, side: DoorSide) -> (f64, f64) {
    if side.is_vertical() {
        (spec.s * 0.5, spec.t * 0.5)
    } else {
        (spec.t * 0.5, spec.s * 0.5)
    }
}

/// Corner and door coordinates of a placed cell.
pub fn cell_nodes(spec: &RectangleSpec, place: &Placement) -> CellNodes {
    let (hw, hh) = half_extents(spec, place.door_side);
    let (a, b) = (place.center_x, place.center_y);
    let corners = [
        Point::new(a - hw, b + hh), // 1: upper-left
        Point::new(a + hw, b + hh), // 2: upper-right
        Point::new(a + hw, b - hh), // 3: lower-right
        Point::new(a - hw, b - hh), // 4: lower-left
    ];
    let half_s = spec.s * 0.5;
    let door = match place.door_side {
        DoorSide::Below => Point::new(a, b - half_s),
        DoorSide::Right => Point::new(a + half_s, b),
        DoorSide::Above => Point::new(a, b + half_s),
        DoorSide::Left => Point::new(a - half_s, b),
    };
    CellNodes { corners, door }
}

/// Footprint rectangle of a placed cell.
pub fn cell_rect(spec: &RectangleSpec, place: &Placement) -> AxisRect {
    let (hw, hh) = half_extents(spec, place.door_side);
    AxisRect::new(
        Point::new(place.center_x - hw, place.center_y - hh),
        Point::new(place.center_x + hw, place.center_y + hh),
    )
}

/// Open-interior overlap test: boundary contact is not overlap. `tol`
/// shrinks the required separation so contact layouts stay feasible under
/// floating-point noise.
pub fn overlaps(
    a_spec: &RectangleSpec,
    a_pl: &Placement,
    b_spec: &RectangleSpec,
    b_pl: &Placement,
    tol: f64,
) -> bool {
    let (hwa, hha) = half_extents(a_spec, a_pl.door_side);
    let (hwb, hhb) = half_extents(b_spec, b_pl.door_side);
    let dx = (a_pl.center_x - b_pl.center_x).abs();
    let dy = (a_pl.center_y - b_pl.center_y).abs();
    dx < hwa + hwb - tol && dy < hha + hhb - tol
}

/// A complete arrangement: specs and placements are index-aligned by cell id.
#[derive(Debug, Clone, PartialEq)]
pub struct Layout {
    pub specs: Vec<RectangleSpec>,
    pub placements: Vec<Placement>,
}

impl Layout {
    pub fn new(specs: Vec<RectangleSpec>, placements: Vec<Placement>) -> Self {
        debug_assert_eq!(specs.len(), placements.len());
        Layout { specs, placements }
    }

    pub fn len(&self) -> usize {
        self.specs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.specs.is_empty()
    }

    pub fn nodes(&self, cell: usize) -> CellNodes {
        cell_nodes(&self.specs[cell], &self.placements[cell])
    }

    pub fn rect(&self, cell: usize) -> AxisRect {
        cell_rect(&self.specs[cell], &self.placements[cell])
    }

    /// Axis-aligned bounding box over all cell corners.
    pub fn bounding_box(&self) -> Option<AxisRect> {
        if self.is_empty() {
            return None;
        }
        let (mut min_x, mut min_y) = (f64::INFINITY, f64::INFINITY);
        let (mut max_x, mut max_y) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
        for cell in 0..self.len() {
            let r = self.rect(cell);
            min_x = min_x.min(r.min_corner.x);
            min_y = min_y.min(r.min_corner.y);
            max_x = max_x.max(r.max_corner.x);
            max_y = max_y.max(r.max_corner.y);
        }
        Some(AxisRect::new(
            Point::new(min_x, min_y),
            Point::new(max_x, max_y),
        ))
    }
}

/// True iff no unordered cell pair overlaps.
pub fn layout_is_feasible(layout: &Layout, tol: f64) -> bool {
    let n = layout.len();
    for i in 0..n {
        for j in (i + 1)..n {
            if overlaps(
                &layout.specs[i],
                &layout.placements[i],
                &layout.specs[j],
                &layout.placements[j],
                tol,
            ) {
                return false;
            }
        }
    }
    true
}
