//! Exact 2-D primitives for path feasibility.
//!
//! Everything here works on axis-aligned rectangles and straight segments.
//! The one policy decision that matters is what counts as "crossing" a cell:
//! travel along a rectangle boundary is a legal corridor, so only passage
//! through the *open interior*, shrunk inward by a small buffer, blocks a
//! path. Boundary contact, corner grazing and shared-edge travel are all
//! feasible.

/// A point in the plane, in length units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// A closed segment. Degenerate segments (`a == b`) are allowed and treated
/// as points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Self {
        Segment { a, b }
    }

    pub fn length(&self) -> f64 {
        self.a.distance(&self.b)
    }

    pub fn midpoint(&self) -> Point {
        Point::new(0.5 * (self.a.x + self.b.x), 0.5 * (self.a.y + self.b.y))
    }

    /// Point at parameter `t` (0 at `a`, 1 at `b`).
    pub fn at(&self, t: f64) -> Point {
        Point::new(
            self.a.x + t * (self.b.x - self.a.x),
            self.a.y + t * (self.b.y - self.a.y),
        )
    }
}

/// An axis-aligned rectangle given by its min and max corners.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisRect {
    pub min_corner: Point,
    pub max_corner: Point,
}

impl AxisRect {
    pub fn new(min_corner: Point, max_corner: Point) -> Self {
        debug_assert!(min_corner.x <= max_corner.x && min_corner.y <= max_corner.y);
        AxisRect {
            min_corner,
            max_corner,
        }
    }

    pub fn width(&self) -> f64 {
        self.max_corner.x - self.min_corner.x
    }

    pub fn height(&self) -> f64 {
        self.max_corner.y - self.min_corner.y
    }
}

/// Collinearity tolerance: relative to the largest coordinate magnitude
/// involved, with a floor of 1 so tiny inputs keep an absolute epsilon.
pub fn geom_eps(scale: f64) -> f64 {
    1e-9 * scale.abs().max(1.0)
}

fn coord_scale3(p: &Point, q: &Point, r: &Point) -> f64 {
    p.x.abs()
        .max(p.y.abs())
        .max(q.x.abs())
        .max(q.y.abs())
        .max(r.x.abs())
        .max(r.y.abs())
}

/// Signed cross product of (q - p) and (r - p): positive for a
/// counterclockwise turn, negative for clockwise, zero for collinear.
pub fn orient(p: Point, q: Point, r: Point) -> f64 {
    (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)
}

/// Sign of `orient` after clamping near-zero values to zero.
fn orient_sign(p: Point, q: Point, r: Point) -> i8 {
    let v = orient(p, q, r);
    let eps = geom_eps(coord_scale3(&p, &q, &r));
    if v > eps {
        1
    } else if v < -eps {
        -1
    } else {
        0
    }
}

/// True iff `r` lies within the axis-aligned bounding box of segment `pq`.
/// This is the collinear containment check; callers are expected to have
/// established `orient(p, q, r) ≈ 0` first, but the function is total.
pub fn on_segment(p: Point, q: Point, r: Point) -> bool {
    let eps = geom_eps(coord_scale3(&p, &q, &r));
    p.x.min(q.x) - eps <= r.x
        && r.x <= p.x.max(q.x) + eps
        && p.y.min(q.y) - eps <= r.y
        && r.y <= p.y.max(q.y) + eps
}

/// True iff the closed segments share at least one point.
///
/// The general case uses the two orientation sign-product conditions; when
/// any endpoint is collinear with the other segment, containment is settled
/// by [`on_segment`].
pub fn segments_intersect(s1: &Segment, s2: &Segment) -> bool {
    let (a, b) = (s1.a, s1.b);
    let (c, d) = (s2.a, s2.b);

    let d1 = orient_sign(c, d, a);
    let d2 = orient_sign(c, d, b);
    let d3 = orient_sign(a, b, c);
    let d4 = orient_sign(a, b, d);

    if d1 * d2 < 0 && d3 * d4 < 0 {
        return true;
    }
    (d3 == 0 && on_segment(a, b, c))
        || (d4 == 0 && on_segment(a, b, d))
        || (d1 == 0 && on_segment(c, d, a))
        || (d2 == 0 && on_segment(c, d, b))
}

/// True iff `p` lies inside `rect` with margin strictly greater than
/// `buffer` from every edge.
pub fn point_strictly_inside(p: Point, rect: &AxisRect, buffer: f64) -> bool {
    p.x > rect.min_corner.x + buffer
        && p.x < rect.max_corner.x - buffer
        && p.y > rect.min_corner.y + buffer
        && p.y < rect.max_corner.y - buffer
}

/// Parameter interval `[t0, t1]` of `s` inside the closed box, or `None`
/// when the segment misses it entirely (Liang–Barsky clipping).
fn clip_to_rect(s: &Segment, rect: &AxisRect) -> Option<(f64, f64)> {
    let dx = s.b.x - s.a.x;
    let dy = s.b.y - s.a.y;
    let mut t0 = 0.0f64;
    let mut t1 = 1.0f64;

    let mut clip = |delta: f64, dist: f64| -> bool {
        // Half-plane `delta * t <= dist`.
        if delta == 0.0 {
            return dist >= 0.0;
        }
        let t = dist / delta;
        if delta < 0.0 {
            if t > t1 {
                return false;
            }
            if t > t0 {
                t0 = t;
            }
        } else {
            if t < t0 {
                return false;
            }
            if t < t1 {
                t1 = t;
            }
        }
        true
    };

    if clip(-dx, s.a.x - rect.min_corner.x)
        && clip(dx, rect.max_corner.x - s.a.x)
        && clip(-dy, s.a.y - rect.min_corner.y)
        && clip(dy, rect.max_corner.y - s.a.y)
        && t0 <= t1
    {
        Some((t0, t1))
    } else {
        None
    }
}

/// True iff segment `s` passes through the open interior of `rect` shrunk
/// inward by `buffer` on each side.
///
/// The segment is clipped against the shrunk rectangle; it crosses the
/// interior iff the clipped chord has a point strictly inside. Traversal
/// along the boundary, corner touches and near-tangent passes within the
/// buffer all report `false`, so edge corridors remain usable.
pub fn segment_crosses_interior(s: &Segment, rect: &AxisRect, buffer: f64) -> bool {
    let shrunk_min = Point::new(rect.min_corner.x + buffer, rect.min_corner.y + buffer);
    let shrunk_max = Point::new(rect.max_corner.x - buffer, rect.max_corner.y - buffer);
    if shrunk_min.x >= shrunk_max.x || shrunk_min.y >= shrunk_max.y {
        return false;
    }
    let shrunk = AxisRect {
        min_corner: shrunk_min,
        max_corner: shrunk_max,
    };

    if s.a == s.b {
        return point_strictly_inside(s.a, rect, buffer);
    }

    match clip_to_rect(s, &shrunk) {
        None => false,
        Some((t0, t1)) => {
            // The chord midpoint is strictly interior unless the whole chord
            // runs along the shrunk boundary or degenerates to a touch point.
            let mid = s.at(0.5 * (t0 + t1));
            point_strictly_inside(mid, rect, buffer)
        }
    }
}

/// Distance from a point to a closed segment.
pub fn point_segment_distance(p: Point, s: &Segment) -> f64 {
    let dx = s.b.x - s.a.x;
    let dy = s.b.y - s.a.y;
    let len2 = dx * dx + dy * dy;
    if len2 == 0.0 {
        return p.distance(&s.a);
    }
    let t = (((p.x - s.a.x) * dx + (p.y - s.a.y) * dy) / len2).clamp(0.0, 1.0);
    p.distance(&s.at(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pt(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    fn seg(ax: f64, ay: f64, bx: f64, by: f64) -> Segment {
        Segment::new(pt(ax, ay), pt(bx, by))
    }

    #[test]
    fn orient_unit_cases() {
        assert_eq!(orient(pt(0.0, 0.0), pt(1.0, 0.0), pt(0.0, 1.0)), 1.0);
        assert_eq!(orient(pt(0.0, 0.0), pt(1.0, 1.0), pt(2.0, 2.0)), 0.0);
        assert_eq!(orient(pt(0.0, 0.0), pt(1.0, 0.0), pt(1.0, -1.0)), -1.0);
    }

    #[test]
    fn on_segment_cases() {
        assert!(on_segment(pt(0.0, 0.0), pt(2.0, 0.0), pt(1.0, 0.0)));
        assert!(!on_segment(pt(0.0, 0.0), pt(2.0, 0.0), pt(3.0, 0.0)));
        assert!(on_segment(pt(0.0, 0.0), pt(2.0, 0.0), pt(2.0, 0.0)));
    }

    #[test]
    fn intersect_cases() {
        // X crossing at (1,1).
        assert!(segments_intersect(&seg(0.0, 0.0, 2.0, 2.0), &seg(0.0, 2.0, 2.0, 0.0)));
        // Collinear overlap.
        assert!(segments_intersect(&seg(0.0, 0.0, 2.0, 0.0), &seg(1.0, 0.0, 3.0, 0.0)));
        // Disjoint parallel.
        assert!(!segments_intersect(&seg(0.0, 0.0, 1.0, 0.0), &seg(0.0, 1.0, 1.0, 1.0)));
        // Collinear but disjoint.
        assert!(!segments_intersect(&seg(0.0, 0.0, 1.0, 0.0), &seg(2.0, 0.0, 3.0, 0.0)));
        // Endpoint touch.
        assert!(segments_intersect(&seg(0.0, 0.0, 1.0, 1.0), &seg(1.0, 1.0, 2.0, 0.0)));
    }

    #[test]
    fn crosses_interior_cases() {
        let rect = AxisRect::new(pt(2.0, -2.0), pt(4.0, 2.0));
        let b = 1e-7;
        // Straight through the interior.
        assert!(segment_crosses_interior(&seg(1.0, 0.0, 5.0, 0.0), &rect, b));
        // Along the top edge.
        assert!(!segment_crosses_interior(&seg(0.0, 2.0, 4.0, 2.0), &rect, b));
        // Ends exactly at a corner.
        assert!(!segment_crosses_interior(&seg(0.0, 0.0, 2.0, -2.0), &rect, b));
        // Fully contained.
        assert!(segment_crosses_interior(&seg(2.5, 0.0, 3.5, 0.0), &rect, b));
        // Enters and exits through two opposite corners.
        assert!(segment_crosses_interior(&seg(0.0, -4.0, 6.0, 4.0), &rect, b));
        // Far away.
        assert!(!segment_crosses_interior(&seg(-5.0, 0.0, -3.0, 1.0), &rect, b));
        // Degenerate segment inside / on the boundary.
        assert!(segment_crosses_interior(&seg(3.0, 0.0, 3.0, 0.0), &rect, b));
        assert!(!segment_crosses_interior(&seg(2.0, 0.0, 2.0, 0.0), &rect, b));
    }

    #[test]
    fn strictly_inside_cases() {
        let rect = AxisRect::new(pt(2.0, -2.0), pt(4.0, 2.0));
        assert!(point_strictly_inside(pt(3.0, 0.0), &rect, 1e-7));
        assert!(!point_strictly_inside(pt(2.0, 0.0), &rect, 1e-7));
        assert!(!point_strictly_inside(pt(5.0, 5.0), &rect, 1e-7));
    }

    proptest! {
        #[test]
        fn orient_antisymmetry(
            px in -100.0..100.0f64, py in -100.0..100.0f64,
            qx in -100.0..100.0f64, qy in -100.0..100.0f64,
            rx in -100.0..100.0f64, ry in -100.0..100.0f64,
        ) {
            let (p, q, r) = (pt(px, py), pt(qx, qy), pt(rx, ry));
            let fwd = orient(p, q, r);
            let rev = orient(q, p, r);
            prop_assert!((fwd + rev).abs() <= 1e-9 * (1.0 + fwd.abs().max(rev.abs())));
        }

        #[test]
        fn intersect_symmetry(
            ax in -10i32..10, ay in -10i32..10, bx in -10i32..10, by in -10i32..10,
            cx in -10i32..10, cy in -10i32..10, dx in -10i32..10, dy in -10i32..10,
        ) {
            let s1 = seg(ax as f64, ay as f64, bx as f64, by as f64);
            let s2 = seg(cx as f64, cy as f64, dx as f64, dy as f64);
            prop_assert_eq!(segments_intersect(&s1, &s2), segments_intersect(&s2, &s1));
        }

        #[test]
        fn buffer_monotonicity(
            ax in -10.0..10.0f64, ay in -10.0..10.0f64,
            bx in -10.0..10.0f64, by in -10.0..10.0f64,
            b1 in 0.0..0.5f64, extra in 1e-6..0.5f64,
        ) {
            let rect = AxisRect::new(pt(-2.0, -2.0), pt(2.0, 2.0));
            let s = seg(ax, ay, bx, by);
            if !segment_crosses_interior(&s, &rect, b1) {
                prop_assert!(!segment_crosses_interior(&s, &rect, b1 + extra));
            }
        }

        #[test]
        fn outside_segments_never_cross(
            ax in 2.5..10.0f64, ay in -10.0..10.0f64,
            bx in 2.5..10.0f64, by in -10.0..10.0f64,
        ) {
            // Both endpoints to the right of the rect: the segment stays in
            // the half-plane x >= 2.5 and cannot reach the interior.
            let rect = AxisRect::new(pt(-2.0, -2.0), pt(2.0, 2.0));
            prop_assert!(!segment_crosses_interior(&seg(ax, ay, bx, by), &rect, 1e-7));
        }

        #[test]
        fn no_crossing_without_entering(
            ax in -6.0..6.0f64, ay in -6.0..6.0f64,
            bx in -6.0..6.0f64, by in -6.0..6.0f64,
            buffer in 0.0..0.5f64,
        ) {
            // If both endpoints and the midpoint avoid the shrunk rect and
            // the segment meets none of its edges, it cannot cross.
            let rect = AxisRect::new(pt(-2.0, -2.0), pt(2.0, 2.0));
            let s = seg(ax, ay, bx, by);
            let smin = pt(rect.min_corner.x + buffer, rect.min_corner.y + buffer);
            let smax = pt(rect.max_corner.x - buffer, rect.max_corner.y - buffer);
            let edges = [
                Segment::new(smin, pt(smax.x, smin.y)),
                Segment::new(pt(smax.x, smin.y), smax),
                Segment::new(smax, pt(smin.x, smax.y)),
                Segment::new(pt(smin.x, smax.y), smin),
            ];
            let clear = [s.a, s.b, s.midpoint()]
                .iter()
                .all(|&p| !point_strictly_inside(p, &rect, buffer))
                && edges.iter().all(|e| !segments_intersect(&s, e));
            if clear {
                prop_assert!(!segment_crosses_interior(&s, &rect, buffer));
            }
        }
    }
}
